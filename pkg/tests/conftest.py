"""Shared helpers: random matrix generators and region comparison."""

import zlib

import numpy as np
import pytest

from numrange.geometry import (
    ConvexRegion,
    EllipseDisc,
    hausdorff_distance,
    region_from_ellipse,
    region_within,
)


def rng_for(name):
    return np.random.default_rng(zlib.crc32(name.encode()))


def random_complex_matrix(rng, n, m=None, scale=1.0):
    m = n if m is None else m
    return scale * (rng.standard_normal((n, m))
                    + 1j * rng.standard_normal((n, m))) / np.sqrt(2.0)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex_matrix(rng, n))
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_hermitian(rng, n, scale=1.0):
    a = random_complex_matrix(rng, n, scale=scale)
    return (a + a.conj().T) / 2.0


def as_region(obj, samples=256):
    """ConvexRegion view of a region or elliptical disc."""
    if isinstance(obj, EllipseDisc):
        return region_from_ellipse(obj, samples)
    return obj


def region_gap(r1, r2, samples=256):
    """Hausdorff distance between region-like objects; 0 when both are
    empty, inf when exactly one is."""
    a = as_region(r1, samples)
    b = as_region(r2, samples)
    if a.is_empty and b.is_empty:
        return 0.0
    if a.is_empty or b.is_empty:
        return float("inf")
    return hausdorff_distance(a, b)


def assert_region_close(r1, r2, tol, label=""):
    gap = region_gap(r1, r2)
    assert gap <= tol, f"{label}: hausdorff {gap:.3e} > {tol:.3e}"


def assert_contained(inner, outer, tol, label=""):
    a = as_region(inner)
    b = as_region(outer)
    assert region_within(a, b, tol), f"{label}: containment violated beyond {tol:.1e}"


@pytest.fixture
def rng(request):
    return rng_for(request.node.name)
