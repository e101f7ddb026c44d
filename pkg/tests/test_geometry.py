import math

import numpy as np
import pytest

from numrange.errors import (
    ArgumentError,
    EmptyRegionError,
    FitError,
    UnboundedRegionError,
)
from numrange.geometry import (
    ConvexRegion,
    EllipseDisc,
    convex_hull_regions,
    ellipse_boundary,
    ellipse_fit,
    ellipse_from_foci,
    ellipse_support,
    halfplane_intersection,
    hausdorff_distance,
    nesting_check,
    point_ellipse_distance,
    region_area,
    region_contains,
    region_from_ellipse,
    region_support,
)

from conftest import assert_region_close

TWO_PI = 2.0 * math.pi


def support_family(region_support_fn, m=360):
    th = np.linspace(0.0, TWO_PI, m, endpoint=False)
    return th, region_support_fn(th)


class TestEllipseConstruction:
    def test_coincident_foci_disc(self):
        e = ellipse_from_foci(0, 0, 1.0)
        assert e.semi_major == e.semi_minor == 0.5
        assert e.foci == (0j, 0j)

    def test_foci_axis_relation(self):
        # a^2 = b^2 + c^2 with c = 1
        e = ellipse_from_foci(1, -1, 2.0)
        assert abs(e.semi_major - math.sqrt(2)) <= 1e-14
        assert e.semi_minor == 1.0
        assert e.rotation == 0.0

    def test_degenerate_segment(self):
        e = ellipse_from_foci(1, -1, 0.0)
        assert e.semi_minor == 0.0
        assert e.semi_major == 1.0
        r = region_from_ellipse(e)
        assert r.kind == ConvexRegion.SEGMENT

    def test_foci_roundtrip(self, rng):
        for _ in range(25):
            f1 = complex(*rng.standard_normal(2))
            f2 = complex(*rng.standard_normal(2))
            minor = float(rng.uniform(0.0, 3.0))
            e = ellipse_from_foci(f1, f2, minor)
            assert abs(e.foci[0] - f1) <= 1e-12
            assert abs(e.foci[1] - f2) <= 1e-12
            c = math.sqrt(max(e.semi_major**2 - e.semi_minor**2, 0.0))
            assert abs(abs(e.foci[0] - e.center) - c) <= 1e-12


class TestEllipseSupport:
    def test_unit_disc(self):
        e = EllipseDisc(0j, 1.0, 1.0, 0.0)
        for th in (0.0, 1.0, 4.0):
            assert abs(ellipse_support(e, th) - 1.0) <= 1e-15

    def test_axis_lengths(self):
        e = EllipseDisc(0j, 2.0, 1.0, 0.0)
        assert abs(ellipse_support(e, 0.0) - 2.0) <= 1e-15
        assert abs(ellipse_support(e, math.pi / 2) - 1.0) <= 1e-15

    def test_translation_shift(self):
        e = EllipseDisc(3.0 + 0j, 2.0, 1.0, 0.0)
        assert abs(ellipse_support(e, 0.0) - 5.0) <= 1e-15

    def test_boundary_satisfies_support(self, rng):
        e = EllipseDisc(complex(*rng.standard_normal(2)), 2.5, 0.7,
                        float(rng.uniform(0, math.pi)))
        pts = ellipse_boundary(e, 64)
        th = np.linspace(0.0, TWO_PI, 128, endpoint=False)
        sup = ellipse_support(e, th)
        proj = np.cos(th)[:, None] * pts.real + np.sin(th)[:, None] * pts.imag
        assert np.max(proj - sup[:, None]) <= 1e-12


class TestHalfplaneIntersection:
    def test_unit_square(self):
        r = halfplane_intersection(
            [(0, 1), (math.pi / 2, 1), (math.pi, 1), (3 * math.pi / 2, 1)])
        assert r.kind == ConvexRegion.POLYGON
        got = sorted((round(v.real, 9), round(v.imag, 9)) for v in r.vertices())
        assert got == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_contradictory_family_is_empty(self):
        r = halfplane_intersection(
            [(0, -1), (math.pi, 0), (math.pi / 2, 10), (3 * math.pi / 2, 10)])
        assert r.is_empty

    def test_circumscribed_polygon_area(self):
        th = np.linspace(0.0, TWO_PI, 360, endpoint=False)
        r = halfplane_intersection((th, np.ones(360)))
        assert abs(region_area(r) - math.pi) <= 1e-3

    def test_angular_gap_raises(self):
        with pytest.raises(UnboundedRegionError):
            halfplane_intersection([(0, 1), (0.1, 1), (0.2, 1)])

    def test_segment_family(self):
        th = np.linspace(0.0, TWO_PI, 360, endpoint=False)
        off = np.maximum(2 * np.cos(th), 3 * np.cos(th))
        r = halfplane_intersection((th, off))
        assert r.kind == ConvexRegion.SEGMENT
        ends = sorted(r.vertices(), key=lambda z: z.real)
        assert abs(ends[0] - 2.0) <= 1e-9
        assert abs(ends[1] - 3.0) <= 1e-9

    def test_point_family(self):
        th = np.linspace(0.0, TWO_PI, 360, endpoint=False)
        r = halfplane_intersection((th, 2.5 * np.cos(th)))
        assert r.kind == ConvexRegion.POINT
        assert abs(r.data - 2.5) <= 1e-9

    def test_vertices_satisfy_constraints(self, rng):
        th = np.linspace(0.0, TWO_PI, 240, endpoint=False)
        off = 1.0 + 0.3 * np.cos(3 * th) + 0.1 * np.sin(5 * th)
        r = halfplane_intersection((th, off))
        v = r.vertices()
        proj = np.cos(th)[:, None] * v.real + np.sin(th)[:, None] * v.imag
        assert np.max(proj - off[:, None]) <= 1e-9

    def test_redundant_constraint_no_change(self):
        th = np.linspace(0.0, TWO_PI, 120, endpoint=False)
        base = list(zip(th, np.ones(120)))
        r1 = halfplane_intersection(base)
        r2 = halfplane_intersection(base + [(0.3, 5.0)])
        assert hausdorff_distance(r1, r2) <= 1e-12


class TestRegionQueries:
    def test_contains_polygon(self):
        r = halfplane_intersection(
            [(0, 1), (math.pi / 2, 1), (math.pi, 1), (3 * math.pi / 2, 1)])
        assert region_contains(r, 0)
        assert not region_contains(r, 2 + 2j, tol=1e-6)

    def test_contains_point_region(self):
        r = ConvexRegion.point(2.0)
        assert region_contains(r, 2.0)
        assert not region_contains(r, 2.1, tol=1e-6)

    def test_contains_segment(self):
        r = ConvexRegion.segment(-1, 1)
        assert region_contains(r, 0.5)
        assert not region_contains(r, 0.5j, tol=1e-6)

    def test_support_matches_offsets(self):
        r = ConvexRegion.segment(2, 3)
        assert abs(region_support(r, 0.0) - 3.0) <= 1e-15
        assert abs(region_support(r, math.pi) + 2.0) <= 1e-15


class TestHausdorff:
    def test_identical(self):
        r = ConvexRegion.polygon([0, 1, 1 + 1j, 1j])
        assert hausdorff_distance(r, r) == 0.0

    def test_two_points(self):
        assert hausdorff_distance(ConvexRegion.point(0),
                                  ConvexRegion.point(3 + 4j)) == 5.0

    def test_translated_square(self):
        sq = [0, 1, 1 + 1j, 1j]
        r1 = ConvexRegion.polygon(sq)
        r2 = ConvexRegion.polygon([z + 0.1 for z in sq])
        assert abs(hausdorff_distance(r1, r2) - 0.1) <= 1e-12

    def test_empty_raises(self):
        with pytest.raises(EmptyRegionError):
            hausdorff_distance(ConvexRegion.empty(), ConvexRegion.point(0))

    def test_symmetry_and_triangle(self, rng):
        for _ in range(20):
            regions = []
            for _ in range(3):
                pts = rng.standard_normal(5) + 1j * rng.standard_normal(5)
                regions.append(convex_hull_regions([ConvexRegion.point(z) for z in pts]))
            a, b, c = regions
            dab = hausdorff_distance(a, b)
            dba = hausdorff_distance(b, a)
            assert abs(dab - dba) <= 1e-9
            assert dab <= hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-9


class TestHullAndNesting:
    def test_hull_of_points(self):
        r = convex_hull_regions([ConvexRegion.point(0), ConvexRegion.point(1),
                                 ConvexRegion.point(1j)])
        assert r.kind == ConvexRegion.POLYGON
        assert len(r.vertices()) == 3

    def test_hull_of_single_disc(self):
        e = EllipseDisc(0j, 1.0, 1.0, 0.0)
        r = convex_hull_regions([e])
        assert r.kind == ConvexRegion.POLYGON
        assert abs(np.max(np.abs(r.vertices())) - 1.0) <= 1e-12

    def test_stadium_support(self):
        discs = [EllipseDisc(0j, 1.0, 1.0, 0.0), EllipseDisc(4 + 0j, 1.0, 1.0, 0.0)]
        r = convex_hull_regions(discs)
        assert abs(region_support(r, 0.0) - 5.0) <= 1e-3

    def test_empty_input_raises(self):
        with pytest.raises(ArgumentError):
            convex_hull_regions([])

    def test_concentric_circles_nested(self):
        outer = EllipseDisc(0j, 1.0, 1.0, 0.0)
        inner = EllipseDisc(0j, 0.5, 0.5, 0.0)
        assert nesting_check([outer, inner])
        assert not nesting_check([inner, outer])

    def test_confocal_family_nested(self):
        e1 = ellipse_from_foci(1, -1, 2.0)
        e2 = ellipse_from_foci(1, -1, 1.0)
        assert nesting_check([e1, e2])

    def test_disjoint_discs_not_nested(self):
        a = EllipseDisc(0j, 1.0, 1.0, 0.0)
        b = EllipseDisc(4 + 0j, 1.0, 1.0, 0.0)
        assert not nesting_check([a, b])


class TestEllipseFit:
    def test_exact_circle(self):
        pts = ellipse_boundary(EllipseDisc(0j, 2.0, 2.0, 0.0), 12)
        disc, res = ellipse_fit(pts)
        assert abs(disc.semi_major - 2.0) <= 1e-9
        assert abs(disc.semi_minor - 2.0) <= 1e-9
        assert res <= 1e-9

    def test_exact_ellipse_recovery(self):
        e = EllipseDisc(0.3 + 0.2j, 2.0, 1.0, math.pi / 6)
        disc, res = ellipse_fit(ellipse_boundary(e, 12))
        assert abs(disc.semi_major - 2.0) <= 1e-6
        assert abs(disc.semi_minor - 1.0) <= 1e-6
        assert abs(disc.rotation % math.pi - math.pi / 6) <= 1e-6
        assert abs(disc.center - e.center) <= 1e-6
        assert res <= 1e-9

    def test_square_is_not_elliptical(self):
        side = np.linspace(-1, 1, 10)
        sq = np.concatenate([side + 1j, side - 1j, 1 + 1j * side, -1 + 1j * side])
        _, res = ellipse_fit(sq)
        assert res >= 0.01

    def test_collinear_raises(self):
        with pytest.raises(FitError):
            ellipse_fit(np.linspace(0, 1, 8).astype(complex))

    def test_point_distance_interior_and_exterior(self):
        e = EllipseDisc(0j, 2.0, 1.0, 0.0)
        d = point_ellipse_distance(e, np.array([3.0 + 0j, 0j, 0.5j, 2j]))
        assert abs(d[0] - 1.0) <= 1e-10  # outside along major axis
        assert abs(d[1] - 1.0) <= 1e-10  # center: nearest is the minor end
        assert abs(d[2] - 0.5) <= 1e-10
        assert abs(d[3] - 1.0) <= 1e-10
