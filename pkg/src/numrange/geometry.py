"""Convex regions in the complex plane.

Regions are the ``ConvexRegion`` sum type (empty / point / segment / polygon
with counterclockwise vertices) plus ``EllipseDisc`` for exact elliptical
discs.  The workhorse is ``halfplane_intersection``, which intersects a
finite family of half-planes {z : Re(e^{-i theta} z) <= c}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, linprog

from .errors import (
    ArgumentError,
    EmptyRegionError,
    FitError,
    UnboundedRegionError,
)

__all__ = [
    "HalfPlane",
    "ConvexRegion",
    "EllipseDisc",
    "ellipse_from_foci",
    "ellipse_support",
    "ellipse_boundary",
    "region_from_ellipse",
    "halfplane_intersection",
    "region_contains",
    "region_distance",
    "region_support",
    "region_within",
    "region_area",
    "hausdorff_distance",
    "convex_hull_regions",
    "nesting_check",
    "ellipse_fit",
    "point_ellipse_distance",
]

TWO_PI = 2.0 * math.pi

# Classification thresholds (configuration values, not baked into results).
VERTEX_TOL = 1e-9         # vertex dedup, relative to region magnitude
WIDTH_COLLAPSE = 1e-8     # polygon -> segment when width <= this * diameter
POINT_COLLAPSE = 1e-8     # -> point when diameter <= this * scale
HULL_SAMPLES = 256        # default ellipse discretization for hulls
NEST_SAMPLES = 512        # default angles for nesting_check
NEST_TOL = 1e-9

_ANGLE_EPS = 1e-12
_FEAS_EPS = 1e-11         # LP infeasibility cutoff, relative to offset scale
_DEGENERATE_EPS = 1e-7    # inradius below this * scale -> degenerate path


@dataclass(frozen=True)
class HalfPlane:
    """The half-plane {z : Re(e^{-i theta} z) <= offset}."""

    theta: float
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        object.__setattr__(self, "offset", float(self.offset))

    def contains(self, z, tol=0.0):
        return (math.cos(self.theta) * z.real + math.sin(self.theta) * z.imag
                <= self.offset + tol)


@dataclass(frozen=True)
class ConvexRegion:
    """A closed convex region: empty, a point, a segment or a polygon.

    Polygon vertices are counterclockwise and strictly convex after dedup at
    ``VERTEX_TOL``; segment endpoints are distinct.
    """

    kind: str
    data: object = None

    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"
    POLYGON = "polygon"

    @staticmethod
    def empty():
        return ConvexRegion(ConvexRegion.EMPTY)

    @staticmethod
    def point(z):
        return ConvexRegion(ConvexRegion.POINT, complex(z))

    @staticmethod
    def segment(a, b):
        return ConvexRegion(ConvexRegion.SEGMENT, (complex(a), complex(b)))

    @staticmethod
    def polygon(vertices):
        return ConvexRegion(ConvexRegion.POLYGON,
                            np.asarray(vertices, dtype=np.complex128))

    @property
    def is_empty(self):
        return self.kind == ConvexRegion.EMPTY

    def vertices(self):
        """Representative vertex array (empty array for the empty region)."""
        if self.kind == ConvexRegion.EMPTY:
            return np.empty(0, dtype=np.complex128)
        if self.kind == ConvexRegion.POINT:
            return np.array([self.data], dtype=np.complex128)
        if self.kind == ConvexRegion.SEGMENT:
            return np.array(self.data, dtype=np.complex128)
        return np.asarray(self.data, dtype=np.complex128)

    def halfplanes(self):
        """Supporting half-planes whose intersection reproduces the region.

        Points and segments get four tangent half-planes; polygons one per
        edge.  Useful for intersecting regions with each other.
        """
        if self.kind == ConvexRegion.EMPTY:
            raise EmptyRegionError("empty region has no supporting half-planes")
        if self.kind == ConvexRegion.POINT:
            z = self.data
            return [HalfPlane(t, math.cos(t) * z.real + math.sin(t) * z.imag)
                    for t in (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)]
        if self.kind == ConvexRegion.SEGMENT:
            a, b = self.data
            u = (b - a) / abs(b - a)
            phi = math.atan2(u.imag, u.real)
            out = []
            for t in (phi, phi + 0.5 * math.pi, phi + math.pi, phi + 1.5 * math.pi):
                nx, ny = math.cos(t), math.sin(t)
                out.append(HalfPlane(t, max(nx * p.real + ny * p.imag
                                            for p in (a, b))))
            return out
        v = self.vertices()
        nxt = np.roll(v, -1)
        out = []
        for a, b in zip(v, nxt):
            e = b - a
            n = complex(e.imag, -e.real)  # outward normal of a CCW edge
            n /= abs(n)
            out.append(HalfPlane(math.atan2(n.imag, n.real),
                                 n.real * a.real + n.imag * a.imag))
        return out


@dataclass(frozen=True)
class EllipseDisc:
    """Closed elliptical disc: center, semi-axes a >= b >= 0, rotation of the
    major axis, and the two foci (both equal the center when a == b)."""

    center: complex
    semi_major: float
    semi_minor: float
    rotation: float
    foci: tuple = field(default=None)

    def __post_init__(self):
        if self.foci is None:
            c = math.sqrt(max(self.semi_major ** 2 - self.semi_minor ** 2, 0.0))
            d = c * complex(math.cos(self.rotation), math.sin(self.rotation))
            object.__setattr__(self, "foci", (self.center + d, self.center - d))


def ellipse_from_foci(f1, f2, minor_len):
    """Elliptical disc with the given foci and full minor-axis length."""
    if minor_len < 0:
        raise ArgumentError("minor axis length must be nonnegative")
    f1 = complex(f1)
    f2 = complex(f2)
    center = (f1 + f2) / 2.0
    b = minor_len / 2.0
    c = abs(f1 - f2) / 2.0
    a = math.hypot(b, c)
    rot = math.atan2((f1 - f2).imag, (f1 - f2).real) if f1 != f2 else 0.0
    return EllipseDisc(center, a, b, rot % TWO_PI, (f1, f2))


def ellipse_support(e, theta):
    """Support function of the disc: max Re(e^{-i theta} z) over z in e.

    Accepts a scalar angle or an array of angles.
    """
    th = np.asarray(theta, dtype=float)
    rel = th - e.rotation
    radial = np.sqrt((e.semi_major * np.cos(rel)) ** 2
                     + (e.semi_minor * np.sin(rel)) ** 2)
    out = np.cos(th) * e.center.real + np.sin(th) * e.center.imag + radial
    return float(out) if np.isscalar(theta) else out


def ellipse_boundary(e, samples=HULL_SAMPLES):
    """Boundary points at ``samples`` uniform parameter values."""
    t = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    w = e.semi_major * np.cos(t) + 1j * e.semi_minor * np.sin(t)
    return e.center + w * np.exp(1j * e.rotation)


def region_from_ellipse(e, samples=HULL_SAMPLES):
    """ConvexRegion view of a disc: polygon of boundary samples, collapsing
    to segment / point when the disc is degenerate."""
    scale = max(1.0, abs(e.center) + e.semi_major)
    if e.semi_major <= POINT_COLLAPSE * scale:
        return ConvexRegion.point(e.center)
    if e.semi_minor <= WIDTH_COLLAPSE * e.semi_major:
        u = complex(math.cos(e.rotation), math.sin(e.rotation))
        return ConvexRegion.segment(e.center - e.semi_major * u,
                                    e.center + e.semi_major * u)
    return ConvexRegion.polygon(ellipse_boundary(e, samples))


# ---------------------------------------------------------------------------
# half-plane intersection
# ---------------------------------------------------------------------------

def _normalize_family(constraints):
    """Sorted angles and offsets, duplicate angles collapsed to the tightest."""
    if (isinstance(constraints, tuple) and len(constraints) == 2
            and not isinstance(constraints[0], HalfPlane)):
        th = np.asarray(constraints[0], dtype=float) % TWO_PI
        off = np.asarray(constraints[1], dtype=float)
    else:
        th = np.array([hp.theta if isinstance(hp, HalfPlane) else float(hp[0]) % TWO_PI
                       for hp in constraints], dtype=float)
        off = np.array([hp.offset if isinstance(hp, HalfPlane) else float(hp[1])
                        for hp in constraints], dtype=float)
    order = np.argsort(th, kind="stable")
    th = th[order]
    off = off[order]
    if len(th) > 1 and float(np.min(np.diff(th))) <= _ANGLE_EPS:
        keep_th = [th[0]]
        keep_off = [off[0]]
        for t, c in zip(th[1:], off[1:]):
            if t - keep_th[-1] <= _ANGLE_EPS:
                keep_off[-1] = min(keep_off[-1], c)
            else:
                keep_th.append(t)
                keep_off.append(c)
        th = np.asarray(keep_th)
        off = np.asarray(keep_off)
    if len(th) >= 2 and (th[0] + TWO_PI) - th[-1] <= _ANGLE_EPS:
        off[0] = min(off[0], off[-1])
        th = th[:-1]
        off = off[:-1]
    return th, off


def _line_intersections(th1, c1, th2, c2):
    """Pairwise intersections of boundary lines Re(e^{-i th} z) = c."""
    denom = np.sin(th2 - th1)
    x = (c1 * np.sin(th2) - c2 * np.sin(th1)) / denom
    y = (c2 * np.cos(th1) - c1 * np.cos(th2)) / denom
    return x + 1j * y


def _convex_hull_points(pts):
    """Andrew monotone chain; hull vertex indices, counterclockwise."""
    n = len(pts)
    order = np.lexsort((pts.imag, pts.real))
    p = pts[order]

    def half(indices):
        chain = []
        for i in indices:
            while len(chain) >= 2:
                a, b = p[chain[-2]], p[chain[-1]]
                cross = ((b.real - a.real) * (p[i].imag - a.imag)
                         - (b.imag - a.imag) * (p[i].real - a.real))
                if cross <= 0.0:
                    chain.pop()
                else:
                    break
            chain.append(i)
        return chain

    lower = half(range(n))
    upper = half(range(n - 1, -1, -1))
    hull = lower[:-1] + upper[:-1]
    return order[np.array(hull, dtype=int)] if hull else np.empty(0, int)


def _dedup_loop(v, tol):
    """Drop consecutive near-coincident vertices of a cyclic loop."""
    if len(v) == 0:
        return v
    keep = np.abs(v - np.roll(v, 1)) > tol
    if not keep.any():
        return v[:1]
    out = v[keep] if keep.sum() < len(v) else v
    while len(out) > 1 and abs(out[0] - out[-1]) <= tol:
        out = out[:-1]
    return out


def _drop_collinear(v, tol):
    """Drop loop vertices lying (nearly) on the chord of their neighbours."""
    while len(v) >= 3:
        a = np.roll(v, 1)
        c = np.roll(v, -1)
        cross = ((v - a).real * (c - a).imag - (v - a).imag * (c - a).real)
        limit = tol * np.maximum(np.abs(v - a) * np.abs(c - v), tol)
        bad = np.abs(cross) <= limit
        if not bad.any():
            break
        if bad.all():
            return v[:1]
        v = v[~bad]
    return v


def _polygon_extents(v):
    """(diameter, minimal width) of a convex CCW vertex loop."""
    diff = v[:, None] - v[None, :]
    diam = float(np.max(np.abs(diff)))
    edges = np.roll(v, -1) - v
    normals = (edges.imag - 1j * edges.real) / np.abs(edges)
    proj = (normals[:, None].real * v[None, :].real
            + normals[:, None].imag * v[None, :].imag)
    width = float(np.min(proj.max(axis=1) - proj.min(axis=1)))
    return diam, width


def _classify_vertices(verts, scale, fat_hint=False):
    """Collapse a CCW vertex loop into the region classes.

    ``fat_hint`` marks loops already known to have inradius above the
    degeneracy cutoff, so the quadratic width/diameter scan can be skipped.
    """
    v = np.asarray(verts, dtype=np.complex128)
    mag = float(np.max(np.abs(v))) if len(v) else 0.0
    tol = VERTEX_TOL * max(1.0, mag)
    v = _dedup_loop(v, tol)
    v = _drop_collinear(v, tol)
    if len(v) == 0:
        return ConvexRegion.empty()
    if len(v) == 1:
        return ConvexRegion.point(v[0])
    if len(v) == 2:
        if abs(v[1] - v[0]) <= POINT_COLLAPSE * max(1.0, scale):
            return ConvexRegion.point(0.5 * (v[0] + v[1]))
        return ConvexRegion.segment(v[0], v[1])
    if fat_hint and len(v) > 96:
        return ConvexRegion.polygon(v)
    diam, width = _polygon_extents(v)
    if diam <= POINT_COLLAPSE * max(1.0, scale):
        return ConvexRegion.point(complex(np.mean(v)))
    if width <= WIDTH_COLLAPSE * diam:
        diff = v[:, None] - v[None, :]
        i, j = np.unravel_index(np.argmax(np.abs(diff)), diff.shape)
        u = (v[j] - v[i]) / abs(v[j] - v[i])
        t = (v * u.conjugate()).real
        s = (v * u.conjugate()).imag
        mid = 0.5 * (s.max() + s.min())
        return ConvexRegion.segment(complex(t.min(), mid) * u,
                                    complex(t.max(), mid) * u)
    return ConvexRegion.polygon(v)


def _chebyshev_lp(th, off):
    """Minimize max_i (n_i . z - c_i) over z; returns (z, inradius).

    The inradius is negative exactly when the family is infeasible.
    """
    m = len(th)
    a_ub = np.column_stack([np.cos(th), np.sin(th), -np.ones(m)])
    res = linprog(np.array([0.0, 0.0, 1.0]), A_ub=a_ub, b_ub=off,
                  bounds=[(None, None)] * 3, method="highs")
    if res.status == 3:
        raise UnboundedRegionError("half-plane family does not bound a region")
    if res.status != 0:  # pragma: no cover - solver trouble
        raise ArgumentError(f"feasibility LP failed (status {res.status})")
    x, y, t = res.x
    return complex(x, y), -float(t)


def _dual_hull_polygon(th, off, z0):
    """Intersection vertices, given a strictly interior point z0."""
    d = off - (np.cos(th) * z0.real + np.sin(th) * z0.imag)
    dual = (np.cos(th) + 1j * np.sin(th)) / d
    hull = _convex_hull_points(dual)
    if len(hull) < 3:
        return None
    active = np.sort(hull)
    t1 = th[active]
    c1 = off[active]
    t2 = np.roll(t1, -1)
    c2 = np.roll(c1, -1)
    t2[-1] += TWO_PI
    return _line_intersections(t1, c1, t2, c2)


def _support_lp(th, off, direction):
    """Extreme point of the feasible set in the given unit direction."""
    m = len(th)
    a_ub = np.column_stack([np.cos(th), np.sin(th)])
    res = linprog(np.array([-direction.real, -direction.imag]),
                  A_ub=a_ub, b_ub=off, bounds=[(None, None)] * 2, method="highs")
    if res.status != 0:  # pragma: no cover - family already known feasible
        raise ArgumentError(f"support LP failed (status {res.status})")
    return complex(res.x[0], res.x[1])


def _segment_slice(th, off, z0, scale):
    """Degenerate (thin) intersection: recover it as a segment or point.

    The thin direction comes from an inflated copy of the family; the exact
    endpoints are extreme points of the original family along it.
    """
    delta = max(1e-6 * scale, 10.0 * _DEGENERATE_EPS * scale)
    verts = _dual_hull_polygon(th, off + delta, z0)
    if verts is None or len(verts) < 2:
        return ConvexRegion.point(z0)
    diff = verts[:, None] - verts[None, :]
    i, j = np.unravel_index(np.argmax(np.abs(diff)), diff.shape)
    if verts[j] == verts[i]:
        return ConvexRegion.point(z0)
    u = (verts[j] - verts[i]) / abs(verts[j] - verts[i])
    p_hi = _support_lp(th, off, u)
    p_lo = _support_lp(th, off, -u)
    if abs(p_hi - p_lo) <= POINT_COLLAPSE * max(1.0, scale):
        return ConvexRegion.point(0.5 * (p_hi + p_lo))
    return ConvexRegion.segment(p_lo, p_hi)


def halfplane_inradius(constraints):
    """(Chebyshev center, inradius) of a half-plane family.

    The inradius is negative exactly when the family is infeasible, and its
    magnitude is the infeasibility margin.
    """
    th, off = _normalize_family(constraints)
    return _chebyshev_lp(th, off)


def halfplane_intersection(constraints):
    """Intersect a finite family of half-planes {Re(e^{-i theta} z) <= c}.

    Parameters
    ----------
    constraints : iterable of HalfPlane / (theta, offset) pairs, or a
        (theta_array, offset_array) tuple.  The angles must cover the circle
        with every gap below pi so the intersection is bounded.

    Returns
    -------
    ConvexRegion
        The exact intersection of the finite family, classified as
        empty / point / segment / polygon.  When the family samples the
        support function of a convex set, the polygon is an outer
        approximation of that set.

    Raises
    ------
    UnboundedRegionError
        If the maximal angular gap between constraint normals is >= pi.
    """
    th, off = _normalize_family(constraints)
    if len(th) < 3:
        raise UnboundedRegionError("need at least 3 constraint directions")
    gaps = np.diff(np.concatenate([th, [th[0] + TWO_PI]]))
    if float(np.max(gaps)) >= math.pi - 1e-12:
        raise UnboundedRegionError(
            f"angular gap {float(np.max(gaps)):.6f} >= pi; region may be unbounded")
    scale = max(1.0, float(np.max(np.abs(off))))

    # contradiction between opposite constraints: c(t) + c(t+pi) < 0
    # (decided at the floating-point feasibility cutoff)
    m = len(th)
    j = np.searchsorted(th, (th + math.pi) % TWO_PI)
    cand = np.stack([(j - 1) % m, j % m, (j + 1) % m])
    circ = np.abs((th[cand] - th[None, :]) % TWO_PI - math.pi)
    opposite = circ <= _ANGLE_EPS
    if np.any(opposite & (off[cand] + off[None, :] < -_FEAS_EPS * scale)):
        return ConvexRegion.empty()

    nx, ny = np.cos(th), np.sin(th)
    # Steiner-point candidate: interior for support-generated families,
    # which skips the LP on the common path
    w = 0.5 * (gaps + np.roll(gaps, 1))
    z0 = complex(float(np.sum(w * off * nx)) / math.pi,
                 float(np.sum(w * off * ny)) / math.pi)
    margin = float(np.min(off - (nx * z0.real + ny * z0.imag)))

    if margin <= _DEGENERATE_EPS * scale:
        z0, rho = _chebyshev_lp(th, off)
        if rho < -_FEAS_EPS * scale:
            return ConvexRegion.empty()
        if 2.0 * rho <= _DEGENERATE_EPS * scale:
            return _segment_slice(th, off, z0, scale)

    verts = _dual_hull_polygon(th, off, z0)
    if verts is None:
        return _segment_slice(th, off, z0, scale)
    region = _classify_vertices(verts, scale, fat_hint=True)
    if region.kind in (ConvexRegion.SEGMENT, ConvexRegion.POINT):
        # thin region slipped through the full path: redo with the exact slice
        z0, _ = _chebyshev_lp(th, off)
        return _segment_slice(th, off, z0, scale)
    return region


# ---------------------------------------------------------------------------
# metric queries
# ---------------------------------------------------------------------------

def _points_region_distance(points, r):
    """Distances from an array of points to a nonempty region."""
    z = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if r.kind == ConvexRegion.POINT:
        return np.abs(z - r.data)
    if r.kind == ConvexRegion.SEGMENT:
        a, b = r.data
        ab = b - a
        den = (ab.conjugate() * ab).real
        t = np.clip(((z - a) * np.conjugate(ab)).real / den, 0.0, 1.0)
        return np.abs(z - (a + t * ab))
    v = r.vertices()
    edge = np.roll(v, -1) - v
    rel = z[:, None] - v[None, :]
    cross = edge.real[None, :] * rel.imag - edge.imag[None, :] * rel.real
    inside = np.all(cross >= 0.0, axis=1)
    den = (edge.conjugate() * edge).real
    t = np.clip((rel * np.conjugate(edge)[None, :]).real / den[None, :], 0.0, 1.0)
    d = np.min(np.abs(rel - t * edge[None, :]), axis=1)
    d[inside] = 0.0
    return d


def region_distance(r, z):
    """Euclidean distance from the point ``z`` to the region (0 inside)."""
    if r.is_empty:
        raise EmptyRegionError("distance to the empty region is undefined")
    return float(_points_region_distance([complex(z)], r)[0])


def region_contains(r, z, tol=0.0):
    """True iff ``z`` lies within distance ``tol`` of region ``r``."""
    if r.is_empty:
        return False
    return region_distance(r, z) <= tol


def region_support(r, theta):
    """max Re(e^{-i theta} z) over the region (vectorized over theta)."""
    if r.is_empty:
        raise EmptyRegionError("support of the empty region is undefined")
    v = r.vertices()
    th = np.asarray(theta, dtype=float)
    proj = np.cos(th)[..., None] * v.real + np.sin(th)[..., None] * v.imag
    out = proj.max(axis=-1)
    return float(out) if np.isscalar(theta) else out


def region_within(inner, outer, tol=0.0):
    """True iff every point of ``inner`` lies within ``tol`` of ``outer``."""
    if inner.is_empty:
        return True
    if outer.is_empty:
        return False
    return bool(np.all(_points_region_distance(inner.vertices(), outer) <= tol))


def region_area(r):
    """Enclosed area (shoelace); zero for degenerate regions."""
    if r.kind != ConvexRegion.POLYGON:
        return 0.0
    v = r.vertices()
    nxt = np.roll(v, -1)
    return float(0.5 * np.sum(v.real * nxt.imag - v.imag * nxt.real))


def hausdorff_distance(r1, r2):
    """Symmetric Hausdorff distance between two nonempty regions.

    Exact for these region classes: over a convex region, the distance to
    another convex set is maximized at a vertex, so vertices against edges
    suffice.  Sample ellipses to polygons first (``region_from_ellipse``).
    """
    if r1.is_empty or r2.is_empty:
        raise EmptyRegionError("Hausdorff distance needs nonempty regions")
    d12 = float(np.max(_points_region_distance(r1.vertices(), r2)))
    d21 = float(np.max(_points_region_distance(r2.vertices(), r1)))
    return max(d12, d21)


def convex_hull_regions(parts, hull_samples=HULL_SAMPLES):
    """Convex hull of regions and/or elliptical discs.

    Ellipses are discretized at ``hull_samples`` boundary points.  Returns a
    polygon, degrading to segment / point for degenerate inputs.
    """
    pts = []
    for part in parts:
        if isinstance(part, EllipseDisc):
            pts.append(ellipse_boundary(part, hull_samples))
        elif isinstance(part, ConvexRegion):
            if not part.is_empty:
                pts.append(part.vertices())
        else:
            raise ArgumentError(f"cannot hull object of type {type(part)!r}")
    if not pts:
        raise ArgumentError("convex_hull_regions needs at least one nonempty part")
    cloud = np.concatenate(pts)
    scale = max(1.0, float(np.max(np.abs(cloud))))
    if len(cloud) <= 2:
        return _classify_vertices(cloud, scale)
    hull = _convex_hull_points(cloud)
    if len(hull) < 3:
        # collinear cloud: classify its extreme pair
        i = int(np.argmin(cloud.real + cloud.imag * 1e-9))
        d = np.abs(cloud - cloud[i])
        return _classify_vertices(np.array([cloud[i], cloud[int(np.argmax(d))]]), scale)
    return _classify_vertices(cloud[hull], scale)


def nesting_check(discs, nest_samples=NEST_SAMPLES, nest_tol=NEST_TOL):
    """True iff each disc's support is dominated by its predecessor's at
    ``nest_samples`` uniform angles (support dominance = containment)."""
    discs = list(discs)
    if not discs:
        raise ArgumentError("nesting_check needs at least one disc")
    th = np.linspace(0.0, TWO_PI, nest_samples, endpoint=False)
    sup = np.array([ellipse_support(e, th) for e in discs])
    return bool(np.all(sup[1:] <= sup[:-1] + nest_tol))


# ---------------------------------------------------------------------------
# ellipse fitting
# ---------------------------------------------------------------------------

def point_ellipse_distance(e, points):
    """Distance from each point to the *boundary* of the ellipse ``e``.

    Robust bisection on the standard distance equation in the ellipse frame;
    valid for interior and exterior points and for degenerate (b == 0) discs.
    """
    z = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    w = (z - e.center) * np.exp(-1j * e.rotation)
    px = np.abs(w.real)
    py = np.abs(w.imag)
    a, b = e.semi_major, e.semi_minor
    if a == 0.0:
        return np.abs(w)
    if b == 0.0:
        return np.hypot(np.maximum(px - a, 0.0), py)
    dist = np.empty(len(z))
    # on the major axis inside the evolute the t-equation loses the root
    on_axis = py <= 1e-15 * max(a, 1.0)
    ax_inner = on_axis & (px < (a * a - b * b) / a)
    if ax_inner.any():
        xs = a * a * px[ax_inner] / (a * a - b * b)
        ys = b * np.sqrt(np.maximum(1.0 - (xs / a) ** 2, 0.0))
        dist[ax_inner] = np.hypot(px[ax_inner] - xs, ys)
    rest = ~ax_inner
    if rest.any():
        qx, qy = px[rest], py[rest]
        lo = np.full(qx.shape, -(b * b))
        hi = np.maximum(a * np.hypot(qx, qy), b * b)
        for _ in range(80):
            f = (a * qx / (hi + a * a)) ** 2 + (b * qy / (hi + b * b)) ** 2 - 1.0
            grow = f > 0.0
            if not grow.any():
                break
            hi[grow] = hi[grow] * 2.0 + 1.0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            f = (a * qx / (mid + a * a)) ** 2 + (b * qy / (mid + b * b)) ** 2 - 1.0
            pos = f > 0.0
            lo = np.where(pos, mid, lo)
            hi = np.where(pos, hi, mid)
        t = 0.5 * (lo + hi)
        xs = a * a * qx / (t + a * a)
        ys = b * b * qy / (t + b * b)
        dist[rest] = np.hypot(qx - xs, qy - ys)
    return dist


def _conic_to_ellipse(coef):
    """Conic coefficients (A, B, C, D, E, F) -> EllipseDisc."""
    A, B, C, D, E, F = (float(x) for x in coef)
    disc = B * B - 4.0 * A * C
    if disc >= 0.0:
        raise FitError("fitted conic is not an ellipse")
    x0 = (2.0 * C * D - B * E) / disc
    y0 = (2.0 * A * E - B * D) / disc
    m2 = np.array([[A, B / 2.0], [B / 2.0, C]])
    m3 = np.array([[A, B / 2.0, D / 2.0],
                   [B / 2.0, C, E / 2.0],
                   [D / 2.0, E / 2.0, F]])
    lam, vec = np.linalg.eigh(m2)
    det2 = float(np.linalg.det(m2))
    det3 = float(np.linalg.det(m3))
    axes2 = -det3 / (det2 * lam)
    if np.any(axes2 <= 0.0) or not np.all(np.isfinite(axes2)):
        raise FitError("fitted conic is degenerate")
    axes = np.sqrt(axes2)
    i_maj = int(np.argmax(axes))
    v = vec[:, i_maj]
    rot = math.atan2(v[1], v[0]) % math.pi
    return EllipseDisc(complex(x0, y0), float(axes[i_maj]), float(axes[1 - i_maj]), rot)


def _sampson_distance(params, z):
    """First-order geometric distance to the ellipse given by
    (cx, cy, a, b, phi); cheap and smooth, used inside refinement."""
    cx, cy, a, b, phi = params
    a = abs(a)
    b = min(abs(b), a)
    b = max(b, 1e-12 * max(a, 1.0))
    w = (z - complex(cx, cy)) * np.exp(-1j * phi)
    u, v = w.real, w.imag
    f = (u / a) ** 2 + (v / b) ** 2 - 1.0
    g = np.hypot(2.0 * u / a ** 2, 2.0 * v / b ** 2)
    return f / np.maximum(g, 1e-300)


def _refine_ellipse(z, e0):
    """Polish the algebraic fit geometrically: a least-squares pass on the
    Sampson distances followed by a high-power pass that pushes down the
    maximal deviation."""
    x = np.array([e0.center.real, e0.center.imag,
                  e0.semi_major, e0.semi_minor, e0.rotation])
    for half_power in (1.0, 4.0):
        def resid(p):
            return np.abs(_sampson_distance(p, z)) ** half_power
        try:
            x = least_squares(resid, x, method="lm", xtol=1e-14, ftol=1e-14,
                              max_nfev=400).x
        except Exception:  # pragma: no cover - keep the algebraic fit
            return e0
    a = abs(x[2])
    b = min(abs(x[3]), a)
    if not (np.isfinite(a) and a > 0.0):
        return e0
    return EllipseDisc(complex(x[0], x[1]), a, max(b, 0.0), x[4] % math.pi)


def ellipse_fit(points):
    """Conic least-squares fit constrained to an ellipse, polished
    geometrically.

    The direct Halir--Flusser solve provides the ellipse; a Sampson-distance
    least-squares refinement then reduces the maximal geometric deviation
    (the algebraic fit alone can overstate it by ~25% on real boundaries).

    Parameters
    ----------
    points : array_like of complex, length >= 6

    Returns
    -------
    (EllipseDisc, float)
        The fitted disc and the residual: maximal geometric distance from
        the points to the fitted boundary divided by the semi-major axis,
        so the figure is scale-free.

    Raises
    ------
    FitError
        For degenerate or collinear input.
    """
    z = np.asarray(points, dtype=np.complex128)
    if len(z) < 6:
        raise ArgumentError("ellipse_fit needs at least 6 points")
    mean = complex(np.mean(z))
    spread = float(np.sqrt(np.mean(np.abs(z - mean) ** 2)))
    if spread == 0.0:
        raise FitError("all points coincide")
    zn = (z - mean) / spread
    x, y = zn.real, zn.imag
    cov = np.cov(np.vstack([x, y]))
    if float(np.linalg.eigvalsh(cov)[0]) < 1e-16:
        raise FitError("points are collinear")

    d1 = np.column_stack([x * x, x * y, y * y])
    d2 = np.column_stack([x, y, np.ones_like(x)])
    s1 = d1.T @ d1
    s2 = d1.T @ d2
    s3 = d2.T @ d2
    try:
        t = -np.linalg.solve(s3, s2.T)
    except np.linalg.LinAlgError as exc:
        raise FitError("degenerate design matrix") from exc
    m = s1 + s2 @ t
    m = np.vstack([m[2] / 2.0, -m[1], m[0] / 2.0])
    w, vecs = np.linalg.eig(m)
    a1 = None
    for jj in range(3):
        col = vecs[:, jj]
        if np.max(np.abs(col.imag)) > 1e-10 * np.max(np.abs(col)):
            continue
        col = col.real
        if 4.0 * col[0] * col[2] - col[1] ** 2 > 0.0:
            a1 = col
            break
    if a1 is None:
        raise FitError("no elliptical solution to the constrained fit")
    A, B, C = a1
    D, E, F = t @ a1

    # undo zn = (z - mean)/spread
    s = spread
    mx, my = mean.real, mean.imag
    coef = np.array([
        A, B, C,
        D * s - 2.0 * A * mx - B * my,
        E * s - B * mx - 2.0 * C * my,
        (A * mx * mx + B * mx * my + C * my * my
         - D * s * mx - E * s * my + F * s * s),
    ])
    disc = _refine_ellipse(z, _conic_to_ellipse(coef))
    res = float(np.max(point_ellipse_distance(disc, z))) / disc.semi_major
    return disc, res
