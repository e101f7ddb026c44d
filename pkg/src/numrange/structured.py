"""Closed-form rank-k ranges for 2x2-block structured matrices.

Matrices of the form [[alpha I_r, C], [D, beta I_{n-r}]] whose Hermitian
parts reduce to 2x2 (and 1x1) blocks have boundary generating curves made of
ellipses, one per joint eigenvalue pair of Z = DC and H = C*C + DD*.  This
module detects the structured classes, produces the elliptical components,
and evaluates the per-k region tables; elliptical entries are returned as
``EllipseDisc`` and degenerate entries as ``ConvexRegion``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .engine import SupportSample
from .errors import (
    ArgumentError,
    CapacityError,
    DimensionError,
    HypothesisError,
    NoClosedFormError,
    StructureError,
)
from .geometry import (
    ConvexRegion,
    EllipseDisc,
    convex_hull_regions,
    ellipse_from_foci,
    halfplane_intersection,
)
from .linalg import as_matrix, commutator_norm, eigh, frobenius, is_normal, singular_values

__all__ = [
    "BlockForm",
    "NormalizedBlock",
    "EllipseComponent",
    "KippenhahnComponents",
    "StructureReport",
    "assemble_block",
    "detect_block_form",
    "normalize_block",
    "m_theta",
    "block_support_spectrum",
    "joint_eigendata",
    "kippenhahn_ellipses",
    "rank_k_from_components",
    "nested_fast_path",
    "classify",
    "scalar_dc_ranges",
    "arrowhead_range",
    "zeta_adjoint_ranges",
    "tridiagonal_ranges",
    "shift_range",
    "theta_independent_ranges",
    "is_quadratic",
    "ellipse_2x2",
    "closed_form_ranges",
    "shift_matrix",
]

HYPOTHESIS_TOL = 1e-8
SUBSET_COMPONENT_CAP = 16
_RANK_TOL = 1e-10
_THETA_PROBES = (0.0, math.pi / 7.0, math.pi / 3.0, math.pi / 2.0)


@dataclass(frozen=True)
class BlockForm:
    """(alpha, beta, r, C, D) with scalar diagonal blocks, normalized so that
    n <= 2r; ``swapped`` records that the two-block view was interchanged to
    reach that convention."""

    alpha: complex
    beta: complex
    r: int
    c: np.ndarray
    d: np.ndarray
    n: int
    swapped: bool = False


@dataclass(frozen=True)
class NormalizedBlock:
    """Block form together with w = (alpha-beta)/2, the center shift
    (alpha+beta)/2, and B = A - shift*I."""

    base: BlockForm
    w: complex
    shift: complex
    b_matrix: np.ndarray


@dataclass(frozen=True)
class EllipseComponent:
    """One elliptical component of the boundary generating curve."""

    z: complex
    h: float
    delta: complex
    disc: EllipseDisc


@dataclass(frozen=True)
class KippenhahnComponents:
    ellipses: list
    isolated_point: complex | None = None
    degenerate_segment: tuple | None = None


@dataclass(frozen=True)
class StructureReport:
    """Outcome of structural classification.

    residuals maps hypothesis-check names to their (passing) values;
    quadratic carries the (alpha, beta) pair when the matrix has a degree-two
    minimal polynomial.
    """

    detected_class: str
    residuals: dict = field(default_factory=dict)
    zeta: complex | None = None
    singular_data: tuple | None = None
    quadratic: tuple | None = None
    block_r: int | None = None


def assemble_block(alpha, beta, c, d):
    """Full matrix [[alpha I, C], [D, beta I]] from the blocks."""
    c = as_matrix(c)
    d = as_matrix(d)
    r, s = c.shape
    if d.shape != (s, r):
        raise DimensionError(f"D must be {s}x{r} to match C {r}x{s}")
    out = np.zeros((r + s, r + s), dtype=np.complex128)
    out[:r, :r] = complex(alpha) * np.eye(r)
    out[r:, r:] = complex(beta) * np.eye(s)
    out[:r, r:] = c
    out[r:, :r] = d
    return out


def detect_block_form(a, r, tol=HYPOTHESIS_TOL):
    """Read the block form off a matrix, swapping blocks when n > 2r.

    The diagonal blocks must be scalar multiples of identities within
    ``tol * ||A||_F``; the scalars are the means of the block diagonals.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    if not 0 < r < n:
        raise ArgumentError(f"block split r={r} must satisfy 0 < r < {n}")
    scale = max(1.0, frobenius(m))
    top = m[:r, :r]
    bot = m[r:, r:]
    alpha = complex(np.trace(top) / r)
    beta = complex(np.trace(bot) / (n - r))
    res = max(frobenius(top - alpha * np.eye(r)),
              frobenius(bot - beta * np.eye(n - r)))
    if res > tol * scale:
        raise StructureError(
            f"diagonal blocks are not scalar (residual {res:.3e})", residual=res)
    c = m[:r, r:].copy()
    d = m[r:, :r].copy()
    if n > 2 * r:
        return BlockForm(alpha=beta, beta=alpha, r=n - r, c=d, d=c, n=n,
                         swapped=True)
    return BlockForm(alpha=alpha, beta=beta, r=r, c=c, d=d, n=n, swapped=False)


def normalize_block(bf):
    """NormalizedBlock with w, the center shift, and B = A - shift*I."""
    w = (bf.alpha - bf.beta) / 2.0
    shift = (bf.alpha + bf.beta) / 2.0
    b = assemble_block(w, -w, bf.c, bf.d)
    return NormalizedBlock(base=bf, w=w, shift=shift, b_matrix=b)


def m_theta(bf, theta):
    """M(theta) = C*C + DD* + 2 Re(e^{-2i theta} DC); Hermitian PSD.

    Symmetrized, so it stays exactly Hermitian even when cancellation
    drives the norm to zero (e.g. Hermitian blocks at theta = pi/2).
    """
    c, d = bf.c, bf.d
    zc = np.exp(-2j * theta) * (d @ c)
    out = c.conj().T @ c + d @ d.conj().T + zc + zc.conj().T
    return (out + out.conj().T) / 2.0


def block_support_spectrum(nb, theta):
    """Support spectrum of the assembled block matrix, in closed form.

    Each eigenvalue mu_j(theta) of M(theta) contributes the pair
    Re(e^{-i theta}(alpha+beta))/2 +- sqrt(4 w_theta^2 + mu_j)/2; the zero
    eigenvalues reproduce Re(e^{-i theta} alpha) and Re(e^{-i theta} beta),
    and 2r - n extra copies of Re(e^{-i theta} alpha) fill the spectrum when
    n < 2r.
    """
    bf = nb.base
    mu = np.maximum(eigh(m_theta(bf, theta)).values, 0.0)
    w_th = (nb.w * cmath.exp(-1j * theta)).real
    center = (nb.shift * cmath.exp(-1j * theta)).real
    root = 0.5 * np.sqrt(4.0 * w_th * w_th + mu)
    extra = np.full(2 * bf.r - bf.n, center + w_th)
    vals = np.concatenate([center + root, center - root, extra])
    vals[::-1].sort()
    return SupportSample(theta=float(theta) % (2.0 * math.pi), values=vals)


def joint_eigendata(bf, tol=HYPOTHESIS_TOL):
    """Joint eigenvalue pairs (z_j, h_j) of Z = DC and H = C*C + DD*.

    Requires Z normal and [Z, H] = 0 within ``tol``; otherwise raises
    HypothesisError carrying both residuals.  Pairs are ordered by h
    descending, then Re z descending, then Im z descending, realized by
    diagonalizing H first and refining within its eigenspaces.
    """
    c, d = bf.c, bf.d
    z = d @ c
    h = c.conj().T @ c + d @ d.conj().T
    scale = max(1.0, frobenius(z), frobenius(h))
    res_normal = commutator_norm(z, z.conj().T)
    res_comm = commutator_norm(z, h)
    residuals = {"normality": res_normal, "commutation": res_comm}
    if not is_normal(z, tol) or res_comm > tol * scale:
        raise HypothesisError(
            "Z = DC must be normal and commute with H = C*C + DD*", residuals)

    x = (z + z.conj().T) / 2.0
    y = (z - z.conj().T) / 2.0j
    basis = eigh(h).vectors
    hv = np.real(np.einsum("ij,ik,kj->j", basis.conj(), h, basis))
    ctol = max(tol, 1e-12) * scale

    def refine(u, m_next, key_vals):
        """Diagonalize m_next inside clusters of key_vals, preserving order."""
        out = u.copy()
        new_vals = np.empty(u.shape[1])
        start = 0
        while start < u.shape[1]:
            stop = start + 1
            while stop < u.shape[1] and abs(key_vals[stop] - key_vals[start]) <= ctol:
                stop += 1
            cols = out[:, start:stop]
            sub = cols.conj().T @ m_next @ cols
            dec = eigh((sub + sub.conj().T) / 2.0, herm_tol=1e-6)
            out[:, start:stop] = cols @ dec.vectors
            new_vals[start:stop] = dec.values
            start = stop
        return out, new_vals

    basis, xv = refine(basis, x, hv)
    # h per column is unchanged by rotations inside its own clusters
    hv = np.real(np.einsum("ij,ik,kj->j", basis.conj(), h, basis))
    # refine by Im Z inside joint (h, x) clusters: encode lexicographically
    joint_key = hv + 1e-6 * xv / max(1.0, float(np.max(np.abs(xv))) + 1.0)
    basis, _ = refine(basis, y, joint_key)

    hv = np.real(np.einsum("ij,ik,kj->j", basis.conj(), h, basis))
    zv = np.einsum("ij,ik,kj->j", basis.conj(), z, basis)
    order = np.lexsort((-zv.imag, -zv.real, -hv))
    hv = hv[order]
    zv = zv[order]
    basis = basis[:, order]

    recon_z = frobenius(z - basis @ np.diag(zv) @ basis.conj().T)
    recon_h = frobenius(h - basis @ np.diag(hv) @ basis.conj().T)
    if max(recon_z, recon_h) > 10.0 * max(tol, 1e-9) * scale:
        residuals["reconstruction"] = max(recon_z, recon_h)
        raise HypothesisError("joint diagonalization failed", residuals)
    return [(complex(zz), float(max(hh, 0.0))) for zz, hh in zip(zv, hv)]


def _component_ellipse(alpha, beta, z, h):
    """Ellipse with foci (alpha+beta)/2 +- sqrt(Delta)/2 for
    Delta = (alpha-beta)^2 + 4z, axis lengths from |alpha-beta|^2/2 + h
    +- |Delta|/2, and major axis along Arg(Delta)/2."""
    shift = (alpha + beta) / 2.0
    delta = (alpha - beta) ** 2 + 4.0 * z
    half_sq = cmath.sqrt(delta) / 2.0
    base = 0.5 * abs(alpha - beta) ** 2 + h
    major = math.sqrt(max(base + 0.5 * abs(delta), 0.0))
    minor = math.sqrt(max(base - 0.5 * abs(delta), 0.0))
    rot = 0.5 * cmath.phase(delta) if delta != 0 else 0.0
    disc = EllipseDisc(center=shift, semi_major=major / 2.0,
                       semi_minor=minor / 2.0, rotation=rot % (2.0 * math.pi),
                       foci=(shift + half_sq, shift - half_sq))
    return EllipseComponent(z=complex(z), h=float(h), delta=delta, disc=disc)


def kippenhahn_ellipses(nb, pairs):
    """Elliptical components of the boundary generating curve, one per joint
    eigenvalue pair, plus the isolated point alpha when n < 2r."""
    bf = nb.base
    comps = [_component_ellipse(bf.alpha, bf.beta, z, h) for z, h in pairs]
    scale = max(1.0, abs(bf.alpha), abs(bf.beta),
                *(max(abs(z), h) for z, h in pairs)) if pairs else 1.0
    seg = None
    for z, h in pairs:
        if max(abs(z), abs(h)) <= 1e-10 * scale:
            seg = (bf.alpha, bf.beta)
            break
    iso = bf.alpha if bf.n < 2 * bf.r else None
    return KippenhahnComponents(ellipses=comps, isolated_point=iso,
                                degenerate_segment=seg)


def rank_k_from_components(comp, k, n, r, hull_samples=None):
    """Per-k region from the elliptical components.

    For k <= n-r, intersects the convex hulls of all (n-r-k+1)-element
    component subsets; for n-r < k <= r the region is the isolated point
    alpha; beyond r it is empty.
    """
    if not 1 <= k <= n:
        raise ArgumentError(f"k={k} out of range 1..{n}")
    discs = [e.disc for e in comp.ellipses]
    n_r = len(discs)
    if k <= n_r:
        if n_r > SUBSET_COMPONENT_CAP:
            raise CapacityError(
                f"{n_r} components exceed the subset cap {SUBSET_COMPONENT_CAP}")
        size = n_r - k + 1
        constraints = []
        kwargs = {} if hull_samples is None else {"hull_samples": hull_samples}
        for subset in combinations(range(n_r), size):
            hull = convex_hull_regions([discs[i] for i in subset], **kwargs)
            constraints.extend(hull.halfplanes())
        return halfplane_intersection(constraints)
    if k <= r:
        return ConvexRegion.point(comp.isolated_point)
    return ConvexRegion.empty()


def nested_fast_path(nb, pairs, grid=360):
    """E_k shortcut when mu_1(theta) >= ... >= mu_{n-r}(theta) on a grid.

    mu_j(theta) = h_j + 2 Re(z_j) cos(2 theta) + 2 Im(z_j) sin(2 theta); when
    the ordering holds everywhere the discs are nested and the rank-k range
    is exactly the k-th disc.  Returns None when the ordering fails.
    """
    if not pairs:
        return None
    th = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    z = np.array([p[0] for p in pairs])
    h = np.array([p[1] for p in pairs])
    mu = (h[:, None] + 2.0 * z.real[:, None] * np.cos(2.0 * th)[None, :]
          + 2.0 * z.imag[:, None] * np.sin(2.0 * th)[None, :])
    scale = max(1.0, float(np.max(np.abs(mu))))
    if not np.all(mu[1:] <= mu[:-1] + 1e-10 * scale):
        return None
    comps = kippenhahn_ellipses(nb, pairs)
    return [e.disc for e in comps.ellipses]


# ---------------------------------------------------------------------------
# structured classes
# ---------------------------------------------------------------------------

def _interval_region(alpha, beta):
    """[alpha, beta] as a region: a segment, or a point when alpha == beta."""
    scale = max(1.0, abs(alpha), abs(beta))
    if abs(alpha - beta) <= 1e-14 * scale:
        return ConvexRegion.point(alpha)
    return ConvexRegion.segment(alpha, beta)


def _rank_count(s, rel=_RANK_TOL):
    s = np.asarray(s, dtype=float)
    if len(s) == 0:
        return 0
    return int(np.sum(s > rel * max(1.0, float(s[0]))))


def scalar_dc_ranges(bf, tol=HYPOTHESIS_TOL):
    """Cor.-style table when DC is a scalar matrix z1 I.

    All components share the foci (alpha+beta)/2 +- sqrt((alpha-beta)^2 +
    4 z1)/2; the k-th axis lengths come from the k-th eigenvalue of
    C*C + DD*, so the discs are nested and each one is its own rank-k range.
    """
    z = bf.d @ bf.c
    n_r = bf.n - bf.r
    z1 = complex(np.trace(z) / n_r)
    res = frobenius(z - z1 * np.eye(n_r))
    if res > tol * max(1.0, frobenius(z)):
        raise HypothesisError("DC is not a scalar matrix",
                              {"scalar_dc": res})
    h = np.maximum(eigh(bf.c.conj().T @ bf.c + bf.d @ bf.d.conj().T).values, 0.0)
    out = []
    for k in range(1, bf.n + 1):
        if k <= n_r:
            out.append(_component_ellipse(bf.alpha, bf.beta, z1, float(h[k - 1])).disc)
        elif k <= bf.r:
            out.append(ConvexRegion.point(bf.alpha))
        else:
            out.append(ConvexRegion.empty())
    return out


def arrowhead_range(a, tol=HYPOTHESIS_TOL):
    """Arrowhead matrices: one ellipse, then the shared scalar, then empty.

    The matrix must be scalar outside one full row and its matching column;
    equivalently it has a block form with a vector C and co-vector D, so the
    scalar-DC table applies with z1 = c^T d and h1 = ||c||^2 + ||d||^2.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    if n < 3:
        raise StructureError("arrowhead form needs n >= 3")
    bf = None
    for r in (n - 1, 1):
        try:
            bf = detect_block_form(m, r, tol)
            break
        except StructureError:
            continue
    if bf is None:
        raise StructureError("matrix does not match the arrowhead pattern")
    ranges = scalar_dc_ranges(bf, tol)
    return ranges[0], ranges


def zeta_adjoint_ranges(bf, zeta=None, tol=HYPOTHESIS_TOL):
    """Cor.-style table when D = zeta C*.

    The k-th ellipse has Delta_k = (alpha-beta)^2 + 4 zeta s_k^2 and axis
    parameter (1+|zeta|^2) s_k^2 for the k-th nonzero singular value s_k of
    C; past the rank the regions degrade to [alpha, beta], the point alpha,
    and the empty set.
    """
    c, d = bf.c, bf.d
    norm_c = frobenius(c)
    norm_d = frobenius(d)
    if zeta is None:
        if norm_c == 0.0:
            zeta = 0.0
        else:
            zeta = complex(np.trace(c @ d)) / norm_c ** 2
    res = frobenius(d - zeta * c.conj().T)
    if norm_d > 0.0 and res > tol * norm_d:
        raise HypothesisError("D is not a scalar multiple of C*",
                              {"zeta_adjoint": res})
    if norm_c == 0.0 and norm_d > tol * max(1.0, norm_d):
        raise HypothesisError("C vanishes but D does not",
                              {"zeta_adjoint": norm_d})
    s = singular_values(c)
    p = _rank_count(s)
    m_small = bf.n - bf.r
    m_large = bf.r
    out = []
    for k in range(1, bf.n + 1):
        if k <= min(p, m_small):
            sk2 = float(s[k - 1]) ** 2
            zk = zeta * sk2
            hk = (1.0 + abs(zeta) ** 2) * sk2
            out.append(_component_ellipse(bf.alpha, bf.beta, zk, hk).disc)
        elif k <= m_small:
            out.append(_interval_region(bf.alpha, bf.beta))
        elif k <= m_large:
            out.append(ConvexRegion.point(bf.alpha))
        else:
            out.append(ConvexRegion.empty())
    return out


def _tridiagonal_parts(t, tol):
    """(alpha, beta, c, d) of a biperiodic tridiagonal matrix."""
    m = as_matrix(t, square=True)
    n = m.shape[0]
    if n < 2:
        raise StructureError("tridiagonal form needs n >= 2")
    scale = max(1.0, frobenius(m))
    mask = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :]) > 1
    res_tri = float(np.linalg.norm(m[mask]))
    if res_tri > tol * scale:
        raise StructureError(f"matrix is not tridiagonal (residual {res_tri:.3e})",
                             residual=res_tri)
    diag = np.diag(m)
    alpha = complex(np.mean(diag[0::2]))
    beta = complex(np.mean(diag[1::2]))
    expect = np.where(np.arange(n) % 2 == 0, alpha, beta)
    res_diag = float(np.linalg.norm(diag - expect))
    if res_diag > tol * scale:
        raise StructureError(
            f"main diagonal is not biperiodic (residual {res_diag:.3e})",
            residual=res_diag)
    c = np.diag(m, 1).copy()
    d = np.diag(m, -1).copy()
    return alpha, beta, c, d, res_tri, res_diag


def _fit_zeta(c, d, tol, scale):
    """A single zeta with c_j = zeta conj(d_j) or d_j = zeta conj(c_j)
    for every j, plus the corresponding bidiagonal source vector."""
    eps = 1e-13 * scale
    cands = [0j]
    for cj, dj in zip(c, d):
        if abs(dj) > eps:
            cands.append(cj / dj.conjugate())
        if abs(cj) > eps:
            cands.append(dj / cj.conjugate())
    uniq = []
    for cand in sorted(cands, key=lambda z: (abs(z), z.real, z.imag)):
        if all(abs(cand - u) > eps for u in uniq):
            uniq.append(cand)
    for zeta in uniq:
        tilde = np.empty(len(c), dtype=np.complex128)
        ok = True
        for j, (cj, dj) in enumerate(zip(c, d)):
            if abs(dj - zeta * cj.conjugate()) <= tol * scale:
                tilde[j] = cj
            elif abs(cj - zeta * dj.conjugate()) <= tol * scale:
                tilde[j] = dj
            else:
                ok = False
                break
        if ok:
            return zeta, tilde
    return None, None


def _bidiagonal(tilde, n):
    """B(tilde c): ceil(n/2) x floor(n/2), odd entries on the diagonal and
    even entries on the subdiagonal."""
    rows = (n + 1) // 2
    cols = n // 2
    b = np.zeros((rows, cols), dtype=np.complex128)
    for i in range(cols):
        b[i, i] = tilde[2 * i]
    for i in range(rows - 1):
        b[i + 1, i] = tilde[2 * i + 1]
    return b


def tridiagonal_ranges(t, tol=HYPOTHESIS_TOL):
    """Rank-k ranges of a biperiodic tridiagonal matrix.

    After the odd/even permutation the matrix becomes a block form with
    C = B(tilde c) and D = zeta C*, so the zeta-adjoint table applies with
    the singular values of the bidiagonal B(tilde c).
    """
    m = as_matrix(t, square=True)
    n = m.shape[0]
    alpha, beta, c, d, _, _ = _tridiagonal_parts(m, tol)
    scale = max(1.0, frobenius(m))
    zeta, tilde = _fit_zeta(c, d, tol, scale)
    if zeta is None:
        raise StructureError("no single zeta links the off-diagonals")
    b = _bidiagonal(tilde, n)
    bf = BlockForm(alpha=alpha, beta=beta, r=(n + 1) // 2, c=b,
                   d=zeta * b.conj().T, n=n, swapped=False)
    return zeta_adjoint_ranges(bf, zeta, tol)


def shift_matrix(n, superdiagonal=False):
    """The n-dimensional shift: ones on the sub- (or super-) diagonal."""
    if n < 2:
        raise ArgumentError("shift needs n >= 2")
    s = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n - 1)
    if superdiagonal:
        s[idx, idx + 1] = 1.0
    else:
        s[idx + 1, idx] = 1.0
    return s


def shift_range(n, k):
    """Rank-k range of the n-dimensional shift operator.

    Discs of radius cos(k pi / (n+1)) up to the bidiagonal rank floor(n/2),
    then the point 0 up to ceil(n/2) for odd n, then empty.
    """
    if n < 2:
        raise ArgumentError("shift needs n >= 2")
    if not 1 <= k <= n:
        raise ArgumentError(f"k={k} out of range 1..{n}")
    return tridiagonal_ranges(shift_matrix(n))[k - 1]


def theta_independent_ranges(bf, tol=HYPOTHESIS_TOL):
    """Table when the spectrum of M(theta) does not depend on theta.

    The constant spectrum equals that of M = (C+D*)*(C+D*); the rank-k
    range is E(alpha, beta; sqrt(mu_k)) for the k-th nonzero eigenvalue,
    then [alpha, beta], then the point alpha, then empty.
    """
    spectra = [np.sort(eigh(m_theta(bf, th)).values) for th in _THETA_PROBES]
    dev = max(float(np.max(np.abs(spectra[0] - s))) for s in spectra[1:])
    scale = max(1.0, float(np.max(np.abs(spectra[0]))))
    if dev > tol * scale:
        raise HypothesisError("spectrum of M(theta) varies with theta",
                              {"theta_independence": dev})
    mu = np.maximum(eigh(m_theta(bf, 0.0)).values, 0.0)
    p = _rank_count(np.sqrt(mu))
    n_r = bf.n - bf.r
    out = []
    for k in range(1, bf.n + 1):
        if k <= min(p, n_r):
            out.append(ellipse_from_foci(bf.alpha, bf.beta, math.sqrt(float(mu[k - 1]))))
        elif k <= n_r:
            out.append(_interval_region(bf.alpha, bf.beta))
        elif k <= bf.r:
            out.append(ConvexRegion.point(bf.alpha))
        else:
            out.append(ConvexRegion.empty())
    return out


def is_quadratic(a, tol=HYPOTHESIS_TOL):
    """Degree-two minimal polynomial test.

    Clusters the eigenvalues into two groups (farthest-pair seeded 2-means)
    and accepts iff the clusters are tight and ||(A - alpha I)(A - beta I)||
    vanishes relative to max(1, ||A||^2).  Returns (flag, (alpha, beta)).
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    eigs = np.linalg.eigvals(m)
    scale = max(1.0, frobenius(m))
    diff = np.abs(eigs[:, None] - eigs[None, :])
    spread = float(np.max(diff))
    if spread <= 1e-12 * scale:
        return False, None
    i, j = np.unravel_index(np.argmax(diff), diff.shape)
    centers = np.array([eigs[i], eigs[j]])
    for _ in range(50):
        assign = np.argmin(np.abs(eigs[:, None] - centers[None, :]), axis=1)
        if not (assign == 0).any() or not (assign == 1).any():
            return False, None
        new = np.array([np.mean(eigs[assign == 0]), np.mean(eigs[assign == 1])])
        if np.allclose(new, centers, rtol=0.0, atol=1e-15 * scale):
            centers = new
            break
        centers = new
    tight = max(float(np.max(np.abs(eigs[assign == kk] - centers[kk])))
                for kk in (0, 1))
    if tight > 1e-6 * spread:
        return False, None
    order = np.lexsort((-centers.imag, -centers.real))
    alpha, beta = complex(centers[order[0]]), complex(centers[order[1]])
    res = frobenius((m - alpha * np.eye(n)) @ (m - beta * np.eye(n)))
    if res > tol * max(1.0, frobenius(m) ** 2):
        return False, None
    return True, (alpha, beta)


def ellipse_2x2(a):
    """Elliptical range of a 2x2 matrix: foci at the eigenvalues, axis
    lengths sqrt(Tr(A*A) - 2 Re(lam1 conj(lam2))) and
    sqrt(Tr(A*A) - |lam1|^2 - |lam2|^2)."""
    m = as_matrix(a, square=True)
    if m.shape != (2, 2):
        raise DimensionError("ellipse_2x2 needs a 2x2 matrix")
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    root = cmath.sqrt(tr * tr - 4.0 * det)
    lam1 = (tr + root) / 2.0
    lam2 = (tr - root) / 2.0
    gram = float(np.sum(np.abs(m) ** 2))
    minor = math.sqrt(max(gram - abs(lam1) ** 2 - abs(lam2) ** 2, 0.0))
    return ellipse_from_foci(lam1, lam2, minor)


# ---------------------------------------------------------------------------
# classification and dispatch
# ---------------------------------------------------------------------------

def _shift_residual(m):
    n = m.shape[0]
    return min(frobenius(m - shift_matrix(n, False)),
               frobenius(m - shift_matrix(n, True)))


def _block_residual(m, r):
    n = m.shape[0]
    top = m[:r, :r]
    bot = m[r:, r:]
    alpha = complex(np.trace(top) / r)
    beta = complex(np.trace(bot) / (n - r))
    return max(frobenius(top - alpha * np.eye(r)),
               frobenius(bot - beta * np.eye(n - r)))


def _find_block_r(m, tol, r_hint=None):
    """Best block split: smallest residual, ties toward a balanced split."""
    n = m.shape[0]
    scale = max(1.0, frobenius(m))
    candidates = [r_hint] if r_hint is not None else range(1, n)
    best = None
    for r in candidates:
        if not 0 < r < n:
            raise ArgumentError(f"block split r={r} must satisfy 0 < r < {n}")
        res = _block_residual(m, r)
        if res > tol * scale:
            continue
        key = (res, abs(n - 2 * r), r)
        if best is None or key < best[0]:
            best = (key, r)
    if best is None:
        return None, None
    return best[1], best[0][0]


def classify(a, r=None, tol=HYPOTHESIS_TOL):
    """Structural classification.

    Runs every pattern check, records the passing residuals, and labels the
    matrix with the most specific passing class in the order Shift,
    Arrowhead, TridiagonalBiperiodic, ScalarDC, ZetaAdjoint,
    ThetaIndependent, GenericBlock.  A degree-two minimal polynomial is
    flagged independently of the class.  Scalar multiples of the identity
    report class "None": every rank-k range is the same point and the block
    tables do not apply.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    scale = max(1.0, frobenius(m))
    residuals = {}
    detected = None
    zeta_out = None
    sdata = None
    block_r = None

    def claim(cls, zeta=None, singular_data=None):
        nonlocal detected, zeta_out, sdata
        if detected is None:
            detected = cls
            zeta_out = zeta
            sdata = singular_data

    quad_flag, quad_pair = (is_quadratic(m, tol) if n >= 2 else (False, None))
    quad = quad_pair if quad_flag else None
    if quad is not None:
        alpha_q, beta_q = quad
        residuals["quadratic"] = frobenius(
            (m - alpha_q * np.eye(n)) @ (m - beta_q * np.eye(n)))

    scalar_res = frobenius(m - (np.trace(m) / n) * np.eye(n))
    if scalar_res <= tol * scale:
        residuals["scalar_matrix"] = scalar_res
        return StructureReport(detected_class="None", residuals=residuals,
                               quadratic=quad)

    if n >= 2:
        res = _shift_residual(m)
        if res <= tol * scale:
            residuals["shift_pattern"] = res
            s = singular_values(_bidiagonal(np.ones(n - 1, dtype=np.complex128), n))
            claim("Shift", zeta=0j, singular_data=(_rank_count(s), s))

    if n >= 3:
        for rr in (n - 1, 1):
            res = _block_residual(m, rr)
            if res <= tol * scale:
                residuals["arrowhead_pattern"] = res
                claim("Arrowhead")
                if block_r is None:
                    block_r = rr
                break

    if n >= 3:
        try:
            _, _, c, d, res_tri, res_diag = _tridiagonal_parts(m, tol)
            zeta_t, tilde = _fit_zeta(c, d, tol, scale)
            if zeta_t is not None:
                residuals["tridiagonal"] = res_tri
                residuals["biperiodic"] = res_diag
                b = _bidiagonal(tilde, n)
                s = singular_values(b)
                claim("TridiagonalBiperiodic", zeta=zeta_t,
                      singular_data=(_rank_count(s), s))
        except StructureError:
            pass

    found_r, block_res = _find_block_r(m, tol, r_hint=r)
    if found_r is not None:
        if block_r is None or detected is None:
            block_r = found_r
        bf = detect_block_form(m, found_r, tol)
        z = bf.d @ bf.c
        n_r = bf.n - bf.r
        z1 = complex(np.trace(z) / n_r)
        res_dc = frobenius(z - z1 * np.eye(n_r))
        if res_dc <= tol * max(1.0, frobenius(z)):
            residuals["scalar_dc"] = res_dc
            claim("ScalarDC")

        norm_c = frobenius(bf.c)
        norm_d = frobenius(bf.d)
        if norm_c > 0.0:
            zeta_f = complex(np.trace(bf.c @ bf.d)) / norm_c ** 2
            res_za = frobenius(bf.d - zeta_f * bf.c.conj().T)
            if norm_d == 0.0 or res_za <= tol * norm_d:
                residuals["zeta_adjoint"] = res_za
                s = singular_values(bf.c)
                claim("ZetaAdjoint", zeta=zeta_f,
                      singular_data=(_rank_count(s), s))

        spectra = [np.sort(eigh(m_theta(bf, th)).values) for th in _THETA_PROBES]
        dev = max(float(np.max(np.abs(spectra[0] - s))) for s in spectra[1:])
        if dev <= tol * max(1.0, float(np.max(np.abs(spectra[0])))):
            residuals["theta_independence"] = dev
            mu = np.sqrt(np.maximum(eigh(m_theta(bf, 0.0)).values, 0.0))
            claim("ThetaIndependent", singular_data=(_rank_count(mu), mu))

        residuals.setdefault("block_diagonal", block_res)
        claim("GenericBlock")

    return StructureReport(detected_class=detected or "None",
                           residuals=residuals, zeta=zeta_out,
                           singular_data=sdata, quadratic=quad,
                           block_r=block_r)


def closed_form_ranges(a, r=None, tol=HYPOTHESIS_TOL, hull_samples=None):
    """Dispatch to the closed-form route.

    Returns (route_tag, regions) where regions[k-1] is the rank-k range as
    an EllipseDisc or a ConvexRegion.  Raises NoClosedFormError when no
    structured class applies, and HypothesisError when a block form exists
    but the joint-diagonalization hypotheses fail.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    rep = classify(m, r, tol)
    cls = rep.detected_class
    if cls == "Shift":
        return "closed:Shift", tridiagonal_ranges(m, tol)
    if cls == "Arrowhead":
        _, ranges = arrowhead_range(m, tol)
        return "closed:Arrowhead", ranges
    if cls == "TridiagonalBiperiodic":
        return "closed:TridiagonalBiperiodic", tridiagonal_ranges(m, tol)
    if cls == "ScalarDC":
        bf = detect_block_form(m, rep.block_r, tol)
        return "closed:ScalarDC", scalar_dc_ranges(bf, tol)
    if cls == "ZetaAdjoint":
        bf = detect_block_form(m, rep.block_r, tol)
        return "closed:ZetaAdjoint", zeta_adjoint_ranges(bf, rep.zeta, tol)
    if cls == "ThetaIndependent":
        bf = detect_block_form(m, rep.block_r, tol)
        return "closed:ThetaIndependent", theta_independent_ranges(bf, tol)
    if cls == "GenericBlock":
        bf = detect_block_form(m, rep.block_r, tol)
        nb = normalize_block(bf)
        pairs = joint_eigendata(bf, tol)  # may raise HypothesisError
        discs = nested_fast_path(nb, pairs)
        comps = kippenhahn_ellipses(nb, pairs)
        out = []
        for k in range(1, n + 1):
            if discs is not None and k <= len(discs):
                out.append(discs[k - 1])
            else:
                out.append(rank_k_from_components(comps, k, bf.n, bf.r,
                                                  hull_samples))
        return "closed:GenericBlock", out
    raise NoClosedFormError("no structured class applies to this matrix")
