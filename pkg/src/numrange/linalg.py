"""Dense complex linear algebra shared by the range computations.

Matrices are plain ``numpy.ndarray`` objects with ``complex128`` entries.
Everything here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, StructureError

__all__ = [
    "HermitianEigen",
    "as_matrix",
    "hermitian_part",
    "eigh",
    "singular_values",
    "commutator_norm",
    "is_normal",
    "frobenius",
]

HERM_TOL = 1e-10


def as_matrix(a, square=False):
    """Validate and return ``a`` as a 2-D complex128 array.

    Raises DimensionError for wrong dimensionality (or non-square input
    when ``square`` is set) and ValueError for non-finite entries.
    """
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.size == 0:
        raise DimensionError("empty matrix")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix entries must be finite")
    return m


def frobenius(a):
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a)))


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix.

    values : real eigenvalues in descending order
    vectors : unitary matrix whose column j is the eigenvector for values[j]
    """

    values: np.ndarray
    vectors: np.ndarray


def hermitian_part(a, theta=0.0):
    """Hermitian part of ``a`` in direction ``theta``.

    Returns H_theta(a) = (e^{-i theta} a + e^{i theta} a*) / 2, which equals
    Re(a) cos(theta) + Im(a) sin(theta).  The result is symmetrized, so it
    is Hermitian to machine precision.
    """
    m = as_matrix(a, square=True)
    rotated = np.exp(-1j * theta) * m
    return (rotated + rotated.conj().T) / 2.0


def eigh(h, herm_tol=HERM_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian within ``herm_tol * ||h||_F``.  Inputs
        inside the tolerance are symmetrized before decomposing.
    herm_tol : float
        Relative Hermiticity tolerance.

    Returns
    -------
    HermitianEigen
        Descending eigenvalues with orthonormal column eigenvectors.
        Within a degenerate cluster the eigenvector basis is
        solver-determined and not unique.
    """
    m = as_matrix(h, square=True)
    scale = frobenius(m)
    defect = frobenius(m - m.conj().T)
    if defect > herm_tol * max(scale, 1e-300):
        raise StructureError(
            f"matrix is not Hermitian (defect {defect:.3e} > {herm_tol:.1e} * ||H||)",
            residual=defect,
        )
    sym = (m + m.conj().T) / 2.0
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"eigendecomposition did not converge: {exc}") from exc
    order = slice(None, None, -1)
    return HermitianEigen(values=np.ascontiguousarray(w[order]),
                          vectors=np.ascontiguousarray(v[:, order]))


def singular_values(n):
    """All min(rows, cols) singular values of ``n``, descending, >= 0."""
    m = as_matrix(n)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return np.maximum(s, 0.0)


def commutator_norm(x, y):
    """Frobenius norm of the commutator xy - yx."""
    mx = as_matrix(x, square=True)
    my = as_matrix(y, square=True)
    if mx.shape != my.shape:
        raise DimensionError(f"shape mismatch {mx.shape} vs {my.shape}")
    return frobenius(mx @ my - my @ mx)


def is_normal(z, tol=1e-9):
    """True iff ||z z* - z* z||_F <= tol * max(1, ||z||_F^2)."""
    mz = as_matrix(z, square=True)
    return commutator_norm(mz, mz.conj().T) <= tol * max(1.0, frobenius(mz) ** 2)
