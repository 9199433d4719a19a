"""Dense numerical kernels: symmetric eigendecompositions, the regularized
ratio eigen-problem behind the per-mode discriminant updates, ridge solves,
and QR orthonormalization.

Tolerances used by input validation and guarantees live here in one place:

* ``SYM_TOL``   -- max absolute asymmetry accepted by :func:`sym_eig`.
* ``ORTHO_TOL`` -- orthonormality guarantee of :func:`orthonormalize`.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

__all__ = [
    "NumericError",
    "EigenPairs",
    "sym_eig",
    "regularized_ratio_eig",
    "ridge_solve",
    "orthonormalize",
    "SYM_TOL",
    "ORTHO_TOL",
]

SYM_TOL = 1e-10
ORTHO_TOL = 1e-10


class NumericError(RuntimeError):
    """A linear-algebra kernel failed (non-convergence, indefiniteness, rank loss)."""


class EigenPairs(NamedTuple):
    """Eigenvalues sorted descending with eigenvectors as aligned columns."""

    values: np.ndarray
    vectors: np.ndarray


def _as_square(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def sym_eig(a) -> EigenPairs:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Raises ``ValueError`` if ``a`` is not square or deviates from symmetry
    by more than ``SYM_TOL`` in absolute value, and :class:`NumericError`
    if the underlying decomposition fails to converge.
    """
    a = _as_square(a, "a")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > SYM_TOL:
        raise ValueError(f"matrix is asymmetric beyond tolerance: max |a - a.T| = {asym:.3e}")
    try:
        values, vectors = np.linalg.eigh((a + a.T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigendecomposition failed: {exc}") from exc
    order = np.argsort(values)[::-1]
    return EigenPairs(values[order], vectors[:, order])


def regularized_ratio_eig(sb, sw, lam: float, n_components: int) -> np.ndarray:
    """Top eigenvectors of ``(sw + lam*I)^{-1} sb`` for symmetric PSD inputs.

    Solved as a symmetric-definite generalized problem through Cholesky
    whitening: ``sw + lam*I = L L^T``, eigendecompose ``L^{-1} sb L^{-T}``,
    and map the eigenvectors back through ``L^{-T}``.  The returned columns
    span the invariant subspace of the ``n_components`` largest eigenvalues;
    they are not Euclidean-orthonormal in general.
    """
    sb = _as_square(sb, "sb")
    sw = _as_square(sw, "sw")
    if sb.shape != sw.shape:
        raise ValueError(f"sb {sb.shape} and sw {sw.shape} must have the same shape")
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    n = sb.shape[0]
    if not 1 <= n_components <= n:
        raise ValueError(f"n_components must be in 1..{n}, got {n_components}")
    shifted = sw + lam * np.eye(n)
    try:
        L = scipy.linalg.cholesky(shifted, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NumericError(
            "(sw + lambda*I) is not positive definite; increase lambda"
        ) from exc
    half = scipy.linalg.solve_triangular(L, sb, lower=True)
    whitened = scipy.linalg.solve_triangular(L, half.T, lower=True).T
    pairs = sym_eig((whitened + whitened.T) / 2.0)
    top = pairs.vectors[:, :n_components]
    return scipy.linalg.solve_triangular(L.T, top, lower=False)


def ridge_solve(a, b, lam: float) -> np.ndarray:
    """Solve ``(a^T a + lam*I) x = a^T b`` for ``lam > 0``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"a must be a matrix, got ndim={a.ndim}")
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"a has {a.shape[0]} rows but b has {b.shape[0]}")
    if lam <= 0:
        raise ValueError(f"lambda must be > 0, got {lam}")
    gram = a.T @ a + lam * np.eye(a.shape[1])
    rhs = a.T @ b
    try:
        factor = scipy.linalg.cho_factor(gram)
    except scipy.linalg.LinAlgError as exc:
        raise NumericError(f"ridge system factorization failed: {exc}") from exc
    return scipy.linalg.cho_solve(factor, rhs)


def orthonormalize(m) -> np.ndarray:
    """Orthonormal basis of the column span of ``m`` via thin QR.

    Columns are sign-fixed (diagonal of R positive) so the result is a
    deterministic function of the input.  Raises :class:`NumericError` on
    rank deficiency.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"m must be a matrix, got ndim={m.ndim}")
    rows, cols = m.shape
    if rows < cols:
        raise ValueError(f"need rows >= cols, got shape {m.shape}")
    q, r = np.linalg.qr(m, mode="reduced")
    diag = np.abs(np.diag(r))
    scale = diag.max(initial=0.0)
    if scale == 0.0 or np.any(diag < max(rows, cols) * np.finfo(np.float64).eps * scale):
        raise NumericError("matrix is rank deficient; cannot orthonormalize")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs
