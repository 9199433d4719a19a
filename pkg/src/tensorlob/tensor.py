"""Dense tensor algebra: mode-k fibers, unfoldings, mode-k products, norms.

Tensors are plain ``numpy.ndarray`` objects with float64 entries.  The
canonical flat layout is *mode-1 fastest*: the flat vector of a tensor ``t``
with dims ``(I_1, ..., I_K)`` is ``t.ravel(order="F")``, and
:func:`tensor_from_flat` inverts it.  Modes are numbered ``1..K`` in every
public signature, matching the usual multilinear notation; element indices
stay 0-based as everywhere else in numpy.

The mode-k unfolding arranges the mode-k fibers as columns of an
``I_k x prod(other dims)`` matrix.  The column order is derived from the
canonical layout: column ``j`` corresponds to the multi-index over the
remaining modes obtained by letting the *lowest* remaining mode vary
fastest.  Equivalently::

    unfold(t, k) == moveaxis(t, k - 1, 0).reshape(I_k, -1, order="F")

Any fixed column convention yields equivalent downstream results; this one
is pinned so that ``fold`` can invert it exactly and cross-operation
identities are testable.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "tensor_from_flat",
    "tensor_to_flat",
    "mode_k_fiber",
    "unfold",
    "fold",
    "mode_product",
    "frobenius_norm",
]


def _check_mode(t: np.ndarray, mode: int) -> None:
    if not 1 <= mode <= t.ndim:
        raise IndexError(f"mode {mode} out of range for a {t.ndim}-mode tensor")


def tensor_from_flat(values, dims) -> np.ndarray:
    """Build a tensor from its canonical (mode-1-fastest) flat vector."""
    values = np.asarray(values, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"dims must be positive, got {dims}")
    if values.size != int(np.prod(dims)):
        raise ValueError(f"{values.size} values cannot fill dims {dims}")
    return values.reshape(dims, order="F")


def tensor_to_flat(t: np.ndarray) -> np.ndarray:
    """Canonical flat vector of ``t`` (mode-1 varies fastest)."""
    return np.asarray(t, dtype=np.float64).ravel(order="F")


def mode_k_fiber(t: np.ndarray, mode: int, fixed) -> np.ndarray:
    """Mode-k fiber of ``t``: vary index ``mode`` while fixing all others.

    Parameters
    ----------
    t : ndarray
        A K-mode tensor.
    mode : int
        Mode to vary, in ``1..K``.
    fixed : sequence of int
        0-based indices for the K-1 remaining modes, in ascending mode
        order.

    Returns
    -------
    ndarray
        Vector of length ``t.shape[mode - 1]``.
    """
    t = np.asarray(t, dtype=np.float64)
    _check_mode(t, mode)
    fixed = tuple(int(i) for i in fixed)
    if len(fixed) != t.ndim - 1:
        raise IndexError(
            f"expected {t.ndim - 1} fixed indices for a {t.ndim}-mode tensor, got {len(fixed)}"
        )
    other_dims = t.shape[: mode - 1] + t.shape[mode:]
    for i, dim in zip(fixed, other_dims):
        if not 0 <= i < dim:
            raise IndexError(f"fixed index {i} out of range for dim {dim}")
    idx = fixed[: mode - 1] + (slice(None),) + fixed[mode - 1 :]
    return t[idx].copy()


def unfold(t: np.ndarray, mode: int) -> np.ndarray:
    """Mode-k unfolding of ``t``: mode-k fibers arranged as columns."""
    t = np.asarray(t, dtype=np.float64)
    _check_mode(t, mode)
    return np.reshape(np.moveaxis(t, mode - 1, 0), (t.shape[mode - 1], -1), order="F")


def fold(m: np.ndarray, mode: int, dims) -> np.ndarray:
    """Inverse of :func:`unfold`: ``fold(unfold(t, k), k, t.shape) == t``."""
    m = np.asarray(m, dtype=np.float64)
    dims = tuple(int(d) for d in dims)
    if not 1 <= mode <= len(dims):
        raise IndexError(f"mode {mode} out of range for dims {dims}")
    other = dims[: mode - 1] + dims[mode:]
    expected = (dims[mode - 1], int(np.prod(other, dtype=np.int64)) if other else 1)
    if m.ndim != 2 or m.shape != expected:
        raise ValueError(f"matrix shape {m.shape} does not match mode-{mode} unfolding {expected} of dims {dims}")
    t = np.reshape(m, (dims[mode - 1],) + other, order="F")
    return np.moveaxis(t, 0, mode - 1)


def mode_product(t: np.ndarray, w: np.ndarray, mode: int) -> np.ndarray:
    """Mode-k product ``t x_k w`` with ``w`` of shape ``(J_k, I_k)``.

    Contracts mode ``k`` of ``t`` with the columns of ``w``; the result has
    the same dims as ``t`` except ``I_k`` is replaced by ``J_k``.  Satisfies
    ``unfold(mode_product(t, w, k), k) == w @ unfold(t, k)``.
    """
    t = np.asarray(t, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    _check_mode(t, mode)
    if w.ndim != 2:
        raise ValueError(f"w must be a matrix, got ndim={w.ndim}")
    if w.shape[1] != t.shape[mode - 1]:
        raise ValueError(f"w has {w.shape[1]} columns but mode {mode} has dimension {t.shape[mode - 1]}")
    out = np.tensordot(w, t, axes=(1, mode - 1))
    return np.moveaxis(out, 0, mode - 1)


def frobenius_norm(t: np.ndarray) -> float:
    """Frobenius norm: square root of the sum of squared entries."""
    t = np.asarray(t, dtype=np.float64)
    return float(np.linalg.norm(t.ravel()))
