"""Minimal dense linear algebra: nullspace, orthonormalization, rank, det.

Everything is plain float64 numpy. The nullspace is computed by Gaussian
elimination with partial pivoting followed by back-substitution and
Gram-Schmidt, which is deterministic and adequate at the problem sizes
this package targets (constraint stacks up to a few thousand rows).
"""

import numpy as np

from . import kernels

DEFAULT_TOL = 1e-9


def as_matrix(m, name="matrix"):
    """Coerce to a C-contiguous float64 2-D array, rejecting NaN/Inf."""
    a = np.ascontiguousarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains NaN or Inf entries")
    return a


def nullspace(m, tol=DEFAULT_TOL):
    """Orthonormal basis of the (numerical) nullspace of ``m``.

    Pivots below ``tol * max|entry|`` are treated as zero, so the result
    has ``cols - rank`` columns at that threshold. Columns are
    orthonormal and ordered deterministically (free columns of the
    echelon form, in index order).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_matrix(m).copy()
    rows, cols = a.shape
    scale = np.abs(a).max()
    if scale == 0.0:
        return np.eye(cols)
    pivots, rank = kernels.row_echelon(a, tol * scale)
    pivot_set = set(pivots.tolist())
    free = [c for c in range(cols) if c not in pivot_set]
    d = cols - rank
    if d == 0:
        return np.zeros((cols, 0))
    v = np.zeros((cols, d))
    for j, c in enumerate(free):
        v[c, j] = 1.0
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        v[c, :] = -(a[i, c + 1:] @ v[c + 1:, :]) / a[i, c]
    q, kept = kernels.orthonormal_rows(
        np.ascontiguousarray(v.T), 1e-12 * np.sqrt((v * v).sum(axis=0)).max()
    )
    return np.ascontiguousarray(q[:kept].T)


def orthonormalize(v):
    """Orthonormalize the columns of ``v``, preserving their span.

    Modified Gram-Schmidt in column order; a column is dropped when its
    projection residual falls below ``1e-12`` times its initial norm
    (columns are pre-normalized, making the kernel threshold exactly
    that). All-zero input yields an explicit zero-dimension ``(n, 0)``.
    """
    a = as_matrix(v, "basis")
    norms = np.sqrt((a * a).sum(axis=0))
    if norms.max() == 0.0:
        return np.zeros((a.shape[0], 0))
    scaled = a[:, norms > 0.0] / norms[norms > 0.0]
    q, kept = kernels.orthonormal_rows(np.ascontiguousarray(scaled.T), 1e-12)
    return np.ascontiguousarray(q[:kept].T)


def matrix_rank(m, tol=DEFAULT_TOL):
    """Numerical rank at pivot threshold ``tol * max|entry|``."""
    a = as_matrix(m).copy()
    scale = np.abs(a).max()
    if scale == 0.0:
        return 0
    _, rank = kernels.row_echelon(a, tol * scale)
    return rank


def determinant(m):
    """Determinant by Gaussian elimination with partial pivoting."""
    a = as_matrix(m).copy()
    n, cols = a.shape
    if n != cols:
        raise ValueError(f"determinant needs a square matrix, got {a.shape}")
    sign = 1.0
    for c in range(n):
        p = c + np.argmax(np.abs(a[c:, c]))
        if a[p, c] == 0.0:
            return 0.0
        if p != c:
            a[[c, p]] = a[[p, c]]
            sign = -sign
        f = a[c + 1:, c] / a[c, c]
        a[c + 1:, c:] -= f[:, None] * a[c, c:]
    return sign * np.prod(np.diag(a))
