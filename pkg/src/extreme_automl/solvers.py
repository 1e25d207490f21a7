"""Dense least-squares solvers backing ELM training.

Two entry points: :func:`pseudoinverse_solve` for the minimum-norm
least-squares solution and :func:`ridge_solve` for the Tikhonov-regularized
normal equations. Both are pure functions of their inputs and safe to call
concurrently.
"""

import numpy as np
import scipy.linalg

from .validation import as_float_matrix, check_same_rows

_EPS = np.finfo(np.float64).eps


def _check_solve_args(a, b):
    a = as_float_matrix(a, "a")
    b = as_float_matrix(b, "b")
    if a.shape[0] < 1 or a.shape[1] < 1 or b.shape[1] < 1:
        raise ValueError(f"degenerate system: a is {a.shape}, b is {b.shape}")
    check_same_rows(a, b, "a", "b")
    return a, b


def pseudoinverse_solve(a, b):
    """Minimum-norm least-squares solution of ``a @ x = b``.

    Uses the singular value decomposition of ``a``; singular values below
    ``max(a.shape) * sigma_max * eps`` are treated as zero, so rank-deficient
    systems yield the minimum-norm solution.
    """
    a, b = _check_solve_args(a, b)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = max(a.shape) * _EPS * (s[0] if s.size else 0.0)
    keep = s > cutoff
    if not keep.any():
        return np.zeros((a.shape[1], b.shape[1]))
    u = u[:, keep]
    s = s[keep]
    vt = vt[keep]
    return vt.T @ ((u.T @ b) / s[:, None])


def _gram_solve(gram, rhs, alpha):
    """Cholesky solve of ``(gram + alpha I) x = rhs``; None if not SPD."""
    shifted = gram + alpha * np.eye(gram.shape[0])
    try:
        factor = scipy.linalg.cho_factor(shifted, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError:
        return None
    # C layout keeps downstream matrix products bitwise reproducible after a
    # save/load round trip (cho_solve hands back Fortran-ordered memory).
    return np.ascontiguousarray(scipy.linalg.cho_solve(factor, rhs, check_finite=False))


def _ridge_svd(a, b, alpha):
    """Regularized solve through the SVD of ``a``; robust to rank deficiency."""
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    scale = s / (s * s + alpha)
    return vt.T @ (scale[:, None] * (u.T @ b))


def ridge_solve(a, b, alpha):
    """Solve the regularized normal equations ``(a.T a + alpha I) x = a.T b``.

    ``alpha == 0`` delegates to :func:`pseudoinverse_solve`. For tall systems
    the m-by-m normal equations are solved by Cholesky factorization; wide or
    numerically indefinite systems fall back to an SVD of ``a``.
    """
    a, b = _check_solve_args(a, b)
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    if alpha == 0:
        return pseudoinverse_solve(a, b)
    n, m = a.shape
    if m <= n:
        x = _gram_solve(a.T @ a, a.T @ b, alpha)
        if x is not None:
            return x
    return _ridge_svd(a, b, alpha)
