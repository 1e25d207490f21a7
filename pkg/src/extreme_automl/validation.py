"""Input validation helpers shared across the package."""

import numpy as np


def as_float_matrix(a, name="array"):
    """Coerce ``a`` to a 2-D float64 array, rejecting NaN and infinities."""
    try:
        out = np.asarray(a, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not numeric: {exc}") from None
    if out.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {out.shape}")
    if out.size and not np.isfinite(out).all():
        raise ValueError(f"{name} contains NaN or infinite entries")
    return out


def as_float_vector(a, name="array"):
    """Coerce ``a`` to a 1-D float64 array, rejecting NaN and infinities."""
    try:
        out = np.asarray(a, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not numeric: {exc}") from None
    if out.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {out.shape}")
    if out.size and not np.isfinite(out).all():
        raise ValueError(f"{name} contains NaN or infinite entries")
    return out


def check_same_rows(a, b, a_name="a", b_name="b"):
    if a.shape[0] != b.shape[0]:
        raise ValueError(
            f"{a_name} and {b_name} must have the same number of rows: "
            f"{a.shape[0]} != {b.shape[0]}"
        )


def check_task(task):
    if task not in ("classification", "regression"):
        raise ValueError(f"task must be 'classification' or 'regression', got {task!r}")
