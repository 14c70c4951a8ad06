"""Input validation shared by the estimators and evaluators."""
import numbers

import numpy as np
from sklearn.utils.validation import check_array


def check_points(X, dim=None):
    """Coerce a point or a batch of points to a finite ``(m, d)`` float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    X = check_array(X, ensure_2d=True, dtype=float)
    if dim is not None and X.shape[1] != dim:
        raise ValueError(f"points have {X.shape[1]} coordinates, expected {dim}")
    return X


def check_point(c, dim):
    c = np.asarray(c, dtype=float).ravel()
    if c.shape[0] != dim or not np.all(np.isfinite(c)):
        raise ValueError(f"expected a finite point in R^{dim}, got {c!r}")
    return c


def check_weights(w, n):
    if w is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(w, dtype=float).ravel()
    if w.shape[0] != n:
        raise ValueError(f"sample_weight has {w.shape[0]} entries for {n} nodes")
    if np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("sample_weight must be finite and positive")
    return w


def check_degree(n, name="degree", minimum=0):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {n}")
    return int(n)
