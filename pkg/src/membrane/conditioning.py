"""Condition estimation for the dense interpolation systems.

All fits refuse to proceed past a 1-norm condition estimate of 1e12; beyond
that, double-precision results are noise-dominated.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, lapack, lu_factor

COND_LIMIT = 1e12


class ConditioningError(RuntimeError):
    """Interpolation system too ill-conditioned (or singular) to solve."""

    def __init__(self, message: str, estimate: float = np.inf):
        super().__init__(message)
        self.estimate = estimate


def lu_factor_with_cond(a: np.ndarray):
    """LU factorization plus a 1-norm condition estimate (LAPACK gecon)."""
    anorm = float(np.linalg.norm(a, 1))
    try:
        lu, piv = lu_factor(a)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"singular system: {exc}") from exc
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    if info != 0:
        raise ConditioningError(f"condition estimation failed (info={info})")
    cond = np.inf if rcond == 0.0 else 1.0 / float(rcond)
    return (lu, piv), cond


def cho_factor_with_cond(a: np.ndarray):
    """Cholesky factorization plus a 1-norm condition estimate (LAPACK pocon).

    Raises ConditioningError if the matrix is not numerically positive
    definite.
    """
    anorm = float(np.linalg.norm(a, 1))
    try:
        c, lower = cho_factor(a)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(
            f"matrix not positive definite: {exc}",
            estimate=float(np.linalg.cond(a, 1)),
        ) from exc
    rcond, info = lapack.dpocon(c, anorm, lower=int(lower))
    if info != 0:
        raise ConditioningError(f"condition estimation failed (info={info})")
    cond = np.inf if rcond == 0.0 else 1.0 / float(rcond)
    return (c, lower), cond
