"""Richardson-extrapolated central differences with error estimates.

Used to manufacture reference derivatives of the analytic test objects and
as an independent cross-check of the analytic derivatives of the
interpolants.  All routines are vectorized over the evaluation abscissae:
``f`` must accept an array of shape (m,) (or two such arrays for the mixed
partial) and return (m,) or (m, c).

The tableau walks the step sequence h0, h0/2, h0/4, ... and extrapolates in
powers of h^2; the returned value at each point/component is the tableau
entry with the smallest Ridders-style error estimate, so late-level roundoff
cannot spoil an already-converged entry.
"""

from __future__ import annotations

import numpy as np


def _extrapolate(raw: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Neville tableau in h^2 over raw stencil values; per-entry best pick."""
    shape = raw[0].shape
    best = raw[0].copy()
    best_err = np.full(shape, np.inf)
    prev_row: list[np.ndarray] = []
    for i, entry in enumerate(raw):
        row = [entry]
        for j in range(1, i + 1):
            factor = 4.0**j
            extrap = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0)
            row.append(extrap)
            err = np.maximum(
                np.abs(extrap - row[j - 1]), np.abs(extrap - prev_row[j - 1])
            )
            mask = err < best_err
            best_err[mask] = err[mask]
            best[mask] = extrap[mask]
        if i == 0:
            # no comparison partner yet; keep the raw entry as fallback
            best_err = np.full(shape, np.inf)
        prev_row = row
    return best, best_err


def derivative_1(f, x, h0: float = 1e-2, levels: int = 7):
    """First derivative of f at x; returns (value, error_estimate)."""
    x = np.asarray(x, dtype=float)
    raw = []
    h = h0
    for _ in range(levels):
        raw.append((f(x + h) - f(x - h)) / (2.0 * h))
        h /= 2.0
    return _extrapolate(raw)


def derivative_2(f, x, h0: float = 1e-2, levels: int = 7):
    """Second derivative of f at x; returns (value, error_estimate)."""
    x = np.asarray(x, dtype=float)
    fx = f(x)
    raw = []
    h = h0
    for _ in range(levels):
        raw.append((f(x + h) - 2.0 * fx + f(x - h)) / (h * h))
        h /= 2.0
    return _extrapolate(raw)


def mixed_partial(f, x, y, h0: float = 1e-2, levels: int = 7):
    """Mixed partial d2 f / dx dy of f(x, y); returns (value, error_estimate)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    raw = []
    h = h0
    for _ in range(levels):
        raw.append(
            (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h))
            / (4.0 * h * h)
        )
        h /= 2.0
    return _extrapolate(raw)
