"""Fourier representations: trigonometric (circle) and spherical harmonic
(sphere) interpolation with analytic derivatives up to second order.

The trigonometric interpolant over an even number of nodes N uses the basis

    1, cos(l), sin(l), cos(2l), sin(2l), ..., cos((N/2-1)l), sin((N/2-1)l),
    cos((N/2)l)

in that coefficient order.  For equally spaced nodes the coefficients come
from the FFT in O(N log N); a dense solve is the reference path for general
nodes and the two must agree to 1e-12.

The spherical harmonic interpolant of degree M uses (M+1)^2 real harmonics,
ordered per degree l as [m=0 cosine, m=1 sine, m=1 cosine, m=2 sine, ...]:

    Y_l^{2m}   = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) cos(m lam) P_l^m(sin th)
    Y_l^{2m-1} = sqrt((2l+1)/(4pi) (l-m)!/(l+m)!) sin(m lam) P_l^m(sin th)

Associated Legendre values come from the stable three-term recurrence in l
applied to the bare derivative polynomials d^mu P_l / dx^mu; writing
P_l^m(sin th) = cos(th)^m * (d^m P_l)(sin th) makes every theta-derivative a
polynomial in sin(th), cos(th) with nonnegative powers, so there is no
division by cos(th) at the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_solve

from .conditioning import COND_LIMIT, ConditioningError, lu_factor_with_cond
from .points import NodeSet2D, NodeSet3D

PARTIAL_VAL = "val"
PARTIAL_DLAM = "dlam"
PARTIAL_DTHETA = "dtheta"
PARTIAL_DLAMLAM = "dlamlam"
PARTIAL_DLAMTHETA = "dlamtheta"
PARTIAL_DTHETATHETA = "dthetatheta"
PARTIALS = (
    PARTIAL_VAL,
    PARTIAL_DLAM,
    PARTIAL_DTHETA,
    PARTIAL_DLAMLAM,
    PARTIAL_DLAMTHETA,
    PARTIAL_DTHETATHETA,
)

_EQUISPACED_TOL = 1e-12


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense map from interpolation coefficients to derivative values at
    fixed evaluation points; tagged with the partial and basis it encodes."""

    matrix: np.ndarray
    partial: str
    basis: str

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, coeffs):
        return self.matrix @ coeffs


@dataclass(frozen=True)
class TrigInterpolant:
    nodes: NodeSet2D
    coeffs_x: np.ndarray
    coeffs_y: np.ndarray
    cond_estimate: float = float("nan")

    @property
    def n(self) -> int:
        return self.nodes.n


@dataclass(frozen=True)
class SphInterpolant:
    degree: int
    nodes: NodeSet3D
    coeffs_x: np.ndarray
    coeffs_y: np.ndarray
    coeffs_z: np.ndarray
    cond_estimate: float = float("nan")


def trig_basis_matrix(lam, n: int, order: int = 0) -> np.ndarray:
    """(m, n) matrix of the trig basis (or its order-th derivative) at lam."""
    if n < 4 or n % 2:
        raise ValueError(f"basis size must be even and >= 4, got {n}")
    if order not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1, or 2, got {order}")
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    out = np.empty((lam.size, n))
    out[:, 0] = 1.0 if order == 0 else 0.0
    for k in range(1, n // 2 + 1):
        ckl, skl = np.cos(k * lam), np.sin(k * lam)
        if order == 0:
            cos_col, sin_col = ckl, skl
        elif order == 1:
            cos_col, sin_col = -k * skl, k * ckl
        else:
            cos_col, sin_col = -(k * k) * ckl, -(k * k) * skl
        out[:, 2 * k - 1] = cos_col
        if k < n // 2:
            out[:, 2 * k] = sin_col
    return out


def _is_equispaced(nodes: NodeSet2D) -> bool:
    n = nodes.n
    expected = -np.pi + 2.0 * np.pi * np.arange(1, n + 1) / n
    return bool(np.max(np.abs(nodes.angles - expected)) <= _EQUISPACED_TOL)


def _coeffs_via_fft(angles: np.ndarray, data: np.ndarray) -> np.ndarray:
    """Interpolation coefficients on the equispaced grid lam_k = -pi + 2 pi k/n."""
    n = angles.size
    # undo the grid offset: nodes start at -pi + 2 pi / n, not at 0
    phase = np.exp(1j * np.arange(n // 2 + 1) * (np.pi - 2.0 * np.pi / n))
    spectrum = np.fft.rfft(data) * phase / n
    coeffs = np.empty(n)
    coeffs[0] = spectrum[0].real
    for k in range(1, n // 2):
        coeffs[2 * k - 1] = 2.0 * spectrum[k].real
        coeffs[2 * k] = -2.0 * spectrum[k].imag
    coeffs[n - 1] = spectrum[n // 2].real
    return coeffs


def trig_fit(nodes: NodeSet2D, data_x, data_y) -> TrigInterpolant:
    """Trigonometric interpolant of (x, y) samples at the given nodes."""
    n = nodes.n
    if n % 2:
        raise ValueError(f"trig interpolation needs an even node count, got {n}")
    data_x = np.asarray(data_x, dtype=float)
    data_y = np.asarray(data_y, dtype=float)
    if data_x.shape != (n,) or data_y.shape != (n,):
        raise ValueError("data length must match node count")

    if _is_equispaced(nodes):
        cx = _coeffs_via_fft(nodes.angles, data_x)
        cy = _coeffs_via_fft(nodes.angles, data_y)
        cond = float("nan")
    else:
        a = trig_basis_matrix(nodes.angles, n, 0)
        factor, cond = lu_factor_with_cond(a)
        if cond > COND_LIMIT:
            raise ConditioningError(
                f"trig system condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}",
                estimate=cond,
            )
        cx = lu_solve(factor, data_x)
        cy = lu_solve(factor, data_y)
    p = TrigInterpolant(nodes, cx, cy, cond_estimate=cond)

    resid = np.max(np.linalg.norm(
        trig_eval(p, nodes.angles, 0) - np.stack([data_x, data_y], axis=1), axis=1))
    scale = 1.0 + max(np.max(np.abs(data_x)), np.max(np.abs(data_y)))
    if resid > 1e-10 * scale:
        raise ConditioningError(
            f"trig interpolation residual {resid:.3e} out of contract", estimate=cond
        )
    return p


def trig_eval(p: TrigInterpolant, where, order: int = 0) -> np.ndarray:
    """Evaluate the interpolant (or derivative) at angles; returns (m, 2)."""
    lam = where.angles if isinstance(where, NodeSet2D) else where
    basis = trig_basis_matrix(lam, p.n, order)
    return np.stack([basis @ p.coeffs_x, basis @ p.coeffs_y], axis=1)


def trig_operator(n: int, eval_lam, order: int = 0) -> OperatorMatrix:
    """Precomputed coefficient-to-value map for repeated evaluation."""
    return OperatorMatrix(trig_basis_matrix(eval_lam, n, order), f"d{order}", "trig")


# -- spherical harmonics ------------------------------------------------------


def _double_factorial_odd(m: int) -> float:
    return float(math.prod(range(1, 2 * m, 2))) if m > 0 else 1.0


def _legendre_derivative_table(s: np.ndarray, degree: int, extra: int = 2) -> np.ndarray:
    """table[mu, l, :] = d^mu P_l / dx^mu at x = s, for mu <= degree+extra."""
    npts = s.size
    table = np.zeros((degree + extra + 1, degree + 1, npts))
    for mu in range(degree + 1):
        table[mu, mu] = _double_factorial_odd(mu)
        for ell in range(mu + 1, degree + 1):
            prev2 = table[mu, ell - 2] if ell - 2 >= 0 else 0.0
            table[mu, ell] = (
                (2.0 * ell - 1.0) * s * table[mu, ell - 1]
                - (ell - 1.0 + mu) * prev2
            ) / (ell - mu)
    return table


def _sph_norm(ell: int, m: int) -> float:
    ratio = 1.0 / float(math.prod(range(ell - m + 1, ell + m + 1)))
    return math.sqrt((2.0 * ell + 1.0) / (4.0 * np.pi) * ratio)


def sph_basis_matrix(lam, theta, degree: int, partial: str = PARTIAL_VAL) -> np.ndarray:
    """(m, (degree+1)^2) matrix of real spherical harmonics or a partial.

    Columns are ordered per degree l as [m=0 cos, m=1 sin, m=1 cos,
    m=2 sin, m=2 cos, ...].  Pole values are exact limits: every entry is a
    polynomial in sin(theta), cos(theta).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if partial not in PARTIALS:
        raise ValueError(f"unknown partial {partial!r}; expected one of {PARTIALS}")
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if lam.shape != theta.shape:
        raise ValueError("lam and theta must have matching shapes")
    s, c = np.sin(theta), np.cos(theta)
    table = _legendre_derivative_table(s, degree)

    out = np.empty((lam.size, (degree + 1) ** 2))
    col = 0
    for ell in range(degree + 1):
        for j in range(2 * ell + 1):
            m = (j + 1) // 2
            p0 = table[m, ell]
            if partial in (PARTIAL_VAL, PARTIAL_DLAM, PARTIAL_DLAMLAM):
                theta_part = c**m * p0
            elif partial in (PARTIAL_DTHETA, PARTIAL_DLAMTHETA):
                theta_part = c ** (m + 1) * table[m + 1, ell]
                if m >= 1:
                    theta_part = theta_part - m * c ** (m - 1) * s * p0
            else:  # second theta derivative
                theta_part = (
                    c ** (m + 2) * table[m + 2, ell]
                    - (2.0 * m + 1.0) * s * c**m * table[m + 1, ell]
                    - m * c**m * p0
                )
                if m >= 2:
                    theta_part = theta_part + m * (m - 1.0) * c ** (m - 2) * s * s * p0
            is_cos = j == 0 or j % 2 == 0
            if partial in (PARTIAL_VAL, PARTIAL_DTHETA, PARTIAL_DTHETATHETA):
                lam_part = np.cos(m * lam) if is_cos else np.sin(m * lam)
            elif partial in (PARTIAL_DLAM, PARTIAL_DLAMTHETA):
                lam_part = -m * np.sin(m * lam) if is_cos else m * np.cos(m * lam)
            else:  # second lambda derivative
                lam_part = -(m * m) * (np.cos(m * lam) if is_cos else np.sin(m * lam))
            out[:, col] = _sph_norm(ell, m) * lam_part * theta_part
            col += 1
    return out


def sph_basis_row(lam: float, theta: float, degree: int, partial: str = PARTIAL_VAL):
    """Single row of the spherical harmonic basis (or a partial) at one site."""
    return sph_basis_matrix([lam], [theta], degree, partial)[0]


_SPH_FACTOR_CACHE: dict = {}


def sph_fit(nodes: NodeSet3D, data_x, data_y, data_z, degree: int) -> SphInterpolant:
    """Spherical harmonic interpolant of degree M; node count must be (M+1)^2.

    One LU factorization is reused for all three coordinates and cached per
    node set so repeated fits (time steps) only pay the triangular solves.
    The 1-norm condition estimate is attached to the interpolant; estimates
    above 1e12 raise, which on random or low-quality node sets is the cue to
    switch to maximal-determinant nodes.
    """
    n = (degree + 1) ** 2
    if nodes.n != n:
        raise ValueError(f"degree {degree} needs {n} nodes, got {nodes.n}")
    data = [np.asarray(d, dtype=float) for d in (data_x, data_y, data_z)]
    if any(d.shape != (n,) for d in data):
        raise ValueError("data length must match node count")

    key = (degree, nodes.lam.tobytes(), nodes.theta.tobytes())
    cached = _SPH_FACTOR_CACHE.get(key)
    if cached is None:
        a = sph_basis_matrix(nodes.lam, nodes.theta, degree, PARTIAL_VAL)
        factor, cond = lu_factor_with_cond(a)
        if cond > COND_LIMIT:
            raise ConditioningError(
                f"spherical harmonic system condition estimate {cond:.3e} exceeds "
                f"{COND_LIMIT:.0e}; use maximal-determinant nodes",
                estimate=cond,
            )
        _SPH_FACTOR_CACHE[key] = (factor, cond)
    else:
        factor, cond = cached

    cx, cy, cz = (lu_solve(factor, d) for d in data)
    p = SphInterpolant(degree, nodes, cx, cy, cz, cond_estimate=cond)

    resid = np.max(np.linalg.norm(
        sph_eval(p, nodes) - np.stack(data, axis=1), axis=1))
    scale = 1.0 + max(np.max(np.abs(d)) for d in data)
    if resid > 1e-8 * cond * scale:
        raise ConditioningError(
            f"spherical harmonic residual {resid:.3e} out of contract", estimate=cond
        )
    return p


def sph_eval(p: SphInterpolant, where, partial: str = PARTIAL_VAL) -> np.ndarray:
    """Evaluate the interpolant (or an analytic partial); returns (m, 3)."""
    if isinstance(where, NodeSet3D):
        lam, theta = where.lam, where.theta
    else:
        lam, theta = where
    basis = sph_basis_matrix(lam, theta, p.degree, partial)
    return np.stack([basis @ p.coeffs_x, basis @ p.coeffs_y, basis @ p.coeffs_z], axis=1)


def sph_operator(degree: int, eval_nodes: NodeSet3D, partial: str) -> OperatorMatrix:
    """Precomputed coefficient-to-value map for repeated evaluation."""
    return OperatorMatrix(
        sph_basis_matrix(eval_nodes.lam, eval_nodes.theta, degree, partial),
        partial,
        "spherical-harmonic",
    )
