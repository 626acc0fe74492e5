"""Normals and elastic forces from differential jets.

2D: unit tangent tau_hat = d1/||d1||, unit normal eta_hat = (-tau_hat_y,
tau_hat_x), fiber force F = K0 * d2 (linear-tension fiber model).

3D: unit normal from the cross product of the parametric tangents, mean
curvature H = (eG - 2fF + gE) / (2(EG - F^2)) from the fundamental forms,
surface-tension force F = gamma * 2H * eta_hat.

Normal orientation is whatever the defining formulas produce (outward for
the spherical parameterization used by the test objects); error metrics
compare models against the same formulas applied to reference jets, so the
orientation is consistent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .shapes import Jet2D, Jet3D

DEGENERATE_TOL = 1e-12
FORM_DEGENERATE_TOL = 1e-14


class DegenerateJetError(ValueError):
    """Tangent data too small to define a frame."""


@dataclass(frozen=True)
class Frame2D:
    tangent_unit: np.ndarray
    normal_unit: np.ndarray


@dataclass(frozen=True)
class Frame3D:
    tangent_lambda_unit: np.ndarray
    tangent_theta_unit: np.ndarray
    normal_unit: np.ndarray


@dataclass(frozen=True)
class FundamentalForms:
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float


@dataclass(frozen=True)
class MaterialParams:
    """Hookean spring/fiber constant and surface-tension coefficient."""

    k0: float = 0.2
    gamma: float = 0.2

    def __post_init__(self):
        if self.k0 < 0 or self.gamma < 0:
            raise ValueError("material parameters must be nonnegative")


# -- batched kernels (used by the experiment harness) ------------------------


def unit_normals_2d(d1: np.ndarray) -> np.ndarray:
    """(m, 2) first derivatives -> (m, 2) unit normals (-t_y, t_x)."""
    d1 = np.atleast_2d(np.asarray(d1, dtype=float))
    norms = np.linalg.norm(d1, axis=1)
    bad = np.nonzero(norms <= DEGENERATE_TOL)[0]
    if bad.size:
        raise DegenerateJetError(f"zero tangent at site {bad[0]}")
    t = d1 / norms[:, None]
    return np.stack([-t[:, 1], t[:, 0]], axis=1)


def fiber_forces_2d(d2: np.ndarray, k0: float) -> np.ndarray:
    """(m, 2) second derivatives -> fiber force densities K0 * d2."""
    return k0 * np.atleast_2d(np.asarray(d2, dtype=float))


def unit_frames_3d(dlam: np.ndarray, dtheta: np.ndarray):
    """Unit tangents and the cross-product unit normal at each site."""
    dlam = np.atleast_2d(np.asarray(dlam, dtype=float))
    dtheta = np.atleast_2d(np.asarray(dtheta, dtype=float))
    cross = np.cross(dlam, dtheta)
    cnorm = np.linalg.norm(cross, axis=1)
    bad = np.nonzero(cnorm <= DEGENERATE_TOL)[0]
    if bad.size:
        raise DegenerateJetError(f"degenerate tangent cross product at site {bad[0]}")
    tl = dlam / np.linalg.norm(dlam, axis=1)[:, None]
    tt = dtheta / np.linalg.norm(dtheta, axis=1)[:, None]
    return tl, tt, cross / cnorm[:, None]


def mean_curvatures(dlam, dtheta, dlamlam, dlamtheta, dthetatheta, normal_unit):
    """Mean curvature at each site from first/second fundamental forms."""
    E = np.sum(dlam * dlam, axis=1)
    F = np.sum(dlam * dtheta, axis=1)
    G = np.sum(dtheta * dtheta, axis=1)
    e = np.sum(dlamlam * normal_unit, axis=1)
    f = np.sum(dlamtheta * normal_unit, axis=1)
    g = np.sum(dthetatheta * normal_unit, axis=1)
    denom = E * G - F * F
    bad = np.nonzero(denom <= FORM_DEGENERATE_TOL)[0]
    if bad.size:
        raise DegenerateJetError(f"degenerate first fundamental form at site {bad[0]}")
    return (e * G - 2.0 * f * F + g * E) / (2.0 * denom)


def surface_tension_forces(dlam, dtheta, dlamlam, dlamtheta, dthetatheta, gamma):
    """(m, 3) surface-tension force densities gamma * 2H * eta_hat."""
    dlam = np.atleast_2d(np.asarray(dlam, dtype=float))
    dtheta = np.atleast_2d(np.asarray(dtheta, dtype=float))
    dlamlam = np.atleast_2d(np.asarray(dlamlam, dtype=float))
    dlamtheta = np.atleast_2d(np.asarray(dlamtheta, dtype=float))
    dthetatheta = np.atleast_2d(np.asarray(dthetatheta, dtype=float))
    _, _, n_hat = unit_frames_3d(dlam, dtheta)
    h = mean_curvatures(dlam, dtheta, dlamlam, dlamtheta, dthetatheta, n_hat)
    return gamma * 2.0 * h[:, None] * n_hat


# -- single-jet operations ----------------------------------------------------


def frame_2d(jet: Jet2D) -> Frame2D:
    norm = float(np.linalg.norm(jet.d1))
    if norm <= DEGENERATE_TOL:
        raise DegenerateJetError("zero tangent")
    t = jet.d1 / norm
    return Frame2D(tangent_unit=t, normal_unit=np.array([-t[1], t[0]]))


def fiber_force_2d(jet: Jet2D, params: MaterialParams) -> np.ndarray:
    return params.k0 * jet.d2


def frame_3d(jet: Jet3D) -> Frame3D:
    tl, tt, n_hat = unit_frames_3d(jet.dlam[None, :], jet.dtheta[None, :])
    return Frame3D(tl[0], tt[0], n_hat[0])


def fundamental_forms(jet: Jet3D, frame: Frame3D) -> FundamentalForms:
    n_hat = frame.normal_unit
    return FundamentalForms(
        E=float(jet.dlam @ jet.dlam),
        F=float(jet.dlam @ jet.dtheta),
        G=float(jet.dtheta @ jet.dtheta),
        e=float(jet.dlamlam @ n_hat),
        f=float(jet.dlamtheta @ n_hat),
        g=float(jet.dthetatheta @ n_hat),
    )


def mean_curvature(forms: FundamentalForms) -> float:
    denom = forms.E * forms.G - forms.F**2
    if denom <= FORM_DEGENERATE_TOL:
        raise DegenerateJetError("degenerate first fundamental form")
    return (forms.e * forms.G - 2.0 * forms.f * forms.F + forms.g * forms.E) / (
        2.0 * denom
    )


def surface_tension_force(jet: Jet3D, params: MaterialParams) -> np.ndarray:
    return surface_tension_forces(
        jet.dlam[None, :],
        jet.dtheta[None, :],
        jet.dlamlam[None, :],
        jet.dlamtheta[None, :],
        jet.dthetatheta[None, :],
        params.gamma,
    )[0]
