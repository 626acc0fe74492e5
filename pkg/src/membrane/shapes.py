"""Analytic test objects: perturbed ellipses/circles and ellipsoids/spheres.

Each object is an idealized shape scaled by a bump factor.  In 2D the bump
sits at lambda = 0 (smooth profile) or rides on |sin(lambda)|^3 (rough
profile, only two continuous derivatives); in 3D the bump is centered at the
angle pair (lambda_c, theta_c), with exponent 2 on the spherical offset for
the smooth profile and 2.5 for the rough one (three continuous derivatives).

Reference derivatives ("jets") are produced by Richardson-extrapolated
central differences of the exact evaluators, each with an attached accuracy
estimate; the test suite cross-validates them once against symbolic
differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import richardson

PROFILE_SMOOTH = "smooth"
PROFILE_ROUGH = "rough"


@dataclass(frozen=True)
class IdealShape2D:
    """Ellipse center (x_c, y_c) with radii a, b."""

    x_c: float
    y_c: float
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("radii must be positive")


@dataclass(frozen=True)
class IdealShape3D:
    """Ellipsoid center (x_c, y_c, z_c), equatorial radii a, b, polar radius c."""

    x_c: float
    y_c: float
    z_c: float
    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0 or self.c <= 0:
            raise ValueError("radii must be positive")


def _check_profile(profile):
    if profile not in (PROFILE_SMOOTH, PROFILE_ROUGH):
        raise ValueError(f"unknown profile {profile!r}")


@dataclass(frozen=True)
class TestObject2D:
    ideal: IdealShape2D
    amplitude: float
    sigma: float
    profile: str

    def __post_init__(self):
        _check_profile(self.profile)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class TestObject3D:
    ideal: IdealShape3D
    amplitude: float
    sigma: float
    profile: str
    lambda_c: float = 0.0
    theta_c: float = np.pi / 2

    def __post_init__(self):
        _check_profile(self.profile)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class Jet2D:
    """Position with first and second lambda-derivatives at one site."""

    x: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    def __post_init__(self):
        for name in ("x", "d1", "d2"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (2,) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be a finite 2-vector")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class Jet3D:
    """Position, both first partials, and the three second partials."""

    x: np.ndarray
    dlam: np.ndarray
    dtheta: np.ndarray
    dlamlam: np.ndarray
    dlamtheta: np.ndarray
    dthetatheta: np.ndarray

    def __post_init__(self):
        for name in ("x", "dlam", "dtheta", "dlamlam", "dlamtheta", "dthetatheta"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be a finite 3-vector")
            object.__setattr__(self, name, v)


# parameters from the 2D and 3D comparison studies
PRESETS = {
    "object1-2d": TestObject2D(
        IdealShape2D(0.9, 0.9, 0.04, 0.05), amplitude=0.09, sigma=0.1,
        profile=PROFILE_SMOOTH,
    ),
    "object2-2d": TestObject2D(
        IdealShape2D(0.2, 0.2, 0.1, 0.1), amplitude=0.04, sigma=0.9,
        profile=PROFILE_ROUGH,
    ),
    "object1-3d": TestObject3D(
        IdealShape3D(0.9, 0.9, 0.9, 0.1, 0.2, 0.09), amplitude=0.09, sigma=0.2,
        profile=PROFILE_SMOOTH,
    ),
    "object2-3d": TestObject3D(
        IdealShape3D(0.1, 0.1, 0.2, 0.1, 0.1, 0.1), amplitude=0.04, sigma=16.0 / 25.0,
        profile=PROFILE_ROUGH,
    ),
}


def preset(name: str):
    """Look up a named test object (case-insensitive)."""
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown object preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def _bump_2d(obj: TestObject2D, lam):
    if obj.profile == PROFILE_SMOOTH:
        return np.exp(-((1.0 - np.cos(lam)) ** 2) / obj.sigma)
    # (1 - cos^2)^1.5 == |sin|^3; the kink at sin(lam) = 0 limits smoothness
    return np.exp(-(np.abs(np.sin(lam)) ** 3) / obj.sigma)


def eval_object_2d(obj: TestObject2D, lam):
    """Exact object position(s); lam may be a scalar or an array.

    Returns shape (..., 2).  The parameterization is 2*pi-periodic in lam.
    """
    lam = np.asarray(lam, dtype=float)
    factor = 1.0 + obj.amplitude * _bump_2d(obj, lam)
    x = factor * (obj.ideal.x_c + obj.ideal.a * np.cos(lam))
    y = factor * (obj.ideal.y_c + obj.ideal.b * np.sin(lam))
    return np.stack([x, y], axis=-1)


def _bump_3d(obj: TestObject3D, lam, theta):
    r_c = (
        1.0
        - np.cos(theta) * np.cos(obj.theta_c) * np.cos(lam - obj.lambda_c)
        - np.sin(theta) * np.sin(obj.theta_c)
    )
    r_c = np.maximum(r_c, 0.0)  # roundoff can dip below 0 at the bump center
    power = 2.0 if obj.profile == PROFILE_SMOOTH else 2.5
    return np.exp(-(r_c**power) / obj.sigma)


def eval_object_3d(obj: TestObject3D, lam, theta):
    """Exact object position(s); lam, theta may be scalars or arrays.

    Returns shape (..., 3).  As a formula this is smooth across the poles,
    which the finite-difference reference jets rely on.
    """
    lam = np.asarray(lam, dtype=float)
    theta = np.asarray(theta, dtype=float)
    factor = 1.0 + obj.amplitude * _bump_3d(obj, lam, theta)
    ct = np.cos(theta)
    x = factor * (obj.ideal.x_c + obj.ideal.a * np.cos(lam) * ct)
    y = factor * (obj.ideal.y_c + obj.ideal.b * np.sin(lam) * ct)
    z = factor * (obj.ideal.z_c + obj.ideal.c * np.sin(theta))
    return np.stack([x, y, z], axis=-1)


def reference_jets_2d(obj: TestObject2D, lam):
    """Reference position and derivatives at many sites.

    Returns (x, d1, d2, accuracy) with shapes (m, 2) x3 and (m,); accuracy is
    a per-site absolute error estimate for the finite-difference derivatives.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    f = lambda t: eval_object_2d(obj, t)
    d1, e1 = richardson.derivative_1(f, lam)
    d2, e2 = richardson.derivative_2(f, lam)
    accuracy = np.maximum(e1.max(axis=-1), e2.max(axis=-1))
    return eval_object_2d(obj, lam), d1, d2, accuracy


def reference_jet_2d(obj: TestObject2D, lam: float):
    """Jet at a single site, with its accuracy estimate."""
    x, d1, d2, acc = reference_jets_2d(obj, [lam])
    return Jet2D(x[0], d1[0], d2[0]), float(acc[0])


def reference_jets_3d(obj: TestObject3D, lam, theta):
    """Reference position and all five partials at many sites.

    Returns (x, dlam, dtheta, dlamlam, dlamtheta, dthetatheta, accuracy).
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    f_lam = lambda t: eval_object_3d(obj, t, theta)
    f_theta = lambda t: eval_object_3d(obj, lam, t)
    dl, el = richardson.derivative_1(f_lam, lam)
    dt, et = richardson.derivative_1(f_theta, theta)
    dll, ell = richardson.derivative_2(f_lam, lam)
    dtt, ett = richardson.derivative_2(f_theta, theta)
    dlt, elt = richardson.mixed_partial(
        lambda a, b: eval_object_3d(obj, a, b), lam, theta
    )
    accuracy = np.max(
        np.stack([e.max(axis=-1) for e in (el, et, ell, ett, elt)]), axis=0
    )
    return eval_object_3d(obj, lam, theta), dl, dt, dll, dlt, dtt, accuracy


def reference_jet_3d(obj: TestObject3D, lam: float, theta: float):
    """Jet at a single site, with its accuracy estimate."""
    x, dl, dt, dll, dlt, dtt, acc = reference_jets_3d(obj, [lam], [theta])
    return Jet3D(x[0], dl[0], dt[0], dll[0], dlt[0], dtt[0]), float(acc[0])
