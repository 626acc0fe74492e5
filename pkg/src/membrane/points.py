"""Node and evaluation point sets on the unit circle and unit sphere.

Parametric models interpolate object data at N nodes ("data sites") and are
evaluated at M >> N sample sites.  2D nodes are equally spaced angles on
(-pi, pi].  3D nodes must be quasi-uniform on the sphere: minimal-energy (ME)
sets are generated here by descending the Riesz s=1 (Coulomb) energy,
Fibonacci spirals serve as a cheap fallback, and maximal-determinant (MD)
sets can only be loaded from files.

Point-set text format: one point per line, whitespace separated, ``#``
comments allowed.  Angles format stores ``lambda theta`` in radians and
round-trips bit-exactly; unit-vectors format stores ``x y z`` and
round-trips to within a few ulps of angle conversion.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KIND_MINIMAL_ENERGY = "minimal-energy"
KIND_MAXIMAL_DETERMINANT = "maximal-determinant"
KIND_FIBONACCI = "fibonacci"
KIND_LOADED = "loaded"

FORMAT_ANGLES = "angles"
FORMAT_UNIT_VECTORS = "vectors"

# above this size the O(n^2) distinctness scan at construction is skipped
# (exact duplicate pairs are still rejected)
_PAIRWISE_CHECK_LIMIT = 4096


class PointSetParseError(ValueError):
    """A point-set file line could not be parsed or validated."""


class EnergyConvergenceWarning(UserWarning):
    """Minimal-energy descent stopped at max_iters; carries the gradient norm."""


def _as_readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class NodeSet2D:
    """Angles on (-pi, pi], strictly increasing, no duplicates."""

    angles: np.ndarray

    def __post_init__(self):
        ang = _as_readonly(self.angles)
        if ang.ndim != 1 or ang.size == 0:
            raise ValueError("angles must be a non-empty 1-D array")
        if not np.all(np.isfinite(ang)):
            raise ValueError("angles must be finite")
        if ang[0] <= -np.pi or ang[-1] > np.pi:
            raise ValueError("angles must lie in (-pi, pi]")
        if not np.all(np.diff(ang) > 0):
            raise ValueError("angles must be strictly increasing")
        object.__setattr__(self, "angles", ang)

    @property
    def n(self) -> int:
        return self.angles.size

    def __eq__(self, other):
        return isinstance(other, NodeSet2D) and np.array_equal(self.angles, other.angles)


@dataclass(frozen=True, eq=False)
class NodeSet3D:
    """Spherical angle pairs (lambda, theta) with a provenance tag.

    lambda in (-pi, pi], theta in [-pi/2, pi/2]; the corresponding unit
    vectors (cos lam cos th, sin lam cos th, sin th) must be pairwise
    distinct.
    """

    lam: np.ndarray
    theta: np.ndarray
    kind: str = KIND_LOADED

    def __post_init__(self):
        lam = _as_readonly(self.lam)
        theta = _as_readonly(self.theta)
        if lam.ndim != 1 or lam.shape != theta.shape or lam.size == 0:
            raise ValueError("lam and theta must be matching non-empty 1-D arrays")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(theta))):
            raise ValueError("angles must be finite")
        if np.any(lam <= -np.pi) or np.any(lam > np.pi):
            raise ValueError("lambda must lie in (-pi, pi]")
        if np.any(np.abs(theta) > np.pi / 2):
            raise ValueError("theta must lie in [-pi/2, pi/2]")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta)
        pairs = np.stack([lam, theta], axis=1)
        if np.unique(pairs, axis=0).shape[0] != lam.size:
            raise ValueError("duplicate (lambda, theta) pairs")
        if 2 <= lam.size <= _PAIRWISE_CHECK_LIMIT:
            if min_chordal_distance(self) <= 0.0:
                raise ValueError("coincident points on the sphere")

    @property
    def n(self) -> int:
        return self.lam.size

    def unit_vectors(self) -> np.ndarray:
        """(n, 3) array of unit vectors for the angle pairs."""
        ct = np.cos(self.theta)
        return np.stack(
            [np.cos(self.lam) * ct, np.sin(self.lam) * ct, np.sin(self.theta)], axis=1
        )

    def __eq__(self, other):
        return (
            isinstance(other, NodeSet3D)
            and self.kind == other.kind
            and np.array_equal(self.lam, other.lam)
            and np.array_equal(self.theta, other.theta)
        )

    def isclose(self, other, tol: float = 1e-12) -> bool:
        """Same points up to ``tol`` in chordal distance (kind must match)."""
        if not isinstance(other, NodeSet3D) or self.kind != other.kind or self.n != other.n:
            return False
        d = np.linalg.norm(self.unit_vectors() - other.unit_vectors(), axis=1)
        return bool(np.max(d) <= tol)


@dataclass(frozen=True)
class PointSetFile:
    """A point-set file on disk together with its declared format."""

    path: Path
    format: str = FORMAT_ANGLES

    def __post_init__(self):
        if self.format not in (FORMAT_ANGLES, FORMAT_UNIT_VECTORS):
            raise ValueError(f"unknown point-set format {self.format!r}")
        object.__setattr__(self, "path", Path(self.path))


def equispaced_circle(n: int) -> NodeSet2D:
    """n equally spaced angles lambda_k = -pi + 2*pi*k/n, k = 1..n.

    n must be even and at least 4 (trig interpolation is restricted to even
    node counts).
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"need an even node count >= 4, got {n}")
    h = 2.0 * np.pi / n
    angles = (np.arange(1, n + 1) - n // 2) * h
    angles[-1] = np.pi  # (n/2)*h rounds to pi's neighbour for some n
    return NodeSet2D(angles)


def _angles_from_unit_vectors(uv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lam = np.arctan2(uv[:, 1], uv[:, 0])
    lam[lam <= -np.pi] = np.pi  # atan2 maps (-1, -0.0) to -pi; fold onto (-pi, pi]
    theta = np.arcsin(np.clip(uv[:, 2], -1.0, 1.0))
    return lam, theta


def riesz_energy(uv: np.ndarray) -> float:
    """Riesz s=1 energy sum_{i<j} 1/||p_i - p_j|| of unit vectors (n, 3)."""
    d = np.linalg.norm(uv[:, None, :] - uv[None, :, :], axis=2)
    np.fill_diagonal(d, np.inf)
    return 0.5 * float(np.sum(1.0 / d))


def _energy_and_gradient(uv: np.ndarray) -> tuple[float, np.ndarray]:
    diff = uv[:, None, :] - uv[None, :, :]
    d = np.linalg.norm(diff, axis=2)
    np.fill_diagonal(d, np.inf)
    energy = 0.5 * float(np.sum(1.0 / d))
    grad = -np.sum(diff / d[:, :, None] ** 3, axis=1)
    return energy, grad


def minimal_energy_sphere(
    n: int,
    seed: int = 0,
    max_iters: int = 1000,
    tol: float = 1e-9,
) -> NodeSet3D:
    """n sphere points at a local minimum of the Riesz s=1 energy.

    Projected gradient descent with Armijo backtracking from a seeded random
    start; deterministic for fixed (n, seed, max_iters, tol).  tol bounds the
    root-mean-square per-point norm of the tangential gradient.  If descent
    has not converged after max_iters an EnergyConvergenceWarning is issued
    and the current configuration is returned anyway.
    """
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    rng = np.random.default_rng(seed)
    uv = rng.normal(size=(n, 3))
    uv /= np.linalg.norm(uv, axis=1, keepdims=True)

    energy, grad = _energy_and_gradient(uv)
    step = 1.0 / n  # crude scale; the line search adapts from here
    gnorm = np.inf
    for _ in range(max_iters):
        tangential = grad - np.sum(grad * uv, axis=1, keepdims=True) * uv
        gnorm = float(np.linalg.norm(tangential)) / n
        if gnorm <= tol:
            break
        descent = float(np.sum(tangential**2))
        step = min(step * 2.0, 1.0)
        while True:
            trial = uv - step * tangential
            trial /= np.linalg.norm(trial, axis=1, keepdims=True)
            e_trial, g_trial = _energy_and_gradient(trial)
            if e_trial <= energy - 1e-4 * step * descent or step < 1e-18:
                break
            step *= 0.5
        uv, energy, grad = trial, e_trial, g_trial
    else:
        warnings.warn(
            f"minimal-energy descent stopped after {max_iters} iterations "
            f"with gradient norm {gnorm:.3e} > tol {tol:.3e}",
            EnergyConvergenceWarning,
        )

    lam, theta = _angles_from_unit_vectors(uv)
    return NodeSet3D(lam, theta, kind=KIND_MINIMAL_ENERGY)


def fibonacci_sphere(n: int) -> NodeSet3D:
    """Generalized spiral (golden angle) points, quasi-uniform for any n >= 1."""
    if n < 1:
        raise ValueError(f"need at least 1 point, got {n}")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
    r = np.sqrt(np.maximum(1.0 - z**2, 0.0))
    lam, _ = _angles_from_unit_vectors(
        np.stack([np.cos(phi) * r, np.sin(phi) * r, z], axis=1)
    )
    theta = np.arcsin(np.clip(z, -1.0, 1.0))
    return NodeSet3D(lam, theta, kind=KIND_FIBONACCI)


def min_chordal_distance(nodes: NodeSet3D) -> float:
    """Minimum pairwise Euclidean distance between the unit vectors."""
    if nodes.n < 2:
        raise ValueError("need at least 2 points")
    uv = nodes.unit_vectors()
    best = np.inf
    chunk = 1024
    for start in range(0, nodes.n, chunk):
        block = uv[start : start + chunk]
        d = np.linalg.norm(block[:, None, :] - uv[None, :, :], axis=2)
        rows = np.arange(block.shape[0])
        d[rows, start + rows] = np.inf
        best = min(best, float(d.min()))
    return best


def _format_floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def save_point_set(nodes: NodeSet3D, path, fmt: str = FORMAT_ANGLES) -> Path:
    """Write a point set as text; angles format round-trips bit-exactly."""
    path = Path(path)
    lines = [f"# membrane point set: kind={nodes.kind} format={fmt} n={nodes.n}"]
    if fmt == FORMAT_ANGLES:
        for lam, th in zip(nodes.lam, nodes.theta):
            lines.append(_format_floats([lam, th]))
    elif fmt == FORMAT_UNIT_VECTORS:
        for row in nodes.unit_vectors():
            lines.append(_format_floats(row))
    else:
        raise ValueError(f"unknown point-set format {fmt!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_point_set(file: PointSetFile, kind: str | None = None) -> NodeSet3D:
    """Parse a point-set file into a NodeSet3D.

    Unit vectors must have norm within 1e-6 of 1 and are normalized to
    within 1e-12 before angle conversion.  The kind defaults to "loaded";
    pass kind="maximal-determinant" for downloaded MD sets.
    """
    n_fields = 2 if file.format == FORMAT_ANGLES else 3
    rows = []
    for lineno, raw in enumerate(Path(file.path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != n_fields:
            raise PointSetParseError(
                f"{file.path}:{lineno}: expected {n_fields} fields, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise PointSetParseError(f"{file.path}:{lineno}: {exc}") from None
    if not rows:
        raise PointSetParseError(f"{file.path}: no points found")
    data = np.array(rows)

    if file.format == FORMAT_ANGLES:
        lam, theta = data[:, 0], data[:, 1]
    else:
        norms = np.linalg.norm(data, axis=1)
        bad = np.nonzero(np.abs(norms - 1.0) > 1e-6)[0]
        if bad.size:
            raise PointSetParseError(
                f"{file.path}: non-unit vector (norm {norms[bad[0]]:.6g}) "
                f"at point {bad[0] + 1}"
            )
        lam, theta = _angles_from_unit_vectors(data / norms[:, None])
    return NodeSet3D(lam, theta, kind=kind or KIND_LOADED)


def cache_dir() -> Path:
    """Directory for generated point sets; MEMBRANE_CACHE_DIR overrides."""
    env = os.environ.get("MEMBRANE_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "membrane"


def cached_minimal_energy(
    n: int, seed: int = 0, directory=None, max_iters: int = 1000, tol: float = 1e-9
) -> NodeSet3D:
    """Minimal-energy set backed by a ``me_<n>_<seed>.txt`` cache file."""
    directory = Path(directory) if directory is not None else cache_dir()
    path = directory / f"me_{n}_{seed}.txt"
    if path.exists():
        loaded = load_point_set(PointSetFile(path, FORMAT_ANGLES))
        return NodeSet3D(loaded.lam, loaded.theta, kind=KIND_MINIMAL_ENERGY)
    nodes = minimal_energy_sphere(n, seed=seed, max_iters=max_iters, tol=tol)
    directory.mkdir(parents=True, exist_ok=True)
    save_point_set(nodes, path, FORMAT_ANGLES)
    return nodes
