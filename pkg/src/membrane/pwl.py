"""Traditional piecewise linear representation.

2D objects are closed polylines of IB points; normals come from a local
quadratic fitted through each point and its two neighbors (one small linear
system per coordinate per point), and elastic forces from zero-rest-length
Hookean springs, F_i = K0 (x_{i+1} - 2 x_i + x_{i-1}).

3D objects are closed triangulations; vertex normals are angle-weighted
averages of the incident facet normals, and spring forces sum over the
adjacency list, F_i = K0 sum_j (x_i - x_j).  Note the 3D spring sign is
opposite to the 2D convention; both are implemented verbatim as defined
(the 3D model is a purely algorithmic extension, not a constitutive one),
which is why the experiment harness excludes 3D spring forces from
force-accuracy studies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .mechanics import DEGENERATE_TOL


@dataclass(frozen=True, eq=False)
class ClosedPolyline:
    """Ordered IB points (n, 2), implicitly closed; consecutive points distinct."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ValueError("need at least 3 points of shape (n, 2)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        gaps = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if np.any(gaps == 0.0):
            raise ValueError(f"consecutive duplicate point at index {int(np.argmin(gaps))}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class LocalQuadratic:
    """Coefficients of x(t) = a_x t^2 + b_x t + c_x (and same for y)."""

    a_x: float
    b_x: float
    c_x: float
    a_y: float
    b_y: float
    c_y: float

    def value(self, t: float) -> np.ndarray:
        return np.array(
            [self.a_x * t * t + self.b_x * t + self.c_x,
             self.a_y * t * t + self.b_y * t + self.c_y]
        )

    def tangent(self, t: float) -> np.ndarray:
        return np.array([2.0 * self.a_x * t + self.b_x, 2.0 * self.a_y * t + self.b_y])


# stencil of local parameter values for the three-point quadratic fit;
# {-1, 0, 1} keeps the 3x3 system well scaled regardless of node spacing
_STENCIL_T = np.array([-1.0, 0.0, 1.0])
_VANDERMONDE = np.vander(_STENCIL_T, 3)  # rows [t^2, t, 1]


def fit_local_quadratic(curve: ClosedPolyline, i: int) -> LocalQuadratic:
    """Quadratic through points i-1, i, i+1 (cyclic) at parameters -1, 0, 1."""
    n = curve.n
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for {n} points")
    stencil = curve.points[[(i - 1) % n, i, (i + 1) % n]]
    try:
        coeffs = np.linalg.solve(_VANDERMONDE, stencil)  # (3, 2): rows a, b, c
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"singular quadratic fit at index {i}: {exc}") from exc
    (a_x, a_y), (b_x, b_y), (c_x, c_y) = coeffs
    return LocalQuadratic(a_x, b_x, c_x, a_y, b_y, c_y)


def pwl_normals_2d(curve: ClosedPolyline) -> np.ndarray:
    """Per-point unit normals from the local quadratic tangents.

    The normal follows the (-t_y, t_x) convention of the parametric models,
    so it points inward for counterclockwise curves.
    """
    normals = np.empty_like(curve.points)
    for i in range(curve.n):
        tangent = fit_local_quadratic(curve, i).tangent(0.0)
        norm = float(np.linalg.norm(tangent))
        if norm <= DEGENERATE_TOL:
            raise ValueError(f"zero tangent at index {i}")
        normals[i] = (-tangent[1] / norm, tangent[0] / norm)
    return normals


def spring_force_2d(curve: ClosedPolyline, k0: float) -> np.ndarray:
    """Hookean spring force K0 (x_{i+1} - 2 x_i + x_{i-1}) with cyclic indexing."""
    pts = curve.points
    return k0 * (np.roll(pts, -1, axis=0) - 2.0 * pts + np.roll(pts, 1, axis=0))


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Closed oriented triangulation with a per-vertex adjacency list."""

    vertices: np.ndarray
    triangles: np.ndarray
    adjacency: tuple

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        tris = np.array(self.triangles, dtype=np.int64)
        if verts.ndim != 2 or verts.shape[1] != 3 or verts.shape[0] < 4:
            raise ValueError("need at least 4 vertices of shape (v, 3)")
        if tris.ndim != 2 or tris.shape[1] != 3:
            raise ValueError("triangles must have shape (f, 3)")
        a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
        areas = 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)
        if np.any(areas <= 0.0):
            raise ValueError(f"degenerate triangle {int(np.argmin(areas))}")
        # closed + consistently oriented: each undirected edge appears exactly
        # twice, once in each direction
        directed = np.concatenate(
            [tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [2, 0]]]
        )
        keys = directed[:, 0] * verts.shape[0] + directed[:, 1]
        if np.unique(keys).size != keys.size:
            raise ValueError("repeated directed edge: inconsistent orientation")
        rev = directed[:, 1] * verts.shape[0] + directed[:, 0]
        if not np.array_equal(np.sort(keys), np.sort(rev)):
            raise ValueError("mesh is not closed")
        verts.setflags(write=False)
        tris.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "adjacency", tuple(map(tuple, self.adjacency)))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def facet_normals(self) -> np.ndarray:
        """Unit facet normals (constant on each facet, anchored anywhere on it)."""
        verts, tris = self.vertices, self.triangles
        cross = np.cross(
            verts[tris[:, 1]] - verts[tris[:, 0]],
            verts[tris[:, 2]] - verts[tris[:, 0]],
        )
        return cross / np.linalg.norm(cross, axis=1)[:, None]


def _adjacency_from_triangles(n_vertices: int, triangles: np.ndarray) -> tuple:
    neighbors = [set() for _ in range(n_vertices)]
    for i, j, k in triangles:
        neighbors[i].update((j, k))
        neighbors[j].update((i, k))
        neighbors[k].update((i, j))
    if any(not nb for nb in neighbors):
        raise ValueError("isolated vertex")
    return tuple(tuple(sorted(nb)) for nb in neighbors)


def triangulate_sphere_like(points) -> TriMesh:
    """Closed outward-oriented triangulation of points star-shaped about
    their centroid.

    Connectivity is the convex hull of the unit directions from the centroid,
    so every input point becomes a mesh vertex even if the surface is mildly
    non-convex.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 4:
        raise ValueError("need at least 4 points of shape (n, 3)")
    centroid = pts.mean(axis=0)
    directions = pts - centroid
    norms = np.linalg.norm(directions, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("a point coincides with the centroid")
    directions /= norms[:, None]
    hull = ConvexHull(directions)
    if hull.vertices.size != pts.shape[0]:
        raise ValueError("points are not star-shaped about their centroid")
    tris = hull.simplices.copy()

    # orient every facet outward: normal dot (facet centroid - centroid) > 0
    a, b, c = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    outward = np.sum(np.cross(b - a, c - a) * ((a + b + c) / 3.0 - centroid), axis=1)
    if np.any(outward == 0.0):
        raise ValueError("ambiguous facet orientation")
    flip = outward < 0.0
    tris[flip] = tris[flip][:, [0, 2, 1]]

    return TriMesh(pts, tris, _adjacency_from_triangles(pts.shape[0], tris))


def vertex_normals_angle_weighted(mesh: TriMesh) -> np.ndarray:
    """Unit vertex normals: facet normals averaged with incident-angle weights."""
    verts, tris = mesh.vertices, mesh.triangles
    facet_n = mesh.facet_normals()
    acc = np.zeros_like(verts)
    edges = (
        verts[tris[:, 1]] - verts[tris[:, 0]],
        verts[tris[:, 2]] - verts[tris[:, 1]],
        verts[tris[:, 0]] - verts[tris[:, 2]],
    )
    unit = [e / np.linalg.norm(e, axis=1)[:, None] for e in edges]
    for corner, (inc, out) in enumerate(((0, 2), (1, 0), (2, 1))):
        cosang = np.clip(-np.sum(unit[inc] * unit[out], axis=1), -1.0, 1.0)
        angle = np.arccos(cosang)
        np.add.at(acc, tris[:, corner], angle[:, None] * facet_n)
    norms = np.linalg.norm(acc, axis=1)
    if np.any(norms <= DEGENERATE_TOL):
        raise ValueError(f"degenerate vertex normal at {int(np.argmin(norms))}")
    return acc / norms[:, None]


def spring_force_3d(mesh: TriMesh, k0: float) -> np.ndarray:
    """Spring force K0 sum_{j in adj(i)} (x_i - x_j), verbatim sign convention."""
    verts = mesh.vertices
    idx_i = np.array([i for i, nb in enumerate(mesh.adjacency) for _ in nb])
    idx_j = np.array([j for nb in mesh.adjacency for j in nb])
    force = np.zeros_like(verts)
    np.add.at(force, idx_i, verts[idx_i] - verts[idx_j])
    return k0 * force


def mesh_to_off(mesh: TriMesh) -> str:
    """OFF-format text dump for external inspection."""
    lines = ["OFF", f"{mesh.n_vertices} {mesh.triangles.shape[0]} 0"]
    for v in mesh.vertices:
        lines.append(" ".join(repr(float(c)) for c in v))
    for t in mesh.triangles:
        lines.append("3 " + " ".join(str(int(i)) for i in t))
    return "\n".join(lines) + "\n"
