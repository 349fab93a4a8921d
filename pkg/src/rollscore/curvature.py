"""Discrete curvature estimators on triangle meshes.

Mean curvature comes from the cotangent Laplacian, Gaussian curvature from
the angle defect; both are normalized by mixed Voronoi areas (Meyer et al.,
"Discrete Differential-Geometry Operators for Triangulated 2-Manifolds").
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriangle
from .mesh import TriangleMesh

KAPPA_MIN = 1e-3


@dataclass(frozen=True, eq=False)
class CurvatureField:
    vertex_mean: np.ndarray
    vertex_gaussian: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    r_eff: np.ndarray
    vertex_area: np.ndarray

    @property
    def n_faces(self) -> int:
        return len(self.r_eff)


def corner_angles(mesh: TriangleMesh) -> np.ndarray:
    """Interior angle at each face corner, shape (n_faces, 3)."""
    t = mesh.triangles
    angles = np.empty((mesh.n_faces, 3))
    for k in range(3):
        a = t[:, (k + 1) % 3] - t[:, k]
        b = t[:, (k + 2) % 3] - t[:, k]
        cross = np.linalg.norm(np.cross(a, b), axis=1)
        angles[:, k] = np.arctan2(cross, np.einsum("ij,ij->i", a, b))
    return angles


def angle_defects(mesh: TriangleMesh) -> np.ndarray:
    """2*pi minus the sum of incident corner angles, per vertex."""
    total = np.bincount(mesh.faces.ravel(), weights=corner_angles(mesh).ravel(),
                        minlength=mesh.n_vertices)
    return 2.0 * np.pi - total


def mixed_voronoi_areas(mesh: TriangleMesh, angles: np.ndarray | None = None) -> np.ndarray:
    """Per-vertex mixed Voronoi area; sums to the total surface area."""
    if angles is None:
        angles = corner_angles(mesh)
    t = mesh.triangles
    areas = mesh.face_areas
    cot = 1.0 / np.tan(angles)
    obtuse = angles > 0.5 * np.pi
    any_obtuse = obtuse.any(axis=1)
    contrib = np.empty_like(angles)
    for k in range(3):
        i, j = (k + 1) % 3, (k + 2) % 3
        # edges from corner k to its two neighbors, weighted by the opposite cotangents
        e_kj = np.sum((t[:, j] - t[:, k]) ** 2, axis=1)
        e_ki = np.sum((t[:, i] - t[:, k]) ** 2, axis=1)
        voronoi = (e_kj * cot[:, i] + e_ki * cot[:, j]) / 8.0
        contrib[:, k] = np.where(any_obtuse,
                                 np.where(obtuse[:, k], areas / 2.0, areas / 4.0),
                                 voronoi)
    return np.bincount(mesh.faces.ravel(), weights=contrib.ravel(), minlength=mesh.n_vertices)


def mean_curvature_normal(mesh: TriangleMesh, angles: np.ndarray | None = None) -> np.ndarray:
    """Unnormalized cotangent Laplacian of the vertex positions, sum of (cot a + cot b)(x_i - x_j)."""
    if angles is None:
        angles = corner_angles(mesh)
    cot = 1.0 / np.tan(angles)
    v = mesh.vertices
    out = np.zeros_like(v)
    for k in range(3):
        i = mesh.faces[:, (k + 1) % 3]
        j = mesh.faces[:, (k + 2) % 3]
        w = cot[:, k][:, None] * (v[i] - v[j])
        np.add.at(out, i, w)
        np.add.at(out, j, -w)
    return out


def compute_curvatures(mesh: TriangleMesh, length_scale: float = 1.0,
                       kappa_min: float | None = None) -> CurvatureField:
    """Per-vertex mean/Gaussian curvature and per-face Hertz radii.

    ``kappa_min`` clamps the principal-curvature product from below so that
    developable regions (one principal curvature zero) keep a finite
    effective radius. Defaults to ``1e-3 / length_scale`` (pass ``r1``
    for rollers built at a non-unit scale).
    """
    if np.any(mesh.face_areas <= 1e-14 * max(mesh.total_area, 1e-300)):
        raise DegenerateTriangle("mesh contains zero-area faces")
    if kappa_min is None:
        kappa_min = KAPPA_MIN / length_scale

    angles = corner_angles(mesh)
    area = mixed_voronoi_areas(mesh, angles)
    if np.any(area <= 0):
        raise DegenerateTriangle("vertex with non-positive mixed area (unreferenced vertex?)")
    H = np.linalg.norm(mean_curvature_normal(mesh, angles), axis=1) / (4.0 * area)
    defect = 2.0 * np.pi - np.bincount(mesh.faces.ravel(), weights=angles.ravel(),
                                       minlength=mesh.n_vertices)
    K = defect / area

    Hf = H[mesh.faces].mean(axis=1)
    Kf = K[mesh.faces].mean(axis=1)
    disc = np.sqrt(np.maximum(Hf ** 2 - Kf, 0.0))
    k1, k2 = Hf + disc, Hf - disc
    r_eff = 1.0 / np.sqrt(np.maximum(k1 * k2, kappa_min ** 2))
    return CurvatureField(H, K, k1, k2, r_eff, area)
