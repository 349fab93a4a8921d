"""Roller mesh generation and static mesh geometry.

All meshes are closed, convex, outward-oriented triangle meshes whose
body-frame origin is the center of mass of a uniform solid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateHull, NonClosedMesh

DEFAULT_SAMPLES_PER_CIRCLE = 350


@dataclass(frozen=True)
class RollerGenome:
    """Coordinates of a two-circle roller.

    Parameters
    ----------
    theta : float
        Angle between the two circle planes, degrees.
    d : float
        Offset of the second circle's center along x, as a fraction of ``r1``.
    rho : float
        Radius ratio ``r2 / r1``.
    r1 : float
        Radius of the first circle (sets the length scale).
    """

    theta: float
    d: float
    rho: float
    r1: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= 180.0:
            raise ValueError(f"theta must lie in [0, 180] degrees, got {self.theta}")
        if self.d < 0:
            raise ValueError(f"d must be non-negative, got {self.d}")
        if self.rho <= 0 or self.r1 <= 0:
            raise ValueError("rho and r1 must be positive")

    @property
    def r2(self) -> float:
        return self.rho * self.r1

    @classmethod
    def oloid(cls, r1: float = 1.0) -> "RollerGenome":
        return cls(90.0, 1.0, 1.0, r1)

    @property
    def is_oloid(self) -> bool:
        return (self.theta, self.d, self.rho) == (90.0, 1.0, 1.0)

    def to_dict(self) -> dict:
        return {"theta_deg": self.theta, "d": self.d, "rho": self.rho, "r1": self.r1}

    @classmethod
    def from_dict(cls, record: dict) -> "RollerGenome":
        return cls(float(record["theta_deg"]), float(record["d"]),
                   float(record["rho"]), float(record.get("r1", 1.0)))

    def label(self) -> str:
        return f"({self.theta:g}°, {self.d:.2f}, {self.rho:.2f})"


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Closed triangle mesh of a uniform-density solid.

    ``faces`` are wound counter-clockwise seen from outside, so
    ``cross(v1 - v0, v2 - v0)`` points outward.
    """

    vertices: np.ndarray
    faces: np.ndarray
    mass: float = 1.0
    name: str = field(default="mesh", compare=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.vertices, dtype=float)
        f = np.ascontiguousarray(self.faces, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3 or f.ndim != 2 or f.shape[1] != 3:
            raise ValueError("vertices must be (n, 3) floats and faces (m, 3) ints")
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def triangles(self) -> np.ndarray:
        return self.vertices[self.faces]

    @cached_property
    def face_normals(self) -> np.ndarray:
        """Unnormalized outward normals, length = twice the face area."""
        t = self.triangles
        return np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0])

    @cached_property
    def face_areas(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.face_normals, axis=1)

    @cached_property
    def face_centroids(self) -> np.ndarray:
        return self.triangles.mean(axis=1)

    @property
    def total_area(self) -> float:
        return float(self.face_areas.sum())

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted vertex pairs."""
        e = np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + self.n_faces

    @cached_property
    def _volume_moments(self):
        return _volume_moments(self.triangles)

    @property
    def volume(self) -> float:
        return self._volume_moments[0]

    @property
    def center_of_mass(self) -> np.ndarray:
        vol, first, _ = self._volume_moments
        return first / vol

    @cached_property
    def inertia_tensor(self) -> np.ndarray:
        return compute_inertia(self, self.mass)

    @cached_property
    def is_closed(self) -> bool:
        """True if every directed edge is matched by its reverse exactly once."""
        f = self.faces
        directed = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        fwd = np.unique(directed, axis=0)
        if len(fwd) != len(directed):
            return False
        rev = np.unique(directed[:, ::-1], axis=0)
        return bool(np.array_equal(fwd, rev))

    def scaled(self, s: float) -> "TriangleMesh":
        return TriangleMesh(self.vertices * s, self.faces, self.mass, self.name)

    def centered(self) -> "TriangleMesh":
        return TriangleMesh(self.vertices - self.center_of_mass, self.faces, self.mass, self.name)

    def convexity_violation(self) -> float:
        """Largest signed distance of any vertex above any face plane."""
        n = self.face_normals / (2.0 * self.face_areas[:, None])
        offsets = np.einsum("ij,ij->i", n, self.triangles[:, 0])
        worst = -np.inf
        # chunked to bound memory on large meshes
        for start in range(0, self.n_faces, 512):
            d = self.vertices @ n[start:start + 512].T - offsets[start:start + 512]
            worst = max(worst, float(d.max()))
        return worst

    def is_convex(self, tol: float = 1e-9) -> bool:
        scale = float(np.abs(self.vertices).max())
        return self.convexity_violation() <= tol * max(scale, 1.0)


def _volume_moments(tri):
    """Zeroth, first and second volume moments via signed tetrahedra to the origin."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    vol6 = np.einsum("ij,ij->i", a, np.cross(b, c))
    vols = vol6 / 6.0
    volume = float(vols.sum())
    first = (vols[:, None] * (a + b + c) / 4.0).sum(axis=0)
    s = a + b + c
    outer = (np.einsum("ni,nj->nij", a, a) + np.einsum("ni,nj->nij", b, b)
             + np.einsum("ni,nj->nij", c, c) + np.einsum("ni,nj->nij", s, s))
    second = (vols[:, None, None] * outer).sum(axis=0) / 20.0
    return volume, first, second


def compute_inertia(mesh: TriangleMesh, mass: float) -> np.ndarray:
    """Inertia tensor about the center of mass for a uniform solid.

    Uses signed tetrahedra from the origin to each face, so the mesh only
    needs to be closed and consistently outward oriented.

    Raises
    ------
    NonClosedMesh
        If the enclosed volume is not positive.
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    if not mesh.is_closed:
        raise NonClosedMesh("mesh has boundary or non-manifold edges")
    volume, first, second = _volume_moments(mesh.triangles)
    if not volume > 0:
        raise NonClosedMesh(f"enclosed volume is {volume:g}; mesh is open or inverted")
    density = mass / volume
    cov = second * density
    com = first / volume
    cov_cm = cov - mass * np.outer(com, com)
    inertia = np.trace(cov_cm) * np.eye(3) - cov_cm
    return 0.5 * (inertia + inertia.T)


def mesh_from_points(points: np.ndarray, mass: float = 1.0, name: str = "hull",
                     min_volume: float = 1e-9) -> TriangleMesh:
    """Convex hull of ``points`` as an outward-oriented, centered mesh.

    Points strictly inside the hull are dropped. ``min_volume`` is relative
    to the cube of the point cloud's extent.
    """
    points = np.asarray(points, dtype=float)
    extent = float(np.ptp(points, axis=0).max())
    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateHull(f"convex hull failed: {str(exc).splitlines()[0]}") from exc
    if hull.volume <= min_volume * extent ** 3:
        raise DegenerateHull(f"hull volume {hull.volume:g} is degenerate")

    faces = hull.simplices.copy()
    # Qhull does not orient simplices; its facet equations give outward normals.
    tri = points[faces]
    n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    flip = np.einsum("ij,ij->i", n, hull.equations[:, :3]) < 0
    faces[flip] = faces[flip][:, ::-1]

    used, inverse = np.unique(faces, return_inverse=True)
    mesh = TriangleMesh(points[used], inverse.reshape(-1, 3), mass, name)
    return mesh.centered()


def circle_points(center, u, v, radius, n):
    t = 2.0 * np.pi * np.arange(n) / n
    return (np.asarray(center, float)[None, :]
            + radius * (np.cos(t)[:, None] * np.asarray(u, float)[None, :]
                        + np.sin(t)[:, None] * np.asarray(v, float)[None, :]))


def generating_circles(genome: RollerGenome, samples_per_circle: int):
    """Sample points on the two generating circles.

    The first circle lies in the xz-plane around the origin. The second is
    centered at ``(d*r1, 0, 0)`` in the plane through the x-axis tilted by
    ``theta`` from the xz-plane, so ``theta = 90, d = 1, rho = 1`` gives the
    oloid (each circle passes through the other's center).
    """
    th = math.radians(genome.theta)
    ex = np.array([1.0, 0.0, 0.0])
    c1 = circle_points((0, 0, 0), ex, (0, 0, 1), genome.r1, samples_per_circle)
    tilt = np.array([0.0, math.sin(th), math.cos(th)])
    c2 = circle_points((genome.d * genome.r1, 0, 0), ex, tilt, genome.r2, samples_per_circle)
    return c1, c2


def generate_two_circle_roller(genome: RollerGenome,
                               samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE,
                               mass: float = 1.0) -> TriangleMesh:
    """Convex hull of the two sampled generating circles of ``genome``.

    Raises
    ------
    DegenerateHull
        When the circles are coplanar (or otherwise span no volume).
    """
    if samples_per_circle < 16:
        raise ValueError("samples_per_circle must be at least 16")
    c1, c2 = generating_circles(genome, samples_per_circle)
    try:
        return mesh_from_points(np.vstack([c1, c2]), mass, name=f"roller{genome.label()}")
    except DegenerateHull as exc:
        raise DegenerateHull(f"{exc} for genome {genome.label()}", genome=genome) from None


def generate_oloid(samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE, r1: float = 1.0,
                   mass: float = 1.0) -> TriangleMesh:
    mesh = generate_two_circle_roller(RollerGenome.oloid(r1), samples_per_circle, mass)
    return TriangleMesh(mesh.vertices, mesh.faces, mass, "oloid")


def generate_cylinder(radius: float = 1.0, length: float = 2.0, segments: int = 64,
                      mass: float = 1.0) -> TriangleMesh:
    """Closed cylinder with its axis along y, caps fanned around a center vertex.

    Face count is ``4 * segments``.
    """
    if radius <= 0 or length <= 0:
        raise ValueError("radius and length must be positive")
    if segments < 3:
        raise ValueError("segments must be at least 3")
    t = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(t), np.zeros(segments), radius * np.sin(t)])
    h = 0.5 * length
    bottom = ring + [0.0, -h, 0.0]
    top = ring + [0.0, h, 0.0]
    vertices = np.vstack([bottom, top, [[0.0, -h, 0.0], [0.0, h, 0.0]]])
    i = np.arange(segments)
    j = (i + 1) % segments
    b0, b1, t0, t1 = i, j, i + segments, j + segments
    cb, ct = 2 * segments, 2 * segments + 1
    # ring runs counter-clockwise seen from -y; side normals point radially out
    side = np.concatenate([np.column_stack([b0, t1, b1]), np.column_stack([b0, t0, t1])])
    cap_bottom = np.column_stack([np.full(segments, cb), b0, b1])
    cap_top = np.column_stack([np.full(segments, ct), t1, t0])
    faces = np.concatenate([side, cap_bottom, cap_top])
    mesh = TriangleMesh(vertices, faces, mass, "cylinder")
    if mesh.volume < 0:
        mesh = TriangleMesh(vertices, faces[:, ::-1], mass, "cylinder")
    return mesh.centered()


def matched_cylinder(reference: TriangleMesh, radius: float = 1.0,
                     length: float | None = None, mass: float = 1.0) -> TriangleMesh:
    """Cylinder baseline whose face count is as close as possible to ``reference``'s."""
    length = 2.0 * radius if length is None else length
    segments = max(3, int(round(reference.n_faces / 4)))
    return generate_cylinder(radius, length, segments, mass)


def generate_box(size=(1.0, 1.0, 1.0), mass: float = 1.0) -> TriangleMesh:
    corners = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], float)
    return mesh_from_points(corners * np.asarray(size, float), mass, name="box")


def generate_icosphere(subdivisions: int = 3, radius: float = 1.0,
                       mass: float = 1.0) -> TriangleMesh:
    """Geodesic sphere from a subdivided icosahedron."""
    p = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [(-1, p, 0), (1, p, 0), (-1, -p, 0), (1, -p, 0),
             (0, -1, p), (0, 1, p), (0, -1, -p), (0, 1, -p),
             (p, 0, -1), (p, 0, 1), (-p, 0, -1), (-p, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    verts = [np.array(v, float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache = {}

        def midpoint(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return TriangleMesh(np.array(verts) * radius, np.array(faces), mass, "icosphere")
