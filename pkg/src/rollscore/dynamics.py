"""Rolling oracles that turn a mesh into a per-face contact ledger.

Two trajectory generators are provided: a kinematic one composing a spin
about y with a slow wobble about x, and a rigid-body one integrating
Euler's equations under gravitational torque about the support vertex.
Both ground the rotated mesh at its lowest face centroid and count faces
whose centroid lies within the contact threshold.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Iterator

import numpy as np

from .curvature import CurvatureField
from .errors import IntegrationDiverged, MismatchedLengths, MissingCurvature
from .mesh import TriangleMesh
from .scores import (MaterialSuite, archard_wear_volume, frictional_heat_flux,
                     hertz_peak_pressure, miner_increment)

DEFAULT_SPINS = ((0.5, 0.0, 0.0), (1.0, 0.0, 0.0), (2.0, 0.0, 0.0))
MAX_OMEGA = 1e3


@dataclass(frozen=True)
class ApproxParams:
    steps: int = 200
    n_cycles: float = 2.5
    wobble_amplitude: float = 0.6
    contact_threshold: float = 0.04

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if not self.contact_threshold > 0:
            raise ValueError("contact_threshold must be positive")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, record):
        return cls(**record)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class RigidParams:
    sim_time: float = 10.0
    dt: float = 0.002
    sample_interval: int = 25
    contact_threshold: float = 0.04
    damping: float = 0.02
    mass: float = 1.0
    gravity: float = 9.81
    initial_spins: tuple = DEFAULT_SPINS

    def __post_init__(self):
        if not self.dt > 0 or not self.sim_time > 0:
            raise ValueError("dt and sim_time must be positive")
        if self.sample_interval < 1:
            raise ValueError("sample_interval must be >= 1")
        if not self.contact_threshold > 0:
            raise ValueError("contact_threshold must be positive")
        if self.damping < 0:
            raise ValueError("damping must be non-negative")
        spins = tuple(tuple(float(x) for x in w) for w in self.initial_spins)
        if not spins or any(len(w) != 3 for w in spins):
            raise ValueError("initial_spins must be a non-empty list of 3-vectors")
        object.__setattr__(self, "initial_spins", spins)

    @property
    def runs(self) -> int:
        return len(self.initial_spins)

    @property
    def steps_per_run(self) -> int:
        return int(round(self.sim_time / self.dt))

    @property
    def samples_per_run(self) -> int:
        return self.steps_per_run // self.sample_interval

    @property
    def total_samples(self) -> int:
        return self.runs * self.samples_per_run

    def to_dict(self):
        d = asdict(self)
        d["initial_spins"] = [list(w) for w in self.initial_spins]
        return d

    @classmethod
    def from_dict(cls, record):
        return cls(**record)

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class ContactLedger:
    """Per-face accumulators over a rolling trajectory.

    Pressure statistics are kept as weighted moments so that merging is
    order independent.
    """

    contacts: np.ndarray
    stress: np.ndarray
    heat: np.ndarray
    damage: np.ndarray
    wear: np.ndarray
    samples: int = 0
    pressure_moments: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @classmethod
    def empty(cls, n_faces: int) -> "ContactLedger":
        z = lambda: np.zeros(n_faces)  # noqa: E731
        return cls(z(), z(), z(), z(), z(), 0, np.zeros(3))

    @property
    def n_faces(self) -> int:
        return len(self.contacts)

    @property
    def contact_events(self) -> float:
        """Total (weighted) number of face-sample contact events with pressure recorded."""
        return float(self.pressure_moments[0])

    def pressure_stats(self):
        """Mean and coefficient of variation of per-event peak pressure."""
        w, s1, s2 = self.pressure_moments
        if w <= 0:
            return float("nan"), float("nan")
        mean = s1 / w
        var = max(s2 / w - mean * mean, 0.0)
        return float(mean), float(np.sqrt(var) / mean) if mean > 0 else 0.0

    def record_pressures(self, pressures, weights=None):
        p = np.asarray(pressures, dtype=float)
        w = np.ones_like(p) if weights is None else np.asarray(weights, dtype=float)
        self.pressure_moments = self.pressure_moments + [w.sum(), (w * p).sum(), (w * p * p).sum()]

    def __add__(self, other: "ContactLedger") -> "ContactLedger":
        if other.n_faces != self.n_faces:
            raise MismatchedLengths("cannot merge ledgers of different meshes")
        return ContactLedger(self.contacts + other.contacts, self.stress + other.stress,
                             self.heat + other.heat, self.damage + other.damage,
                             self.wear + other.wear, self.samples + other.samples,
                             self.pressure_moments + other.pressure_moments)

    def to_dict(self) -> dict:
        return {"contacts": self.contacts.tolist(), "stress": self.stress.tolist(),
                "heat": self.heat.tolist(), "damage": self.damage.tolist(),
                "wear": self.wear.tolist(), "samples": self.samples,
                "pressure_moments": self.pressure_moments.tolist()}


@dataclass(frozen=True)
class TrajectorySample:
    orientation: np.ndarray
    angular_velocity: np.ndarray
    rotation: np.ndarray
    support_point: np.ndarray
    contacting_faces: np.ndarray
    grounded_centroid_heights: np.ndarray


def rotation_x(a):
    c, s = np.cos(a), np.sin(a)
    return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])


def rotation_y(b):
    c, s = np.cos(b), np.sin(b)
    return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])


def quat_to_matrix(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_multiply(a, b) -> np.ndarray:
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def quat_increment(omega, dt) -> np.ndarray:
    """Rotation by angle ``|omega| dt`` about ``omega``."""
    speed = float(np.linalg.norm(omega))
    if speed == 0.0:
        return np.array([1.0, 0.0, 0.0, 0.0])
    half = 0.5 * speed * dt
    return np.concatenate([[np.cos(half)], np.sin(half) * np.asarray(omega) / speed])


def approx_rotations(params: ApproxParams) -> np.ndarray:
    """The ``steps`` composed rotations ``Rx(alpha_t) @ Ry(beta_t)``, t = 1..T."""
    T = params.steps
    t = np.arange(1, T + 1)
    beta = 2.0 * np.pi * t / T * params.n_cycles
    alpha = params.wobble_amplitude * np.sin(np.pi * t / T)
    return np.array([rotation_x(a) @ rotation_y(b) for a, b in zip(alpha, beta)])


def grounded_heights(centroids_z: np.ndarray) -> np.ndarray:
    return centroids_z - centroids_z.min(axis=-1, keepdims=True)


def approx_roll(mesh: TriangleMesh, params: ApproxParams = ApproxParams()) -> ContactLedger:
    """Contact counts under the kinematic spin-and-wobble trajectory."""
    z_rows = approx_rotations(params)[:, 2, :]
    heights = grounded_heights(z_rows @ mesh.face_centroids.T)
    ledger = ContactLedger.empty(mesh.n_faces)
    ledger.contacts = (heights < params.contact_threshold).sum(axis=0).astype(float)
    ledger.samples = params.steps
    return ledger


def rigid_trajectory(mesh: TriangleMesh, params: RigidParams, spin,
                     energy_log: list | None = None) -> Iterator[TrajectorySample]:
    """Integrate one rigid-body run and yield a sample every ``sample_interval`` steps.

    The body pivots about its center of mass; gravity acts through the
    lowest vertex as a torque ``(r_cm - s) x m g`` and damping subtracts
    ``gamma * omega``; the damping term is integrated implicitly so that
    large ``gamma`` stalls the body instead of destabilizing the step. Translation is not integrated because contact is
    re-grounded at every sample.

    If ``energy_log`` is given, ``(kinetic, potential)`` is appended each step.
    """
    body_vertices = mesh.vertices - mesh.center_of_mass
    body_centroids = mesh.face_centroids - mesh.center_of_mass
    inertia = mesh.inertia_tensor * (params.mass / mesh.mass)
    weight = np.array([0.0, 0.0, -params.mass * params.gravity])

    q = np.array([1.0, 0.0, 0.0, 0.0])
    omega = np.array(spin, dtype=float)
    for step in range(1, params.steps_per_run + 1):
        R = quat_to_matrix(q)
        world = body_vertices @ R.T
        support = world[np.argmin(world[:, 2])]
        torque = np.cross(-support, weight)
        I_world = R @ inertia @ R.T
        if energy_log is not None:
            energy_log.append((0.5 * omega @ I_world @ omega,
                               -params.mass * params.gravity * support[2]))
        # damping taken implicitly: (I + gamma dt) w' = I w + (tau - w x I w) dt
        rhs = I_world @ omega + (torque - np.cross(omega, I_world @ omega)) * params.dt
        omega = np.linalg.solve(I_world + params.damping * params.dt * np.eye(3), rhs)
        if not np.all(np.isfinite(omega)) or np.linalg.norm(omega) > MAX_OMEGA:
            raise IntegrationDiverged(
                f"|omega| exceeded {MAX_OMEGA:g} rad/s at step {step}; reduce dt")
        q = quat_multiply(quat_increment(omega, params.dt), q)
        q = q / np.linalg.norm(q)
        if step % params.sample_interval == 0:
            cz = body_centroids @ R[2]
            heights = cz - cz.min()
            yield TrajectorySample(q.copy(), omega.copy(), R, support,
                                   np.flatnonzero(heights < params.contact_threshold), heights)


def rigid_roll(mesh: TriangleMesh, params: RigidParams = RigidParams()) -> ContactLedger:
    """Contact counts merged over all rigid-body runs."""
    total = ContactLedger.empty(mesh.n_faces)
    for spin in params.initial_spins:
        run = ContactLedger.empty(mesh.n_faces)
        for sample in rigid_trajectory(mesh, params, spin):
            run.contacts[sample.contacting_faces] += 1.0
            run.samples += 1
        total = total + run
    return total


def slide_speeds(mesh: TriangleMesh, sample: TrajectorySample, faces) -> np.ndarray:
    """Ground-plane speed of contacting face centroids pivoting about the support vertex."""
    centroids = (mesh.face_centroids[faces] - mesh.center_of_mass) @ sample.rotation.T
    lever = centroids - sample.support_point
    vel = np.cross(sample.angular_velocity, lever)
    return np.hypot(vel[:, 0], vel[:, 1])


def rigid_roll_with_physics(mesh: TriangleMesh, params: RigidParams,
                            materials: MaterialSuite, curvatures: CurvatureField) -> ContactLedger:
    """Rigid-body ledger with Hertz stress, frictional heat, Miner damage and Archard wear.

    Accumulation happens only at sample instants. Each contacting face adds
    its Hertz peak pressure at the reference load to ``stress``, one Miner
    event at the fatigue-load pressure to ``damage``, ``mu * p * v`` to
    ``heat`` and ``k F v dt_sample / H`` to ``wear``.
    """
    if curvatures.n_faces != mesh.n_faces:
        raise MissingCurvature(
            f"curvature field has {curvatures.n_faces} faces, mesh has {mesh.n_faces}")
    p_ref = hertz_peak_pressure(curvatures.r_eff, materials.hertz_load, materials)
    damage_per_event = miner_increment(
        hertz_peak_pressure(curvatures.r_eff, materials.fatigue_load, materials), materials)
    sample_dt = params.sample_interval * params.dt

    total = ContactLedger.empty(mesh.n_faces)
    for spin in params.initial_spins:
        run = ContactLedger.empty(mesh.n_faces)
        for sample in rigid_trajectory(mesh, params, spin):
            faces = sample.contacting_faces
            p = p_ref[faces]
            v = slide_speeds(mesh, sample, faces)
            run.contacts[faces] += 1.0
            run.stress[faces] += p
            run.heat[faces] += frictional_heat_flux(p, v, materials)
            run.damage[faces] += damage_per_event[faces]
            run.wear[faces] += archard_wear_volume(materials.hertz_load, v * sample_dt, materials)
            run.record_pressures(p)
            run.samples += 1
        total = total + run
    return total


def uniform_contact_ledger(mesh: TriangleMesh, curvatures: CurvatureField,
                           materials: MaterialSuite = MaterialSuite()) -> ContactLedger:
    """Ledger for perfectly area-proportional contact.

    Contact counts equal face areas and stress is area times the face's
    Hertz pressure, so the resulting SDS reflects curvature variation only.
    """
    if curvatures.n_faces != mesh.n_faces:
        raise MissingCurvature("curvature field does not match mesh")
    areas = mesh.face_areas
    p = hertz_peak_pressure(curvatures.r_eff, materials.hertz_load, materials)
    ledger = ContactLedger.empty(mesh.n_faces)
    ledger.contacts = areas.copy()
    ledger.stress = areas * p
    ledger.record_pressures(p, weights=areas)
    ledger.samples = 1
    return ledger
