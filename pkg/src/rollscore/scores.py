"""Area-weighted variance scores and the point formulas that feed them.

Every score is the same template: the area-weighted variance of a per-face
accumulator's fractions against the face area fractions. Scores are
dimensionless, so the length unit of the mesh (``r1 = 1``) cancels; the
Hertz formulas below read lengths as metres.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .errors import MismatchedLengths, NonPositiveRadius

INF = math.inf


@dataclass(frozen=True)
class MaterialSuite:
    """Material and load constants (SI units; defaults are bearing steel)."""

    youngs_modulus: float = 2.0e11
    poisson: float = 0.3
    hertz_load: float = 100.0
    fatigue_load: float = 5000.0
    fatigue_strength_coeff: float = 7.0e8
    fatigue_exponent: float = -0.085
    endurance_limit: float = 2.5e8
    friction: float = 0.15
    wear_coefficient: float = 1e-4
    hardness: float = 2.0e9

    def __post_init__(self):
        positive = ("youngs_modulus", "hertz_load", "fatigue_load", "fatigue_strength_coeff",
                    "endurance_limit", "friction", "wear_coefficient", "hardness")
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.fatigue_exponent < 0:
            raise ValueError("fatigue_exponent must be negative")
        if not 0 < self.poisson < 0.5:
            raise ValueError("poisson must lie in (0, 0.5)")

    @property
    def contact_modulus(self) -> float:
        """E* for two bodies of this same material."""
        return self.youngs_modulus / (2.0 * (1.0 - self.poisson ** 2))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, record: dict) -> "MaterialSuite":
        known = {f.name for f in fields(cls)}
        return cls(**{k: float(v) for k, v in record.items() if k in known})

    def with_(self, **changes) -> "MaterialSuite":
        return replace(self, **changes)


def distribution_score(face_areas, accumulator) -> float:
    """Area-weighted variance of accumulator fractions about area fractions.

    ``(1/A) * sum_i a_i * (x_i / sum(x) - a_i / A)**2``

    Returns ``inf`` when the accumulator sums to zero, since the fractions
    are then undefined.
    """
    a = np.asarray(face_areas, dtype=float)
    x = np.asarray(accumulator, dtype=float)
    if a.shape != x.shape:
        raise MismatchedLengths(f"{a.shape} areas vs {x.shape} accumulator")
    if np.any(a <= 0):
        raise ValueError("face areas must be positive")
    total = x.sum()
    if not total > 0:
        return INF
    area = a.sum()
    return float(np.sum(a * (x / total - a / area) ** 2) / area)


def hertz_contact_radius(r_eff, force, materials: MaterialSuite = MaterialSuite()):
    return np.cbrt(3.0 * force * np.asarray(r_eff, dtype=float) / (4.0 * materials.contact_modulus))


def hertz_peak_pressure(r_eff, force, materials: MaterialSuite = MaterialSuite()):
    """Peak Hertz pressure ``3F / (2 pi a^2)`` with ``a = (3 F R / 4 E*)^(1/3)``.

    Accepts scalar or array ``r_eff``; returns the same shape.
    """
    r = np.asarray(r_eff, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveRadius("effective radius must be positive")
    if force < 0:
        raise ValueError("force must be non-negative")
    if force == 0:
        out = np.zeros_like(r)
    else:
        a = hertz_contact_radius(r, force, materials)
        out = 3.0 * force / (2.0 * np.pi * a * a)
    return float(out) if out.ndim == 0 else out


def basquin_cycles_to_failure(stress_amplitude, materials: MaterialSuite = MaterialSuite()):
    """Cycles to failure ``(s / s_f')^(1/b)``; infinite below the endurance limit."""
    s = np.asarray(stress_amplitude, dtype=float)
    if np.any(s < 0):
        raise ValueError("stress amplitude must be non-negative")
    with np.errstate(divide="ignore"):
        n = np.where(s < materials.endurance_limit, INF,
                     (np.maximum(s, 1e-300) / materials.fatigue_strength_coeff)
                     ** (1.0 / materials.fatigue_exponent))
    return float(n) if n.ndim == 0 else n


def miner_increment(stress_amplitude, materials: MaterialSuite = MaterialSuite()):
    """Damage ``1 / N_f`` of single events (zero below the endurance limit)."""
    return 1.0 / np.asarray(basquin_cycles_to_failure(stress_amplitude, materials))


def miner_damage(event_stresses, materials: MaterialSuite = MaterialSuite()) -> float:
    s = np.asarray(event_stresses, dtype=float)
    if s.size == 0:
        return 0.0
    return float(np.sum(miner_increment(s, materials)))


def archard_wear_volume(force, slide_distance, materials: MaterialSuite = MaterialSuite()):
    d = np.asarray(slide_distance, dtype=float)
    if force < 0 or np.any(d < 0):
        raise ValueError("force and slide distance must be non-negative")
    w = materials.wear_coefficient * force * d / materials.hardness
    return float(w) if w.ndim == 0 else w


def frictional_heat_flux(pressure, slide_speed, materials: MaterialSuite = MaterialSuite()):
    return materials.friction * np.asarray(pressure) * np.asarray(slide_speed)


@dataclass
class ScoreReport:
    """The invariant vector of one geometry plus diagnostics."""

    cds: float
    sds: float
    tds: float
    fds: float
    wds_vol: float
    wds_depth: float
    mean_peak_pressure: float
    pressure_cv: float
    face_count: int
    samples: int
    genome: dict | str | None = None
    extra: dict = field(default_factory=dict)

    SCORE_FIELDS = ("cds", "sds", "tds", "fds", "wds_vol", "wds_depth")

    def vector(self) -> dict:
        return {k: getattr(self, k) for k in self.SCORE_FIELDS}

    def to_dict(self) -> dict:
        from .io import encode_floats
        return encode_floats(asdict(self))

    @classmethod
    def from_dict(cls, record: dict) -> "ScoreReport":
        from .io import decode_floats
        return cls(**decode_floats(record))


def score_report(mesh, ledger, genome=None) -> ScoreReport:
    """Evaluate all six scores of a contact ledger on ``mesh``.

    Scores of empty accumulators are ``inf``; a contact-only ledger
    therefore reports finite ``cds`` with the physics scores infinite.
    """
    areas = mesh.face_areas
    if ledger.n_faces != len(areas):
        raise MismatchedLengths(f"ledger has {ledger.n_faces} faces, mesh has {len(areas)}")
    mean_p, cv = ledger.pressure_stats()
    if hasattr(genome, "to_dict"):
        genome = genome.to_dict()
    return ScoreReport(
        cds=distribution_score(areas, ledger.contacts),
        sds=distribution_score(areas, ledger.stress),
        tds=distribution_score(areas, ledger.heat),
        fds=distribution_score(areas, ledger.damage),
        wds_vol=distribution_score(areas, ledger.wear),
        wds_depth=distribution_score(areas, ledger.wear / areas),
        mean_peak_pressure=mean_p,
        pressure_cv=cv,
        face_count=len(areas),
        samples=int(ledger.samples),
        genome=genome,
    )
