"""Grid search over two-circle rollers and the one-axis / convergence studies.

The search triages every genome with the approximate oracle, then
revalidates the best ``top_k`` (plus the oloid anchor and the cylinder
baseline) with the rigid-body oracle, ranking the survivors by rigid CDS.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .curvature import compute_curvatures
from .dynamics import ApproxParams, RigidParams, approx_roll, rigid_roll, rigid_roll_with_physics
from .errors import DegenerateHull, InsufficientPoints
from .mesh import (DEFAULT_SAMPLES_PER_CIRCLE, RollerGenome, generate_two_circle_roller,
                   matched_cylinder)
from .scores import MaterialSuite, ScoreReport, distribution_score, score_report

OLOID = RollerGenome.oloid()
CYLINDER_TAG = "cylinder"
WORKERS_ENV = "ROLLSCORE_WORKERS"


@dataclass(frozen=True)
class SearchGrid:
    theta_values: tuple = (60.0, 75.0, 90.0, 105.0, 120.0)
    d_values: tuple = (0.70, 1.00, 1.30)
    rho_values: tuple = (0.80, 1.00, 1.20)

    def __post_init__(self):
        for name in ("theta_values", "d_values", "rho_values"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    def __len__(self):
        return len(self.theta_values) * len(self.d_values) * len(self.rho_values)

    def genomes(self) -> list[RollerGenome]:
        return [RollerGenome(t, d, r) for t, d, r in
                itertools.product(self.theta_values, self.d_values, self.rho_values)]

    def to_dict(self):
        return {k: list(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, record):
        return cls(**record)


@dataclass
class SearchResult:
    genome: RollerGenome | None
    face_count: int
    approx_cds: float
    approx_rank: int | None = None
    rigid: ScoreReport | None = None
    rigid_rank: int | None = None
    error: str | None = None
    label: str = ""

    @property
    def is_baseline(self) -> bool:
        return self.genome is None

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "genome": self.genome.to_dict() if self.genome else CYLINDER_TAG,
            "face_count": self.face_count,
            "approx_cds": self.approx_cds,
            "approx_rank": self.approx_rank,
            "rigid": self.rigid.to_dict() if self.rigid else None,
            "rigid_rank": self.rigid_rank,
            "error": self.error,
        }


def _workers(workers):
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, workers)


def _map(fn, items, workers):
    """Order-preserving map, in a process pool when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def approx_cds(genome: RollerGenome, approx: ApproxParams,
               samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE) -> tuple[float, int]:
    mesh = generate_two_circle_roller(genome, samples_per_circle)
    return distribution_score(mesh.face_areas, approx_roll(mesh, approx).contacts), mesh.n_faces


def _approx_task(args):
    genome, approx, samples = args
    try:
        score, faces = approx_cds(genome, approx, samples)
        return SearchResult(genome, faces, score, label=genome.label())
    except DegenerateHull as exc:
        return SearchResult(genome, 0, math.inf, error=str(exc), label=genome.label())


def rigid_report(mesh, rigid: RigidParams, materials: MaterialSuite, genome=None) -> ScoreReport:
    """Full invariant vector of ``mesh`` under the rigid-body oracle."""
    curv = compute_curvatures(mesh)
    ledger = rigid_roll_with_physics(mesh, rigid, materials, curv)
    return score_report(mesh, ledger, genome if genome is not None else mesh.name)


def _rigid_task(args):
    genome, rigid, materials, samples = args
    anchor = generate_two_circle_roller(OLOID, samples)
    if genome is None:
        mesh = matched_cylinder(anchor)
        return rigid_report(mesh, rigid, materials, CYLINDER_TAG), mesh.n_faces
    mesh = generate_two_circle_roller(genome, samples)
    return rigid_report(mesh, rigid, materials, genome), mesh.n_faces


def _rank_key(result: SearchResult, score: float):
    g = result.genome
    if g is None:
        return (score, math.inf, math.inf, math.inf)
    return (score, g.theta, g.d, g.rho)


def run_search(grid: SearchGrid = SearchGrid(), approx: ApproxParams = ApproxParams(),
               rigid: RigidParams = RigidParams(), top_k: int = 5,
               materials: MaterialSuite = MaterialSuite(),
               samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE,
               workers: int | None = None) -> list[SearchResult]:
    """Two-stage search; returns every grid genome plus the cylinder baseline.

    The list is ordered by rigid rank for revalidated entries, followed by
    the remaining genomes in approximate-oracle order. Degenerate genomes
    get ``approx_cds = inf`` and an ``error`` message.
    """
    if len(grid) == 0:
        raise ValueError("search grid is empty")
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    workers = _workers(workers)

    genomes = grid.genomes()
    results = _map(_approx_task, [(g, approx, samples_per_circle) for g in genomes], workers)
    results.sort(key=lambda r: _rank_key(r, r.approx_cds))
    for rank, r in enumerate(results, 1):
        r.approx_rank = rank

    chosen = [r for r in results if r.error is None][:top_k]
    anchor = next((r for r in results if r.genome == OLOID), None)
    if anchor is None:
        anchor = _approx_task((OLOID, approx, samples_per_circle))
        results.append(anchor)
    if anchor not in chosen:
        chosen.append(anchor)

    baseline_mesh = matched_cylinder(generate_two_circle_roller(OLOID, samples_per_circle))
    baseline = SearchResult(None, baseline_mesh.n_faces,
                            distribution_score(baseline_mesh.face_areas,
                                               approx_roll(baseline_mesh, approx).contacts),
                            label=CYLINDER_TAG)
    chosen.append(baseline)
    results.append(baseline)

    reports = _map(_rigid_task, [(r.genome, rigid, materials, samples_per_circle) for r in chosen],
                   workers)
    for r, (report, faces) in zip(chosen, reports):
        r.rigid, r.face_count = report, faces
    chosen.sort(key=lambda r: _rank_key(r, r.rigid.cds))
    for rank, r in enumerate(chosen, 1):
        r.rigid_rank = rank

    rest = [r for r in results if r.rigid is None]
    return chosen + sorted(rest, key=lambda r: _rank_key(r, r.approx_cds))


def summarize_search(results: list[SearchResult]) -> dict:
    """Headline numbers of a finished search."""
    anchor = next(r for r in results if r.genome == OLOID)
    baseline = next(r for r in results if r.is_baseline)
    grid = [r for r in results if not r.is_baseline]
    return {
        "genomes": len(grid),
        "failed": sum(r.error is not None for r in grid),
        "approx_below_oloid": sum(r.approx_cds < anchor.approx_cds for r in grid),
        "oloid_rigid_rank": anchor.rigid_rank,
        "approx_cylinder_ratio": baseline.approx_cds / anchor.approx_cds,
        "rigid_cylinder_ratio": baseline.rigid.cds / anchor.rigid.cds,
    }


def format_table(results: list[SearchResult]) -> str:
    """Rigid-stage ranking in the layout of a results table."""
    revalidated = [r for r in results if r.rigid is not None]
    anchor = next((r for r in revalidated if r.genome == OLOID), None)
    ref = anchor.rigid.cds if anchor else float("nan")
    lines = [f"{'Rank':>4}  {'Geometry':<28}{'Faces':>6}  {'CDS':>10}  {'vs. Oloid':>9}"]
    for r in revalidated:
        name = "Cylinder (baseline)" if r.is_baseline else (
            "Oloid " if r.genome == OLOID else "") + r.genome.label()
        lines.append(f"{r.rigid_rank:>4}  {name:<28}{r.face_count:>6}  {r.rigid.cds:>10.3e}"
                     f"  {r.rigid.cds / ref:>8.2f}x")
    return "\n".join(lines)


def sensitivity_sweep(anchor: RollerGenome, axis: str, values, approx: ApproxParams = ApproxParams(),
                      samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE):
    """Approximate CDS along one genome axis with the others held at ``anchor``.

    Degenerate values score ``inf``.
    """
    if axis not in ("theta", "d", "rho"):
        raise ValueError(f"axis must be theta, d or rho, not {axis!r}")
    out = []
    for v in values:
        fields_ = anchor.to_dict()
        fields_[{"theta": "theta_deg"}.get(axis, axis)] = float(v)
        try:
            score, _ = approx_cds(RollerGenome.from_dict(fields_), approx, samples_per_circle)
        except DegenerateHull:
            score = math.inf
        out.append((float(v), score))
    return out


@dataclass
class PowerLawFit:
    exponent: float
    prefactor: float
    r_squared: float
    points: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def fit_power_law(x, y) -> PowerLawFit:
    """Least-squares fit of ``log y = exponent * log x + log prefactor``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(x)) < 3:
        raise InsufficientPoints("need at least 3 distinct abscissae for a power-law fit")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(float(slope), float(np.exp(intercept)), float(r2),
                       [[float(a), float(b)] for a, b in zip(x, y)])


def _resolution_task(args):
    genome, samples, rigid = args
    mesh = generate_two_circle_roller(genome, samples)
    return mesh.n_faces, distribution_score(mesh.face_areas, rigid_roll(mesh, rigid).contacts)


def resolution_study(genome: RollerGenome, resolutions, rigid: RigidParams = RigidParams(),
                     workers: int | None = None) -> PowerLawFit:
    """Fit rigid CDS against face count over several ``samples_per_circle`` values."""
    resolutions = [int(r) for r in resolutions]
    if len(set(resolutions)) < 3:
        raise InsufficientPoints("resolution study needs at least 3 distinct resolutions")
    pts = _map(_resolution_task, [(genome, r, rigid) for r in resolutions], _workers(workers))
    return fit_power_law([p[0] for p in pts], [p[1] for p in pts])


def params_for_samples(rigid: RigidParams, total_samples: int) -> RigidParams:
    """Shorten each run so the merged ledger holds about ``total_samples`` samples."""
    per_run = max(1, int(round(total_samples / rigid.runs)))
    return rigid.with_(sim_time=per_run * rigid.sample_interval * rigid.dt)


def convergence_study(mesh, sample_counts, rigid: RigidParams = RigidParams()):
    """Rigid CDS of ``mesh`` at several total sample counts: ``[(samples, cds), ...]``."""
    out = []
    for n in sample_counts:
        ledger = rigid_roll(mesh, params_for_samples(rigid, int(n)))
        out.append((ledger.samples, distribution_score(mesh.face_areas, ledger.contacts)))
    return out


def threshold_study(thresholds, rigid: RigidParams = RigidParams(),
                    samples_per_circle: int = DEFAULT_SAMPLES_PER_CIRCLE):
    """Oloid and matched-cylinder rigid CDS per contact threshold.

    Returns ``[(eps, cds_oloid, cds_cylinder, ratio), ...]``.
    """
    oloid = generate_two_circle_roller(OLOID, samples_per_circle)
    cylinder = matched_cylinder(oloid)
    out = []
    for eps in thresholds:
        params = rigid.with_(contact_threshold=float(eps))
        co = distribution_score(oloid.face_areas, rigid_roll(oloid, params).contacts)
        cc = distribution_score(cylinder.face_areas, rigid_roll(cylinder, params).contacts)
        out.append((float(eps), co, cc, cc / co))
    return out
