"""Acceptance gate: one test and one printed pass/fail line per criterion."""
import math
import os
import time

import numpy as np
import pytest

from rollscore import cli, io
from rollscore.curvature import angle_defects, compute_curvatures
from rollscore.dynamics import RigidParams, rigid_roll, rigid_roll_with_physics, uniform_contact_ledger
from rollscore.mesh import RollerGenome, generate_box, generate_icosphere, generate_two_circle_roller
from rollscore.scores import (MaterialSuite, archard_wear_volume, basquin_cycles_to_failure,
                              distribution_score, hertz_peak_pressure, score_report)
from rollscore.search import (OLOID, SearchGrid, convergence_study, resolution_study, run_search,
                              sensitivity_sweep, threshold_study)

WORKERS = int(os.environ.get("ROLLSCORE_WORKERS", os.cpu_count() or 1))


@pytest.fixture(scope="module")
def physics_reports(oloid, cylinder, oloid_curvature, cylinder_curvature):
    materials = MaterialSuite(fatigue_load=5000.0)
    return {
        "oloid": score_report(oloid, rigid_roll_with_physics(oloid, RigidParams(), materials,
                                                             oloid_curvature)),
        "cylinder": score_report(cylinder, rigid_roll_with_physics(cylinder, RigidParams(),
                                                                   materials, cylinder_curvature)),
    }


def test_criterion_01_discrimination_ratio(oloid, cylinder, criterion):
    start = time.perf_counter()
    matched = abs(cylinder.n_faces - oloid.n_faces) <= 0.1 * oloid.n_faces
    cds_o = distribution_score(oloid.face_areas, rigid_roll(oloid).contacts)
    cds_c = distribution_score(cylinder.face_areas, rigid_roll(cylinder).contacts)
    elapsed = time.perf_counter() - start
    ratio = cds_c / cds_o
    ok = matched and ratio >= 20 and elapsed <= 120
    band = "inside" if 30 <= ratio <= 120 else "outside"
    assert criterion(1, ok, f"CDS ratio cylinder/oloid = {ratio:.1f} (>= 20; {band} target "
                            f"band [30, 120]); faces {oloid.n_faces}/{cylinder.n_faces}; "
                            f"{elapsed:.1f} s")


def test_criterion_02_oloid_is_local_optimum(criterion):
    start = time.perf_counter()
    results = run_search(SearchGrid(), top_k=5, workers=WORKERS)
    elapsed = time.perf_counter() - start
    anchor = next(r for r in results if r.genome == OLOID)
    first = results[0]
    name = "cylinder" if first.is_baseline else first.genome.label()
    ok = anchor.rigid_rank == 1 and elapsed <= 900
    assert criterion(2, ok, f"oloid rigid rank = {anchor.rigid_rank} of "
                            f"{sum(r.rigid is not None for r in results)} (needs 1); best is "
                            f"{name} at {first.rigid.cds:.3e} vs oloid {anchor.rigid.cds:.3e}; "
                            f"{elapsed:.1f} s")


def test_criterion_03_tier1_transfer(physics_reports, criterion):
    o, c = physics_reports["oloid"], physics_reports["cylinder"]
    cds_ratio = c.cds / o.cds
    ratios = {k: getattr(c, k) / getattr(o, k) for k in ("sds", "tds", "wds_vol")}
    ok = all(r >= 20 and cds_ratio / 3 <= r <= 3 * cds_ratio for r in ratios.values())
    text = ", ".join(f"{k} {v:.1f}" for k, v in ratios.items())
    assert criterion(3, ok, f"ratios {text} (each >= 20, within 3x of CDS ratio {cds_ratio:.1f})")


def test_criterion_04_fatigue_divergence(physics_reports, criterion):
    o, c = physics_reports["oloid"], physics_reports["cylinder"]
    ok = c.fds == math.inf and math.isfinite(o.fds) and o.fds > o.cds
    assert criterion(4, ok, f"cylinder FDS = {c.fds:.3e} (needs inf); oloid FDS = {o.fds:.3e} "
                            f"(needs finite > CDS {o.cds:.3e})")


def test_criterion_05_convergence(oloid, criterion):
    start = time.perf_counter()
    (n_lo, lo), (n_hi, hi) = convergence_study(oloid, [50, 600])
    elapsed = time.perf_counter() - start
    factor = lo / hi
    ok = 5 <= factor <= 20 and elapsed <= 60
    assert criterion(5, ok, f"CDS reduction {n_lo}->{n_hi} samples = {factor:.2f} (in [5, 20]); "
                            f"{elapsed:.1f} s")


def test_criterion_06_resolution_scaling(criterion):
    start = time.perf_counter()
    fit = resolution_study(OLOID, [100, 200, 350, 600], workers=WORKERS)
    elapsed = time.perf_counter() - start
    ok = (len(fit.points) >= 4 and -2.5 <= fit.exponent <= -1.5 and fit.r_squared >= 0.95
          and elapsed <= 600)
    assert criterion(6, ok, f"exponent = {fit.exponent:.3f} (in [-2.5, -1.5]), "
                            f"R^2 = {fit.r_squared:.4f} (>= 0.95), {len(fit.points)} "
                            f"resolutions; {elapsed:.1f} s")


def test_criterion_07_threshold_robustness(criterion):
    rows = threshold_study([0.01, 0.02, 0.04, 0.08, 0.16])
    ratios = [r[3] for r in rows]
    spread = max(ratios) / min(ratios)
    text = ", ".join(f"{e:g}:{q:.1f}" for e, _, _, q in rows)
    assert criterion(7, spread <= 2.0, f"ratio spread = {spread:.2f} (<= 2) over eps "
                                       f"[0.01, 0.16]; ratios {text}")


def test_criterion_08_sensitivity_gradients(criterion):
    (_, rho_lo), (_, rho_hi) = sensitivity_sweep(OLOID, "rho", [0.80, 1.20])
    (_, d_lo), (_, d_hi) = sensitivity_sweep(OLOID, "d", [0.70, 1.30])
    ok = rho_lo < rho_hi and d_lo < d_hi
    assert criterion(8, ok, f"CDS(rho .8)={rho_lo:.3e} < CDS(rho 1.2)={rho_hi:.3e}; "
                            f"CDS(d .7)={d_lo:.3e} < CDS(d 1.3)={d_hi:.3e}")


def test_criterion_09_geometry_only_sds(oloid, oloid_curvature, physics_reports, criterion):
    uniform = score_report(oloid, uniform_contact_ledger(oloid, oloid_curvature)).sds
    trajectory = physics_reports["oloid"].sds
    frac = uniform / trajectory
    assert criterion(9, frac <= 0.25, f"uniform SDS {uniform:.3e} / trajectory SDS "
                                      f"{trajectory:.3e} = {frac:.2%} (<= 25%)")


def test_criterion_10_analytic_oracles(criterion):
    checks = {}
    a = np.array([0.3, 1.1, 2.0])
    checks["uniform -> 0"] = distribution_score(a, 5 * a) < 1e-18
    checks["two-face 0.25"] = abs(distribution_score([1.0, 1.0], [1.0, 0.0]) - 0.25) < 1e-15
    olo = generate_two_circle_roller(RollerGenome.oloid(), 400)
    checks["oloid area 4pi"] = abs(olo.total_area - 4 * math.pi) / (4 * math.pi) < 0.02
    checks["cube inertia m/6"] = np.allclose(generate_box().inertia_tensor, np.eye(3) / 6,
                                             rtol=0, atol=1e-9)
    defect = angle_defects(generate_icosphere(3)).sum()
    checks["Gauss-Bonnet 4pi"] = abs(defect - 4 * math.pi) < 1e-6
    p1, p8 = hertz_peak_pressure(0.01, 100.0), hertz_peak_pressure(0.01, 800.0)
    checks["Hertz F^(1/3)"] = abs(p8 / p1 - 2.0) < 1e-9 * 2.0
    checks["Basquin N(sf')=1"] = basquin_cycles_to_failure(MaterialSuite().fatigue_strength_coeff) == 1.0
    w1, w3 = archard_wear_volume(100.0, 1.0), archard_wear_volume(100.0, 3.0)
    checks["Archard linear"] = w3 == pytest.approx(3 * w1, rel=1e-15)
    failed = [k for k, v in checks.items() if not v]
    assert criterion(10, not failed, f"{len(checks) - len(failed)}/{len(checks)} oracles exact"
                                     + (f"; failed: {', '.join(failed)}" if failed else ""))


def test_criterion_11_determinism(tmp_path, criterion):
    args = ["score", "--oloid", "--layer", "rigid+physics"]
    codes = [cli.main(args + ["-o", str(tmp_path / f"run{i}.json")]) for i in (1, 2)]
    a, b = (tmp_path / "run1.json").read_bytes(), (tmp_path / "run2.json").read_bytes()
    record = io.read_json(tmp_path / "run1.json")
    replay = cli.evaluate(cli.RunConfig.from_dict(record["config"])).to_dict()
    ok = codes == [0, 0] and a == b and io.dumps(replay) == io.dumps(record["report"])
    assert criterion(11, ok, f"two runs bit-identical: {a == b}; replay from embedded config "
                             f"identical: {io.dumps(replay) == io.dumps(record['report'])}")
