import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy.spatial.transform import Rotation

from rollscore.curvature import CurvatureField, compute_curvatures
from rollscore.dynamics import (ApproxParams, ContactLedger, RigidParams, approx_roll,
                                approx_rotations, quat_increment, quat_multiply, quat_to_matrix,
                                rigid_roll, rigid_roll_with_physics, rigid_trajectory,
                                uniform_contact_ledger)
from rollscore.errors import IntegrationDiverged, MissingCurvature
from rollscore.mesh import RollerGenome, generate_box, generate_two_circle_roller
from rollscore.scores import MaterialSuite, distribution_score, score_report

unit_quats = arrays(np.float64, 4, elements=st.floats(-1, 1)).filter(
    lambda q: np.linalg.norm(q) > 0.1).map(lambda q: q / np.linalg.norm(q))


def _cds(mesh, ledger):
    return distribution_score(mesh.face_areas, ledger.contacts)


@settings(max_examples=100, deadline=None)
@given(q=unit_quats)
def test_quaternion_matrix_matches_scipy(q):
    expected = Rotation.from_quat([q[1], q[2], q[3], q[0]]).as_matrix()
    np.testing.assert_allclose(quat_to_matrix(q), expected, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(w=arrays(np.float64, 3, elements=st.floats(-20, 20)), dt=st.floats(1e-4, 0.1))
def test_quaternion_increment_is_rotation_vector(w, dt):
    expected = Rotation.from_rotvec(w * dt).as_matrix()
    np.testing.assert_allclose(quat_to_matrix(quat_increment(w, dt)), expected, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(a=unit_quats, b=unit_quats)
def test_quaternion_product_composes_rotations(a, b):
    np.testing.assert_allclose(quat_to_matrix(quat_multiply(a, b)),
                               quat_to_matrix(a) @ quat_to_matrix(b), atol=1e-12)


def test_approx_rotations_are_orthonormal():
    rots = approx_rotations(ApproxParams(steps=50))
    assert rots.shape == (50, 3, 3)
    np.testing.assert_allclose(np.einsum("nij,nkj->nik", rots, rots),
                               np.broadcast_to(np.eye(3), rots.shape), atol=1e-12)


def test_approx_single_step(oloid):
    ledger = approx_roll(oloid, ApproxParams(steps=1))
    assert ledger.samples == 1
    assert ledger.contacts.sum() >= 1


def test_approx_oloid_near_reference_score():
    # 450 samples per circle gives 1200 faces, the closest match to the reference mesh
    mesh = generate_two_circle_roller(RollerGenome.oloid(), 450)
    assert _cds(mesh, approx_roll(mesh)) == pytest.approx(2.0e-6, rel=0.5)


def test_approx_top_candidate_beats_oloid(oloid):
    cand = generate_two_circle_roller(RollerGenome(120.0, 0.70, 0.80))
    assert _cds(cand, approx_roll(cand)) < _cds(oloid, approx_roll(oloid))


def test_approx_params_validation():
    with pytest.raises(ValueError):
        ApproxParams(steps=0)
    with pytest.raises(ValueError):
        ApproxParams(contact_threshold=0.0)


def test_rigid_params_counts():
    p = RigidParams()
    assert p.runs == 3
    assert p.steps_per_run == 5000
    assert p.samples_per_run == 200
    assert p.total_samples == 600
    assert RigidParams.from_dict(p.to_dict()) == p


def test_rigid_oloid_score_band(oloid):
    ledger = rigid_roll(oloid)
    assert ledger.samples == 600
    assert 3e-7 <= _cds(oloid, ledger) <= 3e-6


def test_rigid_is_deterministic(oloid):
    params = RigidParams(sim_time=1.0)
    a, b = rigid_roll(oloid, params), rigid_roll(oloid, params)
    np.testing.assert_array_equal(a.contacts, b.contacts)


def test_overdamped_body_stalls(oloid):
    default = _cds(oloid, rigid_roll(oloid))
    stalled = _cds(oloid, rigid_roll(oloid, RigidParams(damping=1e3)))
    assert stalled > 5 * default


def test_damped_energy_does_not_grow(oloid):
    log = []
    for _ in rigid_trajectory(oloid, RigidParams(sim_time=4.0), (1.0, 0.0, 0.0), log):
        pass
    e = np.array([k + p for k, p in log])
    window = 100
    # the pivot jumps between support vertices, so allow a small per-window increase
    rises = (e[window:] - e[:-window]) / e[:-window]
    assert rises.max() < 0.01
    assert e[-1] < e[0]


def test_torque_free_spin_conserves_angular_momentum():
    box = generate_box((1.0, 2.0, 3.0))
    params = RigidParams(sim_time=0.5, dt=1e-4, gravity=0.0, damping=0.0, sample_interval=50)
    samples = list(rigid_trajectory(box, params, (0.3, 2.0, 0.1)))
    inertia = box.inertia_tensor
    L = [s.rotation @ inertia @ s.rotation.T @ s.angular_velocity for s in samples]
    # explicit gyroscopic step drifts at O(dt); over 0.5 s the drift stays small
    np.testing.assert_allclose(L[-1], L[0], rtol=2e-3, atol=2e-3)


def test_divergence_is_reported(oloid):
    with pytest.raises(IntegrationDiverged):
        rigid_roll(oloid, RigidParams(dt=0.5, sim_time=500.0, initial_spins=((50.0, 0, 0),)))


def test_balanced_rest_has_no_sliding(oloid, oloid_curvature):
    params = RigidParams(sim_time=1.0, gravity=0.0, initial_spins=((0.0, 0.0, 0.0),))
    ledger = rigid_roll_with_physics(oloid, params, MaterialSuite(), oloid_curvature)
    assert ledger.contacts.sum() > 0
    assert ledger.heat.sum() == 0.0
    assert ledger.wear.sum() == 0.0


def test_physics_requires_matching_curvature(oloid):
    with pytest.raises(MissingCurvature):
        rigid_roll_with_physics(oloid, RigidParams(sim_time=0.1), MaterialSuite(),
                                compute_curvatures(generate_box()))


def test_physics_contacts_match_plain_rigid(oloid, oloid_curvature):
    params = RigidParams(sim_time=2.0)
    plain = rigid_roll(oloid, params)
    full = rigid_roll_with_physics(oloid, params, MaterialSuite(), oloid_curvature)
    np.testing.assert_array_equal(plain.contacts, full.contacts)


def test_oloid_mean_pressure_band(oloid, oloid_curvature):
    ledger = rigid_roll_with_physics(oloid, RigidParams(), MaterialSuite(), oloid_curvature)
    mean_p, cv = ledger.pressure_stats()
    assert 30e6 <= mean_p <= 150e6
    assert cv > 0


def test_cylinder_fatigue_is_infinite(cylinder, cylinder_curvature):
    ledger = rigid_roll_with_physics(cylinder, RigidParams(), MaterialSuite(fatigue_load=5000.0),
                                     cylinder_curvature)
    assert ledger.damage.sum() == 0.0
    assert score_report(cylinder, ledger).fds == math.inf


def test_uniform_contact_with_constant_radius_has_zero_sds(oloid):
    n = oloid.n_faces
    flat = CurvatureField(np.ones(oloid.n_vertices), np.ones(oloid.n_vertices), np.ones(n),
                          np.ones(n), np.full(n, 0.5), np.ones(oloid.n_vertices))
    report = score_report(oloid, uniform_contact_ledger(oloid, flat))
    assert report.cds == pytest.approx(0.0, abs=1e-20)
    assert report.sds == pytest.approx(0.0, abs=1e-20)
    assert report.pressure_cv == pytest.approx(0.0, abs=1e-12)


def test_uniform_contact_curvature_cv_is_small_for_discrete_oloid(oloid, oloid_curvature):
    _, cv = uniform_contact_ledger(oloid, oloid_curvature).pressure_stats()
    assert 0 < cv < 0.2


@pytest.mark.xfail(strict=True, reason="the discrete estimator's R_eff field on the hull is far "
                                       "smoother than the analytically corrected one; CV ~0.03")
def test_uniform_contact_pressure_cv_reference(oloid, oloid_curvature):
    _, cv = uniform_contact_ledger(oloid, oloid_curvature).pressure_stats()
    assert cv == pytest.approx(0.30, abs=0.1)


ledger_arrays = arrays(np.float64, 6, elements=st.floats(0, 10))


@st.composite
def ledgers(draw):
    led = ContactLedger.empty(6)
    for name in ("contacts", "stress", "heat", "damage", "wear"):
        setattr(led, name, draw(ledger_arrays))
    led.record_pressures(draw(arrays(np.float64, 3, elements=st.floats(1e6, 1e9))))
    led.samples = draw(st.integers(0, 100))
    return led


def _same(a, b):
    for name in ("contacts", "stress", "heat", "damage", "wear", "pressure_moments"):
        np.testing.assert_allclose(getattr(a, name), getattr(b, name), rtol=1e-12)
    assert a.samples == b.samples


@settings(max_examples=100, deadline=None)
@given(a=ledgers(), b=ledgers(), c=ledgers())
def test_ledger_merge_is_commutative_and_associative(a, b, c):
    _same(a + b, b + a)
    _same((a + b) + c, a + (b + c))


def test_ledger_merge_rejects_mismatch():
    with pytest.raises(ValueError):
        ContactLedger.empty(3) + ContactLedger.empty(4)
