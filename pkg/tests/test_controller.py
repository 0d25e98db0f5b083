import numpy as np
import pytest

from ofotune import (
    ConstraintSet,
    OfoParams,
    PlantModel,
    initial_state,
    ofo_iteration,
    run,
    toy_plant,
)


def _toy_params(**kw):
    defaults = dict(alpha0=0.01, alpha_max=0.01, S0=np.eye(2), mode="fixed",
                    p_max=1.0, t_max=1000.0)
    defaults.update(kw)
    return OfoParams(**defaults)


def test_fixed_point_at_optimum():
    # a flat plant has w = 0 everywhere: state must not move
    plant = PlantModel(
        name="flat", n_u=2, n_y=1,
        measure=lambda u: np.array([0.5]),
        sensitivity=lambda u, y: np.zeros((1, 2)),
        objective=lambda u, y: 1.0,
        grad_u=lambda u, y: np.zeros(2),
        grad_y=lambda u, y: np.zeros(1),
    )
    cons = ConstraintSet.box([-1, -1], [1, 1], [0], [1])
    params = _toy_params(mode="sdp-full", step_adaptation=True)
    state = initial_state(plant, params, np.array([0.2, -0.3]))
    next_state, rec = ofo_iteration(state, plant, cons, params)
    assert np.array_equal(next_state.u, state.u)
    assert not rec.adapted
    assert np.array_equal(next_state.S, params.S0)
    assert next_state.alpha == params.alpha0


def test_toy_fixed_baseline_convergence_index():
    plant, cons = toy_plant()
    trace = run(plant, cons, _toy_params(), np.array([-0.8, -0.5]), 100)
    phis = trace.phis
    hits = np.nonzero(np.abs(phis - (-1.625)) <= 1e-3)[0]
    assert hits.size > 0
    assert 77 <= hits[0] <= 87


def test_input_constraints_hold_on_traces():
    plant, cons = toy_plant()
    for params in (_toy_params(), _toy_params(mode="sdp-full", step_adaptation=True)):
        trace = run(plant, cons, params, np.array([-0.8, -0.5]), 100)
        for rec in trace.records:
            assert np.all(cons.A @ rec.u <= cons.b + 1e-6)


def test_trigger_semantics():
    plant, cons = toy_plant()
    params = _toy_params(mode="sdp-full", step_adaptation=True)
    state = initial_state(plant, params, np.array([-0.8, -0.5]))
    # first iteration has no sensitivity yet: never adapted
    state1, rec0 = ofo_iteration(state, plant, cons, params)
    assert not rec0.adapted
    # second iteration: directional derivative of the previous step is negative
    g1 = state1.reduced_grad
    assert float(g1 @ state1.w) < 0.0
    state2, rec1 = ofo_iteration(state1, plant, cons, params)
    assert rec1.adapted


def test_deterministic_bit_identical():
    plant, cons = toy_plant()
    t1 = run(plant, cons, _toy_params(), np.array([-0.8, -0.5]), 50)
    t2 = run(plant, cons, _toy_params(), np.array([-0.8, -0.5]), 50)
    for a, b in zip(t1.records, t2.records):
        assert np.array_equal(a.u, b.u) and np.array_equal(a.w, b.w)
        assert a.phi == b.phi and a.alpha == b.alpha


def test_zero_iterations_single_record():
    plant, cons = toy_plant()
    trace = run(plant, cons, _toy_params(), np.array([-0.8, -0.5]), 0)
    assert len(trace.records) == 1
    rec = trace.records[0]
    assert rec.k == 0
    assert np.array_equal(rec.w, np.zeros(2))
    assert rec.phi == pytest.approx(4.81)


def test_u0_must_be_feasible():
    plant, cons = toy_plant()
    with pytest.raises(ValueError):
        run(plant, cons, _toy_params(), np.array([2.0, 0.0]), 10)


def test_infeasible_qp_holds_input():
    # output already far beyond the bound and uncorrectable within alpha_max:
    # a tiny y-range plant whose measured y violates d with a zero sensitivity
    plant = PlantModel(
        name="stuck", n_u=1, n_y=1,
        measure=lambda u: np.array([2.0]),  # y = 2 always
        sensitivity=lambda u, y: np.zeros((1, 1)),
        objective=lambda u, y: float(u[0] ** 2),
        grad_u=lambda u, y: np.array([2.0 * u[0]]),
        grad_y=lambda u, y: np.zeros(1),
    )
    cons = ConstraintSet(A=np.array([[1.0], [-1.0]]), b=np.array([1.0, 1.0]),
                         C=np.array([[1.0]]), d=np.array([1.0]))  # y <= 1 impossible
    params = OfoParams(alpha0=0.1, alpha_max=0.1, S0=np.eye(1))
    state = initial_state(plant, params, np.array([0.5]))
    next_state, rec = ofo_iteration(state, plant, cons, params)
    assert rec.qp_status == "infeasible"
    assert np.array_equal(next_state.u, state.u)
    assert np.array_equal(rec.w, np.zeros(1))


def test_converged_termination():
    plant, cons = toy_plant()
    params = _toy_params(mode="sdp-full", step_adaptation=True)
    trace = run(plant, cons, params, np.array([-0.8, -0.5]), 100)
    assert trace.termination == "converged"
    assert len(trace.records) < 101
    assert np.linalg.norm(trace.records[-2].w) <= 1e-9


def test_plant_failure_preserves_partial_trace():
    calls = {"n": 0}

    def measure(u):
        calls["n"] += 1
        if calls["n"] > 3:
            return np.array([np.nan])
        return np.array([u[0] ** 3 + u[0]])

    plant = PlantModel(
        name="fragile", n_u=1, n_y=1,
        measure=measure,
        sensitivity=lambda u, y: np.array([[3.0 * u[0] ** 2 + 1.0]]),
        objective=lambda u, y: float(y[0] ** 2),
        grad_u=lambda u, y: np.zeros(1),
        grad_y=lambda u, y: np.array([2.0 * y[0]]),
    )
    cons = ConstraintSet.box([-2.0], [2.0], [-20.0], [20.0])
    params = OfoParams(alpha0=0.05, alpha_max=0.05, S0=np.eye(1))
    trace = run(plant, cons, params, np.array([0.5]), 10)
    assert trace.termination.startswith("error(")
    assert 1 <= len(trace.records) < 11


def test_metric_spectrum_convention():
    # diagonal modes report diagonal entries in order, full mode sorted eigenvalues
    plant, cons = toy_plant()
    params = _toy_params(mode="heuristic-diagonal", step_adaptation=False,
                         S0=np.diag([7.0, 2.0]))
    state = initial_state(plant, params, np.array([-0.8, -0.5]))
    _, rec = ofo_iteration(state, plant, cons, params)
    assert np.allclose(rec.S_eigs, [7.0, 2.0])
