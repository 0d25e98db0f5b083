import numpy as np
import pytest

from ofotune import (
    OfoParams,
    ScalingSensitivity,
    adapt_heuristic,
    adapt_ift_analogue,
    adapt_sdp,
    spd_project_check,
)

from helpers import random_spd

APPENDIX_SK = np.array([[0.11, -0.1], [-0.1, 0.1]])


def _params(n=2, mode="sdp-full", p_max=1.0, t_min=1e-6, t_max=1000.0, **kw):
    return OfoParams(alpha0=0.01, alpha_max=0.01, S0=np.eye(n), mode=mode,
                     p_max=p_max, t_min=t_min, t_max=t_max, **kw)


def _check_certificate(S, D, res, params):
    Ssym = 0.5 * (res.deltaS + res.deltaS.T)
    assert np.max(np.abs(res.deltaS - res.deltaS.T)) <= 1e-9
    eigs = np.linalg.eigvalsh(S + Ssym)
    assert eigs.min() >= res.t - 1e-8
    assert eigs.max() <= params.t_max + 1e-8
    Dsym = 0.5 * (D + D.T)
    assert float(np.sum(Dsym * res.deltaS)) <= -res.p + 1e-8
    assert -1e-12 <= res.p <= params.p_max + 1e-8
    assert params.t_min - 1e-12 <= res.t <= params.t_max + 1e-12


def test_zero_sensitivity_pinches_to_tmax():
    params = _params(t_max=50.0)
    S = np.diag([1.0, 3.0])
    res = adapt_sdp(S, ScalingSensitivity(np.zeros((2, 2))), params)
    assert res.status == "optimal"
    assert np.allclose(S + res.deltaS, 50.0 * np.eye(2), atol=1e-6)
    assert res.t == pytest.approx(50.0, abs=1e-6)
    assert res.p == pytest.approx(0.0, abs=1e-8)


def test_scalar_descent_example():
    # S=1, D=+5: the descent row drives S down to t_min, p = 5 (1 - t_min)
    params = _params(n=1, p_max=10.0, t_min=1e-6, t_max=1000.0)
    res = adapt_sdp(np.array([[1.0]]), ScalingSensitivity(np.array([[5.0]])), params)
    assert res.status == "optimal"
    assert res.deltaS[0, 0] == pytest.approx(params.t_min - 1.0, abs=1e-6)
    assert res.p == pytest.approx(min(10.0, 5.0 * (1.0 - params.t_min)), abs=1e-5)
    assert res.t == pytest.approx(params.t_min, abs=1e-8)


def test_scalar_descent_example_diagonal_lp():
    params = _params(n=1, mode="sdp-diagonal", p_max=10.0)
    res = adapt_sdp(np.array([[1.0]]), ScalingSensitivity(np.array([[5.0]])), params)
    assert res.status == "optimal"
    assert res.deltaS[0, 0] == pytest.approx(params.t_min - 1.0, abs=1e-9)
    assert res.p == pytest.approx(5.0 * (1.0 - params.t_min), abs=1e-9)


def test_sdp_certificates_random():
    rng = np.random.default_rng(77)
    params_by_n = {}
    for _ in range(40):
        n = int(rng.choice([2, 3]))
        params = params_by_n.setdefault(n, _params(n=n, p_max=float(rng.uniform(0.1, 10.0))))
        S = random_spd(rng, n, eig_lo=params.t_min + 0.1, eig_hi=min(50.0, params.t_max))
        M = rng.normal(scale=rng.uniform(0.01, 5.0), size=(n, n))
        D = 0.5 * (M + M.T)
        res = adapt_sdp(S, ScalingSensitivity(D), params)
        assert res.status == "optimal"
        _check_certificate(S, D, res, params)


def test_diagonal_lp_certificates_random():
    rng = np.random.default_rng(78)
    for _ in range(40):
        n = int(rng.choice([2, 3, 5]))
        params = _params(n=n, mode="sdp-diagonal", p_max=float(rng.uniform(0.1, 10.0)))
        S = np.diag(rng.uniform(1e-3, 900.0, size=n))
        D = np.diag(rng.normal(scale=rng.uniform(0.01, 5.0), size=n))
        res = adapt_sdp(S, ScalingSensitivity(D), params)
        assert res.status == "optimal"
        assert np.count_nonzero(res.deltaS - np.diag(np.diag(res.deltaS))) == 0
        _check_certificate(S, D, res, params)
        # tie-break: no gratuitous decreases where D_i <= 0
        ds = np.diag(res.deltaS)
        Dd = np.diag(D)
        assert not np.any((Dd <= 0) & (ds < -1e-12))


def test_diagonal_mode_requires_diagonal_metric():
    params = _params(mode="sdp-diagonal")
    res = adapt_sdp(APPENDIX_SK, ScalingSensitivity(np.eye(2)), params)
    assert res.status == "numerical-failure"


def test_predicted_change_never_positive():
    rng = np.random.default_rng(79)
    for _ in range(20):
        params = _params(p_max=2.0, t_max=10.0)
        S = random_spd(rng, 2, eig_lo=0.5, eig_hi=9.0)
        M = rng.normal(size=(2, 2))
        D = 0.5 * (M + M.T)
        res = adapt_sdp(S, ScalingSensitivity(D), params)
        assert res.status == "optimal"
        assert float(np.sum(D * res.deltaS)) <= 1e-8  # Frobenius descent


def test_heuristic_branches():
    params = _params(mode="heuristic-diagonal", beta1=0.1, beta2=0.2)
    out = adapt_heuristic(np.array([1000.0]), np.array([1.0]), params)
    assert out[0] == pytest.approx(800.0)
    out = adapt_heuristic(np.array([params.t_max]), np.array([-1.0]), params)
    assert out[0] == params.t_max  # clamped
    out = adapt_heuristic(np.array([3.0]), np.array([0.0]), params)
    assert out[0] == 3.0


def test_heuristic_bounds_and_monotonicity():
    rng = np.random.default_rng(80)
    params = _params(mode="heuristic-diagonal")
    for _ in range(100):
        S = rng.uniform(params.t_min, params.t_max, size=4)
        D = rng.normal(size=4)
        out = adapt_heuristic(S, D, params)
        assert np.all(out >= params.t_min) and np.all(out <= params.t_max)
        # entry-wise monotone for a fixed sign pattern
        S2 = S * rng.uniform(1.0, 1.1, size=4)
        S2 = np.minimum(S2, params.t_max)
        out2 = adapt_heuristic(S2, D, params)
        assert np.all(out2 >= out - 1e-12)


def test_ift_analogue_rule():
    params = _params(mode="heuristic-diagonal")
    out = adapt_ift_analogue(np.array([1.0]), np.array([0.0]), params)
    assert out[0] == 1.0
    out = adapt_ift_analogue(np.array([1.0]), np.array([-0.5]), params)
    assert out[0] == pytest.approx(0.5)  # (1 + beta1) S with beta1 = -0.5


def test_remark1_regression():
    # multiplicative update on one diagonal entry of a non-diagonal SPD matrix
    S_next = APPENDIX_SK.copy()
    S_next[0, 0] *= 0.9
    eigs = np.linalg.eigvalsh(S_next)
    assert eigs == pytest.approx([-0.0005, 0.1995], abs=1e-4)
    assert not spd_project_check(S_next, 1e-6)
