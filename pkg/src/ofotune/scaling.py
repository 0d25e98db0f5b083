"""Metric adaptation: eigenvalue-bounded SDP, diagonal LP, and heuristic rules.

The full-matrix step solves

    min  -p - t
    s.t. <D, dS>_F <= -p
         S + dS - t I  PSD          (smallest eigenvalue >= t)
         t_max I - (S + dS)  PSD    (spectral norm <= t_max; valid as the
                                     largest-eigenvalue bound since S+dS > 0)
         dS symmetric, p in [0, p_max], t in [t_min, t_max]

so the predicted cost change <D, dS>_F is forced nonpositive while the
smallest eigenvalue of the new metric is pushed up. Restricting dS to
diagonal turns both matrix inequalities into per-entry bounds and the whole
problem into a linear program.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .model import OfoParams, ScalingSensitivity

_EIG_TOL = 1e-8
_SYM_TOL = 1e-9


@dataclass(frozen=True)
class SdpResult:
    deltaS: np.ndarray
    p: float
    t: float
    status: str  # optimal | infeasible | numerical-failure


class _FullSdp:
    """Parameterized eigenvalue-bound SDP, canonicalized once per shape."""

    def __init__(self, n: int, t_min: float, t_max: float, p_max: float):
        import cvxpy as cp

        self._cp = cp
        self.D = cp.Parameter((n, n), symmetric=True)
        self.S = cp.Parameter((n, n), symmetric=True)
        self.dS = cp.Variable((n, n), symmetric=True)
        self.p = cp.Variable()
        self.t = cp.Variable()
        eye = np.eye(n)
        constraints = [
            cp.sum(cp.multiply(self.D, self.dS)) <= -self.p,
            self.S + self.dS - self.t * eye >> 0,
            t_max * eye - (self.S + self.dS) >> 0,
            self.p >= 0.0,
            self.p <= p_max,
            self.t >= t_min,
            self.t <= t_max,
        ]
        self.problem = cp.Problem(cp.Minimize(-self.p - self.t), constraints)

    def solve(self, S: np.ndarray, D: np.ndarray):
        cp = self._cp
        self.D.value = D
        self.S.value = S
        try:
            # tighter-than-default feasibility so the exact eigenvalue
            # projection downstream moves the certificate by < 1e-8
            self.problem.solve(
                solver=cp.CLARABEL,
                tol_gap_abs=1e-11, tol_gap_rel=1e-11,
                tol_feas=1e-11, max_iter=200,
            )
        except cp.error.SolverError:
            return None
        if self.problem.status not in ("optimal", "optimal_inaccurate"):
            return None
        return self.dS.value, float(self.p.value), float(self.t.value)


_SDP_CACHE: dict = {}


def _full_sdp(n: int, t_min: float, t_max: float, p_max: float) -> _FullSdp:
    key = (n, t_min, t_max, p_max)
    if key not in _SDP_CACHE:
        _SDP_CACHE[key] = _FullSdp(n, t_min, t_max, p_max)
    return _SDP_CACHE[key]


def _diagonal_lp(S_diag, D_diag, params: OfoParams):
    """LP form of the adaptation for diagonal metrics.

    Variables x = [dS_1..dS_n, p, t]; rows: sum_i D_i dS_i + p <= 0 and
    t - dS_i <= S_i for each i.
    """
    n = S_diag.size
    c = np.zeros(n + 2)
    c[n] = -1.0
    c[n + 1] = -1.0
    rows = [np.concatenate([D_diag, [1.0, 0.0]])]
    rhs = [0.0]
    for i in range(n):
        row = np.zeros(n + 2)
        row[i] = -1.0
        row[n + 1] = 1.0
        rows.append(row)
        rhs.append(S_diag[i])
    bounds = [(params.t_min - S_diag[i], params.t_max - S_diag[i]) for i in range(n)]
    bounds += [(0.0, params.p_max), (params.t_min, params.t_max)]
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if not res.success:
        return None
    ds = res.x[:n].copy()
    p, t = float(res.x[n]), float(res.x[n + 1])
    # Alternate-optimum tie-break: a decrease of S_i can only serve the descent
    # row, so when D_i <= 0 a negative dS_i is gratuitous. Lifting it to 0
    # keeps every row satisfied (D_i dS_i can only shrink, t <= S_i + old dS_i
    # <= S_i) and leaves the objective value -p-t untouched.
    lift = (D_diag <= 0.0) & (ds < 0.0)
    ds[lift] = 0.0
    return ds, p, t


def _tighten(S, D_sym, deltaS, p, t, params: OfoParams):
    """Project solver output exactly onto the certificate it claims.

    Conic solvers meet their own feasibility tolerances, which at t_max ~ 1e3
    can sit above the 1e-8 eigenvalue slack this module promises. Eigenvalues
    of S + deltaS within 1e-6 of the [t, t_max] band are clipped onto it and p
    is re-tightened against the projected descent value; anything further off
    is a genuine solve failure.
    """
    t = float(min(max(t, params.t_min), params.t_max))
    S_new = S + 0.5 * (deltaS + deltaS.T)
    S_new = 0.5 * (S_new + S_new.T)
    eigs, vecs = np.linalg.eigh(S_new)
    if eigs.min() < t - 1e-6 or eigs.max() > params.t_max + 1e-6:
        return None
    S_new = (vecs * np.clip(eigs, t, params.t_max)) @ vecs.T
    deltaS = S_new - S
    deltaS = 0.5 * (deltaS + deltaS.T)
    descent = float(np.sum(D_sym * deltaS))
    p = float(min(max(p, 0.0), params.p_max, max(0.0, -descent)))
    return deltaS, p, t


def _check_result(S, D_sym, deltaS, p, t, params: OfoParams) -> bool:
    """Machine-check the optimality certificate the result must carry."""
    if deltaS is None or not np.all(np.isfinite(deltaS)):
        return False
    if np.max(np.abs(deltaS - deltaS.T)) > _SYM_TOL:
        return False
    eigs = np.linalg.eigvalsh(0.5 * (S + deltaS + (S + deltaS).T))
    if eigs.min() < t - _EIG_TOL or eigs.max() > params.t_max + _EIG_TOL:
        return False
    if float(np.sum(D_sym * deltaS)) > -p + _EIG_TOL:
        return False
    if not (-_EIG_TOL <= p <= params.p_max + _EIG_TOL):
        return False
    if not (params.t_min - _EIG_TOL <= t <= params.t_max + _EIG_TOL):
        return False
    return True


def adapt_sdp(S, D: ScalingSensitivity, params: OfoParams) -> SdpResult:
    """Select the metric change dS by the eigenvalue-bound program.

    Mode 'sdp-diagonal' requires a diagonal S and solves the LP reduction;
    any solver trouble is reported as numerical-failure (the caller keeps S).
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    n = S.shape[0]
    D_sym = 0.5 * (D.D + D.D.T)
    failure = SdpResult(deltaS=np.zeros((n, n)), p=0.0, t=params.t_min, status="numerical-failure")

    if params.mode == "sdp-diagonal":
        off = S - np.diag(np.diag(S))
        if np.max(np.abs(off), initial=0.0) > 1e-12:
            return failure
        out = _diagonal_lp(np.diag(S).copy(), np.diag(D_sym).copy(), params)
        if out is None:
            return failure
        ds, p, t = out
        deltaS = np.diag(ds)
    else:
        out = _full_sdp(n, params.t_min, params.t_max, params.p_max).solve(S, D_sym)
        if out is None:
            return failure
        deltaS, p, t = out

    tightened = _tighten(S, D_sym, deltaS, p, t, params)
    if tightened is None:
        return failure
    deltaS, p, t = tightened
    if params.mode == "sdp-diagonal":
        deltaS = np.diag(np.diag(deltaS))
    if not _check_result(S, D_sym, deltaS, p, t, params):
        return failure
    return SdpResult(deltaS=deltaS, p=p, t=t, status="optimal")


def adapt_heuristic(S_diag, D_diag, params: OfoParams) -> np.ndarray:
    """Multiplicative per-entry rule for diagonal metrics.

    Grow by (1+beta1) where the cost falls with the entry (D_i < 0), shrink by
    (1-beta2) where it rises, hold otherwise; clamp to [t_min, t_max].
    """
    S_diag = np.asarray(S_diag, dtype=float).copy()
    D_diag = np.asarray(D_diag, dtype=float)
    grow = D_diag < 0.0
    shrink = D_diag > 0.0
    S_diag[grow] *= 1.0 + params.beta1
    S_diag[shrink] *= 1.0 - params.beta2
    return np.clip(S_diag, params.t_min, params.t_max)


def adapt_ift_analogue(S_diag, D_diag, params: OfoParams) -> np.ndarray:
    """Iterative-feedback-tuning analogue: rates beta1 = -beta2 = D_i / S_i.

    Diagonal-only by construction; the multiplicative update applied to one
    entry of a non-diagonal matrix can break positive definiteness (see the
    regression test with the 2x2 counterexample). Experimental.
    """
    S_diag = np.asarray(S_diag, dtype=float)
    D_diag = np.asarray(D_diag, dtype=float)
    if np.any(S_diag <= 0.0):
        raise ValueError("IFT-analogue rule needs positive diagonal entries")
    out = S_diag.copy()
    rate = D_diag / S_diag
    grow = D_diag < 0.0
    shrink = D_diag > 0.0
    out[grow] = (1.0 + rate[grow]) * S_diag[grow]
    out[shrink] = (1.0 - (-rate[shrink])) * S_diag[shrink]
    return np.clip(out, params.t_min, params.t_max)
