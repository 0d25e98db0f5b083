"""Per-iteration update QP: assembly and a dense active-set solver.

The update direction w minimizes ||w + S g||^2 measured in the S^-1 norm,
subject to the constraint rows A(u + alpha_max w) <= b and
C(y + grad_h alpha_max w) <= d. Expanding the norm gives the equivalent
quadratic program

    min_w  0.5 w^T P w + q^T w,   P = S^-1,  q = g,
    s.t.   G w <= hvec,           G = [alpha_max A; alpha_max C grad_h],
                                  hvec = [b - A u; d - C y].

All linear solves go through S rather than the explicitly inverted P: with
metric eigenvalues spanning [t_min, t_max] the condition number of P reaches
~1e9 and the inverted form cannot hold the 1e-8 residual contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import IllConditionedMetricError
from .model import ConstraintSet, ControllerState, PlantModel

ACT_TOL = 1e-7        # |G_i w - hvec_i| below this counts as active
MAX_COND = 1e12       # metric condition number triggering assembly failure
_FEAS_EPS = 1e-9


@dataclass(frozen=True)
class QpData:
    """Assembled QP plus the raw pieces needed downstream.

    P/q/G/hvec define the program; S, A, C, nabla_h and n_input_rows are kept
    for stable KKT solves and for implicit differentiation of the solution.
    """

    P: np.ndarray
    q: np.ndarray
    G: np.ndarray
    hvec: np.ndarray
    S: np.ndarray
    A: np.ndarray
    C: np.ndarray
    nabla_h: np.ndarray
    n_input_rows: int
    alpha_max: float

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def m(self) -> int:
        return self.G.shape[0]


@dataclass(frozen=True)
class QpSolution:
    w: np.ndarray
    duals: np.ndarray
    active: tuple
    status: str  # optimal | infeasible | numerical-failure


def assemble_qp(
    state: ControllerState,
    plant: PlantModel,
    cons: ConstraintSet,
    alpha_max: float,
) -> QpData:
    """Build the update QP at the current iterate.

    Raises IllConditionedMetricError when cond(S) exceeds 1e12.
    """
    S = 0.5 * (state.S + state.S.T)
    eigvals, eigvecs = np.linalg.eigh(S)
    if eigvals.min() <= 0.0 or eigvals.max() / eigvals.min() > MAX_COND:
        raise IllConditionedMetricError(
            f"metric eigenvalues {eigvals} unusable for QP assembly"
        )
    # symmetric factorization S = V diag(lam) V^T  =>  P = V diag(1/lam) V^T
    P = (eigvecs / eigvals) @ eigvecs.T
    nabla_h = np.asarray(plant.sensitivity(state.u, state.y), dtype=float)
    nabla_h = nabla_h.reshape(plant.n_y, plant.n_u)
    g = state.reduced_grad
    G = np.vstack([alpha_max * cons.A, alpha_max * (cons.C @ nabla_h)])
    hvec = np.concatenate([cons.b - cons.A @ state.u, cons.d - cons.C @ state.y])
    return QpData(
        P=P, q=np.asarray(g, dtype=float).ravel(), G=G, hvec=hvec, S=S,
        A=cons.A, C=cons.C, nabla_h=nabla_h,
        n_input_rows=cons.n_c1, alpha_max=alpha_max,
    )


def _phase1(G, hvec):
    """Feasible point via min-infeasibility LP; None when the polytope is empty."""
    m, n = G.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([G, -np.ones((m, 1))])
    bounds = [(None, None)] * n + [(0.0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=hvec, bounds=bounds, method="highs")
    if not res.success:
        return None
    if res.x[-1] > 1e-7:
        return None
    return res.x[:n]


def _working_set_solve(S, q, G, hvec, work):
    """Minimizer and multipliers with the rows in `work` held at equality.

    Eliminates w = -S(q + G_a^T lam) and solves the m_a x m_a system
    (G_a S G_a^T) lam = -(h_a + G_a S q); falls back to least squares when the
    working rows are dependent.
    """
    if not work:
        return -S @ q, np.zeros(0)
    Ga = G[list(work)]
    ha = hvec[list(work)]
    M = Ga @ S @ Ga.T
    rhs = -(ha + Ga @ (S @ q))
    try:
        lam = np.linalg.solve(M, rhs)
        if not np.all(np.isfinite(lam)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(M, rhs, rcond=None)[0]
    w = -S @ (q + Ga.T @ lam)
    return w, lam


def solve_w(qp: QpData, tol: float = 1e-8) -> QpSolution:
    """Primal active-set solve of the update QP.

    Stationarity is verified in the metric form ||w + S(q + G^T duals)|| which
    is algebraically the metric-form optimality condition and numerically immune
    to cond(S). Status is reported honestly: `infeasible` when phase 1 proves
    the polytope empty, `numerical-failure` when the active-set loop stalls.
    """
    n, m = qp.n, qp.m
    S, q, G, hvec = qp.S, qp.q, qp.G, qp.hvec
    zero = np.zeros(n)
    if m == 0:
        return QpSolution(w=-S @ q, duals=np.zeros(0), active=(), status="optimal")

    if np.all(hvec >= -_FEAS_EPS):
        w = zero.copy()
    else:
        w = _phase1(G, hvec)
        if w is None:
            return QpSolution(w=zero, duals=np.zeros(m), active=(), status="infeasible")

    work: list[int] = []
    for _ in range(60 * (m + 1)):
        w_cand, lam = _working_set_solve(S, q, G, hvec, work)
        step = w_cand - w
        if np.linalg.norm(step, np.inf) <= 1e-12 * max(1.0, np.linalg.norm(w, np.inf)):
            neg = int(np.argmin(lam)) if lam.size else -1
            if lam.size == 0 or lam[neg] >= -tol:
                duals = np.zeros(m)
                for idx, row in enumerate(work):
                    duals[row] = lam[idx]
                slack = hvec - G @ w
                active = tuple(i for i in range(m) if abs(slack[i]) <= ACT_TOL)
                return QpSolution(w=w, duals=duals, active=active, status="optimal")
            work.pop(neg)
            continue
        # ratio test toward the working-set minimizer
        Gstep = G @ step
        slack = hvec - G @ w
        beta = 1.0
        blocker = -1
        for i in range(m):
            if i in work or Gstep[i] <= 1e-14:
                continue
            ratio = max(slack[i], 0.0) / Gstep[i]
            if ratio < beta - 1e-15:
                beta = ratio
                blocker = i
        if blocker < 0:
            w = w_cand
        else:
            w = w + beta * step
            work.append(blocker)
            work.sort()
    return QpSolution(w=zero, duals=np.zeros(m), active=(), status="numerical-failure")


def kkt_residual(qp: QpData, sol: QpSolution) -> float:
    """Scaled optimality residual: stationarity, feasibility, complementarity."""
    r_stat = sol.w + qp.S @ (qp.q + qp.G.T @ sol.duals)
    scale = max(1.0, float(np.linalg.norm(sol.w, np.inf)))
    viol = float(np.max(qp.G @ sol.w - qp.hvec, initial=0.0))
    comp = float(np.max(np.abs(sol.duals * (qp.G @ sol.w - qp.hvec)), initial=0.0))
    return max(float(np.linalg.norm(r_stat, np.inf)) / scale, viol, comp / scale)
