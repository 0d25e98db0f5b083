"""Closed-loop controller: adapt metric, solve QP, adapt step, apply, sense.

One iteration executes, in order:

  1. trigger check: adapt only when the previous direction was still a
     descent direction for the current gradient (g^T w_prev < 0), the mode
     allows it, and a sensitivity matrix is available;
  2. metric adaptation (SDP / diagonal LP / heuristic) on the trigger;
  3. QP solve for the new direction w;
  4. step-size selection (quadratic fit or the fixed alpha0);
  5. apply u <- u + alpha w to the plant and measure;
  6. cost-to-metric sensitivity for the next trigger.

Failures degrade gracefully: an infeasible QP holds the input, a failed
adaptation keeps the metric, invalid jacobians skip the next adaptation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, IllConditionedMetricError, IntegrationError, OfoError
from .model import (
    ConstraintSet,
    ControllerState,
    OfoParams,
    PlantModel,
    reduced_gradient,
)
from .qp import assemble_qp, solve_w
from .scaling import adapt_heuristic, adapt_sdp
from .sensitivity import objective_scaling_sensitivity, qp_solution_jacobians
from .stepsize import fit_quadratic, minimize_quadratic

CONVERGED_W_NORM = 1e-9
CONVERGED_QUIET_STEPS = 5


@dataclass(frozen=True)
class IterationRecord:
    """One row of the simulation trace."""

    k: int
    u: np.ndarray
    y: np.ndarray
    phi: float
    w: np.ndarray
    alpha: float
    S_eigs: np.ndarray
    D_norm: float
    active_constraints: tuple
    adapted: bool
    qp_status: str = "optimal"  # not part of the CSV contract


@dataclass(frozen=True)
class RunTrace:
    records: list
    params: OfoParams
    plant_id: str
    termination: str  # max-iters | converged | error(<code>)

    @property
    def phis(self) -> np.ndarray:
        return np.array([r.phi for r in self.records])

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]


def _metric_spectrum(S: np.ndarray, params: OfoParams) -> np.ndarray:
    # diagonal modes report the diagonal itself so traces keep the
    # per-element correspondence; full mode reports the sorted spectrum
    if params.diagonal:
        return np.diag(S).copy()
    return np.linalg.eigvalsh(0.5 * (S + S.T))


def _adapt_metric(S, D, params: OfoParams):
    if params.mode == "heuristic-diagonal":
        new_diag = adapt_heuristic(np.diag(S), np.diag(D.D), params)
        return np.diag(new_diag), True
    res = adapt_sdp(S, D, params)
    if res.status != "optimal":
        return S, False
    return S + res.deltaS, True


def ofo_iteration(
    state: ControllerState,
    plant: PlantModel,
    cons: ConstraintSet,
    params: OfoParams,
):
    """Advance the controller one step; returns (next_state, record)."""
    u, y = state.u, state.y
    g = state.reduced_grad
    phi = float(plant.objective(u, y))

    adapted = False
    S = state.S
    trigger = (
        params.mode != "fixed"
        and state.dPhi_dS is not None
        and float(g @ state.w) < 0.0
    )
    if trigger:
        S, adapted = _adapt_metric(S, state.dPhi_dS, params)

    qp_status = "optimal"
    try:
        qp = assemble_qp(state.with_updates(S=S), plant, cons, params.alpha_max)
        sol = solve_w(qp)
        qp_status = sol.status
    except IllConditionedMetricError:
        qp = None
        sol = None
        qp_status = "numerical-failure"

    if qp_status == "optimal":
        w = sol.w
        active = sol.active
    else:
        # hold the input; the record carries the failure flag
        w = np.zeros(plant.n_u)
        active = ()

    alpha = params.alpha0
    if params.step_adaptation and qp_status == "optimal" and np.linalg.norm(w) > 0.0:
        alpha_tilde = state.alpha
        u_pred = u + alpha_tilde * w
        y_pred = y + alpha_tilde * (qp.nabla_h @ w)
        try:
            model = fit_quadratic(
                phi, float(g @ w), float(plant.objective(u_pred, y_pred)), alpha_tilde
            )
            alpha = minimize_quadratic(model, params.alpha_min, params.alpha_max)
        except DegenerateFitError:
            alpha = params.alpha0

    u_next = u + alpha * w
    y_next = np.asarray(plant.measure(u_next), dtype=float).ravel()
    if not np.all(np.isfinite(y_next)):
        raise IntegrationError(f"plant returned non-finite measurement at u={u_next}")
    g_next = reduced_gradient(plant, u_next, y_next)

    dPhi_dS = None
    if qp_status == "optimal":
        jac = qp_solution_jacobians(qp, sol, S, g)
        if jac.valid:
            probe = state.with_updates(u=u_next, y=y_next)
            dPhi_dS = objective_scaling_sensitivity(
                plant, probe, jac, alpha, diagonal=params.diagonal
            )

    next_state = ControllerState(
        k=state.k + 1,
        u=u_next,
        y=y_next,
        w=w,
        alpha=alpha,
        S=S,
        reduced_grad=g_next,
        dPhi_dS=dPhi_dS,
        active_set=active,
    )
    record = IterationRecord(
        k=state.k,
        u=u.copy(),
        y=y.copy(),
        phi=phi,
        w=w.copy(),
        alpha=alpha,
        S_eigs=_metric_spectrum(S, params),
        D_norm=dPhi_dS.frobenius if dPhi_dS is not None else 0.0,
        active_constraints=active,
        adapted=adapted,
        qp_status=qp_status,
    )
    return next_state, record


def initial_state(plant: PlantModel, params: OfoParams, u0) -> ControllerState:
    u0 = np.asarray(u0, dtype=float).ravel()
    y0 = np.asarray(plant.measure(u0), dtype=float).ravel()
    return ControllerState(
        k=0,
        u=u0,
        y=y0,
        w=np.zeros(plant.n_u),
        alpha=params.alpha0,
        S=params.S0.copy(),
        reduced_grad=reduced_gradient(plant, u0, y0),
        dPhi_dS=None,
        active_set=(),
    )


def _terminal_record(state: ControllerState, plant: PlantModel, params: OfoParams) -> IterationRecord:
    return IterationRecord(
        k=state.k,
        u=state.u.copy(),
        y=state.y.copy(),
        phi=float(plant.objective(state.u, state.y)),
        w=np.zeros(state.u.size),
        alpha=state.alpha,
        S_eigs=_metric_spectrum(state.S, params),
        D_norm=state.dPhi_dS.frobenius if state.dPhi_dS is not None else 0.0,
        active_constraints=(),
        adapted=False,
    )


def run(
    plant: PlantModel,
    cons: ConstraintSet,
    params: OfoParams,
    u0,
    n_iters: int,
) -> RunTrace:
    """Iterate the controller for n_iters steps (or until converged).

    Records 0..n-1 carry the state entering each step together with the step
    decisions; a terminal record holds the final iterate. The start point
    must satisfy the input constraints.
    """
    u0 = np.asarray(u0, dtype=float).ravel()
    if np.any(cons.A @ u0 > cons.b + 1e-9):
        raise ValueError("u0 violates the input constraints A u <= b")

    records: list[IterationRecord] = []
    termination = "max-iters"
    try:
        state = initial_state(plant, params, u0)
    except OfoError as exc:
        raise type(exc)(f"plant failed at the start point: {exc}") from exc

    quiet = 0
    for _ in range(n_iters):
        try:
            state, rec = ofo_iteration(state, plant, cons, params)
        except (IntegrationError, OfoError) as exc:
            termination = f"error({type(exc).__name__})"
            break
        records.append(rec)
        if np.linalg.norm(state.w) <= CONVERGED_W_NORM and not rec.adapted:
            quiet += 1
        else:
            quiet = 0
        if quiet >= CONVERGED_QUIET_STEPS:
            termination = "converged"
            break
    records.append(_terminal_record(state, plant, params))
    return RunTrace(records=records, params=params, plant_id=plant.name, termination=termination)
