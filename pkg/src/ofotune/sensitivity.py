"""Implicit differentiation of the update QP and the cost-to-metric sensitivity.

With the active set frozen, the QP solution satisfies

    S^-1 w + g + G_a^T lam = 0,      G_a w = hvec_a.

Differentiating the pair and eliminating through S (never through the
explicitly inverted metric) gives closed forms for dw/dS, dw/du and dw/dy.
Writing v = S^-1 w = -(g + G_a^T lam), M = G_a S G_a^T and
Z = I - S G_a^T M^-1 G_a:

    dw/dS_ij = v_j * Z[:, i]                      (single-entry perturbation)
    dw/du    = -Z S dg/du + S G_a^T M^-1 dh_a/du  (same for y)

The unconstrained case reduces to dw/dS_ij = -E_ij g and dw/du = -S dg/du.
Jacobians are exact for perturbations too small to change the active set;
degenerate active sets (weak duals, rank-deficient G_a) are flagged invalid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ControllerState, PlantModel, ScalingSensitivity, reduced_gradient
from .qp import QpData, QpSolution

COMPLEMENTARITY_MARGIN = 1e-9


@dataclass(frozen=True)
class QpJacobians:
    """Derivatives of the QP solution w with the active set frozen.

    dw_dvecS columns follow vec(S) (stacked columns): entry (i, j) of S maps
    to column j*n+i. dw_du is the plant-total derivative along y = h(u) when
    the caller supplies a total dg_du; dw_dy is the partial output-channel
    derivative.
    """

    dw_dvecS: np.ndarray
    dw_du: np.ndarray
    dw_dy: np.ndarray
    valid: bool


def _invalid(n: int, n_y: int) -> QpJacobians:
    return QpJacobians(
        dw_dvecS=np.zeros((n, n * n)),
        dw_du=np.zeros((n, n)),
        dw_dy=np.zeros((n, n_y)),
        valid=False,
    )


def qp_solution_jacobians(
    qp: QpData,
    sol: QpSolution,
    S: np.ndarray,
    g: np.ndarray,
    dg_du: Optional[np.ndarray] = None,
    dg_dy: Optional[np.ndarray] = None,
) -> QpJacobians:
    """Differentiate the QP solution at a non-degenerate optimum.

    dg_du / dg_dy are the caller's derivatives of the reduced gradient
    (typically finite differences); when omitted the corresponding blocks
    only carry the constraint right-hand-side dependence.
    """
    n = qp.n
    n_y = qp.C.shape[1] if qp.C.size else qp.nabla_h.shape[0]
    if sol.status != "optimal":
        return _invalid(n, n_y)
    act = list(sol.active)
    slack = qp.hvec - qp.G @ sol.w
    inactive = [i for i in range(qp.m) if i not in act]
    # strict complementarity: active rows need clearly positive duals,
    # inactive rows clearly positive slack
    margin = np.inf
    if act:
        margin = min(margin, float(np.min(sol.duals[act])))
    if inactive:
        margin = min(margin, float(np.min(slack[inactive])))
    if act and margin < COMPLEMENTARITY_MARGIN:
        return _invalid(n, n_y)

    S = 0.5 * (S + S.T)
    v = -(g + qp.G.T @ sol.duals)  # equals S^-1 w at the optimum
    if act:
        Ga = qp.G[act]
        if np.linalg.matrix_rank(Ga, tol=1e-10) < len(act):
            return _invalid(n, n_y)
        M = Ga @ S @ Ga.T
        try:
            Minv_Ga = np.linalg.solve(M, Ga)
        except np.linalg.LinAlgError:
            return _invalid(n, n_y)
        SGa = S @ Ga.T
        Z = np.eye(n) - SGa @ Minv_Ga
    else:
        SGa = np.zeros((n, 0))
        Minv_Ga = np.zeros((0, n))
        Z = np.eye(n)

    # dw/dS_ij = v_j * Z[:, i]  -> column j*n+i of dw_dvecS
    dw_dvecS = np.zeros((n, n * n))
    for j in range(n):
        dw_dvecS[:, j * n : (j + 1) * n] = v[j] * Z
    ZS = Z @ S

    def _input_block(dg, dh_full):
        # dh_full: derivative of hvec w.r.t. the parameter block (m x dim)
        dh_act = dh_full[act] if act else np.zeros((0, dh_full.shape[1]))
        block = np.zeros((n, dh_full.shape[1]))
        if dg is not None:
            block -= ZS @ dg
        if act:
            block += SGa @ np.linalg.solve(M, dh_act)
        return block

    # hvec = [b - A u; d - C y]; the u-block uses the plant-total chain
    # d(hvec)/du = [-A; -C grad_h] so dw_du composes with a total dg_du
    dh_du = np.vstack([-qp.A, -(qp.C @ qp.nabla_h)]) if qp.m else np.zeros((0, n))
    dh_dy = (
        np.vstack([np.zeros((qp.n_input_rows, n_y)), -qp.C]) if qp.m else np.zeros((0, n_y))
    )
    dw_du = _input_block(dg_du, dh_du)
    dw_dy = _input_block(dg_dy, dh_dy)
    return QpJacobians(dw_dvecS=dw_dvecS, dw_du=dw_du, dw_dy=dw_dy, valid=True)


def objective_scaling_sensitivity(
    plant: PlantModel,
    state_next: ControllerState,
    jac: QpJacobians,
    alpha: float,
    diagonal: bool = False,
) -> ScalingSensitivity:
    """One-step sensitivity of the just-measured cost to the metric used for w.

    D_ij = g(u_next, y_next)^T * alpha * dw/dS_ij, the single-step instance of
    the chain rule with du_next/dS = alpha dw/dS. Full-matrix mode returns the
    symmetric part (only it is identifiable against a symmetric S); diagonal
    modes populate the diagonal alone.
    """
    if not jac.valid:
        raise ValueError("cannot form scaling sensitivity from invalid jacobians")
    g_next = reduced_gradient(plant, state_next.u, state_next.y)
    n = g_next.size
    row = alpha * (g_next @ jac.dw_dvecS)
    D = row.reshape((n, n), order="F")
    if diagonal:
        D = np.diag(np.diag(D))
    else:
        D = 0.5 * (D + D.T)
    return ScalingSensitivity(D=D)


def accumulate_input_sensitivity(history, l: int) -> np.ndarray:
    """Multi-step input sensitivity du^k/dS^l over a jacobian history.

    `history` lists (alpha_m, QpJacobians) for consecutive steps m = 0..k-1;
    `l` indexes the step whose metric is perturbed. Entries after step l must
    carry the plant-total dw_du (output chain folded in by the caller). The
    sum du^k/dS^l = sum_m alpha_m dw^m/dS^l unrolls recursively:

        dU_{m+1} = dU_m + alpha_m * (dw^m/dvecS   if m == l
                                     dw^m/du dU_m otherwise)
    """
    if not 0 <= l <= len(history):
        raise ValueError(f"window index {l} outside history of length {len(history)}")
    if l == len(history):
        n = history[0][1].dw_dvecS.shape[0] if history else 0
        return np.zeros((n, n * n))
    n = history[l][1].dw_dvecS.shape[0]
    dU = np.zeros((n, n * n))
    for m in range(l, len(history)):
        alpha_m, jac = history[m]
        if not jac.valid:
            raise ValueError(f"invalid jacobians at step {m}; truncate the window")
        if m == l:
            dU = dU + alpha_m * jac.dw_dvecS
        else:
            dU = dU + alpha_m * (jac.dw_du @ dU)
    return dU
