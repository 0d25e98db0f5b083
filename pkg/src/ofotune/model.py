"""Optimization-problem data model shared by all controller modules.

The controlled system is described by a steady-state map y = h(u), a scalar
cost Phi(u, y) with analytic partial gradients, and affine input/output
constraints A u <= b, C y <= d. Only the input-output sensitivity (the
Jacobian of h) is needed online, never h itself.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import InvalidModelError

MODES = ("fixed", "heuristic-diagonal", "sdp-full", "sdp-diagonal")
DIAGONAL_MODES = ("heuristic-diagonal", "sdp-diagonal")

SYM_TOL = 1e-10   # absolute symmetry tolerance for metric checks
EIG_SLACK = 1e-8  # solver-accuracy headroom on eigenvalue bounds


@dataclass(frozen=True)
class PlantModel:
    """The controlled system: measurement map, sensitivity, cost and gradients.

    ``measure`` maps u to the measured output y (steady-state response or a
    stateful simulation step). ``sensitivity`` returns the n_y x n_u Jacobian
    of the steady-state map at (u, y). ``grad_u``/``grad_y`` are the partial
    gradients of the cost, returned as 1-d arrays of length n_u / n_y.
    """

    name: str
    n_u: int
    n_y: int
    measure: Callable[[np.ndarray], np.ndarray]
    sensitivity: Callable[[np.ndarray, np.ndarray], np.ndarray]
    objective: Callable[[np.ndarray, np.ndarray], float]
    grad_u: Callable[[np.ndarray, np.ndarray], np.ndarray]
    grad_y: Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ConstraintSet:
    """Affine constraints A u <= b on inputs and C y <= d on outputs."""

    A: np.ndarray
    b: np.ndarray
    C: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        b = np.asarray(self.b, dtype=float).ravel()
        d = np.asarray(self.d, dtype=float).ravel()
        if A.shape[0] != b.size:
            raise ValueError(f"A has {A.shape[0]} rows but b has {b.size} entries")
        if C.shape[0] != d.size:
            raise ValueError(f"C has {C.shape[0]} rows but d has {d.size} entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "d", d)

    @property
    def n_c1(self) -> int:
        return self.A.shape[0]

    @property
    def n_c2(self) -> int:
        return self.C.shape[0]

    @classmethod
    def box(cls, u_lo, u_hi, y_lo, y_hi) -> "ConstraintSet":
        """Box bounds u_lo <= u <= u_hi, y_lo <= y <= y_hi as stacked rows."""
        u_lo = np.asarray(u_lo, dtype=float)
        u_hi = np.asarray(u_hi, dtype=float)
        y_lo = np.asarray(y_lo, dtype=float)
        y_hi = np.asarray(y_hi, dtype=float)
        n_u, n_y = u_lo.size, y_lo.size
        A = np.vstack([np.eye(n_u), -np.eye(n_u)])
        b = np.concatenate([u_hi, -u_lo])
        C = np.vstack([np.eye(n_y), -np.eye(n_y)])
        d = np.concatenate([y_hi, -y_lo])
        return cls(A=A, b=b, C=C, d=d)


@dataclass(frozen=True)
class OfoParams:
    """All controller tunables: step bounds, metric bounds, adaptation mode."""

    alpha0: float
    alpha_max: float
    S0: np.ndarray
    alpha_min: float = 1e-6
    p_max: float = 1.0
    t_min: float = 1e-6
    t_max: float = 1000.0
    beta1: float = 0.1
    beta2: float = 0.2
    mode: str = "fixed"
    step_adaptation: bool = False

    def __post_init__(self):
        S0 = np.atleast_2d(np.asarray(self.S0, dtype=float))
        object.__setattr__(self, "S0", S0)
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (0.0 < self.alpha_min <= self.alpha0 <= self.alpha_max):
            raise ValueError(
                f"need 0 < alpha_min <= alpha0 <= alpha_max, got "
                f"({self.alpha_min}, {self.alpha0}, {self.alpha_max})"
            )
        if self.p_max <= 0.0:
            raise ValueError("p_max must be positive")
        if not (0.0 < self.t_min <= self.t_max):
            raise ValueError("need 0 < t_min <= t_max")
        for name, beta in (("beta1", self.beta1), ("beta2", self.beta2)):
            if not (0.0 < beta < 1.0):
                raise ValueError(f"{name} must lie in (0, 1)")
        eigs = np.linalg.eigvalsh(0.5 * (S0 + S0.T))
        if eigs.min() < self.t_min - EIG_SLACK or eigs.max() > self.t_max + EIG_SLACK:
            raise ValueError(
                f"S0 eigenvalues {eigs} outside [t_min, t_max] = "
                f"[{self.t_min}, {self.t_max}]"
            )

    @property
    def n_u(self) -> int:
        return self.S0.shape[0]

    @property
    def diagonal(self) -> bool:
        return self.mode in DIAGONAL_MODES


@dataclass(frozen=True)
class ScalingSensitivity:
    """Matrix of cost-to-metric sensitivities dPhi/dS_ij.

    In diagonal adaptation modes only the diagonal is populated; off-diagonal
    entries are zero.
    """

    D: np.ndarray

    def __post_init__(self):
        D = np.atleast_2d(np.asarray(self.D, dtype=float))
        if D.shape[0] != D.shape[1]:
            raise ValueError("sensitivity matrix must be square")
        if not np.all(np.isfinite(D)):
            raise InvalidModelError("non-finite scaling sensitivity")
        object.__setattr__(self, "D", D)

    @property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self.D, "fro"))


@dataclass(frozen=True)
class ControllerState:
    """Controller iterate: inputs, measurement, metric, step and QP artifacts."""

    k: int
    u: np.ndarray
    y: np.ndarray
    w: np.ndarray
    alpha: float
    S: np.ndarray
    reduced_grad: np.ndarray
    dPhi_dS: Optional[ScalingSensitivity] = None
    active_set: tuple = ()

    def with_updates(self, **kwargs) -> "ControllerState":
        return replace(self, **kwargs)


def reduced_gradient(plant: PlantModel, u, y) -> np.ndarray:
    """Composite gradient dPhi/du + grad_h^T dPhi/dy driving the update QP."""
    u = np.asarray(u, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if u.size != plant.n_u or y.size != plant.n_y:
        raise ValueError(
            f"dimension mismatch: got u({u.size}), y({y.size}) for plant "
            f"({plant.n_u}, {plant.n_y})"
        )
    gu = np.asarray(plant.grad_u(u, y), dtype=float).ravel()
    gy = np.asarray(plant.grad_y(u, y), dtype=float).ravel()
    grad_h = np.asarray(plant.sensitivity(u, y), dtype=float).reshape(plant.n_y, plant.n_u)
    g = gu + grad_h.T @ gy
    if not np.all(np.isfinite(g)):
        raise InvalidModelError(f"non-finite reduced gradient at u={u}")
    return g


def spd_project_check(S, t_min: float) -> bool:
    """True iff S is symmetric (within 1e-10) with smallest eigenvalue >= t_min."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape[0] != S.shape[1]:
        raise ValueError("S must be square")
    if np.max(np.abs(S - S.T)) > SYM_TOL:
        return False
    return float(np.linalg.eigvalsh(0.5 * (S + S.T)).min()) >= t_min


def finite_difference_gradient(fun, x, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with per-coordinate step 1e-6*max(1,|x_i|).

    Testing fallback only; plants supply analytic gradients.
    """
    x = np.asarray(x, dtype=float).ravel()
    grad = np.zeros(x.size)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (fun(xp) - fun(xm)) / (2.0 * h)
    return grad
