"""Case-study systems: toy 2-input map, constrained Rosenbrock, a five-well
gas-lift allocation surrogate, and a two-state van der Vusse CSTR simulation.

Each factory returns (PlantModel, ConstraintSet). The CSTR plant is stateful
(the ODE state persists across controller iterations) and must be owned by a
single run; the other plants are pure functions of u.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import IntegrationError
from .model import ConstraintSet, PlantModel


# -- toy example -------------------------------------------------------------

def toy_plant() -> Tuple[PlantModel, ConstraintSet]:
    """Scalar-output toy system y = u2^3 + u1 - u2 + 0.5 with a cubic cost."""

    def measure(u):
        return np.array([u[1] ** 3 + u[0] - u[1] + 0.5])

    def sensitivity(u, y):
        return np.array([[1.0, 3.0 * u[1] ** 2 - 1.0]])

    def objective(u, y):
        return (
            1.5 * u[0] ** 2 + u[1] ** 2 - u[1] ** 3 + u[0] * u[1]
            - 3.0 * u[1] + 1.5 + y[0]
        )

    def grad_u(u, y):
        return np.array([3.0 * u[0] + u[1], 2.0 * u[1] - 3.0 * u[1] ** 2 + u[0] - 3.0])

    def grad_y(u, y):
        return np.array([1.0])

    plant = PlantModel(
        name="toy", n_u=2, n_y=1,
        measure=measure, sensitivity=sensitivity,
        objective=objective, grad_u=grad_u, grad_y=grad_y,
    )
    cons = ConstraintSet.box([-1.0, -1.0], [1.0, 1.0], [0.0], [1.0])
    return plant, cons


# -- Rosenbrock --------------------------------------------------------------

def rosenbrock_plant() -> Tuple[PlantModel, ConstraintSet]:
    """Rosenbrock valley recast with outputs y = (10(u2 - u1^2), 1 - u1)."""

    def measure(u):
        return np.array([10.0 * (u[1] - u[0] ** 2), 1.0 - u[0]])

    def sensitivity(u, y):
        return np.array([[-20.0 * u[0], 10.0], [-1.0, 0.0]])

    def objective(u, y):
        return y[0] ** 2 + y[1] * (1.0 - u[0])

    def grad_u(u, y):
        return np.array([-y[1], 0.0])

    def grad_y(u, y):
        return np.array([2.0 * y[0], 1.0 - u[0]])

    plant = PlantModel(
        name="rosenbrock", n_u=2, n_y=2,
        measure=measure, sensitivity=sensitivity,
        objective=objective, grad_u=grad_u, grad_y=grad_y,
    )
    cons = ConstraintSet.box([-1.0, -1.0], [1.0, 0.75], [-5.0, -5.0], [5.0, 5.0])
    return plant, cons


# -- gas lift ----------------------------------------------------------------

@dataclass(frozen=True)
class WellCurve:
    """Saturating well characteristic f(u) = a u / (b + u)."""

    a: float
    b: float

    def value(self, u: float) -> float:
        return self.a * u / (self.b + u)

    def slope(self, u: float) -> float:
        return self.a * self.b / (self.b + u) ** 2


@dataclass(frozen=True)
class GasLiftSurrogate:
    """Five-well allocation surrogate: wells 1-2 feed y1, wells 3-5 feed y2.

    The characteristics are increasing and saturating, so all marginal
    products stay positive and the shared gas budget eventually binds.
    """

    wells: Tuple[WellCurve, ...] = (
        WellCurve(a=900.0, b=4000.0),
        WellCurve(a=1250.0, b=6500.0),
        WellCurve(a=700.0, b=3000.0),
        WellCurve(a=1000.0, b=3800.0),
        WellCurve(a=1100.0, b=5200.0),
    )
    u_min: Tuple[float, ...] = (0.0,) * 5
    u_max: Tuple[float, ...] = (12000.0,) * 5
    y_max: Tuple[float, float] = (5000.0, 5000.0)
    budget: float = 26000.0

    def __post_init__(self):
        if len(self.wells) != 5:
            raise ValueError("surrogate defines exactly five wells")


_PLATFORMS = ((0, 1), (2, 3, 4))


def gaslift_plant(config: Optional[GasLiftSurrogate] = None) -> Tuple[PlantModel, ConstraintSet]:
    """Gas-lift allocation: maximize total platform output under a gas budget."""
    cfg = config or GasLiftSurrogate()

    def measure(u):
        return np.array([
            sum(cfg.wells[i].value(u[i]) for i in group) for group in _PLATFORMS
        ])

    def sensitivity(u, y):
        grad_h = np.zeros((2, 5))
        for row, group in enumerate(_PLATFORMS):
            for i in group:
                grad_h[row, i] = cfg.wells[i].slope(u[i])
        return grad_h

    def objective(u, y):
        return -y[0] - y[1]

    def grad_u(u, y):
        return np.zeros(5)

    def grad_y(u, y):
        return np.array([-1.0, -1.0])

    plant = PlantModel(
        name="gaslift", n_u=5, n_y=2,
        measure=measure, sensitivity=sensitivity,
        objective=objective, grad_u=grad_u, grad_y=grad_y,
    )
    box = ConstraintSet.box(cfg.u_min, cfg.u_max, [0.0, 0.0], cfg.y_max)
    A = np.vstack([box.A, np.ones((1, 5))])
    b = np.concatenate([box.b, [cfg.budget]])
    cons = ConstraintSet(A=A, b=b, C=box.C, d=box.d)
    return plant, cons


# -- CSTR --------------------------------------------------------------------

@dataclass(frozen=True)
class CstrParams:
    """Van der Vusse reactor constants and operating bounds."""

    V: float = 700.0              # l
    k1: float = 5.0 / 6.0         # 1/min
    k2: float = 5.0 / 3.0         # 1/min
    k3: float = 1.0 / 6.0         # l/(mol min)
    F_max: float = 634.0          # l/min
    cAi_max: float = 15.0         # mol/l
    cA_max: float = 10.0          # mol/l
    cB_max: float = 5.0           # mol/l
    F0: float = 350.15
    cAi0: float = 10.15
    cA0: float = 2.82
    cB0: float = 1.08
    dT: float = 1.0               # control interval, min

    def __post_init__(self):
        vals = (self.V, self.k1, self.k2, self.k3, self.F_max, self.cAi_max,
                self.cA_max, self.cB_max, self.dT)
        if any(v <= 0 for v in vals):
            raise ValueError("CSTR parameters must be positive")


def cstr_rhs(params: CstrParams, state, u) -> np.ndarray:
    """Concentration derivatives of the van der Vusse scheme."""
    cA, cB = state
    F, cAi = u
    dcA = (F / params.V) * (cAi - cA) - params.k1 * cA - params.k3 * cA * cA
    dcB = -(F / params.V) * cB + params.k1 * cA - params.k2 * cB
    return np.array([dcA, dcB])


def cstr_integrate(params: CstrParams, state, u, dT: float, substep: float = 0.01) -> np.ndarray:
    """Classical RK4 over dT with a fixed substep (default 0.01 min)."""
    if dT <= 0:
        raise ValueError("dT must be positive")
    x = np.asarray(state, dtype=float).copy()
    u = np.asarray(u, dtype=float)
    n_full = int(np.floor(dT / substep + 1e-12))
    remainder = dT - n_full * substep
    steps = [substep] * n_full + ([remainder] if remainder > 1e-12 else [])
    for h in steps:
        k1 = cstr_rhs(params, x, u)
        k2 = cstr_rhs(params, x + 0.5 * h * k1, u)
        k3 = cstr_rhs(params, x + 0.5 * h * k2, u)
        k4 = cstr_rhs(params, x + h * k3, u)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            raise IntegrationError(f"CSTR state diverged at u={u}")
    return x


def cstr_steady_state(params: CstrParams, u) -> np.ndarray:
    """Closed-form steady concentrations for constant inputs.

    The cA balance is a quadratic k3 cA^2 + (k1 + F/V) cA - (F/V) cAi = 0 with
    a single nonnegative root; cB follows linearly.
    """
    F, cAi = u
    phi = F / params.V
    a, b, c = params.k3, params.k1 + phi, -phi * cAi
    cA = (-b + np.sqrt(b * b - 4.0 * a * c)) / (2.0 * a)
    cB = params.k1 * cA / (phi + params.k2)
    return np.array([cA, cB])


def cstr_sensitivity(params: CstrParams, u, y) -> np.ndarray:
    """Steady-state input-output Jacobian from the implicit function rule.

    grad_h = -(dG/dy)^-1 (dG/du) with G the two steady-state residuals; the
    Jacobian dG/dy is lower triangular with strictly negative diagonal for
    F, cA >= 0, so the inverse exists throughout the operating box.
    """
    F, cAi = np.asarray(u, dtype=float)
    cA, cB = np.asarray(y, dtype=float)
    phi = F / params.V
    dG_dy = np.array([
        [-phi - params.k1 - 2.0 * params.k3 * cA, 0.0],
        [params.k1, -phi - params.k2],
    ])
    dG_du = np.array([
        [(cAi - cA) / params.V, phi],
        [-cB / params.V, 0.0],
    ])
    return -np.linalg.solve(dG_dy, dG_du)


def piecewise_constant(breakpoints: Sequence[Tuple[float, float]]) -> Callable[[float], float]:
    """Right-continuous step function from (time, value) breakpoints."""
    if not breakpoints:
        raise ValueError("need at least one (time, value) breakpoint")
    pts = sorted((float(t), float(v)) for t, v in breakpoints)
    times = np.array([t for t, _ in pts])
    values = np.array([v for _, v in pts])

    def ref(t: float) -> float:
        idx = int(np.searchsorted(times, t + 1e-12, side="right")) - 1
        return float(values[max(idx, 0)])

    return ref


class CstrSimulator:
    """Mutable ODE state plus the measurement clock.

    measure() integrates one control interval and advances the clock, so the
    cost evaluated right after a measurement uses the setpoint in force at
    the measurement time.
    """

    def __init__(self, params: CstrParams, reference: Callable[[float], float]):
        self.params = params
        self.reference = reference
        self.state = np.array([params.cA0, params.cB0])
        self.time = 0.0

    def measure(self, u) -> np.ndarray:
        self.state = cstr_integrate(self.params, self.state, u, self.params.dT)
        self.time += self.params.dT
        return self.state.copy()

    def setpoint(self) -> float:
        return self.reference(self.time)


def cstr_plant(
    params: Optional[CstrParams] = None,
    reference: Optional[Sequence[Tuple[float, float]]] = None,
) -> Tuple[PlantModel, ConstraintSet]:
    """Setpoint-tracking CSTR: u = (F, cAi), y = (cA, cB), cost (cB - r)^2."""
    p = params or CstrParams()
    ref = piecewise_constant(reference or [(0.0, p.cB0)])
    sim = CstrSimulator(p, ref)

    def objective(u, y):
        r = sim.setpoint()
        return (y[1] - r) ** 2

    def grad_u(u, y):
        return np.zeros(2)

    def grad_y(u, y):
        r = sim.setpoint()
        return np.array([0.0, 2.0 * (y[1] - r)])

    plant = PlantModel(
        name="cstr", n_u=2, n_y=2,
        measure=sim.measure,
        sensitivity=lambda u, y: cstr_sensitivity(p, u, y),
        objective=objective, grad_u=grad_u, grad_y=grad_y,
    )
    cons = ConstraintSet.box([0.0, 0.0], [p.F_max, p.cAi_max], [0.0, 0.0], [p.cA_max, p.cB_max])
    return plant, cons
