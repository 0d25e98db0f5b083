"""Quadratic step-size model: fit from one predicted cost, minimize on a box.

No extra plant experiments are spent: the curvature point comes from the
model-predicted cost at the trial step, the slope and intercept from
quantities already in hand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateFitError


@dataclass(frozen=True)
class QuadModel:
    """g(alpha) = a alpha^2 + b alpha + c fitted at abscissa alpha_tilde."""

    a: float
    b: float
    c: float
    alpha_tilde: float

    def __call__(self, alpha: float) -> float:
        return self.a * alpha * alpha + self.b * alpha + self.c


def fit_quadratic(phi0: float, dphi0: float, phi_at: float, alpha_tilde: float) -> QuadModel:
    """Interpolate (value, slope at 0) and one predicted value at alpha_tilde.

    phi0 is the current cost, dphi0 the directional derivative g^T w, and
    phi_at the cost predicted at (u + alpha_tilde w, y + alpha_tilde grad_h w).
    """
    if alpha_tilde == 0.0:
        raise DegenerateFitError("fit abscissa alpha_tilde must be nonzero")
    c = float(phi0)
    b = float(dphi0)
    a = (float(phi_at) - c - b * alpha_tilde) / (alpha_tilde * alpha_tilde)
    return QuadModel(a=a, b=b, c=c, alpha_tilde=float(alpha_tilde))


def minimize_quadratic(model: QuadModel, alpha_min: float, alpha_max: float) -> float:
    """Minimizer of the fitted parabola on [alpha_min, alpha_max].

    Convex fit: clamped vertex -b/2a. Otherwise the better endpoint, ties
    breaking to alpha_min (smaller steps keep the output linearization honest).
    """
    if alpha_min > alpha_max:
        raise ValueError("alpha_min must not exceed alpha_max")
    if model.a > 0.0:
        vertex = -model.b / (2.0 * model.a)
        return min(max(vertex, alpha_min), alpha_max)
    return alpha_min if model(alpha_min) <= model(alpha_max) else alpha_max
