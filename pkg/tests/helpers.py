"""Shared test utilities: brute-force QP oracle, instance generators, plant FD."""

import itertools

import numpy as np

from ofotune import ControllerState
from ofotune.qp import QpData


def brute_force_qp(P, q, G, hvec, tol=1e-9):
    """Reference QP solve by enumerating active subsets of size <= n.

    For every subset, solve the equality-constrained KKT system directly and
    keep the candidates that are primal feasible with nonnegative multipliers;
    the strictly convex objective makes the best candidate the optimum.
    Independent of the production active-set path by construction.
    """
    n = q.size
    m = G.shape[0]
    best = None
    best_val = np.inf
    for size in range(min(n, m) + 1):
        for subset in itertools.combinations(range(m), size):
            Ga = G[list(subset)]
            KKT = np.block([
                [P, Ga.T],
                [Ga, np.zeros((size, size))],
            ])
            rhs = np.concatenate([-q, hvec[list(subset)]])
            try:
                sol = np.linalg.solve(KKT, rhs)
            except np.linalg.LinAlgError:
                continue
            w, lam = sol[:n], sol[n:]
            if size and lam.min() < -tol:
                continue
            if m and np.max(G @ w - hvec) > tol:
                continue
            val = 0.5 * w @ P @ w + q @ w
            if val < best_val - 1e-15:
                best_val = val
                best = w
    return best


def random_spd(rng, n, eig_lo=0.1, eig_hi=10.0):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    eigs = rng.uniform(eig_lo, eig_hi, size=n)
    return (Q * eigs) @ Q.T


def random_qp_instance(rng, n, feasible=True):
    """Random small QP around a feasible anchor point; boxes plus one coupling row."""
    S = random_spd(rng, n)
    P = np.linalg.inv(S)
    P = 0.5 * (P + P.T)
    q = rng.normal(scale=2.0, size=n)
    anchor = rng.normal(scale=0.5, size=n)
    G = np.vstack([np.eye(n), -np.eye(n), rng.normal(size=(1, n))])
    slack = rng.uniform(0.05, 3.0, size=G.shape[0])
    hvec = G @ anchor + slack
    if not feasible:
        # contradictory pair w_0 <= -1 and -w_0 <= -1
        G = np.vstack([G, [[1.0] + [0.0] * (n - 1)], [[-1.0] + [0.0] * (n - 1)]])
        hvec = np.concatenate([hvec, [-1.0, -1.0]])
    return QpData(P=P, q=q, G=G, hvec=hvec, S=S,
                  A=G, C=np.zeros((0, 1)), nabla_h=np.zeros((1, n)),
                  n_input_rows=G.shape[0], alpha_max=1.0)


def make_state(plant, u, S, alpha=0.01):
    from ofotune import reduced_gradient

    u = np.asarray(u, dtype=float)
    y = np.asarray(plant.measure(u), dtype=float).ravel()
    return ControllerState(
        k=0, u=u, y=y, w=np.zeros(plant.n_u), alpha=alpha, S=np.asarray(S, dtype=float),
        reduced_grad=reduced_gradient(plant, u, y),
    )
