"""Independent references: symmetric minimum-volume ellipsoid and
Monte-Carlo volume.

These never touch the polynomial solver; they exist so its d = 2 answers
and volumes can be checked against a different algorithm entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DegenerateInputError

__all__ = ["EllipsoidOracleResult", "mvee_symmetric", "mc_volume", "McVolume"]


@dataclass
class EllipsoidOracleResult:
    """Shape matrix Q of {x : x'Qx <= 1}, its volume, the input points on
    the boundary, iterations used, and the final relative gap."""

    Q: np.ndarray
    volume: float
    support_points: np.ndarray
    iterations: int
    gap: float


def _unit_ball_volume(n):
    return math.pi ** (n / 2.0) / math.gamma(1.0 + n / 2.0)


def mvee_symmetric(points, tol=1e-9, max_iters=100_000):
    """Minimum-volume origin-centered ellipsoid containing the points.

    Frank-Wolfe ascent on the log-det design problem over the symmetrized
    set {±x_i}, with away steps for linear convergence.  Stops when both
    the ascent gap and the away gap fall below `tol` (relative), i.e.
    n <= x'Lambda^{-1}x <= n(1+tol) across the support.

    Raises DegenerateInputError if the points do not span R^n, and
    ConvergenceError if the gap is still above tolerance after
    `max_iters` iterations.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m0, n = pts.shape
    if np.linalg.matrix_rank(pts, tol=1e-12 * max(1.0, float(np.abs(pts).max()))) < n:
        raise DegenerateInputError("points do not span the space; ellipsoid is unbounded")

    X = np.vstack([pts, -pts])
    m = X.shape[0]
    u = np.full(m, 1.0 / m)

    lam = X.T @ (u[:, None] * X)
    it = 0
    gap = np.inf
    for it in range(1, max_iters + 1):
        try:
            inv = np.linalg.inv(lam)
        except np.linalg.LinAlgError:
            raise DegenerateInputError("design matrix became singular")
        M = np.einsum("ij,jk,ik->i", X, inv, X)
        i_fw = int(np.argmax(M))
        up = M[i_fw] - n
        support = u > 1e-18
        masked = np.where(support, M, np.inf)
        i_aw = int(np.argmin(masked))
        down = n - masked[i_aw]
        gap = max(up, down) / n
        if gap <= tol:
            break
        if up >= down:
            # toward the worst point; exact line search for log det
            Mi = M[i_fw]
            beta = (Mi - n) / (n * (Mi - 1.0))
            u *= (1.0 - beta)
            u[i_fw] += beta
            x = X[i_fw]
            lam = (1.0 - beta) * lam + beta * np.outer(x, x)
        else:
            # away from the most over-weighted support point
            Mi = masked[i_aw]
            beta_min = -u[i_aw] / (1.0 - u[i_aw])
            if Mi > 1.0 + 1e-15:
                beta = max((Mi - n) / (n * (Mi - 1.0)), beta_min)
            else:
                # line search has no interior optimum: drop the point
                beta = beta_min
            beta = min(beta, 0.0)
            u *= (1.0 - beta)
            u[i_aw] += beta
            u[i_aw] = max(u[i_aw], 0.0)
            x = X[i_aw]
            lam = (1.0 - beta) * lam + beta * np.outer(x, x)
    else:
        raise ConvergenceError(
            f"ellipsoid gap {gap:.3e} still above {tol:.1e} after {max_iters} iterations"
        )

    Q = np.linalg.inv(lam) / n
    Q = 0.5 * (Q + Q.T)
    volume = _unit_ball_volume(n) * math.sqrt(max(np.linalg.det(n * lam), 0.0))
    norms = np.einsum("ij,jk,ik->i", pts, Q, pts)
    on_boundary = norms >= 1.0 - 1e-6
    return EllipsoidOracleResult(Q=Q, volume=volume,
                                 support_points=pts[on_boundary].copy(),
                                 iterations=it, gap=float(gap))


class McVolume(NamedTuple):
    estimate: float
    std_error: float


def mc_volume(g, center=None, y=1.0, budget=1_000_000, seed=0):
    """Monte-Carlo volume of {x : g(x - center) <= y}.

    Rejection sampling in the bounding box implied by the sphere minimum
    of g; the standard error is the binomial one for the acceptance
    fraction.  Uses a counter-based generator so a (budget, seed) pair
    always reproduces.
    """
    from .polynomials import check_in_cone

    if y < 0:
        raise ValueError("level y must be nonnegative")
    smin = check_in_cone(g)
    if y == 0.0:
        # the level set {g <= 0} of an in-cone g has measure zero
        return McVolume(estimate=0.0, std_error=0.0)
    n, d = g.n, g.degree
    radius = (y / smin) ** (1.0 / d)
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    rng = np.random.Generator(np.random.Philox(int(seed)))
    hits = 0
    remaining = int(budget)
    while remaining > 0:
        batch = min(remaining, 1 << 16)
        pts = center + rng.uniform(-radius, radius, size=(batch, n))
        hits += int(np.count_nonzero(g(pts - center) <= y))
        remaining -= batch
    box_vol = (2.0 * radius) ** n
    p = hits / budget
    estimate = box_vol * p
    std_error = box_vol * math.sqrt(max(p * (1.0 - p), 0.0) / budget)
    return McVolume(estimate=estimate, std_error=std_error)
