"""Joint search over the center: enclose K by {x : g(x - a) <= 1}.

The inner problem (optimal g for a fixed center a) is strictly convex
with a smooth optimal value rho(a), but rho need not be convex in a, so
the outer search is derivative-free Nelder-Mead seeded at the sample
centroid.  Inner solves are cached per center and warm-started from the
previous optimum; centers whose shifted points become degenerate or
whose solve fails score +inf and the simplex moves away.  The origin is
always evaluated as a fallback candidate, so the centered volume never
exceeds the origin-centered one (up to solver tolerance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .constraints import ConstraintSet
from .errors import (ConvergenceError, DegenerateInputError, HomfitError,
                     NotInConeError)
from .solver import SolveReport, SolverConfig, solve_min_volume

__all__ = ["OuterSearchConfig", "CenteredSolveReport", "solve_min_volume_centered",
           "rho_of_center"]


@dataclass(frozen=True)
class OuterSearchConfig:
    max_iters: int = 100
    simplex_scale: float = 0.25      # initial simplex edge, relative to spread
    xtol_scale: float = 1e-5         # center tolerance, relative to spread

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class CenteredSolveReport:
    center: np.ndarray
    inner: SolveReport
    volume: float
    outer_iterations: int
    evaluations: int
    meta: dict = field(default_factory=dict)

    @property
    def g_star(self):
        return self.inner.g_star


def _spread(points):
    centroid = points.mean(axis=0)
    radius = float(np.max(np.linalg.norm(points - centroid, axis=1)))
    return centroid, max(radius, 1e-6 * (1.0 + float(np.linalg.norm(centroid))))


class _InnerCache:
    """Memoized inner solves keyed by rounded center, with warm starts."""

    def __init__(self, cs, degree, config):
        self.cs = cs
        self.degree = degree
        self.config = config
        self.table = {}
        self.last_g = None
        self.evaluations = 0

    def solve_at(self, a):
        key = np.round(np.asarray(a, dtype=float), 12).tobytes()
        if key in self.table:
            return self.table[key]
        self.evaluations += 1
        shifted = ConstraintSet(self.cs.points - a, provenance=self.cs.provenance)
        try:
            report = solve_min_volume(shifted, self.degree, self.config,
                                      start=self.last_g)
            self.last_g = report.g_star
            entry = (report.objective, report)
        except (DegenerateInputError, ConvergenceError, NotInConeError) as exc:
            entry = (np.inf, exc)
        self.table[key] = entry
        return entry


def rho_of_center(a, cs, degree, config=None, cache=None):
    """Optimal objective Integral exp(-g*) for the points shifted by -a.

    +inf when the shifted problem is degenerate or the solve fails, which
    lets a derivative-free outer loop treat bad centers as ordinary bad
    values.
    """
    cache = cache or _InnerCache(cs, degree, config or SolverConfig())
    value, _ = cache.solve_at(np.asarray(a, dtype=float))
    return value


def solve_min_volume_centered(cs, degree, config=None, outer=None):
    """Best center and polynomial for {x : g(x - a) <= 1} containing the
    points.

    Nelder-Mead over the center, starting at the centroid with an axis
    simplex of edge simplex_scale * spread; converged when the simplex
    collapses to xtol_scale * spread.  The best of (search result,
    centroid, origin) wins, so adding the center variable can only help.

    Raises DegenerateInputError if no candidate center admits a solve.
    """
    config = config or SolverConfig()
    outer = outer or OuterSearchConfig()
    points = cs.points
    n = points.shape[1]
    centroid, radius = _spread(points)
    cache = _InnerCache(cs, degree, config)

    def objective(a):
        return cache.solve_at(a)[0]

    simplex = np.vstack([centroid[None, :],
                         centroid[None, :] + outer.simplex_scale * radius * np.eye(n)])
    rho0 = objective(centroid)
    result = minimize(
        objective, centroid, method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": outer.xtol_scale * radius,
            "fatol": 1e-9 * (1.0 + abs(rho0 if np.isfinite(rho0) else 0.0)),
            "maxiter": outer.max_iters,
            "maxfev": 50 * outer.max_iters,
        },
    )

    candidates = [np.asarray(result.x, dtype=float), centroid, np.zeros(n)]
    best_val = np.inf
    best_center = None
    for cand in candidates:
        val, _ = cache.solve_at(cand)
        if val < best_val:
            best_val = val
            best_center = cand
    if not np.isfinite(best_val):
        raise DegenerateInputError(
            "no candidate center admitted a bounded enclosure"
        )
    _, report = cache.solve_at(best_center)
    if not isinstance(report, SolveReport):
        raise HomfitError("cached entry lost its report")     # unreachable
    volume = report.objective / math.gamma(1.0 + n / degree)
    return CenteredSolveReport(
        center=np.asarray(best_center, dtype=float), inner=report,
        volume=volume, outer_iterations=int(result.nit),
        evaluations=cache.evaluations,
        meta={"outer_message": str(result.message)},
    )
