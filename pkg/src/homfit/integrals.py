"""Moments of exp(-g) for homogeneous g, by radial-angular reduction.

For g homogeneous of even degree d with g > 0 away from the origin,
substituting x = r*u (r > 0, |u| = 1) and integrating the radial part in
closed form gives, for any multi-index a,

    I_a(g) = Integral_{R^n} x^a exp(-g(x)) dx
           = Gamma((n+|a|)/d) / d * Integral_{S^{n-1}} u^a g(u)^{-(n+|a|)/d} dS(u),

so every moment is a smooth integral over the unit sphere.  The sphere
integral is evaluated on a deterministic grid whose resolution doubles
until two consecutive levels agree to the requested tolerance.

Two identities tie the moments together and are used as cross-checks
elsewhere:

* Euler:  sum_a g_a I_a = (n/d) I_0  (integrate g*exp(-g) by parts).
* Level set:  I_a = Gamma(1 + (n+|a|)/d) * Integral_{G_1} x^a dx where
  G_1 = {g <= 1}, which crosscheck_levelset_moment verifies against a
  Monte-Carlo estimate of the right side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import NotInConeError
from .polynomials import (HomogeneousPoly, MultiIndex, basis_for,
                          monomial_matrix, positivity_floor)
from .spheres import resolution_for_budget, sphere_grid

__all__ = [
    "QuadratureSpec",
    "MomentVector",
    "integral_exp",
    "volume_sublevel",
    "moment",
    "moment_vector",
    "crosscheck_levelset_moment",
    "CrosscheckResult",
]

_SCHEMES = {1: "pair", 2: "circle_uniform", 3: "fibonacci_sphere", 4: "product_gauss"}


@dataclass(frozen=True)
class QuadratureSpec:
    """Angular quadrature settings.

    angular_points is the starting grid size (doubled until converged or
    max_points would be exceeded); tolerance is the relative agreement
    required between consecutive doublings; scheme may pin a named rule
    ('circle_uniform', 'fibonacci_sphere', 'product_gauss') and must then
    match the dimension it is used in.
    """

    angular_points: int = 64
    tolerance: float = 1e-10
    scheme: str | None = None
    max_points: int = 1 << 20

    def __post_init__(self):
        if self.angular_points < 16:
            raise ValueError("angular_points must be >= 16")
        if not (self.tolerance > 0):
            raise ValueError("tolerance must be positive")
        if self.max_points < self.angular_points:
            raise ValueError("max_points must be >= angular_points")
        if self.scheme is not None and self.scheme not in _SCHEMES.values():
            raise ValueError(f"unknown scheme {self.scheme!r}")

    def scheme_for(self, n):
        default = _SCHEMES.get(n)
        if default is None:
            raise ValueError(f"no quadrature scheme for n={n} (supported: 1..4)")
        if self.scheme is not None and n != 1 and self.scheme != default:
            raise ValueError(f"scheme {self.scheme!r} does not apply in dimension {n}")
        return default


DEFAULT_QUADRATURE = QuadratureSpec()


@dataclass
class MomentVector:
    """Moments of exp(-g): total mass y0, the degree-d slice, and
    optionally the degree-2d slice (Hessian data).

    moments_d maps each |a| = d multi-index to I_a; moments_2d, when
    present, covers |a| = 2d.
    """

    n: int
    degree: int
    y0: float
    moments_d: dict
    moments_2d: dict | None = None
    quadrature_info: dict = field(default_factory=dict)

    def vector_d(self):
        """Degree-d moments as an array aligned with the graded-lex basis."""
        basis = basis_for(self.n, self.degree)
        return np.array([self.moments_d[ix] for ix in basis])

    def hessian_matrix(self):
        """Matrix H[a, b] = I_{a+b} over the degree-d basis (needs 2d slice)."""
        if self.moments_2d is None:
            raise ValueError("2d moments were not computed; pass include_2d=True")
        basis = basis_for(self.n, self.degree)
        alias = _hessian_alias(self.n, self.degree)
        big = np.array([self.moments_2d[ix] for ix in basis_for(self.n, 2 * self.degree)])
        return big[alias]


@lru_cache(maxsize=64)
def _hessian_alias(n, degree):
    # position of a+b in the 2d basis, for a, b in the d basis
    small = basis_for(n, degree)
    big = basis_for(n, 2 * degree)
    size = len(small)
    alias = np.empty((size, size), dtype=np.int64)
    for i, a in enumerate(small):
        for j, b in enumerate(small):
            alias[i, j] = big.index_of(tuple(x + y for x, y in zip(a, b)))
    return alias


@lru_cache(maxsize=10)
def _grid_monomials(n, resolution, k):
    """Full degree-k monomial basis evaluated on the cached sphere grid.

    The ladder revisits the same grids on every optimizer iteration, so
    these matrices are worth keeping; they depend only on the grid and
    the slice degree, never on g.
    """
    points, _ = sphere_grid(n, resolution)
    mat = monomial_matrix(points, basis_for(n, k).exponents)
    mat.setflags(write=False)
    return mat


def _angular_integrals(g, slices, spec, hint=None):
    """Sphere integrals of u^a * g(u)^(-(n+k)/d) for each (exponents, k) slice.

    Returns (list of per-slice arrays, info dict).  Doubles the grid until
    two consecutive levels agree within spec.tolerance (each slice scaled
    by its own largest component) or the point cap is reached.

    `hint` is an optional mutable dict carrying the resolution that
    converged last time for a similar integrand; the ladder then starts
    one level below it instead of at the bottom.  The doubling self-check
    still runs either way.
    """
    n, d = g.n, g.degree
    scheme = spec.scheme_for(n)
    floor = positivity_floor(g)
    coeffs = g.coeff_vector

    def level(resolution):
        points, weights = sphere_grid(n, resolution)
        gv = _grid_monomials(n, resolution, d) @ coeffs
        worst = float(gv.min())
        if worst <= floor:
            raise NotInConeError(
                f"g is not strictly positive on the sphere "
                f"(sampled value {worst:.3e}); moments diverge"
            )
        totals = []
        radial_by_k = {}
        for exps, k in slices:
            prev = radial_by_k.get(k - d)
            # consecutive slices differ by a factor g^{-1}; one real pow,
            # then divisions
            radial = (prev / gv) if prev is not None else gv ** (-(n + k) / d)
            radial_by_k[k] = radial
            wr = weights * radial
            if exps.shape[0] == 1 and not exps.any():
                totals.append(np.array([float(wr.sum())]))
                continue
            full = basis_for(n, k).exponents
            if exps.shape == full.shape and np.array_equal(exps, full):
                totals.append(wr @ _grid_monomials(n, resolution, k))
            else:
                totals.append(wr @ monomial_matrix(points, exps))
        return totals, points.shape[0]

    if n == 1:
        totals, count = level(1)
        return totals, {"scheme": scheme, "points": count, "converged": True,
                        "last_delta": 0.0}

    def realized(resolution):
        return 2 * resolution ** 3 if n == 4 else resolution

    def slicewise_ok(cur, prev):
        worst = 0.0
        for a, b in zip(cur, prev):
            gap = float(np.max(np.abs(a - b))) if a.size else 0.0
            scale = max(float(np.max(np.abs(a))) if a.size else 0.0, 1e-300)
            worst = max(worst, gap / scale)
        return worst <= spec.tolerance, worst

    base = resolution_for_budget(n, spec.angular_points)
    res = base
    if hint and hint.get("res"):
        res = max(base, int(hint["res"]) // 2)
    prev = None
    delta = np.inf
    while True:
        totals, count = level(res)
        if prev is not None:
            ok, delta = slicewise_ok(totals, prev)
            if ok:
                if hint is not None:
                    hint["res"] = res
                return totals, {"scheme": scheme, "points": count,
                                "converged": True, "last_delta": delta}
        prev = totals
        if realized(res * 2) > spec.max_points:
            if hint is not None:
                hint["res"] = res
            return totals, {"scheme": scheme, "points": count,
                            "converged": False, "last_delta": delta}
        res *= 2


def _radial_factor(n, d, k):
    return math.gamma((n + k) / d) / d


def integral_exp(g, spec=None, hint=None):
    """Total mass Integral exp(-g(x)) dx over R^n."""
    spec = spec or DEFAULT_QUADRATURE
    zero = np.zeros((1, g.n), dtype=np.int64)
    totals, _ = _angular_integrals(g, [(zero, 0)], spec, hint=hint)
    return _radial_factor(g.n, g.degree, 0) * float(totals[0][0])


def volume_sublevel(g, y, spec=None):
    """Lebesgue volume of {x : g(x) <= y}.

    vol = y^(n/d) / Gamma(1 + n/d) * Integral exp(-g); zero at y = 0,
    ValueError for y < 0.
    """
    if y < 0:
        raise ValueError("level y must be nonnegative")
    if y == 0:
        return 0.0
    n, d = g.n, g.degree
    return y ** (n / d) / math.gamma(1.0 + n / d) * integral_exp(g, spec)


def moment(g, alpha, spec=None):
    """Single moment Integral x^alpha exp(-g) dx for any multi-index."""
    spec = spec or DEFAULT_QUADRATURE
    alpha = MultiIndex(alpha)
    if len(alpha) != g.n:
        raise ValueError("multi-index dimension mismatch")
    exps = np.array([tuple(alpha)], dtype=np.int64)
    totals, _ = _angular_integrals(g, [(exps, alpha.degree)], spec)
    return _radial_factor(g.n, g.degree, alpha.degree) * float(totals[0][0])


def moment_vector(g, spec=None, include_2d=False, hint=None):
    """All moments needed by the optimizer, in one angular pass.

    Computes y0 and the full degree-d slice; with include_2d also the
    degree-2d slice (from which the objective Hessian is assembled by
    exponent addition).  `hint` as in the angular integrator: a mutable
    dict remembering the converged grid resolution between calls.
    """
    spec = spec or DEFAULT_QUADRATURE
    n, d = g.n, g.degree
    slices = [(np.zeros((1, n), dtype=np.int64), 0),
              (basis_for(n, d).exponents, d)]
    if include_2d:
        slices.append((basis_for(n, 2 * d).exponents, 2 * d))
    totals, info = _angular_integrals(g, slices, spec, hint=hint)

    y0 = _radial_factor(n, d, 0) * float(totals[0][0])
    fac_d = _radial_factor(n, d, d)
    moments_d = {ix: fac_d * float(v) for ix, v in zip(basis_for(n, d), totals[1])}
    moments_2d = None
    if include_2d:
        fac_2d = _radial_factor(n, d, 2 * d)
        moments_2d = {ix: fac_2d * float(v)
                      for ix, v in zip(basis_for(n, 2 * d), totals[2])}
    return MomentVector(n=n, degree=d, y0=y0, moments_d=moments_d,
                        moments_2d=moments_2d, quadrature_info=info)


class CrosscheckResult(NamedTuple):
    lhs: float
    rhs: float
    agree: bool
    std_error: float


def crosscheck_levelset_moment(g, alpha, spec=None, mc_budget=200_000, seed=0):
    """Check I_alpha = Gamma(1 + (n+|a|)/d) * Integral_{g<=1} x^a dx.

    The left side comes from the angular quadrature, the right from a
    Monte-Carlo estimate over the bounding box of {g <= 1}; 'agree' means
    the two differ by at most four Monte-Carlo standard errors.
    """
    spec = spec or DEFAULT_QUADRATURE
    alpha = MultiIndex(alpha)
    n, d = g.n, g.degree
    lhs = moment(g, alpha, spec)

    from .polynomials import check_in_cone
    smin = check_in_cone(g)
    radius = (1.0 / smin) ** (1.0 / d)   # {g <= 1} fits in this box
    rng = np.random.Generator(np.random.Philox(seed))
    total = 0.0
    total_sq = 0.0
    box_vol = (2.0 * radius) ** n
    remaining = int(mc_budget)
    while remaining > 0:
        batch = min(remaining, 1 << 16)
        pts = rng.uniform(-radius, radius, size=(batch, n))
        inside = g(pts) <= 1.0
        vals = np.where(inside, monomial_matrix(pts, np.array([tuple(alpha)]))[:, 0], 0.0)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        remaining -= batch
    mean = total / mc_budget
    var = max(total_sq / mc_budget - mean * mean, 0.0)
    factor = math.gamma(1.0 + (n + alpha.degree) / d)
    rhs = factor * box_vol * mean
    std_error = factor * box_vol * math.sqrt(var / mc_budget)
    agree = abs(lhs - rhs) <= 4.0 * max(std_error, 1e-300)
    return CrosscheckResult(lhs=lhs, rhs=rhs, agree=bool(agree), std_error=std_error)
