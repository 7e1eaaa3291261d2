"""KKT certificates: contact points, weights, and verifiable identities.

At the optimum, the degree-d moments of exp(-g*) are reproduced by a
finite atomic measure sitting on the contact points {g* = 1}:

    I_a(g*) = sum_j lambda_j x_j^a   for all |a| = d,

with total mass sum_j lambda_j = (n/d) * I_0(g*) (take a = each basis
index, contract with g*'s coefficients, apply the Euler identity and
g*(x_j) = 1).  A certificate packages the atoms and the numeric residuals
of these identities so a third party can re-verify them with nothing but
polynomial evaluations and one quadrature.

Atom count can always be reduced to the dimension of the degree-d slice,
C(n+d-1, d): atoms are points in that slice's moment space, so any excess
atom set carries an affine dependency to pivot away (Caratheodory).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateError, ReductionError
from .integrals import DEFAULT_QUADRATURE, moment_vector
from .polynomials import HomogeneousPoly, MultiIndex, basis_for
from .solver import SolverConfig, solve_min_volume

__all__ = ["KktCertificate", "build_certificate", "caratheodory_reduce",
           "contact_moment_matrix", "gaussian_moment_matrix",
           "dball_contact_check", "DballReport"]


@dataclass
class KktCertificate:
    """Atomic representation of the optimal dual measure.

    moment_residual is the sup-norm gap between sum_j lambda_j x_j^a and
    the quadrature moments over the degree-d slice; level_residual is
    max_j |g*(x_j) - 1|; mass/mass_expected compare sum lambda_j with
    (n/d) * I_0.
    """

    n: int
    degree: int
    contact_points: np.ndarray
    weights: np.ndarray
    moment_residual: float
    level_residual: float
    mass: float
    mass_expected: float
    atom_bound: int
    reduced: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def contacts(self):
        return [(self.contact_points[j].copy(), float(self.weights[j]))
                for j in range(len(self.weights))]

    def as_dict(self):
        return {
            "n": self.n,
            "degree": self.degree,
            "contact_points": self.contact_points.tolist(),
            "weights": self.weights.tolist(),
            "moment_residual": self.moment_residual,
            "level_residual": self.level_residual,
            "mass": self.mass,
            "mass_expected": self.mass_expected,
            "atom_bound": self.atom_bound,
            "reduced": self.reduced,
        }


def _atom_moment_residual(points, weights, target, n, degree):
    basis = basis_for(n, degree)
    A = basis.monomials(points).T          # (l, k)
    return float(np.max(np.abs(A @ weights - target)))


def build_certificate(report, cs, spec=None, reduce_atoms=True):
    """Assemble a certificate from a solve report.

    Contact points are the active constraint points carrying positive
    polished weight.  Weights are refit against the moment vector in the
    certificate's own frame (the solver may have optimized in a linearly
    transformed one), so the reported residual is exactly what a third
    party recomputes from the published atoms.  With reduce_atoms, the
    support is thinned to at most C(n+d-1, d) atoms while reproducing
    the same moments.
    """
    spec = spec or DEFAULT_QUADRATURE
    g = report.g_star
    n, d = g.n, g.degree
    idx = sorted(report.dual_weights)
    if not idx:
        raise CertificateError("solve report has no active constraints")
    points = cs.points[np.array(idx, dtype=int)]

    mv = report.moment_data if report.moment_data is not None else moment_vector(g, spec)
    target = mv.vector_d()
    bound = len(basis_for(n, d))

    A = basis_for(n, d).monomials(points).T
    weights, *_ = np.linalg.lstsq(A, target, rcond=None)
    floor = -1e-10 * max(float(np.max(np.abs(weights))), 1.0)
    if np.any(weights < floor):
        from scipy.optimize import nnls
        weights, _ = nnls(A, target)
    weights = np.clip(weights, 0.0, None)
    keep = weights > 0.0
    points, weights = points[keep], weights[keep]
    if points.shape[0] == 0:
        raise CertificateError("weight refit emptied the support")

    if reduce_atoms and len(weights) > bound:
        points, weights = caratheodory_reduce(points, weights, n, d, target)
        reduced = True
    else:
        reduced = False

    residual = _atom_moment_residual(points, weights, target, n, d)
    level = float(np.max(np.abs(g(points) - 1.0)))
    mass = float(np.sum(weights))
    expected = (n / d) * mv.y0
    return KktCertificate(
        n=n, degree=d, contact_points=np.array(points), weights=np.array(weights),
        moment_residual=residual, level_residual=level, mass=mass,
        mass_expected=expected, atom_bound=bound, reduced=reduced,
        meta={"y0": mv.y0, "kkt_residual": report.kkt_residual},
    )


def caratheodory_reduce(points, weights, n, degree, target=None):
    """Thin an atomic measure to at most C(n+d-1, d) atoms with the same
    degree-d moments.

    Streaming pivoting: take bound+1 atoms, find a null vector of their
    moment columns (last right singular vector of the wide matrix), shift
    weights along it until the smallest ratio hits zero (deterministic
    pivot: smallest ratio, lowest index on ties), drop the zeroed atoms,
    refill, repeat.  Moments are invariant at every step because the
    shift direction is in the null space.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    weights = np.asarray(weights, dtype=float).copy()
    if np.any(weights < 0):
        raise ValueError("atom weights must be nonnegative")
    basis = basis_for(n, degree)
    bound = len(basis)
    if points.shape[0] != weights.shape[0]:
        raise ValueError("points and weights disagree in length")

    if target is not None:
        before = _atom_moment_residual(points, weights, np.asarray(target), n, degree)

    live = [i for i in range(len(weights)) if weights[i] > 0.0]
    while len(live) > bound:
        work = live[:bound + 1]
        A = basis.monomials(points[work]).T       # (bound, bound+1): wide
        # the extra right singular vector spans the null space
        _, svals, vt = np.linalg.svd(A)
        z = vt[-1]
        norm_a = float(svals[0]) if svals.size else 0.0
        resid = float(np.linalg.norm(A @ z))
        if norm_a > 0 and resid > 1e-7 * norm_a:
            raise ReductionError(
                f"null direction residual {resid:.3e} too large relative to "
                f"column scale {norm_a:.3e}"
            )
        w = weights[np.array(work)]
        # move along +z or -z, whichever zeroes a weight sooner
        candidates = []
        for sign in (+1.0, -1.0):
            dz = sign * z
            pos = dz > 1e-14
            if np.any(pos):
                ratios = w[pos] / dz[pos]
                tstar = float(np.min(ratios))
                candidates.append((tstar, sign))
        if not candidates:
            raise ReductionError("null direction has no positive component")
        tstar, sign = min(candidates, key=lambda c: (c[0], -c[1]))
        dz = sign * z
        w_new = w - tstar * dz
        w_new[np.abs(w_new) <= 1e-15 * max(float(np.max(w)), 1.0)] = 0.0
        w_new = np.clip(w_new, 0.0, None)
        for pos_i, i in enumerate(work):
            weights[i] = w_new[pos_i]
        survivors = [i for i in live if weights[i] > 0.0]
        if len(survivors) == len(live):
            raise ReductionError("pivot failed to remove an atom")
        live = survivors

    keep = np.array(live, dtype=int)
    out_pts = points[keep].copy()
    out_w = weights[keep].copy()
    if target is not None:
        after = _atom_moment_residual(out_pts, out_w, np.asarray(target), n, degree)
        if after > 10.0 * max(before, 1e-12):
            raise ReductionError(
                f"reduction degraded the moment residual: {before:.3e} -> {after:.3e}"
            )
    return out_pts, out_w


def contact_moment_matrix(points, weights, n, half_degree):
    """sum_j lambda_j v(x_j) v(x_j)^T over the degree-(d/2) monomial map."""
    basis = basis_for(n, half_degree)
    Vh = basis.monomials(points)               # (k, lh)
    return Vh.T @ (np.asarray(weights)[:, None] * Vh)


def gaussian_moment_matrix(g, spec=None):
    """Integral v(x) v(x)^T exp(-g) dx over the degree-(d/2) monomial map.

    Entries are degree-d moments of exp(-g), read off by exponent
    addition; at the optimum this matrix equals contact_moment_matrix of
    the certificate atoms.
    """
    spec = spec or DEFAULT_QUADRATURE
    n, d = g.n, g.degree
    if d % 2:
        raise ValueError("degree must be even")
    half = basis_for(n, d // 2)
    full = basis_for(n, d)
    mv = moment_vector(g, spec)
    size = len(half)
    out = np.empty((size, size))
    for i, a in enumerate(half):
        for j, b in enumerate(half):
            out[i, j] = mv.moments_d[full[full.index_of(tuple(x + y for x, y in zip(a, b)))]]
    return out


def axis_moment_1d(k, d):
    """Closed form Integral_R t^k exp(-t^d) dt: zero for odd k,
    2*Gamma((k+1)/d)/d for even k."""
    if k % 2:
        return 0.0
    return 2.0 * math.gamma((k + 1) / d) / d


@dataclass
class DballReport:
    """Certificate check for point sets whose optimal enclosure is the
    unit d-ball {sum x_i^d <= 1}."""

    g_deviation: float
    even_residual: float
    odd_residual: float
    residuals: dict
    certificate: KktCertificate


def dball_contact_check(cs, degree, spec=None, config=None, ball_tol=1e-3):
    """Solve for the given points and verify the separable-moment identity.

    Requires the optimum to be (numerically) the d-ball sum x_i^d; then
    for every |a| = d the certificate atoms must satisfy

        sum_j lambda_j x_j^a = prod_i Integral_R t^{a_i} exp(-t^d) dt,

    which vanishes whenever any a_i is odd.  Returns the per-index
    residuals split into even and odd groups.
    """
    spec = spec or DEFAULT_QUADRATURE
    config = config or SolverConfig(quadrature=spec)
    report = solve_min_volume(cs, degree, config)
    g = report.g_star
    n = g.n
    ball = HomogeneousPoly.sum_of_powers(n, degree)
    dev = float(np.max(np.abs(g.coeff_vector - ball.coeff_vector)))
    if dev > ball_tol:
        raise CertificateError(
            f"optimal polynomial deviates from the d-ball by {dev:.3e}; "
            f"the separable identity does not apply"
        )
    cert = build_certificate(report, cs, spec, reduce_atoms=False)
    pts, w = cert.contact_points, cert.weights
    basis = basis_for(n, degree)
    sums = basis.monomials(pts).T @ w
    residuals = {}
    even_worst = 0.0
    odd_worst = 0.0
    for k, alpha in enumerate(basis):
        expected = math.prod(axis_moment_1d(a, degree) for a in alpha)
        r = float(abs(sums[k] - expected))
        residuals[alpha] = r
        if any(a % 2 for a in alpha):
            odd_worst = max(odd_worst, r)
        else:
            even_worst = max(even_worst, r)
    return DballReport(g_deviation=dev, even_residual=even_worst,
                       odd_residual=odd_worst, residuals=residuals,
                       certificate=cert)
