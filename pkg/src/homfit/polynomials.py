"""Multi-indices, monomial bases, and homogeneous polynomials.

A homogeneous polynomial of even degree d in n variables is stored as a
dense coefficient vector over the monomial basis {x^a : |a| = d}.  The
basis is ordered graded-lexicographically: by total degree first, then
within a degree block the index with the larger leading exponents comes
first, so for n = 2, d = 2 the order is (2,0), (1,1), (0,2).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import NotInConeError

__all__ = [
    "MultiIndex",
    "BasisEnumeration",
    "HomogeneousPoly",
    "basis_for",
    "enumerate_basis",
    "monomial_matrix",
    "compose_linear",
    "min_on_sphere",
]


def _grlex_key(exponents):
    # total degree, then descending lex inside the degree block
    return (sum(exponents), tuple(-e for e in exponents))


class MultiIndex(tuple):
    """Exponent vector of a monomial.

    Behaves as a tuple of nonnegative ints (hashable, comparable with
    plain tuples as dict keys) plus a degree and a stable string form
    used in JSON output.
    """

    def __new__(cls, exponents):
        exps = tuple(int(e) for e in exponents)
        if not exps:
            raise ValueError("multi-index needs at least one entry")
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps!r}")
        return super().__new__(cls, exps)

    @property
    def degree(self):
        return sum(self)

    @property
    def n(self):
        return len(self)

    def as_key(self):
        """Stable string form, e.g. '2,0,1'."""
        return ",".join(str(e) for e in self)

    @classmethod
    def from_key(cls, key):
        return cls(int(part) for part in key.split(","))

    def __lt__(self, other):
        return _grlex_key(self) < _grlex_key(tuple(other))

    def __le__(self, other):
        return _grlex_key(self) <= _grlex_key(tuple(other))

    def __gt__(self, other):
        return _grlex_key(self) > _grlex_key(tuple(other))

    def __ge__(self, other):
        return _grlex_key(self) >= _grlex_key(tuple(other))

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


def _compositions(total, nvars):
    # all exponent tuples with the given sum, first variable descending:
    # exactly graded-lex order within one degree block
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, nvars - 1):
            yield (first,) + rest


class BasisEnumeration:
    """All multi-indices of one total degree in n variables, graded-lex order.

    The slice {|a| = degree} has C(n + degree - 1, degree) members.  Any
    degree >= 0 is allowed here; the evenness restriction on polynomial
    degrees is enforced by HomogeneousPoly and enumerate_basis.
    """

    def __init__(self, n, degree):
        n = int(n)
        degree = int(degree)
        if n < 1:
            raise ValueError(f"need at least one variable, got n={n}")
        if degree < 0:
            raise ValueError(f"degree must be nonnegative, got {degree}")
        self.n = n
        self.degree = degree
        self.indices = tuple(MultiIndex(ix) for ix in _compositions(degree, n))
        assert len(self.indices) == math.comb(n + degree - 1, degree)
        self._position = {ix: k for k, ix in enumerate(self.indices)}
        self.exponents = np.array(self.indices, dtype=np.int64).reshape(len(self.indices), n)
        self.exponents.setflags(write=False)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __getitem__(self, k):
        return self.indices[k]

    def index_of(self, alpha):
        """Position of a multi-index in the basis order."""
        key = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
        try:
            return self._position[key]
        except KeyError:
            raise KeyError(f"{tuple(key)} is not in the degree-{self.degree} slice") from None

    def __contains__(self, alpha):
        try:
            return MultiIndex(alpha) in self._position
        except (ValueError, TypeError):
            return False

    def monomials(self, x):
        """Evaluate every basis monomial at the given points.

        Parameters
        ----------
        x : array, shape (m, n) or (n,)

        Returns
        -------
        array, shape (m, len(self))
        """
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape[1] != self.n:
            raise ValueError(f"points have {x.shape[1]} coordinates, basis has n={self.n}")
        return monomial_matrix(x, self.exponents)

    def __repr__(self):
        return f"BasisEnumeration(n={self.n}, degree={self.degree}, size={len(self)})"


@lru_cache(maxsize=256)
def basis_for(n, degree):
    """Cached basis enumeration (any degree >= 0)."""
    return BasisEnumeration(n, degree)


def enumerate_basis(n, degree):
    """Monomial basis of the even-degree-d slice, graded-lex order.

    Raises ValueError for odd degree or n < 1.
    """
    if degree < 2 or degree % 2:
        raise ValueError(f"degree must be even and >= 2, got {degree}")
    return basis_for(n, degree)


def monomial_matrix(x, exponents):
    """Evaluate x^a for each exponent row a; returns shape (m, rows).

    Uses per-variable power tables so each point is raised to each needed
    power once.
    """
    x = np.asarray(x, dtype=float)
    exponents = np.asarray(exponents, dtype=np.int64)
    m, n = x.shape
    if exponents.shape[1] != n:
        raise ValueError("exponent rows do not match point dimension")
    out = np.ones((m, exponents.shape[0]))
    for j in range(n):
        ex_j = exponents[:, j]
        top_j = int(ex_j.max()) if ex_j.size else 0
        if top_j == 0:
            continue
        # integer powers by repeated multiplication; float ** is an order
        # of magnitude slower on large grids
        table = np.empty((m, top_j + 1))
        table[:, 0] = 1.0
        for p in range(1, top_j + 1):
            np.multiply(table[:, p - 1], x[:, j], out=table[:, p])
        out *= table[:, ex_j]
    return out


class HomogeneousPoly:
    """Homogeneous polynomial g(x) = sum_a g_a x^a over the slice |a| = d.

    Parameters
    ----------
    n : int
        Number of variables.
    degree : int
        Even total degree, >= 2.
    coeffs : array-like of length C(n+d-1, d), or mapping
        Dense coefficient vector aligned with the graded-lex basis, or a
        map from multi-indices (tuples, MultiIndex, or 'a1,a2' strings)
        to coefficients.  Map keys of the wrong degree raise ValueError.
    """

    def __init__(self, n, degree, coeffs):
        if degree < 2 or degree % 2:
            raise ValueError(f"degree must be even and >= 2, got {degree}")
        self.n = int(n)
        self.degree = int(degree)
        self.basis = basis_for(self.n, self.degree)
        if isinstance(coeffs, dict):
            vec = np.zeros(len(self.basis))
            for key, value in coeffs.items():
                alpha = MultiIndex.from_key(key) if isinstance(key, str) else MultiIndex(key)
                if alpha.degree != self.degree or len(alpha) != self.n:
                    raise ValueError(
                        f"coefficient key {tuple(alpha)} does not lie in the "
                        f"degree-{self.degree} slice in {self.n} variables"
                    )
                vec[self.basis.index_of(alpha)] = float(value)
        else:
            vec = np.asarray(coeffs, dtype=float).reshape(-1).copy()
            if vec.shape[0] != len(self.basis):
                raise ValueError(
                    f"expected {len(self.basis)} coefficients for n={self.n}, "
                    f"d={self.degree}; got {vec.shape[0]}"
                )
        if not np.all(np.isfinite(vec)):
            raise ValueError("coefficients must be finite")
        vec.setflags(write=False)
        self.coeff_vector = vec

    @classmethod
    def sum_of_powers(cls, n, degree, scale=1.0):
        """The polynomial scale * (x_1^d + ... + x_n^d)."""
        coeffs = {}
        for i in range(n):
            alpha = [0] * n
            alpha[i] = degree
            coeffs[tuple(alpha)] = scale
        return cls(n, degree, coeffs)

    def coeff(self, alpha):
        """Coefficient of x^alpha (zero is stored explicitly; KeyError if
        alpha is outside the slice)."""
        return float(self.coeff_vector[self.basis.index_of(alpha)])

    def coeffs_dict(self):
        return {ix: float(c) for ix, c in zip(self.basis, self.coeff_vector)}

    def __call__(self, x):
        """Evaluate at one point (returns float) or a stack (returns array)."""
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        values = self.basis.monomials(arr) @ self.coeff_vector
        return float(values[0]) if single else values

    def gradient(self, x):
        """Gradient rows; shape (n,) for one point, (m, n) for a stack.

        dg/dx_j = sum_a g_a a_j x^(a - e_j); terms with a_j = 0 drop out.
        """
        arr = np.atleast_2d(np.asarray(x, dtype=float))
        if arr.shape[1] != self.n:
            raise ValueError("point dimension mismatch")
        exps = self.basis.exponents
        out = np.empty((arr.shape[0], self.n))
        for j in range(self.n):
            shifted = exps.copy()
            shifted[:, j] = np.maximum(shifted[:, j] - 1, 0)
            factors = self.coeff_vector * exps[:, j]
            out[:, j] = monomial_matrix(arr, shifted) @ factors
        return out[0] if np.asarray(x).ndim == 1 else out

    def min_on_sphere(self, angular_budget=None):
        return min_on_sphere(self, angular_budget)

    def __add__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if (other.n, other.degree) != (self.n, self.degree):
            raise ValueError("polynomials live in different slices")
        return HomogeneousPoly(self.n, self.degree, self.coeff_vector + other.coeff_vector)

    def __mul__(self, scalar):
        return HomogeneousPoly(self.n, self.degree, self.coeff_vector * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        terms = []
        for ix, c in zip(self.basis, self.coeff_vector):
            if c != 0.0:
                terms.append(f"{c:+.6g}*x^{tuple(ix)}")
        body = " ".join(terms) if terms else "0"
        return f"HomogeneousPoly(n={self.n}, d={self.degree}: {body})"


def _poly_mul(p, q, n):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = out.get(key, 0.0) + ca * cb
    return out


def compose_linear(g, M):
    """The polynomial h(x) = g(M x), same degree, coefficients expanded.

    Each monomial u^b of g becomes the product of the linear forms
    (M x)_j repeated b_j times; products are accumulated exponent-wise.
    """
    M = np.asarray(M, dtype=float)
    n, d = g.n, g.degree
    if M.shape != (n, n):
        raise ValueError(f"need a {n}x{n} matrix, got {M.shape}")
    unit = tuple([0] * n)
    rows = []
    for j in range(n):
        row = {}
        for k in range(n):
            if M[j, k] != 0.0:
                e = [0] * n
                e[k] = 1
                row[tuple(e)] = M[j, k]
        rows.append(row)
    total = {}
    for beta, c in zip(g.basis, g.coeff_vector):
        if c == 0.0:
            continue
        term = {unit: 1.0}
        for j, bj in enumerate(beta):
            for _ in range(bj):
                term = _poly_mul(term, rows[j], n)
        for key, value in term.items():
            total[key] = total.get(key, 0.0) + c * value
    return HomogeneousPoly(n, d, total)


def _default_budget(n):
    return {1: 2, 2: 1024, 3: 2048}.get(n, 4096)


def min_on_sphere(g, angular_budget=None):
    """Minimum of g over the unit sphere, and a unit argmin.

    A deterministic grid scan (dimension-matched grid of roughly
    angular_budget points) seeds a local descent of the scale-invariant
    ratio g(x) / |x|^d; the returned value is the smaller of the two, so
    it never exceeds the grid minimum.

    Returns
    -------
    (value, argmin) : (float, array of shape (n,))
    """
    from .spheres import resolution_for_budget, sphere_grid

    if angular_budget is not None and angular_budget < 1:
        raise ValueError("angular_budget must be >= 1")
    budget = angular_budget or _default_budget(g.n)

    if g.n == 1:
        # sphere is {-1, +1}; even degree makes both ends equal
        val = g(np.array([1.0]))
        return float(val), np.array([1.0])

    points, _ = sphere_grid(g.n, resolution_for_budget(g.n, budget))
    values = g(points)
    k = int(np.argmin(values))
    best_val = float(values[k])
    best_arg = points[k]

    d = g.degree

    def ratio(x):
        s2 = float(x @ x)
        if s2 < 1e-16 or not np.isfinite(s2):
            return np.inf
        return g(x) / s2 ** (d / 2)

    def ratio_grad(x):
        s2 = float(x @ x)
        if s2 < 1e-16 or not np.isfinite(s2):
            return np.zeros_like(x)
        gx = g(x)
        return (g.gradient(x) - d * gx * x / s2) / s2 ** (d / 2)

    from scipy.optimize import minimize

    res = minimize(ratio, best_arg, jac=ratio_grad, method="BFGS",
                   options={"maxiter": 60, "gtol": 1e-13})
    if np.all(np.isfinite(res.x)) and np.isfinite(res.fun) and res.fun < best_val:
        norm = float(np.linalg.norm(res.x))
        if norm > 1e-8:
            best_val = float(res.fun)
            best_arg = res.x / norm
    return best_val, np.asarray(best_arg, dtype=float)


def positivity_floor(g):
    """Threshold below which a sphere value of g counts as 'not positive'.

    Scaled to the coefficient magnitude so the test is invariant under
    g -> c*g.
    """
    top = float(np.max(np.abs(g.coeff_vector))) if len(g.coeff_vector) else 0.0
    return 1e-8 * top


def check_in_cone(g, angular_budget=None):
    """Raise NotInConeError unless g is strictly positive on the sphere."""
    val, arg = min_on_sphere(g, angular_budget)
    if val <= positivity_floor(g):
        raise NotInConeError(
            f"sphere minimum {val:.3e} at {np.round(arg, 6)} is not strictly "
            f"positive; exp(-g) is not integrable"
        )
    return val
