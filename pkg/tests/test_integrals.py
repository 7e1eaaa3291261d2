"""Moments of exp(-g): frozen oracle values, identities, error paths.

The quartic reference numbers were computed independently with
scipy.integrate.quad on the 1-D integrals Integral_R t^k exp(-t^4) dt
(they also match the closed form 2*Gamma((k+1)/4)/4) and are frozen here;
the package must reproduce them through its own sphere quadrature.
"""

import math

import numpy as np
import pytest

from conftest import philox
from homfit import (HomogeneousPoly, NotInConeError, QuadratureSpec,
                    crosscheck_levelset_moment, integral_exp, moment,
                    moment_vector, volume_sublevel)
from homfit.polynomials import basis_for

# scipy.integrate.quad oracles, frozen (see module docstring)
INT_EXP_T4 = 1.8128049541109543        # Integral_R exp(-t^4) dt
INT_T2_EXP_T4 = 0.6127083512325889     # Integral_R t^2 exp(-t^4) dt
INT_T4_EXP_T4 = 0.45320123852773875    # Integral_R t^4 exp(-t^4) dt
Y0_QUARTIC = INT_EXP_T4 ** 2           # = 3.286261801649219, by separability
VOL_QUARTIC = 3.708149354602744        # Y0_QUARTIC / Gamma(1 + 2/4)
M22_QUARTIC = INT_T2_EXP_T4 ** 2       # = 0.37541152367015757

GAUSS2 = HomogeneousPoly(2, 2, {(2, 0): 1.0, (0, 2): 1.0})
QUARTIC2 = HomogeneousPoly(2, 4, {(4, 0): 1.0, (0, 4): 1.0})


def test_integral_exp_gaussian():
    assert integral_exp(GAUSS2) == pytest.approx(math.pi, rel=1e-12)
    gauss3 = HomogeneousPoly.sum_of_powers(3, 2)
    assert integral_exp(gauss3) == pytest.approx(math.pi ** 1.5, rel=1e-10)
    gauss4 = HomogeneousPoly.sum_of_powers(4, 2)
    assert integral_exp(gauss4) == pytest.approx(math.pi ** 2, rel=1e-10)


def test_integral_exp_quartic_frozen():
    assert integral_exp(QUARTIC2) == pytest.approx(Y0_QUARTIC, rel=1e-10)
    # 1-D case: the sphere degenerates to two points, value is the 1-D integral
    q1 = HomogeneousPoly(1, 4, {(4,): 1.0})
    assert integral_exp(q1) == pytest.approx(INT_EXP_T4, rel=1e-12)


def test_scaling_law_seeded():
    rng = philox(31)
    for _ in range(6):
        lam = float(rng.uniform(0.3, 4.0))
        scaled = integral_exp(GAUSS2 * lam)
        assert scaled == pytest.approx(lam ** -1.0 * math.pi, rel=1e-8)
    assert integral_exp(GAUSS2 * 2.0) == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_volume_sublevel_values():
    assert volume_sublevel(GAUSS2, 1.0) == pytest.approx(math.pi, rel=1e-12)
    assert volume_sublevel(GAUSS2, 4.0) == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert volume_sublevel(QUARTIC2, 1.0) == pytest.approx(VOL_QUARTIC, rel=1e-10)
    assert volume_sublevel(GAUSS2, 0.0) == 0.0
    with pytest.raises(ValueError):
        volume_sublevel(GAUSS2, -1.0)


def test_single_moments():
    assert moment(GAUSS2, (2, 0)) == pytest.approx(math.pi / 2.0, rel=1e-12)
    assert moment(GAUSS2, (1, 1)) == pytest.approx(0.0, abs=1e-12)
    assert moment(QUARTIC2, (4, 0)) == pytest.approx(INT_T4_EXP_T4 * INT_EXP_T4,
                                                     rel=1e-10)
    assert moment(QUARTIC2, (2, 2)) == pytest.approx(M22_QUARTIC, rel=1e-10)
    with pytest.raises(ValueError):
        moment(GAUSS2, (1, 1, 1))


def test_moment_vector_gaussian():
    mv = moment_vector(GAUSS2)
    assert mv.y0 == pytest.approx(math.pi, rel=1e-12)
    expect = {(2, 0): math.pi / 2.0, (1, 1): 0.0, (0, 2): math.pi / 2.0}
    for alpha, val in expect.items():
        assert mv.moments_d[alpha] == pytest.approx(val, abs=1e-12)


def test_euler_identity_seeded():
    rng = philox(32)
    for _ in range(8):
        n = int(rng.choice([2, 2, 3]))
        d = int(rng.choice([2, 4]))
        base = HomogeneousPoly.sum_of_powers(n, d)
        pert = HomogeneousPoly(n, d, 0.25 * rng.normal(size=len(basis_for(n, d))))
        g = base + pert
        spec = QuadratureSpec(angular_points=512, tolerance=1e-9) if n == 3 else None
        mv = moment_vector(g, spec)
        lhs = sum(g.coeff(a) * mv.moments_d[a] for a in basis_for(n, d))
        assert abs(lhs - (n / d) * mv.y0) <= 1e-8 * mv.y0


def test_hessian_matrix_structure():
    mv = moment_vector(GAUSS2, include_2d=True)
    H = mv.hessian_matrix()
    assert np.allclose(H, H.T)
    basis = basis_for(2, 2)
    i, j = basis.index_of((2, 0)), basis.index_of((0, 2))
    # H[(2,0),(0,2)] = moment (2,2) of the Gaussian = pi/4
    assert H[i, j] == pytest.approx(math.pi / 4.0, rel=1e-12)
    # aliasing: same entry wherever the exponent sums agree
    k = basis.index_of((1, 1))
    assert H[k, k] == pytest.approx(H[i, j], rel=1e-14)
    # without the 2d slice the matrix is unavailable
    with pytest.raises(ValueError):
        moment_vector(GAUSS2).hessian_matrix()


def test_even_moments_positive():
    mv = moment_vector(QUARTIC2, include_2d=True)
    for alpha, val in {**mv.moments_d, **mv.moments_2d}.items():
        if all(a % 2 == 0 for a in alpha):
            assert val > 0.0


def test_objective_convexity_seeded():
    rng = philox(33)
    for _ in range(6):
        d = int(rng.choice([2, 4]))
        g = HomogeneousPoly.sum_of_powers(2, d) * float(rng.uniform(0.5, 2.0))
        h = g + HomogeneousPoly(2, d, 0.2 * rng.normal(size=len(basis_for(2, d))))
        lam = float(rng.uniform(0.1, 0.9))
        mix = g * lam + h * (1.0 - lam)
        f_mix = integral_exp(mix)
        bound = lam * integral_exp(g) + (1.0 - lam) * integral_exp(h)
        assert f_mix <= bound + 1e-8


def test_not_in_cone_rejected():
    bad = HomogeneousPoly(2, 4, {(2, 2): 1.0})
    with pytest.raises(NotInConeError):
        integral_exp(bad)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(angular_points=8)
    with pytest.raises(ValueError):
        QuadratureSpec(tolerance=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(angular_points=64, max_points=32)
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="nonexistent_rule")
    spec = QuadratureSpec(scheme="fibonacci_sphere")
    with pytest.raises(ValueError):
        spec.scheme_for(2)      # pinned scheme does not apply in n=2
    with pytest.raises(ValueError):
        QuadratureSpec().scheme_for(5)


def test_hint_reuse_is_consistent():
    hint = {}
    mv1 = moment_vector(QUARTIC2, hint=hint)
    assert hint.get("res", 0) > 0
    mv2 = moment_vector(QUARTIC2, hint=hint)
    assert mv2.quadrature_info["converged"]
    assert mv2.y0 == pytest.approx(mv1.y0, rel=1e-12)


def test_crosscheck_levelset_moments():
    r = crosscheck_levelset_moment(GAUSS2, (0, 0), mc_budget=200_000, seed=7)
    assert r.agree
    assert r.lhs == pytest.approx(math.pi, rel=1e-10)
    r = crosscheck_levelset_moment(GAUSS2, (2, 0), mc_budget=200_000, seed=8)
    assert r.agree
    assert r.lhs == pytest.approx(math.pi / 2.0, rel=1e-10)
    r = crosscheck_levelset_moment(QUARTIC2, (0, 0), mc_budget=200_000, seed=9)
    assert r.agree
    assert r.lhs == pytest.approx(Y0_QUARTIC, rel=1e-9)
