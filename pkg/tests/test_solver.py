"""Interior-point solver for the discretized minimum-volume program."""

import math

import numpy as np
import pytest

from conftest import philox, random_cloud, symmetric_cloud
from homfit import (ConstraintSet, ConvergenceError, DegenerateInputError,
                    HomogeneousPoly, SolverConfig, initial_guess,
                    integral_exp, kkt_residual, objective_grad_hess,
                    solve_min_volume)

PI = math.pi


@pytest.fixture
def disk4():
    return ConstraintSet([[1, 0], [0, 1], [-1, 0], [0, -1]])


def test_disk_four_points(disk4):
    rep = solve_min_volume(disk4, 2)
    assert rep.g_star.coeff((2, 0)) == pytest.approx(1.0, abs=1e-7)
    assert rep.g_star.coeff((0, 2)) == pytest.approx(1.0, abs=1e-7)
    assert rep.g_star.coeff((1, 1)) == pytest.approx(0.0, abs=1e-7)
    assert rep.objective == pytest.approx(PI, rel=1e-7)
    assert rep.volume == pytest.approx(PI, rel=1e-7)
    # all four contacts active with equal weight pi/4
    assert sorted(rep.dual_weights) == [0, 1, 2, 3]
    for w in rep.dual_weights.values():
        assert w == pytest.approx(PI / 4.0, rel=1e-6)
    assert rep.kkt_residual <= 1e-8


def test_axis_ellipse():
    cs = ConstraintSet([[2, 0], [0, 1], [-2, 0], [0, -1]])
    rep = solve_min_volume(cs, 2)
    assert rep.g_star.coeff((2, 0)) == pytest.approx(0.25, abs=1e-6)
    assert rep.g_star.coeff((0, 2)) == pytest.approx(1.0, abs=1e-6)
    assert rep.volume == pytest.approx(2.0 * PI, rel=1e-6)


def test_dual_mass_identity(disk4):
    # sum of multipliers = (n/d) * objective at the optimum
    rep = solve_min_volume(disk4, 2)
    mass = sum(rep.dual_weights.values())
    assert mass == pytest.approx((2.0 / 2.0) * rep.objective, rel=1e-7)
    dense = rep.multipliers_array(len(disk4))
    assert dense.shape == (4,)
    assert dense.sum() == pytest.approx(mass)


def test_initial_guess_examples(disk4):
    g = initial_guess(disk4, 2)
    assert g.coeff((2, 0)) == pytest.approx(1.0 / 1.01)
    assert g.coeff((0, 2)) == pytest.approx(1.0 / 1.01)
    vals = g(disk4.points)
    assert np.max(vals) < 1.0

    single = ConstraintSet([[2.0, 0.0]])
    g4 = initial_guess(single, 4)
    assert g4.coeff((4, 0)) == pytest.approx(1.0 / (1.01 * 16.0))


def test_objective_grad_hess_gaussian():
    g = HomogeneousPoly(2, 2, {(2, 0): 1.0, (0, 2): 1.0})
    f, grad, hess, mv = objective_grad_hess(g)
    assert f == pytest.approx(PI, rel=1e-9)
    # basis order (2,0),(1,1),(0,2); gradient is minus the moment vector
    assert grad == pytest.approx([-PI / 2.0, 0.0, -PI / 2.0], abs=1e-9)
    assert hess[0, 0] == pytest.approx(3.0 * PI / 4.0, rel=1e-8)   # I_(4,0)
    assert hess[0, 2] == pytest.approx(PI / 4.0, rel=1e-8)         # I_(2,2)
    assert hess[1, 1] == pytest.approx(PI / 4.0, rel=1e-8)
    assert np.allclose(hess, hess.T)
    assert mv.y0 == pytest.approx(f)


def test_kkt_residual_disk(disk4):
    g = HomogeneousPoly(2, 2, {(2, 0): 1.0, (0, 2): 1.0})
    lam = {0: PI / 4.0, 1: PI / 4.0, 2: PI / 4.0, 3: PI / 4.0}
    assert kkt_residual(g, lam, disk4) <= 1e-8
    # dropping the multipliers leaves pure stationarity error
    assert kkt_residual(g, np.zeros(4), disk4) == pytest.approx(0.5, rel=1e-8)
    with pytest.raises(ValueError):
        kkt_residual(g, {0: -1.0}, disk4)
    with pytest.raises(ValueError):
        kkt_residual(g, np.ones(3), disk4)


def test_collinear_points_degenerate():
    cs = ConstraintSet([[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0]])
    with pytest.raises(DegenerateInputError):
        solve_min_volume(cs, 2)


@pytest.mark.parametrize("seed,degree", [(0, 2), (5, 4)])
def test_homogeneity_scaling(seed, degree):
    pts = symmetric_cloud(seed, n=2, m=10)
    c = 1.7
    rep1 = solve_min_volume(ConstraintSet(pts), degree)
    rep2 = solve_min_volume(ConstraintSet(c * pts), degree)
    assert rep2.volume == pytest.approx(c ** 2 * rep1.volume, rel=1e-6)
    for a, v in rep1.g_star.coeffs_dict().items():
        assert rep2.g_star.coeff(a) == pytest.approx(c ** -degree * v, abs=1e-6)


def test_random_cloud_feasible_and_certified():
    pts = random_cloud(3, n=2, m=25)
    cs = ConstraintSet(pts)
    rep = solve_min_volume(cs, 2)
    vals = rep.g_star(cs.points)
    assert np.max(vals) <= 1.0 + 1e-9
    assert rep.kkt_residual <= 1e-8
    lam = {i: w for i, w in rep.dual_weights.items()}
    # residual re-measured from scratch in the original frame stays small
    assert kkt_residual(rep.g_star, lam, cs) <= 1e-5


def test_quartic_cloud_converges():
    pts = symmetric_cloud(7, n=2, m=14)
    rep = solve_min_volume(ConstraintSet(pts), 4)
    assert rep.kkt_residual <= 1e-8
    vals = rep.g_star(pts)
    assert np.max(vals) <= 1.0 + 1e-9
    assert np.max(vals) >= 1.0 - 1e-6     # some contact touches the level set


def test_converse_sufficiency(disk4):
    # any feasible perturbation of the optimum cannot beat its objective
    rep = solve_min_volume(disk4, 2)
    rng = philox(13)
    f_star = rep.objective
    for _ in range(10):
        delta = 0.05 * rng.normal(size=3)
        pert = HomogeneousPoly(2, 2, rep.g_star.coeff_vector + delta)
        vals = pert(disk4.points)
        top = float(np.max(vals))
        if top <= 0:
            continue
        scaled = pert * (1.0 / top)      # feasible: max_i g(x_i) = 1
        try:
            f = integral_exp(scaled)
        except Exception:
            continue
        assert f >= f_star - 1e-8 * f_star


def test_warm_start_and_validation(disk4):
    rep = solve_min_volume(disk4, 2)
    again = solve_min_volume(disk4, 2, start=rep.g_star)
    assert again.objective == pytest.approx(rep.objective, rel=1e-9)
    with pytest.raises(ValueError):
        solve_min_volume(disk4, 2, start=HomogeneousPoly(2, 4, {(4, 0): 1.0}))
    with pytest.raises(ValueError):
        solve_min_volume(disk4, 3)
    with pytest.raises(ValueError):
        SolverConfig(kkt_tolerance=0.0)
    with pytest.raises(ValueError):
        SolverConfig(barrier_multiplier=1.0)


def test_iteration_budget_exhaustion():
    pts = random_cloud(2, n=2, m=30)
    cfg = SolverConfig(max_newton_iters=3, max_stages=2)
    with pytest.raises(ConvergenceError):
        solve_min_volume(ConstraintSet(pts), 2, config=cfg)
