"""Shared point sets and helpers for the test suite.

Canonical instances reused across files:
  disk8   eight points on the unit circle (optimal enclosure x^2 + y^2)
  dball8  eight points on the quartic curve x^4 + y^4 = 1 (optimal
          enclosure is the 4-ball itself)
Random clouds are always drawn from a seeded counter-based generator so
every run sees identical data.
"""

import numpy as np
import pytest

import homfit as hf

SQ2 = 1.0 / np.sqrt(2.0)


def philox(seed):
    return np.random.Generator(np.random.Philox(seed))


def random_cloud(seed, n=2, m=25, spread=1.5):
    """Anisotropic full-rank cloud with O(1) scale."""
    rng = philox(seed)
    A = rng.normal(size=(n, n)) + spread * np.eye(n)
    return rng.normal(size=(m, n)) @ A


def symmetric_cloud(seed, n=2, m=12, spread=1.5):
    """Cloud closed under x -> -x, as the origin-centered problem expects."""
    half = random_cloud(seed, n=n, m=m, spread=spread)
    return np.concatenate([half, -half])


@pytest.fixture
def disk8():
    pts = np.array([[1, 0], [0, 1], [-1, 0], [0, -1],
                    [SQ2, SQ2], [-SQ2, SQ2], [SQ2, -SQ2], [-SQ2, -SQ2]])
    return hf.ConstraintSet(pts)


@pytest.fixture
def dball8():
    c = 2.0 ** (-0.25)       # x^4 + y^4 = 1 on the diagonal
    pts = np.array([[1, 0], [-1, 0], [0, 1], [0, -1],
                    [c, c], [c, -c], [-c, c], [-c, -c]])
    return hf.ConstraintSet(pts)


@pytest.fixture
def spec3():
    """Quadrature/tolerance pairing for n=3 (QMC sphere rule)."""
    return hf.QuadratureSpec(angular_points=2048, tolerance=1e-8,
                             max_points=1 << 18)


@pytest.fixture
def cfg3(spec3):
    return hf.SolverConfig(kkt_tolerance=1e-6, quadrature=spec3)
