"""Recovering a non-convex generator from boundary samples.

The sublevel set of g = x^2 y^2 + 0.1 (x^4 + y^4) is a four-petal star,
nothing an ellipsoid could describe.  Sampling its boundary and asking
for the minimum-volume degree-4 enclosure gives the generator back: the
boundary points are all contacts, and the strictly convex objective
pins g uniquely.
"""

import numpy as np

from homfit import (ConstraintSet, HomogeneousPoly, build_certificate,
                    integral_exp, solve_min_volume)

g0 = HomogeneousPoly(2, 4, {(2, 2): 1.0, (4, 0): 0.1, (0, 4): 0.1})
m = 2000
theta = 2.0 * np.pi * np.arange(m) / m
units = np.column_stack([np.cos(theta), np.sin(theta)])
boundary = units * (g0(units) ** -0.25)[:, None]
print(f"sampled {m} boundary points of the star {{x^2 y^2 + 0.1(x^4+y^4) <= 1}}")

rep = solve_min_volume(ConstraintSet(boundary), 4)
print()
print("recovered coefficients (generator in parentheses):")
for alpha, c in rep.g_star.coeffs_dict().items():
    print(f"  x^{alpha[0]} y^{alpha[1]}: {c:+.6f}  ({g0.coeff(alpha):+.1f})")
gap = np.max(np.abs(rep.g_star.coeff_vector - g0.coeff_vector))
print(f"worst coefficient gap {gap:.2e}")
print(f"objective {rep.objective:.9f} vs generator {integral_exp(g0):.9f}")

print()
cert = build_certificate(rep, ConstraintSet(boundary))
print(f"certificate: {len(cert.weights)} atoms (bound {cert.atom_bound}), "
      f"moment residual {cert.moment_residual:.2e}")
print(f"every atom on the level set to {cert.level_residual:.2e}")
print("the optimal measure needs only a handful of the 2000 contacts")
