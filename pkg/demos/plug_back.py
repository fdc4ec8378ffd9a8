"""
Numerical plug-back
===================

Integrate the scaling reduction with RK4 and evaluate the original PDE
residual on a grid, once through the chain rule and once by finite
differences.
"""

import numpy as np

from liepoint import liealg, load_spec, numverify, optsys, reduce

spec = load_spec("rnc.json")
sys = spec.system
alg = liealg.structure_constants(spec.expected, spec.labels)
params = {"Gr": 1.0, "calpha": 1.0, "Pr": 0.7, "R": 0.1}

X = alg.element_field(optsys.parse_element(alg, "X4"))
ans = reduce.invariants(X, sys)
ode = numverify.to_first_order(reduce.reduce_system(sys, ans), params)
print("state:", ode.state_names)

# s = y/sqrt(x) covers [0, 1] on the grid below
traj = numverify.integrate_range(ode, 0.0, [0.0, 1.0, 0.0, 1.0, 0.0], 1e-3, -0.01, 1.01)
grid = numverify.GridSpec((1.0, 2.0), (0.0, 1.0), 21, 21)
for mode in ("analytic", "fd"):
    rep = numverify.pde_residual(sys, ans, traj, grid, params, mode=mode)
    print(f"{mode:>8}: max residual {rep.max_residual:.2e}")

# fourth order: halving the step divides the error by about 16
ratio = numverify.rk4_error_ratio(lambda s, y: y, [1.0], lambda T: [np.exp(T)], 1.0, 0.1)
print(f"error ratio {ratio:.2f}")
