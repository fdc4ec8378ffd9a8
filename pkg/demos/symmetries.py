"""
Point symmetries of a boundary-layer system
===========================================

Solve the determining equations of the radiating natural-convection
system for polynomial generators of increasing degree.
"""

from liepoint import load_spec, solve_symmetries, span_contains

spec = load_spec("rnc.json")
sys = spec.system
for eq in sys.equations:
    print("  0 =", eq)

# each extra degree adds one member of the shift family
# y -> y + f(x), v -> v + f'(x) u
for d in range(4):
    basis = solve_symmetries(sys, d).basis
    print(f"degree <= {d}: dimension {len(basis)}")

basis = solve_symmetries(sys, 2).basis
for k, X in enumerate(basis):
    print(f"  Y{k + 1} = {X}")

# the four named generators sit inside the computed algebra
for label, X in zip(spec.labels, spec.expected):
    print(label, X, "contained:", span_contains(basis, X))
