"""Lie point symmetries of polynomial PDE systems.

Exact symmetry computation, Lie algebra tables, one-dimensional optimal
systems, similarity reductions and a numeric plug-back check.
"""

from .detsolve import (GeneratorBasis, canonical_basis, check_generator, same_span,
                       solve_symmetries, span_contains)
from .jet import PdeSystem, SolvedForm, solve_leading, total_derivative
from .liealg import (LieAlgebra, adjoint_exp, adjoint_table, bracket, commutator_table, flow,
                     structure_constants)
from .numverify import GridSpec, OdeIvp, integrate_range, pde_residual, rk4_integrate, to_first_order
from .optsys import classify, normalize_element, verify_inequivalent
from .prolong import VectorField, apply_criterion, prolong, prolong_characteristic
from .reduce import characteristic, invariants, reduce_system
from .systemspec import load_spec

__version__ = "0.1.0"

__all__ = [
    "GeneratorBasis", "GridSpec", "LieAlgebra", "OdeIvp", "PdeSystem", "SolvedForm",
    "VectorField", "adjoint_exp", "adjoint_table", "apply_criterion", "bracket",
    "canonical_basis", "characteristic", "check_generator", "classify", "commutator_table",
    "flow", "integrate_range", "invariants", "load_spec", "normalize_element", "pde_residual",
    "prolong", "prolong_characteristic", "reduce_system", "rk4_integrate", "same_span",
    "solve_leading", "solve_symmetries", "span_contains", "structure_constants",
    "to_first_order", "total_derivative", "verify_inequivalent",
]
