import pytest

from liepoint.detsolve import (DependentFieldsError, build_ansatz, canonical_basis,
                               check_generator, monomials, same_span, solve_symmetries,
                               span_contains)
from liepoint.jet import solve_leading


def test_monomials_are_sorted_and_counted():
    ms = monomials(("x", "y"), 2)
    assert ms[0] == () and len(ms) == 6
    assert all(list(m) == sorted(m) for m in ms)


def test_ansatz_size(rnc):
    ans = build_ansatz(rnc, 1)
    assert len(ans.unknowns) == 5 * 6
    with pytest.raises(ValueError):
        build_ansatz(rnc, -1)


@pytest.mark.parametrize("d, dim", [(0, 2), (1, 5), (2, 6), (3, 7)])
def test_rnc_dimensions(rnc, d, dim):
    sf = solve_leading(rnc)
    b = solve_symmetries(rnc, d, sf)
    assert b.dimension == dim
    assert all(check_generator(X, rnc, sf) for X in b.basis)


def test_known_generators_found_at_degree_one(rnc, basis):
    b = solve_symmetries(rnc, 1)
    assert all(span_contains(b.basis, X) for X in basis)


def test_extra_generators_are_genuine(rnc, basis):
    # the transverse shift family y -> y + f(x), v -> v + f'(x) u
    b = solve_symmetries(rnc, 3)
    extra = [X for X in b.basis if not span_contains(basis, X)]
    assert [str(X) for X in extra] == ["x*d_y + u*d_v", "x^2*d_y + 2*u*x*d_v",
                                       "x^3*d_y + 3*u*x^2*d_v"]


def test_output_is_deterministic(rnc):
    a = solve_symmetries(rnc, 2)
    b = solve_symmetries(rnc, 2)
    assert [X.to_dict(rnc) for X in a.basis] == [X.to_dict(rnc) for X in b.basis]


def test_canonical_basis_is_span_invariant(rnc, basis):
    mixed = [basis[0] + basis[1], basis[1] - basis[2], 3 * basis[3], basis[2]]
    assert same_span(canonical_basis(mixed).basis, basis)
    assert [str(X) for X in canonical_basis(mixed).basis] == [str(X) for X in canonical_basis(basis).basis]
    with pytest.raises(DependentFieldsError):
        canonical_basis([basis[0], 2 * basis[0]])


def test_heat_equation(heat_spec):
    sys = heat_spec.system
    b3 = solve_symmetries(sys, 3)
    assert all(span_contains(b3.basis, X) for X in heat_spec.expected)
    b2 = solve_symmetries(sys, 2)
    assert not span_contains(b2.basis, heat_spec.expected[5])
