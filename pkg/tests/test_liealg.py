import random
from fractions import Fraction

import numpy as np
import pytest

from liepoint import liealg
from liepoint.exprcore import Context, diff_symbol, evaluate, parse_expr, poly_to_expr
from liepoint.liealg import (LogEps, UnsupportedFlowError, adjoint_exp, adjoint_series,
                             adjoint_table, bracket, commutator_table, flow, flow_matches,
                             structure_constants)
from liepoint.prolong import VectorField


def test_commutator_table_matches_reference(alg, ref_tables):
    assert commutator_table(alg) == ref_tables["lie_table"]


def test_bracket_is_antisymmetric(basis):
    for X in basis:
        for Y in basis:
            assert (bracket(X, Y) + bracket(Y, X)).is_zero()


def test_jacobi_identity(basis):
    for X in basis:
        for Y in basis:
            for Z in basis:
                s = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
                assert s.is_zero()


def test_not_closed_raises(rnc, basis):
    extra = VectorField.from_dict(rnc, {"y": "x^2"})
    with pytest.raises(liealg.NotClosedError):
        structure_constants(basis + [extra])


@pytest.fixture(scope="module")
def heat_alg(heat_spec):
    return structure_constants(heat_spec.expected, heat_spec.labels)


@pytest.mark.parametrize("sign", liealg.SIGNS)
def test_closed_form_matches_lie_series(alg, heat_alg, sign):
    for A in (alg, heat_alg):
        for i in range(A.dim):
            M = adjoint_exp(A, i, sign)
            S = adjoint_series(A, i, 6, sign)
            for r in range(A.dim):
                for c in range(A.dim):
                    assert M.entries[r][c].taylor(6) == S[r][c]


def test_group_law(alg, heat_alg):
    rng = random.Random(3)
    for A in (alg, heat_alg):
        for i in range(A.dim):
            M = adjoint_exp(A, i)
            for _ in range(5):
                e1, e2 = rng.uniform(-1, 1), rng.uniform(-1, 1)
                assert np.allclose(M(e1) @ M(e2), M(e1 + e2), atol=1e-12)
            assert np.allclose(M(0.0), np.eye(A.dim))


def test_sign_conventions(alg):
    eq6 = adjoint_table(alg, "eq6")
    pap = adjoint_table(alg, "paper")
    assert eq6[2][0] == "exp(eps)*X1" and pap[2][0] == "exp(-eps)*X1"
    assert eq6[0][2] == "X3 - eps*X1" and pap[0][2] == "X3 + eps*X1"
    with pytest.raises(ValueError):
        adjoint_exp(alg, 0, "bogus")


def test_scaling_rows_agree_with_reference(alg, ref_tables):
    ours = adjoint_table(alg, "paper")
    for i in (2, 3):
        assert ours[i] == ref_tables["adjoint_table"][i]


def test_exact_entries(alg):
    M = adjoint_exp(alg, 3)
    assert M.exact_entry(0, 0, LogEps(Fraction(1, 2), Fraction(9))) == 9
    assert M.exact_entry(0, 0, Fraction(1, 3)) is None
    vec, exact = M.apply([1, 1, 0, 0], LogEps(Fraction(-1), Fraction(2)))
    assert exact and vec == [Fraction(1, 4), Fraction(1, 2), 0, 0]
    vec, exact = M.apply([1, 0, 0, 0], Fraction(1, 3))
    assert not exact and vec[0] == pytest.approx(np.exp(2 / 3))


def test_flows_match_reference(rnc, basis, ref_tables):
    for X, expected in zip(basis, ref_tables["flows"]):
        got = flow(X)
        ctx = Context(free=True, aliases=rnc.aliases)
        exp = {rnc.aliases.get(k, k): parse_expr(v, ctx) for k, v in expected.items()}
        assert flow_matches(got, exp)


def test_flow_is_generated_by_field(rnc, basis):
    rng = random.Random(11)
    for X in basis:
        F = flow(X)
        for _ in range(3):
            pt = {z: rng.uniform(0.5, 2.0) for z in rnc.coordinates}
            at0 = dict(pt, h=0.0)
            for z, c in zip(rnc.coordinates, X.comps):
                assert evaluate(F[z], at0) == pytest.approx(pt[z])
                d = evaluate(diff_symbol(F[z], "h"), at0)
                assert d == pytest.approx(evaluate(poly_to_expr(c), pt))


def test_flow_group_property(rnc, basis):
    # phi_{h1} o phi_{h2} = phi_{h1 + h2}
    for X in basis:
        F = flow(X)
        pt = {z: 1.3 for z in rnc.coordinates}
        mid = {z: evaluate(F[z], dict(pt, h=0.4)) for z in rnc.coordinates}
        two = {z: evaluate(F[z], dict(mid, h=-0.1)) for z in rnc.coordinates}
        one = {z: evaluate(F[z], dict(pt, h=0.3)) for z in rnc.coordinates}
        assert two == pytest.approx(one)


def test_unsupported_flow(rnc):
    with pytest.raises(UnsupportedFlowError):
        flow(VectorField.from_dict(rnc, {"x": "x^2"}))
