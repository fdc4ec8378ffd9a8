import pytest

from liepoint.exprcore import Context, Func, Mul, evaluate, parse_expr, poly_normalize, rewrite
from liepoint.exprcore.expr import Add, Exp, Ln, NonPolynomialError, Pow
from liepoint.liealg import flow
from liepoint.optsys import parse_element
from liepoint.prolong import VectorField
from liepoint.reduce import (NonInvariantError, UnsupportedGeneratorError, characteristic,
                             check_ansatz, freeze_functions, invariants, reduce_system)

from conftest import REFERENCE_ELEMENTS


def _field(alg, label):
    return alg.element_field(parse_element(alg, label))


def _one_function(e):
    # every shape function renamed to F, to compare with the single-letter printed forms
    if isinstance(e, Func):
        return Func("F", _one_function(e.arg), e.order)
    if isinstance(e, Add):
        return Add(tuple(_one_function(t) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(_one_function(f) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_one_function(e.base), e.exponent)
    if isinstance(e, (Exp, Ln)):
        return type(e)(_one_function(e.arg))
    return e


def _canon(e):
    e = freeze_functions(rewrite(e))
    try:
        return poly_normalize(e, extended=True)
    except NonPolynomialError:
        return rewrite(e)


def test_characteristic_example(rnc, alg):
    Q = characteristic(_field(alg, "X4"), rnc).as_dict()
    P = lambda t: poly_normalize(rnc.parse(t))
    assert Q["u"] == P("-2*x*u_x - y*u_y")
    assert Q["theta"] == P("-2*theta - 2*x*theta_x - y*theta_y")


@pytest.mark.parametrize("label", sorted(REFERENCE_ELEMENTS))
def test_similarity_forms_match_reference(rnc, alg, ref_tables, label):
    ans = invariants(_field(alg, label), rnc)
    ref = ref_tables["reductions"][label]
    ctx = Context(free=True, functions=("F",), aliases=rnc.aliases)
    assert _canon(ans.s) == _canon(parse_expr(ref["s"], ctx))
    for k, dep in enumerate(rnc.dependents):
        key = next(a for a, t in [(dep, dep)] + list(rnc.aliases.items()) if t == dep and a in ref)
        assert _canon(_one_function(ans.form(k))) == _canon(parse_expr(ref[key], ctx)), dep
    assert len(set(ans.functions)) == rnc.M


@pytest.mark.parametrize("label", sorted(REFERENCE_ELEMENTS))
def test_ansatz_is_invariant(rnc, alg, label):
    X = _field(alg, label)
    assert all(q.is_zero() for q in check_ansatz(X, invariants(X, rnc), rnc))


@pytest.mark.parametrize("label", sorted(REFERENCE_ELEMENTS))
def test_reduced_system_has_no_xy(rnc, alg, label):
    rs = reduce_system(rnc, invariants(_field(alg, label), rnc))
    assert not rs.symbols() & {"x", "y", "_r"}
    assert len(rs.equations) == 3


def test_x4_reduced_equations(rnc, alg):
    rs = reduce_system(rnc, invariants(_field(alg, "X4"), rnc))
    eqs = rs.equation_strings()
    assert eqs[0] == "-(1/2)*F_u'*s + F_v'"
    assert eqs[1] == "(1/2)*F_u'*F_u*s + F_theta*Gr*calpha - F_u'*F_v + F_u''"
    assert eqs[2].endswith("/(4*R + 1)")
    assert rs.orders == {"F_u": 2, "F_v": 1, "F_theta": 2}
    assert rs.leading == ["F_v'", "F_u''", "F_theta''"]


def test_mismatched_ansatz_is_detected(rnc, alg):
    ans = invariants(_field(alg, "X4"), rnc)
    assert any(not q.is_zero() for q in check_ansatz(_field(alg, "X3"), ans, rnc))


@pytest.mark.parametrize("label", ["X3", "X4", "X3+X4", "X4-X3"])
def test_similarity_variable_is_flow_invariant(rnc, alg, label):
    X = _field(alg, label)
    ans = invariants(X, rnc)
    F = flow(X)
    for x, y in [(1.3, 0.4), (2.0, -0.7)]:
        pt = {z: 1.0 for z in rnc.coordinates} | {"x": x, "y": y}
        s0 = evaluate(ans.s, pt)
        for h in (-0.3, 0.5):
            moved = {z: evaluate(F[z], pt | {"h": h}) for z in rnc.coordinates}
            assert evaluate(ans.s, moved) == pytest.approx(s0, rel=1e-12)


def test_unsupported_generators(rnc):
    with pytest.raises(UnsupportedGeneratorError):
        invariants(VectorField.from_dict(rnc, {"u": "u"}), rnc)
    with pytest.raises(UnsupportedGeneratorError):
        invariants(VectorField.from_dict(rnc, {"x": "1", "u": "u"}), rnc)


def test_non_invariant_equation_is_rejected():
    from liepoint.jet import PdeSystem

    sys = PdeSystem.from_strings(["x", "y"], ["u"], [], ["u_y + x*u"])
    X = VectorField.from_dict(sys, {"x": "1"})
    with pytest.raises(NonInvariantError):
        reduce_system(sys, invariants(X, sys))
