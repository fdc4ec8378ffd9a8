import pytest
from hypothesis import given, settings, strategies as st

from liepoint.exprcore import Poly, frac_to_str, poly_normalize
from liepoint.exprcore.poly import Frac
from liepoint.jet import (JetCoord, LeadingTermError, PdeSystem, reduce_mod_system, solve_leading,
                          total_derivative)


def test_jet_names(rnc):
    assert rnc.jet_name(JetCoord(0, (1, 1))) == "u_xy"
    assert rnc.parse_jet("theta_yy") == JetCoord(2, (0, 2))
    assert rnc.parse_jet("x") is None
    assert rnc.jet_name(JetCoord(1, (0, 0))) == "v"


def test_total_derivative_example(rnc):
    p = Poly.sym("u") * Poly.sym("u_x")
    d = total_derivative(p, 1, rnc)
    assert d == Poly.sym("u_y") * Poly.sym("u_x") + Poly.sym("u") * Poly.sym("u_xy")


jet_names = st.sampled_from(["u", "v", "theta", "u_x", "u_y", "v_x", "theta_y", "u_xy", "x", "y"])
polys = st.lists(st.tuples(st.integers(-3, 3), jet_names, jet_names), min_size=1, max_size=4).map(
    lambda ts: sum((Poly.const(c) * Poly.sym(a) * Poly.sym(b) for c, a, b in ts), Poly()))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_total_derivatives_commute(rnc, p):
    a = total_derivative(total_derivative(p, 0, rnc), 1, rnc)
    b = total_derivative(total_derivative(p, 1, rnc), 0, rnc)
    assert a == b


def test_solved_form_entries(rnc):
    sf = solve_leading(rnc)
    assert [rnc.jet_name(l) for l in sf.leading] == ["v_y", "u_yy", "theta_yy"]
    P = lambda t: poly_normalize(rnc.parse(t))
    v_y, u_yy, t_yy = (sf.table[l] for l in sf.leading)
    assert v_y.num == P("-u_x") and not v_y.den
    assert u_yy.num == P("u*u_x + v*u_y - Gr*calpha*theta") and not u_yy.den
    assert t_yy.num == P("Pr*(u*theta_x + v*theta_y)")
    assert t_yy.den_poly() == P("4*R + 1")
    assert frac_to_str(t_yy, rnc.symbol_order()).endswith("/(4*R + 1)")


def test_reduce_is_idempotent(rnc):
    sf = solve_leading(rnc)
    e = rnc.parse("u_yyy + v_xy*theta_yy + u_xyy")
    once = reduce_mod_system(e, sf)
    assert reduce_mod_system(once, sf) == once
    for s in once.num.symbols():
        jc = rnc.parse_jet(s)
        assert jc is None or sf.reducible(jc) is None


def test_leading_term_errors():
    sys = PdeSystem.from_strings(["x"], ["u"], [], ["u_x^2 - u"])
    with pytest.raises(LeadingTermError):
        solve_leading(sys)
    sys = PdeSystem.from_strings(["x"], ["u"], [], ["u*u_x - 1"])
    with pytest.raises(LeadingTermError):
        solve_leading(sys)
