import random
from fractions import Fraction

import pytest

from liepoint.detsolve import monomials
from liepoint.exprcore import Poly
from liepoint.prolong import (VectorField, apply_criterion, characteristic_polys, prolong,
                              prolong_characteristic)


def _random_field(sys, rng):
    monos = monomials(sys.coordinates, 2)
    comps = []
    for _ in sys.coordinates:
        c = Poly()
        for m in rng.sample(monos, 3):
            c = c + Poly.monomial(m, Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        comps.append(c)
    return VectorField(sys.coordinates, tuple(comps), sys.p)


def test_prolongation_formulas_agree(rnc):
    rng = random.Random(7)
    for _ in range(50):
        X = _random_field(rnc, rng)
        a = prolong(X, 2, rnc)
        b = prolong_characteristic(X, 2, rnc)
        assert a.eta == b.eta


def test_characteristic_of_scaling(rnc, basis):
    Q = characteristic_polys(basis[3], rnc)
    P = lambda t: Poly.sym(t)
    assert Q[0] == -2 * P("x") * P("u_x") - P("y") * P("u_y")
    assert Q[1] == -P("v") - 2 * P("x") * P("v_x") - P("y") * P("v_y")


def test_known_generators_leave_system_invariant(rnc, basis):
    for X in basis:
        assert all(r.is_zero() for r in apply_criterion(X, rnc))


def test_scaling_u_alone_is_not_a_symmetry(rnc):
    X = VectorField.from_dict(rnc, {"u": "u"})
    assert any(not r.is_zero() for r in apply_criterion(X, rnc))


def test_prolong_order_must_be_positive(rnc, basis):
    with pytest.raises(ValueError):
        prolong(basis[0], 0, rnc)


def test_from_dict_rejects_unknown_components(rnc):
    with pytest.raises(KeyError):
        VectorField.from_dict(rnc, {"z": "1"})
