"""Printing in the same grammar the parser accepts."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .expr import Add, Const, Exp, Expr, Func, Ln, Mul, Pow, Sym, poly_to_expr


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _exponent(n: Fraction) -> str:
    if n.denominator == 1 and n > 0:
        return str(n.numerator)
    return f"({_frac(n)})"


def to_str(e: Expr) -> str:
    return _str(e, 0)


# precedence: 0 sum, 1 product, 2 power/atom
def _str(e: Expr, prec: int) -> str:
    if isinstance(e, Const):
        s = _frac(e.value)
        if (e.value < 0 and prec > 0) or (e.value.denominator != 1 and prec > 1):
            return f"({s})"
        return s
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Add):
        parts = []
        for i, t in enumerate(e.terms):
            if _is_negative(t):
                parts.append(("-" if i == 0 else " - ") + _str(_negated(t), 1))
            else:
                parts.append(("" if i == 0 else " + ") + _str(t, 1))
        out = "".join(parts)
        return f"({out})" if prec > 0 else out
    if isinstance(e, Mul):
        fs = e.factors
        lead = ""
        if len(fs) > 1 and isinstance(fs[0], Const):
            c = fs[0].value
            sign = "-" if c < 0 else ""
            if abs(c) == 1:
                lead = sign
            elif c.denominator == 1:
                lead = f"{sign}{abs(c)}*"
            else:
                lead = f"{sign}({_frac(abs(c))})*"
            fs = fs[1:]
        out = lead + "*".join(_str(f, 2) for f in fs)
        if prec > 1 or (prec == 1 and lead.startswith("-")):
            return f"({out})"
        return out
    if isinstance(e, Pow):
        base = _str(e.base, 3)
        if isinstance(e.base, Pow):
            base = f"({base})"
        return f"{base}^{_exponent(e.exponent)}"
    if isinstance(e, Exp):
        return f"exp({_str(e.arg, 0)})"
    if isinstance(e, Ln):
        return f"ln({_str(e.arg, 0)})"
    if isinstance(e, Func):
        return f"{e.name}{chr(39) * e.order}({_str(e.arg, 0)})"
    raise TypeError(f"unknown node {e!r}")


def _is_negative(t: Expr) -> bool:
    if isinstance(t, Const):
        return t.value < 0
    return isinstance(t, Mul) and isinstance(t.factors[0], Const) and t.factors[0].value < 0


def _negated(t: Expr) -> Expr:
    if isinstance(t, Const):
        return Const(-t.value)
    c = -t.factors[0].value
    rest = t.factors[1:]
    if c == 1:
        return rest[0] if len(rest) == 1 else Mul(rest)
    return Mul((Const(c),) + rest)


def poly_to_str(p, order: Mapping[str, int] | None = None) -> str:
    return to_str(poly_to_expr(p, order))


def frac_to_str(f, order: Mapping[str, int] | None = None) -> str:
    num = poly_to_str(f.num, order)
    if not f.den:
        return num
    dens = []
    for fac, k in sorted(f.den.items(), key=lambda fk: poly_to_str(fk[0])):
        s = poly_to_str(fac, order)
        if len(fac.terms) > 1:
            s = f"({s})"
        dens.append(s if k == 1 else f"{s}^{k}")
    if len(f.num.terms) > 1:
        num = f"({num})"
    return f"{num}/" + ("*".join(dens) if len(dens) == 1 else "(" + "*".join(dens) + ")")
