"""Expression trees: the extended node set on top of exact rationals.

Nodes are frozen dataclasses; operator overloads build trees without any
simplification beyond flattening. :func:`rewrite` is the fixed local pass used
for structural comparison of extended expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .poly import Poly


class Kind(Enum):
    INDEPENDENT = "independent"
    DEPENDENT = "dependent"
    PARAMETER = "parameter"
    JET = "jet"
    FUNCTION_ARG = "function-arg"
    GROUP_PARAM = "group-param"


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: Kind = Kind.FUNCTION_ARG


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, neg(as_expr(other))))

    def __rsub__(self, other):
        return Add((as_expr(other), neg(self)))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        other = as_expr(other)
        if isinstance(other, Const):
            return Mul((Const(1 / other.value), self))
        return Mul((self, Pow(other, Fraction(-1))))

    def __pow__(self, n):
        return Pow(self, Fraction(n))

    def __str__(self):
        from .printer import to_str

        return to_str(self)


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class Sym(Expr):
    name: str

    def __repr__(self):
        return f"Sym({self.name})"


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: tuple

    def __repr__(self):
        return f"Add{self.terms!r}"


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: tuple

    def __repr__(self):
        return f"Mul{self.factors!r}"


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    """``base ^ exponent``; integer exponents are nonzero, rational ones need a symbol-like base."""

    base: Expr
    exponent: Fraction

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exponent})"


@dataclass(frozen=True, repr=False)
class Exp(Expr):
    arg: Expr

    def __repr__(self):
        return f"Exp({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Ln(Expr):
    arg: Expr

    def __repr__(self):
        return f"Ln({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Func(Expr):
    """Opaque function application ``name^(order)(arg)``."""

    name: str
    arg: Expr
    order: int = 0

    def __repr__(self):
        return f"Func({self.name}{chr(39) * self.order}, {self.arg!r})"


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return Sym(x)
    if isinstance(x, Poly):
        return poly_to_expr(x)
    return Const(Fraction(x))


def neg(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Mul) and e.factors and isinstance(e.factors[0], Const):
        c = -e.factors[0].value
        rest = e.factors[1:]
        if c == 1:
            return rest[0] if len(rest) == 1 else Mul(rest)
        return Mul((Const(c),) + rest)
    if isinstance(e, Mul):
        return Mul((Const(Fraction(-1)),) + e.factors)
    return Mul((Const(Fraction(-1)), e))


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def exp(e) -> Expr:
    return Exp(as_expr(e))


def ln(e) -> Expr:
    return Ln(as_expr(e))


# -- polynomial bridge -----------------------------------------------------

class NonPolynomialError(ValueError):
    """Raised by :func:`poly_normalize` on a node outside the polynomial subset."""

    def __init__(self, node: Expr):
        self.node = node
        super().__init__(f"non-polynomial node {type(node).__name__}: {node}")


def poly_normalize(e: Expr, *, extended: bool = False) -> Poly:
    """Canonical sparse polynomial of ``e``.

    With ``extended=True`` powers of single symbols may have negative or
    rational exponents (Laurent-Puiseux monomials); everything else in the
    extended node set still raises :class:`NonPolynomialError`.
    """
    if isinstance(e, Const):
        return Poly.const(e.value)
    if isinstance(e, Sym):
        return Poly.sym(e.name)
    if isinstance(e, Add):
        out = Poly()
        for t in e.terms:
            out = out + poly_normalize(t, extended=extended)
        return out
    if isinstance(e, Mul):
        out = Poly.const(1)
        for f in e.factors:
            out = out * poly_normalize(f, extended=extended)
        return out
    if isinstance(e, Pow):
        n = e.exponent
        if n.denominator == 1 and n > 0:
            return poly_normalize(e.base, extended=extended) ** int(n)
        if extended:
            base = poly_normalize(e.base, extended=True)
            if len(base.terms) == 1:
                (m, c), = base.terms.items()
                if c == 1 or (n.denominator == 1):
                    coeff = c ** int(n) if n.denominator == 1 else Fraction(1)
                    return Poly.monomial(tuple((k, _norm(ex * n)) for k, ex in m), coeff)
        raise NonPolynomialError(e)
    raise NonPolynomialError(e)


def _norm(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def poly_to_expr(p: Poly, order: Mapping[str, int] | None = None) -> Expr:
    terms = []
    for mono, c in p.sorted_terms(order):
        factors = []
        for k, e in sorted(mono, key=lambda ke: _rank(order, ke[0])):
            factors.append(Sym(k) if e == 1 else Pow(Sym(k), Fraction(e)))
        if c != 1 or not factors:
            factors.insert(0, Const(c))
        terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))
    if not terms:
        return ZERO
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _rank(order, name):
    if order is None:
        return (0, name)
    return (order.get(name, len(order)), name)


# -- calculus ---------------------------------------------------------------

def diff_symbol(e: Expr, s) -> Expr:
    """Partial derivative with respect to the symbol ``s`` (name or Symbol)."""
    name = s if isinstance(s, str) else s.name
    return rewrite(_diff(e, name))


def _diff(e: Expr, name: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == name else ZERO
    if isinstance(e, Add):
        return Add(tuple(_diff(t, name) for t in e.terms))
    if isinstance(e, Mul):
        out = []
        for i, f in enumerate(e.factors):
            df = _diff(f, name)
            if df == ZERO:
                continue
            out.append(Mul(e.factors[:i] + (df,) + e.factors[i + 1:]))
        return Add(tuple(out)) if out else ZERO
    if isinstance(e, Pow):
        db = _diff(e.base, name)
        if db == ZERO:
            return ZERO
        n = e.exponent
        lower = e.base if n == 2 else Pow(e.base, n - 1)
        if n == 1:
            lower = ONE
        return Mul((Const(n), lower, db))
    if isinstance(e, Exp):
        return Mul((e, _diff(e.arg, name)))
    if isinstance(e, Ln):
        return Mul((Pow(e.arg, Fraction(-1)), _diff(e.arg, name)))
    if isinstance(e, Func):
        return Mul((Func(e.name, e.arg, e.order + 1), _diff(e.arg, name)))
    raise TypeError(f"unknown node {e!r}")


def substitute(e: Expr, bindings: Mapping) -> Expr:
    """Simultaneous substitution; keys are names or Symbols."""
    table = {(k if isinstance(k, str) else k.name): as_expr(v) for k, v in bindings.items()}
    return _subs(e, table)


def _subs(e: Expr, table) -> Expr:
    if isinstance(e, Sym):
        return table.get(e.name, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return Add(tuple(_subs(t, table) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(_subs(f, table) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(_subs(e.base, table), e.exponent)
    if isinstance(e, Exp):
        return Exp(_subs(e.arg, table))
    if isinstance(e, Ln):
        return Ln(_subs(e.arg, table))
    if isinstance(e, Func):
        return Func(e.name, _subs(e.arg, table), e.order)
    raise TypeError(f"unknown node {e!r}")


def free_symbols(e: Expr) -> set:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Const):
        return set()
    if isinstance(e, Add):
        return set().union(*(free_symbols(t) for t in e.terms))
    if isinstance(e, Mul):
        return set().union(*(free_symbols(f) for f in e.factors))
    if isinstance(e, Pow):
        return free_symbols(e.base)
    if isinstance(e, (Exp, Ln)):
        return free_symbols(e.arg)
    if isinstance(e, Func):
        return free_symbols(e.arg)
    raise TypeError(f"unknown node {e!r}")


def evaluate(e: Expr, values: Mapping, funcs: Mapping | None = None):
    """Numeric evaluation. ``funcs[(name, order)]`` supplies opaque functions."""
    import math

    import numpy as np

    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Sym):
        return values[e.name]
    if isinstance(e, Add):
        return sum(evaluate(t, values, funcs) for t in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out = out * evaluate(f, values, funcs)
        return out
    if isinstance(e, Pow):
        return evaluate(e.base, values, funcs) ** float(e.exponent)
    if isinstance(e, Exp):
        a = evaluate(e.arg, values, funcs)
        return np.exp(a) if not isinstance(a, float) else math.exp(a)
    if isinstance(e, Ln):
        a = evaluate(e.arg, values, funcs)
        return np.log(a) if not isinstance(a, float) else math.log(a)
    if isinstance(e, Func):
        return funcs[(e.name, e.order)](evaluate(e.arg, values, funcs))
    raise TypeError(f"unknown node {e!r}")


# -- local rewrite ----------------------------------------------------------

def _sort_key(e: Expr):
    from .printer import to_str

    return (_node_rank(e), to_str(e))


def _node_rank(e):
    if isinstance(e, Const):
        return 0
    if isinstance(e, Sym):
        return 1
    if isinstance(e, Pow):
        return 2
    if isinstance(e, Func):
        return 3
    if isinstance(e, Ln):
        return 4
    if isinstance(e, Exp):
        return 5
    return 6


def rewrite(e: Expr) -> Expr:
    """Fixed local rewrite pass giving a canonical tree for structural equality.

    Flattens sums and products, folds constants, merges powers of identical
    bases, collects ``exp`` factors into one ``exp`` of a summed argument,
    combines like terms by their non-constant part, and sorts operands.
    Polynomial arguments of ``exp``/``ln``/opaque functions are put in
    polynomial canonical form.
    """
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Exp):
        arg = _canon_arg(rewrite(e.arg))
        if arg == ZERO:
            return ONE
        if isinstance(arg, Ln):
            return arg.arg
        return Exp(arg)
    if isinstance(e, Ln):
        arg = rewrite(e.arg)
        if isinstance(arg, Exp):
            return arg.arg
        return Ln(_canon_arg(arg))
    if isinstance(e, Func):
        return Func(e.name, _canon_arg(rewrite(e.arg)), e.order)
    if isinstance(e, Pow):
        base = rewrite(e.base)
        return _rw_mul([Pow(base, e.exponent)])
    if isinstance(e, Mul):
        return _rw_mul([rewrite(f) for f in e.factors])
    if isinstance(e, Add):
        return _rw_add([rewrite(t) for t in e.terms])
    raise TypeError(f"unknown node {e!r}")


def _canon_arg(e: Expr) -> Expr:
    try:
        return poly_to_expr(poly_normalize(e, extended=True))
    except NonPolynomialError:
        return e


def _split_coeff(e: Expr):
    if isinstance(e, Const):
        return e.value, ONE
    if isinstance(e, Mul) and isinstance(e.factors[0], Const):
        rest = e.factors[1:]
        return e.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), e


def _rw_add(terms):
    flat = []
    for t in terms:
        if isinstance(t, Add):
            flat.extend(t.terms)
        else:
            flat.append(t)
    acc: dict = {}
    for t in flat:
        c, body = _split_coeff(t)
        acc[body] = acc.get(body, 0) + c
    out = []
    for body, c in acc.items():
        if c == 0:
            continue
        if body == ONE:
            out.append(Const(Fraction(c)))
        elif c == 1:
            out.append(body)
        else:
            factors = body.factors if isinstance(body, Mul) else (body,)
            out.append(Mul((Const(Fraction(c)),) + factors))
    if not out:
        return ZERO
    out.sort(key=_sort_key)
    # constants last reads better: "x + 1"
    consts = [t for t in out if isinstance(t, Const)]
    out = [t for t in out if not isinstance(t, Const)] + consts
    return out[0] if len(out) == 1 else Add(tuple(out))


def _rw_mul(factors):
    flat = []
    stack = list(factors)
    while stack:
        f = stack.pop(0)
        if isinstance(f, Mul):
            stack[0:0] = list(f.factors)
        elif isinstance(f, Pow) and isinstance(f.base, Mul) and f.exponent.denominator == 1:
            stack[0:0] = [Pow(g, f.exponent) for g in f.base.factors]
        else:
            flat.append(f)
    coeff = Fraction(1)
    powers: dict = {}
    exp_args = []
    for f in flat:
        if isinstance(f, Const):
            coeff *= f.value
        elif isinstance(f, Exp):
            exp_args.append(f.arg)
        elif isinstance(f, Pow):
            if isinstance(f.base, Const) and f.exponent.denominator == 1:
                coeff *= f.base.value ** int(f.exponent)
            elif isinstance(f.base, Exp):
                exp_args.append(Mul((Const(f.exponent), f.base.arg)))
            elif isinstance(f.base, Pow) and f.exponent.denominator == 1:
                powers[f.base.base] = powers.get(f.base.base, 0) + f.base.exponent * f.exponent
            else:
                powers[f.base] = powers.get(f.base, 0) + f.exponent
        else:
            powers[f] = powers.get(f, 0) + 1
    if coeff == 0:
        return ZERO
    out = []
    for base, n in powers.items():
        if n == 0:
            continue
        out.append(base if n == 1 else Pow(base, Fraction(n)))
    if exp_args:
        arg = _canon_arg(_rw_add([rewrite(a) for a in exp_args]))
        if arg != ZERO:
            out.append(Exp(arg))
    out.sort(key=_sort_key)
    if coeff != 1 or not out:
        out.insert(0, Const(coeff))
    return out[0] if len(out) == 1 else Mul(tuple(out))


def structurally_equal(a: Expr, b: Expr) -> bool:
    return rewrite(a) == rewrite(b)
