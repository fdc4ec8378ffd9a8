"""Recursive-descent parser for the expression grammar.

Identifiers are ``[A-Za-z][A-Za-z0-9]*``; jet symbols are ``<dep>_<letters>``
with one independent-variable letter per derivative. ``p/q`` literals fold to
rational constants. Function calls ``exp(.)``, ``ln(.)`` and opaque ``F(.)``,
``F'(.)`` belong to the extended grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .expr import Const, Exp, Expr, Func, Kind, Ln, Mul, Pow, Sym, Symbol, neg, Add


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, offset: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)


@dataclass
class Context:
    """Symbol table used to resolve identifiers.

    ``independents`` must be single letters for jet names to be expressible.
    Set ``free=True`` to accept any identifier as a plain symbol.
    """

    independents: tuple = ()
    dependents: tuple = ()
    parameters: tuple = ()
    extra: dict = field(default_factory=dict)
    functions: tuple = ()
    aliases: dict = field(default_factory=dict)
    free: bool = False

    def jet_name(self, dep: str, letters: str) -> str:
        order = {v: i for i, v in enumerate(self.independents)}
        return f"{dep}_{''.join(sorted(letters, key=order.__getitem__))}"

    def resolve(self, name: str) -> Symbol | None:
        name = self.aliases.get(name, name)
        if name in self.independents:
            return Symbol(name, Kind.INDEPENDENT)
        if name in self.dependents:
            return Symbol(name, Kind.DEPENDENT)
        if name in self.parameters:
            return Symbol(name, Kind.PARAMETER)
        if name in self.extra:
            return Symbol(name, self.extra[name])
        if "_" in name:
            dep, _, letters = name.partition("_")
            dep = self.aliases.get(dep, dep)
            if dep in self.dependents and letters and all(c in self.independents for c in letters):
                return Symbol(self.jet_name(dep, letters), Kind.JET)
        if self.free:
            return Symbol(name, Kind.FUNCTION_ARG)
        return None


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)?'*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            off = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[off]!r}", off)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ctx: Context):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self.sum()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return e

    def sum(self) -> Expr:
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = self.take()[1]
            first = self.product()
            if sign == "-":
                first = neg(first)
        else:
            first = self.product()
        terms = [first]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.product()
            terms.append(neg(t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def product(self) -> Expr:
        factors = [self.power()]
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            f = self.power()
            if op == "*":
                factors.append(f)
            elif isinstance(f, Const) and isinstance(factors[-1], Const) and len(factors) == 1:
                if f.value == 0:
                    raise ParseError("division by zero", self.toks[self.i - 1][2])
                factors[-1] = Const(factors[-1].value / f.value)
            elif isinstance(f, Const):
                if f.value == 0:
                    raise ParseError("division by zero", self.toks[self.i - 1][2])
                factors.append(Const(1 / f.value))
            else:
                factors.append(Pow(f, Fraction(-1)))
        if len(factors) == 1:
            return factors[0]
        # a leading literal sign folds into the product's constant
        return Mul(tuple(factors))

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            n = self.exponent()
            if n == 0:
                raise ParseError("zero exponent", self.toks[self.i - 1][2])
            if isinstance(base, Const) and n.denominator == 1:
                return Const(base.value ** int(n))
            return Pow(base, n)
        return base

    def exponent(self) -> Fraction:
        tok = self.peek()
        if tok[0] == "num":
            return Fraction(int(self.take()[1]))
        if tok[1] == "-":
            self.take()
            return -Fraction(int(self.take_num()))
        if tok[1] == "(":
            self.take()
            sign = 1
            if self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            p = int(self.take_num())
            q = 1
            if self.peek()[1] == "/":
                self.take()
                q = int(self.take_num())
                if q == 0:
                    raise ParseError("zero denominator", self.toks[self.i - 1][2])
            self.take(")")
            return Fraction(sign * p, q)
        raise ParseError("exponent must be an integer or parenthesized rational", tok[2])

    def take_num(self) -> str:
        tok = self.peek()
        if tok[0] != "num":
            raise ParseError("expected integer literal", tok[2])
        return self.take()[1]

    def atom(self) -> Expr:
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return Const(Fraction(int(tok[1])))
        if tok[1] == "(" and tok[0] == "op":
            self.take()
            e = self.sum()
            self.take(")")
            return e
        if tok[1] in "+-" and tok[0] == "op":
            # unary sign inside a factor, e.g. x*-y
            self.take()
            e = self.power()
            return neg(e) if tok[1] == "-" else e
        if tok[0] == "id":
            self.take()
            name = tok[1]
            if self.peek()[1] == "(":
                return self.call(name, tok[2])
            if "'" in name:
                raise ParseError("derivative marks only allowed on function names", tok[2])
            sym = self.ctx.resolve(name)
            if sym is None:
                raise UnknownIdentifier(name, tok[2])
            return Sym(sym.name)
        raise ParseError(f"unexpected token {tok[1] or 'end of input'!r}", tok[2])

    def call(self, name: str, offset: int) -> Expr:
        self.take("(")
        arg = self.sum()
        self.take(")")
        if name == "exp":
            return Exp(arg)
        if name == "ln":
            return Ln(arg)
        base = name.rstrip("'")
        order = len(name) - len(base)
        if self.ctx.free or base in self.ctx.functions:
            return Func(base, arg, order)
        raise UnknownIdentifier(base, offset)


def parse_expr(text: str, context: Context | None = None) -> Expr:
    """Parse ``text``; with no context every identifier is accepted."""
    return _Parser(text, context or Context(free=True)).parse()
