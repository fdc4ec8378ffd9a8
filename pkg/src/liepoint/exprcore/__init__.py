"""Exact-rational symbolic kernel."""

from fractions import Fraction as Rational

from .expr import (
    Add,
    Const,
    Exp,
    Expr,
    Func,
    Kind,
    Ln,
    Mul,
    NonPolynomialError,
    Pow,
    Sym,
    Symbol,
    as_expr,
    diff_symbol,
    evaluate,
    exp,
    free_symbols,
    ln,
    poly_normalize,
    poly_to_expr,
    rewrite,
    structurally_equal,
    substitute,
)
from .parser import Context, ParseError, UnknownIdentifier, parse_expr
from .poly import Frac, Poly, PolyForm
from .printer import frac_to_str, poly_to_str, to_str

__all__ = [
    "Add", "Const", "Context", "Exp", "Expr", "Frac", "Func", "Kind", "Ln", "Mul",
    "NonPolynomialError", "ParseError", "Poly", "PolyForm", "Pow", "Rational", "Sym",
    "Symbol", "UnknownIdentifier", "as_expr", "diff_symbol", "evaluate", "exp",
    "frac_to_str", "free_symbols", "ln", "parse_expr", "poly_normalize", "poly_to_expr",
    "poly_to_str", "rewrite", "structurally_equal", "substitute", "to_str",
]
