"""Sparse multivariate polynomials over exact rationals.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name. Exponents
are normally positive integers; negative and fractional exponents are allowed
so that the similarity-reduction code can carry factors like ``x^(-1/2)``.
Such polynomials are outside the "polynomial subset" and callers that need a
genuine polynomial check :meth:`Poly.is_polynomial`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Monomial = tuple  # tuple[tuple[str, int | Fraction], ...]

ONE_MONO: Monomial = ()


def _exp(e):
    if isinstance(e, Fraction) and e.denominator == 1:
        return e.numerator
    return e


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        s = d.get(k, 0) + e
        if s == 0:
            del d[k]
        else:
            d[k] = _exp(s)
    return tuple(sorted(d.items()))


def mono_pow(a: Monomial, n) -> Monomial:
    if n == 0:
        return ONE_MONO
    return tuple((k, _exp(e * n)) for k, e in a)


def mono_degree(a: Monomial):
    return sum(e for _, e in a)


def grlex_key(order: Mapping[str, int]):
    """Sort key giving graded-lexicographic order (larger monomials first).

    Symbols missing from ``order`` rank after every listed symbol, by name.
    """
    big = len(order)

    def rank(name):
        return (order.get(name, big), name)

    def key(mono):
        d = dict(mono)
        names = sorted(d, key=rank)
        vec = tuple(-d[n] for n in names)
        # lexicographic comparison of exponent vectors over the ordered symbols
        return (-mono_degree(mono), tuple(zip((rank(n) for n in names), vec)))

    return key


class Poly:
    """Immutable sparse polynomial ``{monomial: Fraction}`` with no zero entries."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        if terms is None:
            self.terms = {}
        else:
            self.terms = {m: Fraction(c) for m, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def sym(cls, name: str, exp=1) -> "Poly":
        if exp == 0:
            return cls.const(1)
        return cls._raw({((name, _exp(exp)),): Fraction(1)})

    @classmethod
    def monomial(cls, mono: Monomial, coeff=1) -> "Poly":
        return cls._raw({mono: Fraction(coeff)} if coeff else {})

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(ONE_MONO, Fraction(0))

    def is_polynomial(self) -> bool:
        return all(isinstance(e, int) and e > 0 for m in self.terms for _, e in m)

    def symbols(self) -> set:
        return {k for m in self.terms for k, _ in m}

    def total_degree(self):
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, name: str):
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(self.terms) < len(other.terms):
            self, other = other, self
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                t.pop(m, None)
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly._raw({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Poly()
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = t.get(m, 0) + c1 * c2
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            if len(self.terms) == 1:
                (m, c), = self.terms.items()
                if c == 1:
                    return Poly._raw({mono_pow(m, n): Fraction(1)})
            raise ValueError(f"cannot raise {self} to power {n}")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and substitution ---------------------------------------
    def diff(self, name: str) -> "Poly":
        t: dict = {}
        for m, c in self.terms.items():
            for i, (k, e) in enumerate(m):
                if k == name:
                    if e == 1:
                        nm = m[:i] + m[i + 1:]
                    else:
                        nm = m[:i] + ((k, _exp(e - 1)),) + m[i + 1:]
                    t[nm] = t.get(nm, 0) + c * e
                    break
        return Poly(t)

    def subs(self, bindings: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous substitution of symbols by polynomials."""
        if not bindings:
            return self
        out = Poly()
        cache: dict = {}
        for m, c in self.terms.items():
            keep = []
            factor = Poly.const(c)
            for k, e in m:
                if k in bindings:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = bindings[k] ** e
                    factor = factor * cache[key]
                else:
                    keep.append((k, e))
            out = out + factor * Poly._raw({tuple(keep): Fraction(1)})
        return out

    def collect(self, names: Iterable[str]) -> dict:
        """Split into ``{monomial over names: coefficient poly in the rest}``."""
        names = set(names)
        out: dict = {}
        for m, c in self.terms.items():
            inner = tuple(p for p in m if p[0] in names)
            rest = tuple(p for p in m if p[0] not in names)
            bucket = out.setdefault(inner, {})
            bucket[rest] = bucket.get(rest, 0) + c
        return {k: Poly(v) for k, v in out.items() if any(v.values())}

    def coeff(self, name: str, power) -> "Poly":
        t = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(name, 0) == power:
                d.pop(name, None)
                t[tuple(sorted(d.items()))] = c
        return Poly(t)

    def evaluate(self, values: Mapping):
        """Numeric evaluation; ``values`` may hold floats or numpy arrays."""
        total = 0.0
        for m, c in self.terms.items():
            term = float(c)
            for k, e in m:
                term = term * values[k] ** (float(e) if isinstance(e, Fraction) else e)
            total = total + term
        return total

    def content(self) -> Fraction:
        """Positive rational ``g`` with ``self/g`` primitive (integer, coprime)."""
        from math import gcd

        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def leading_term(self, order: Mapping[str, int] | None = None):
        key = grlex_key(order or {})
        m = min(self.terms, key=key)
        return m, self.terms[m]

    def sorted_terms(self, order: Mapping[str, int] | None = None):
        key = grlex_key(order or {})
        return sorted(self.terms.items(), key=lambda mc: key(mc[0]))

    def exponent_map(self, symbols: Iterable[str]) -> dict:
        """Dense exponent-vector view over an explicit symbol list."""
        symbols = list(symbols)
        idx = {s: i for i, s in enumerate(symbols)}
        out = {}
        for m, c in self.terms.items():
            vec = [0] * len(symbols)
            for k, e in m:
                if k not in idx:
                    raise KeyError(f"symbol {k!r} not in {symbols}")
                vec[idx[k]] = e
            out[tuple(vec)] = c
        return out

    def __repr__(self):
        from .printer import poly_to_str

        return f"Poly({poly_to_str(self)!r})"

    def __str__(self):
        from .printer import poly_to_str

        return poly_to_str(self)


PolyForm = Poly


class Frac:
    """Quotient of a polynomial by a product of parameter-only factors.

    The denominator is kept factored as ``{factor: power}`` so that sums over a
    common factor do not grow the denominator. Only the numerator matters for
    zero tests; nothing here attempts gcd cancellation.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Mapping[Poly, int] | None = None):
        self.num = num
        self.den = dict(den or {})

    @classmethod
    def of(cls, x) -> "Frac":
        if isinstance(x, Frac):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly.const(x))

    def den_poly(self) -> Poly:
        d = Poly.const(1)
        for f, k in self.den.items():
            d = d * f ** k
        return d

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _common(self, other: "Frac"):
        den = dict(self.den)
        for f, k in other.den.items():
            den[f] = max(den.get(f, 0), k)
        a = self.num
        for f, k in den.items():
            extra = k - self.den.get(f, 0)
            if extra:
                a = a * f ** extra
        b = other.num
        for f, k in den.items():
            extra = k - other.den.get(f, 0)
            if extra:
                b = b * f ** extra
        return a, b, den

    def __add__(self, other):
        other = Frac.of(other)
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        a, b, den = self._common(other)
        return Frac(a + b, den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den)

    def __sub__(self, other):
        return self + (-Frac.of(other))

    def __mul__(self, other):
        other = Frac.of(other)
        den = dict(self.den)
        for f, k in other.den.items():
            den[f] = den.get(f, 0) + k
        return Frac(self.num * other.num, den)

    __rmul__ = __mul__

    def divide_by(self, factor: Poly) -> "Frac":
        """Divide by a nonzero parameter polynomial."""
        if factor.is_const():
            return Frac(self.num.scale(1 / factor.const_value()), self.den)
        c = factor.content()
        lead = factor.leading_term()[1]
        if lead < 0:
            c = -c
        f = factor.scale(1 / c)
        den = dict(self.den)
        den[f] = den.get(f, 0) + 1
        return Frac(self.num.scale(1 / c), den)

    def diff(self, name: str) -> "Frac":
        for f in self.den:
            if name in f.symbols():
                raise ValueError("denominators must be free of differentiated symbols")
        return Frac(self.num.diff(name), self.den)

    def __eq__(self, other):
        other = Frac.of(other)
        a, b, _ = self._common(other)
        return a == b

    def __hash__(self):
        raise TypeError("Frac is unhashable")

    def __repr__(self):
        return f"Frac({self})"

    def __str__(self):
        from .printer import frac_to_str

        return frac_to_str(self)
