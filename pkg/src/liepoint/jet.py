"""Jet-space bookkeeping: jet coordinates, total derivatives, on-shell reduction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .exprcore import Context, Expr, Frac, Poly, as_expr, parse_expr, poly_normalize


@dataclass(frozen=True, order=True)
class JetCoord:
    dep: int
    multi: tuple

    @property
    def order(self) -> int:
        return sum(self.multi)

    def bump(self, i: int, k: int = 1) -> "JetCoord":
        m = list(self.multi)
        m[i] += k
        return JetCoord(self.dep, tuple(m))

    def divides(self, other: "JetCoord") -> bool:
        return self.dep == other.dep and all(a <= b for a, b in zip(self.multi, other.multi))


class LeadingTermError(ValueError):
    pass


@dataclass(frozen=True)
class PdeSystem:
    """A polynomial PDE system ``equations[k] = 0``.

    Independent variables must be single letters so that jet names like
    ``u_xy`` are unambiguous.
    """

    independents: tuple
    dependents: tuple
    parameters: tuple = ()
    equations: tuple = ()
    name: str = ""
    aliases: dict = field(default_factory=dict, compare=False, hash=False)
    leading: tuple | None = None

    @classmethod
    def from_strings(cls, independents, dependents, parameters, equations, **kw) -> "PdeSystem":
        ctx = Context(tuple(independents), tuple(dependents), tuple(parameters),
                      aliases=dict(kw.get("aliases") or {}))
        eqs = tuple(parse_expr(s, ctx) for s in equations)
        return cls(tuple(independents), tuple(dependents), tuple(parameters), eqs, **kw)

    def __post_init__(self):
        for v in self.independents:
            if len(v) != 1:
                raise ValueError(f"independent variable names must be single letters: {v!r}")

    @property
    def M(self) -> int:
        return len(self.dependents)

    @property
    def p(self) -> int:
        return len(self.independents)

    @cached_property
    def context(self) -> Context:
        return Context(self.independents, self.dependents, self.parameters, aliases=self.aliases)

    @cached_property
    def polys(self) -> tuple:
        return tuple(poly_normalize(as_expr(e)) for e in self.equations)

    @property
    def coordinates(self) -> tuple:
        return self.independents + self.dependents

    def parse(self, text: str) -> Expr:
        return parse_expr(text, self.context)

    # jet naming ------------------------------------------------------------
    def jet_name(self, jc: JetCoord) -> str:
        dep = self.dependents[jc.dep]
        if jc.order == 0:
            return dep
        letters = "".join(v * k for v, k in zip(self.independents, jc.multi))
        return f"{dep}_{letters}"

    def jet_of(self, dep: int, *letters: str) -> JetCoord:
        m = [0] * self.p
        for c in "".join(letters):
            m[self.independents.index(c)] += 1
        return JetCoord(dep, tuple(m))

    @cached_property
    def _dep_index(self):
        return {d: i for i, d in enumerate(self.dependents)}

    def parse_jet(self, name: str) -> JetCoord | None:
        if name in self._dep_index:
            return JetCoord(self._dep_index[name], (0,) * self.p)
        dep, sep, letters = name.partition("_")
        if not sep or dep not in self._dep_index or not letters:
            return None
        if not all(c in self.independents for c in letters):
            return None
        return self.jet_of(self._dep_index[dep], letters)

    def jets_in(self, p: Poly) -> set:
        return {jc for s in p.symbols() if (jc := self.parse_jet(s)) is not None}

    def max_order(self) -> int:
        return max((jc.order for e in self.polys for jc in self.jets_in(e)), default=0)

    def symbol_order(self) -> dict:
        """Fixed symbol order for printing: coordinates, jets by ranking, parameters."""
        names = list(self.independents) + list(self.dependents)
        jets = sorted({JetCoord(a, m) for k in range(1, self.max_order() + 1)
                       for a in range(self.M) for m in _compositions(k, self.p)},
                      key=ranking_key)
        names += [self.jet_name(j) for j in jets]
        names += list(self.parameters)
        return {n: i for i, n in enumerate(names)}


def ranking_key(jc: JetCoord):
    """Order first, then dependent index, then reverse-lexicographic multi-index."""
    return (jc.order, jc.dep, tuple(reversed(jc.multi)))


def total_derivative(e, i: int, sys: PdeSystem):
    """``D_i e``; accepts Expr, Poly or Frac and returns the same kind (Expr as Poly-backed Expr)."""
    if isinstance(e, Frac):
        return Frac(_total_derivative_poly(e.num, i, sys), e.den)
    if isinstance(e, Poly):
        return _total_derivative_poly(e, i, sys)
    from .exprcore import poly_to_expr

    return poly_to_expr(_total_derivative_poly(poly_normalize(e), i, sys), sys.symbol_order())


def _total_derivative_poly(p: Poly, i: int, sys: PdeSystem) -> Poly:
    out = p.diff(sys.independents[i])
    for s in p.symbols():
        jc = sys.parse_jet(s)
        if jc is None:
            continue
        out = out + p.diff(s) * Poly.sym(sys.jet_name(jc.bump(i)))
    return out


def total_derivative_multi(p, delta: tuple, sys: PdeSystem):
    for i, k in enumerate(delta):
        for _ in range(k):
            p = total_derivative(p, i, sys)
    return p


def choose_leading(eq: Poly, sys: PdeSystem) -> JetCoord:
    jets = sys.jets_in(eq)
    if not jets:
        raise LeadingTermError(f"equation has no jet symbols: {eq}")
    top = max(j.order for j in jets)
    cands = [j for j in jets if j.order == top]
    # prefer derivatives along the last independent variable, then the later dependent
    return max(cands, key=lambda j: (tuple(reversed(j.multi)), j.dep))


@dataclass
class SolvedForm:
    """Substitution table ``leading jet -> reduced right-hand side``.

    ``table`` holds the leading coordinates and their total derivatives up to
    ``closure_order``; anything beyond is derived on demand and memoized.
    """

    sys: PdeSystem
    leading: tuple
    table: dict
    closure_order: int

    def reducible(self, jc: JetCoord) -> JetCoord | None:
        for lead in self.leading:
            if lead.divides(jc):
                return lead
        return None

    def entry(self, jc: JetCoord) -> Frac:
        if jc in self.table:
            return self.table[jc]
        lead = self.reducible(jc)
        if lead is None:
            raise KeyError(jc)
        # differentiate the nearest materialized ancestor and re-reduce
        parent = None
        for i in range(self.sys.p):
            if jc.multi[i] > lead.multi[i]:
                parent = jc.bump(i, -1)
                idx = i
                break
        value = reduce_mod_system(total_derivative(self.entry(parent), idx, self.sys), self)
        self.table[jc] = value
        return value


def solve_leading(sys: PdeSystem, order: int | None = None) -> SolvedForm:
    """Solve each equation for its leading jet and close under total derivatives.

    The table is materialized up to ``order + 1`` where ``order`` defaults to
    the system's differential order.
    """
    n = sys.max_order() if order is None else order
    leads = sys.leading or tuple(choose_leading(e, sys) for e in sys.polys)
    base: dict = {}
    for eq, lead in zip(sys.polys, leads):
        name = sys.jet_name(lead)
        if eq.degree_in(name) != 1:
            raise LeadingTermError(f"equation not linear in leading {name}: {eq}")
        coeff = eq.coeff(name, 1)
        if sys.jets_in(coeff) or (coeff.symbols() - set(sys.parameters)):
            raise LeadingTermError(f"coefficient of {name} is not a parameter expression: {coeff}")
        rest = eq - coeff * Poly.sym(name)
        for other in base:
            if other == lead:
                raise LeadingTermError(f"two equations share leading {name}")
        base[lead] = Frac(-rest).divide_by(coeff)
    for lead, rhs in base.items():
        for j in _jets_of(rhs, sys):
            if ranking_key(j) >= ranking_key(lead) and any(l.divides(j) for l in base):
                raise LeadingTermError(f"cyclic ranking: {sys.jet_name(lead)} depends on {sys.jet_name(j)}")

    sf = SolvedForm(sys, tuple(sorted(base, key=ranking_key)), {}, n + 1)
    # reduce base entries against each other in ranking order
    for lead in sf.leading:
        sf.table[lead] = base[lead]
    for lead in sf.leading:
        sf.table[lead] = reduce_mod_system(base[lead], sf)
    # eager closure up to order n + 1
    for lead in sf.leading:
        for total in range(1, n + 2 - lead.order):
            for delta in _compositions(total, sys.p):
                jc = JetCoord(lead.dep, tuple(a + b for a, b in zip(lead.multi, delta)))
                sf.entry(jc)
    return sf


def _compositions(total: int, parts: int):
    for combo in itertools.combinations_with_replacement(range(parts), total):
        d = [0] * parts
        for c in combo:
            d[c] += 1
        yield tuple(d)


def _jets_of(f: Frac, sys: PdeSystem) -> set:
    return sys.jets_in(f.num)


def reduce_mod_system(e, sf: SolvedForm) -> Frac:
    """Replace every leading jet and its consequences until none remain."""
    sys = sf.sys
    f = e if isinstance(e, Frac) else Frac.of(poly_normalize(e) if isinstance(e, Expr) else e)
    while True:
        names = [s for s in f.num.symbols()
                 if (jc := sys.parse_jet(s)) is not None and sf.reducible(jc) is not None]
        if not names:
            return f
        groups = f.num.collect(names)
        out = Frac(Poly(), f.den)
        cache: dict = {}
        for mono, coeff in groups.items():
            term = Frac(coeff, f.den)
            for name, k in mono:
                key = (name, k)
                if key not in cache:
                    val = sf.entry(sys.parse_jet(name))
                    acc = Frac.of(1)
                    for _ in range(k):
                        acc = acc * val
                    cache[key] = acc
                term = term * cache[key]
            out = out + term
        f = out
