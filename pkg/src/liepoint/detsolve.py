"""Bounded-degree polynomial ansatz and exact solution of the determining equations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .exprcore import Poly
from .jet import PdeSystem, SolvedForm, solve_leading
from .linalg import nullspace, rref
from .prolong import VectorField, apply_criterion, component_names, extract_determining


def monomials(variables: Sequence[str], d: int) -> list:
    """All monomials of total degree <= d, lowest degree first, lex within a degree."""
    out = []
    n = len(variables)
    for deg in range(d + 1):
        block = []
        for combo in itertools.combinations_with_replacement(range(n), deg):
            exps = [0] * n
            for c in combo:
                exps[c] += 1
            block.append(tuple(sorted((variables[i], e) for i, e in enumerate(exps) if e)))
        block.sort(key=lambda m: [-dict(m).get(v, 0) for v in variables])
        out.extend(block)
    return out


@dataclass(frozen=True)
class Ansatz:
    degree: int
    unknowns: tuple      # symbol names, in column order
    slots: tuple         # (component index, monomial) per unknown
    template: VectorField


def build_ansatz(sys: PdeSystem, d: int) -> Ansatz:
    if d < 0:
        raise ValueError("ansatz degree must be >= 0")
    coords = sys.coordinates
    monos = monomials(coords, d)
    unknowns = []
    slots = []
    comps = []
    cnames = component_names(sys)
    for ci, cname in enumerate(cnames):
        comp = Poly()
        for mi, m in enumerate(monos):
            name = f"c__{cname}__{mi}"
            unknowns.append(name)
            slots.append((ci, m))
            comp = comp + Poly.monomial(tuple(sorted(m + ((name, 1),))))
        comps.append(comp)
    return Ansatz(d, tuple(unknowns), tuple(slots), VectorField(coords, tuple(comps), sys.p))


@dataclass(frozen=True)
class LinearSystem:
    rows: tuple   # sparse {column: Fraction}
    ncols: int


def determining_system(sys: PdeSystem, ansatz: Ansatz, sf: SolvedForm | None = None) -> LinearSystem:
    sf = sf or solve_leading(sys)
    residuals = apply_criterion(ansatz.template, sys, sf)
    col = {u: i for i, u in enumerate(ansatz.unknowns)}
    rows = []
    for lin in extract_determining(residuals, ansatz.unknowns):
        rows.append({col[m[0][0]]: c for m, c in lin.terms.items()})
    return LinearSystem(tuple(rows), len(ansatz.unknowns))


def nullspace_exact(ls: LinearSystem) -> list:
    return nullspace(ls.rows, ls.ncols)


def field_from_vector(ansatz: Ansatz, vec: Sequence) -> VectorField:
    comps = [Poly() for _ in ansatz.template.comps]
    for (ci, m), c in zip(ansatz.slots, vec):
        if c:
            comps[ci] = comps[ci] + Poly.monomial(m, c)
    t = ansatz.template
    return VectorField(t.coords, tuple(comps), t.n_indep)


@dataclass(frozen=True)
class GeneratorBasis:
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self, sys: PdeSystem) -> list:
        return [X.to_dict(sys) for X in self.basis]


class DependentFieldsError(ValueError):
    pass


def field_vector(X: VectorField, keys: Sequence) -> list:
    """Coefficients of ``X`` over ``(component index, monomial)`` keys."""
    return [X.comps[ci].terms.get(m, Fraction(0)) for ci, m in keys]


def field_keys(fields: Sequence[VectorField]) -> list:
    """Column keys ordered by descending monomial degree, then component, then monomial."""
    keys = set()
    for X in fields:
        for ci, c in enumerate(X.comps):
            for m in c.terms:
                keys.add((ci, m))
    coords = fields[0].coords if fields else ()
    rank = {z: i for i, z in enumerate(coords)}

    def key(k):
        ci, m = k
        deg = sum(e for _, e in m)
        return (-deg, ci, [(rank.get(v, len(rank)), -e) for v, e in m])

    return sorted(keys, key=key)


def canonical_basis(raw: Sequence[VectorField]) -> GeneratorBasis:
    """Canonical basis of ``span(raw)``.

    Reduced echelon form with high-degree coefficient columns first, so each
    member has the lowest degree possible; members are then sorted by degree
    and scaled to primitive integer coefficients with a positive leading entry.
    """
    raw = [X for X in raw]
    if not raw:
        return GeneratorBasis(())
    keys = field_keys(raw)
    rows = [dict(enumerate(field_vector(X, keys))) for X in raw]
    frows, cols = rref(rows, len(keys))
    if len(frows) != len(raw):
        raise DependentFieldsError(f"{len(raw)} fields span only {len(frows)} dimensions")
    t = raw[0]
    fields = []
    for r in frows:
        comps = [Poly() for _ in t.comps]
        for k, v in r.items():
            ci, m = keys[k]
            comps[ci] = comps[ci] + Poly.monomial(m, v)
        fields.append(_primitive_field(VectorField(t.coords, tuple(comps), t.n_indep), keys))
    fields.sort(key=lambda X: (X.degree(), [-abs(x) for x in field_vector(X, _lex_keys(keys))]))
    return GeneratorBasis(tuple(fields))


def _lex_keys(keys):
    return sorted(keys, key=lambda k: (k[0], sum(e for _, e in k[1]), str(k[1])))


def _primitive_field(X: VectorField, keys) -> VectorField:
    vec = field_vector(X, _lex_keys(keys))
    den = 1
    num = 0
    for v in vec:
        if v:
            den = den * v.denominator // gcd(den, v.denominator)
    for v in vec:
        if v:
            num = gcd(num, int(v * den))
    lead = next(v for v in vec if v)
    scale = Fraction(den, num) * (1 if lead > 0 else -1)
    return X.scale(scale)


def check_generator(X: VectorField, sys: PdeSystem, sf: SolvedForm | None = None) -> bool:
    return all(r.is_zero() for r in apply_criterion(X, sys, sf))


def solve_symmetries(sys: PdeSystem, degree: int = 2, sf: SolvedForm | None = None) -> GeneratorBasis:
    """Polynomial point symmetries of total degree <= ``degree``."""
    sf = sf or solve_leading(sys)
    ans = build_ansatz(sys, degree)
    ls = determining_system(sys, ans, sf)
    vecs = nullspace_exact(ls)
    return canonical_basis([field_from_vector(ans, v) for v in vecs])


def span_contains(basis: Sequence[VectorField], X: VectorField) -> bool:
    from .linalg import in_span

    keys = field_keys(list(basis) + [X])
    return in_span([field_vector(B, keys) for B in basis], field_vector(X, keys))


def same_span(a: Sequence[VectorField], b: Sequence[VectorField]) -> bool:
    return all(span_contains(a, X) for X in b) and all(span_contains(b, X) for X in a)
