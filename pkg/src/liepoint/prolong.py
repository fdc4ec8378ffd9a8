"""Vector fields on the total space, prolongation, and the symmetry criterion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exprcore import Frac, Poly, parse_expr, poly_normalize, poly_to_str
from .jet import (
    JetCoord,
    PdeSystem,
    SolvedForm,
    _compositions,
    reduce_mod_system,
    solve_leading,
    total_derivative,
)


@dataclass(frozen=True)
class VectorField:
    """``sum xi^i d/dx^i + sum phi_a d/du^a`` with polynomial components.

    ``coords`` lists the independent variables first, then the dependents.
    """

    coords: tuple
    comps: tuple
    n_indep: int

    @classmethod
    def zero(cls, sys: PdeSystem) -> "VectorField":
        return cls(sys.coordinates, (Poly(),) * len(sys.coordinates), sys.p)

    @classmethod
    def from_dict(cls, sys: PdeSystem, comps: Mapping[str, str | Poly]) -> "VectorField":
        """Build from ``{"x": "2*x", "theta": "-2*theta", ...}`` or ``xi_x``/``phi_u`` keys."""
        out = []
        names = component_names(sys)
        for coord, cname in zip(sys.coordinates, names):
            raw = comps.get(coord, comps.get(cname, Poly()))
            if isinstance(raw, str):
                raw = poly_normalize(parse_expr(raw, sys.context))
            out.append(raw)
        unknown = set(comps) - set(sys.coordinates) - set(names) - set(sys.aliases)
        if unknown:
            raise KeyError(f"unknown components {sorted(unknown)}")
        for alias, target in sys.aliases.items():
            if alias in comps and target in sys.coordinates:
                raw = comps[alias]
                out[sys.coordinates.index(target)] = (
                    poly_normalize(parse_expr(raw, sys.context)) if isinstance(raw, str) else raw)
        return cls(sys.coordinates, tuple(out), sys.p)

    @property
    def xi(self) -> tuple:
        return self.comps[: self.n_indep]

    @property
    def phi(self) -> tuple:
        return self.comps[self.n_indep:]

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.coords, tuple(a + b for a, b in zip(self.comps, other.comps)), self.n_indep)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.coords, tuple(a - b for a, b in zip(self.comps, other.comps)), self.n_indep)

    def scale(self, c) -> "VectorField":
        return VectorField(self.coords, tuple(a * Fraction(c) for a in self.comps), self.n_indep)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def apply(self, f: Poly) -> Poly:
        """Action as a derivation on functions of the coordinates."""
        out = Poly()
        for z, c in zip(self.coords, self.comps):
            if not c.is_zero():
                out = out + c * f.diff(z)
        return out

    def degree(self) -> int:
        return max((c.total_degree() for c in self.comps if not c.is_zero()), default=0)

    def to_dict(self, sys: PdeSystem | None = None) -> dict:
        names = component_names(sys) if sys else [
            ("xi_" if i < self.n_indep else "phi_") + z for i, z in enumerate(self.coords)]
        order = sys.symbol_order() if sys else None
        return {n: poly_to_str(c, order) for n, c in zip(names, self.comps)}

    def label(self) -> str:
        parts = []
        for z, c in zip(self.coords, self.comps):
            if c.is_zero():
                continue
            s = poly_to_str(c)
            if len(c.terms) > 1:
                s = f"({s})"
            elif s.startswith("-") and parts:
                parts.append(f" - {s[1:]}*d_{z}" if s != "-1" else f" - d_{z}")
                continue
            if s == "1":
                term = f"d_{z}"
            elif s == "-1":
                term = f"-d_{z}"
            else:
                term = f"{s}*d_{z}"
            parts.append(term if not parts else f" + {term}")
        return "".join(parts) or "0"

    def __str__(self):
        return self.label()


def component_names(sys: PdeSystem) -> list:
    return [f"xi_{v}" for v in sys.independents] + [f"phi_{d}" for d in sys.dependents]


@dataclass(frozen=True)
class ProlongedField:
    base: VectorField
    eta: dict  # JetCoord -> Poly
    order: int


def characteristic_polys(X: VectorField, sys: PdeSystem) -> tuple:
    """``Q_a = phi_a - sum_i xi^i u^a_i`` for each dependent."""
    out = []
    for a in range(sys.M):
        q = X.phi[a]
        for i in range(sys.p):
            if not X.xi[i].is_zero():
                q = q - X.xi[i] * Poly.sym(sys.jet_name(JetCoord(a, _unit(i, sys.p))))
        out.append(q)
    return tuple(out)


def _unit(i, p):
    return tuple(1 if k == i else 0 for k in range(p))


def prolong(X: VectorField, n: int, sys: PdeSystem) -> ProlongedField:
    """Prolongation by the recursion ``eta^{J,i} = D_i eta^J - sum_k (D_i xi^k) u_{J,k}``."""
    if n < 1:
        raise ValueError("prolongation order must be >= 1")
    dxi = [[total_derivative(X.xi[k], i, sys) for k in range(sys.p)] for i in range(sys.p)]
    eta: dict = {}
    zero = (0,) * sys.p
    for a in range(sys.M):
        eta[JetCoord(a, zero)] = X.phi[a]
    for order in range(1, n + 1):
        for a in range(sys.M):
            for multi in _compositions(order, sys.p):
                jc = JetCoord(a, multi)
                # differentiate from the parent obtained by removing the last direction
                i = max(k for k in range(sys.p) if multi[k])
                parent = jc.bump(i, -1)
                val = total_derivative(eta[parent], i, sys)
                for k in range(sys.p):
                    if not dxi[i][k].is_zero():
                        val = val - dxi[i][k] * Poly.sym(sys.jet_name(parent.bump(k)))
                eta[jc] = val
    return ProlongedField(X, eta, n)


def prolong_characteristic(X: VectorField, n: int, sys: PdeSystem) -> ProlongedField:
    """Prolongation by ``eta^J = D_J Q + sum_k xi^k u_{J,k}``."""
    Q = characteristic_polys(X, sys)
    eta: dict = {}
    for order in range(0, n + 1):
        for a in range(sys.M):
            for multi in _compositions(order, sys.p) if order else [(0,) * sys.p]:
                val = Q[a]
                for i, k in enumerate(multi):
                    for _ in range(k):
                        val = total_derivative(val, i, sys)
                jc = JetCoord(a, multi)
                for k in range(sys.p):
                    if not X.xi[k].is_zero():
                        val = val + X.xi[k] * Poly.sym(sys.jet_name(jc.bump(k)))
                eta[jc] = val
    return ProlongedField(X, eta, n)


def apply_prolonged(pf: ProlongedField, f: Poly, sys: PdeSystem) -> Poly:
    X = pf.base
    out = Poly()
    for z, c in zip(X.coords[: X.n_indep], X.xi):
        if not c.is_zero():
            out = out + c * f.diff(z)
    for s in f.symbols():
        jc = sys.parse_jet(s)
        if jc is None:
            continue
        if jc.order > pf.order:
            raise ValueError(f"{s} exceeds prolongation order {pf.order}")
        coeff = pf.eta[jc]
        if not coeff.is_zero():
            out = out + coeff * f.diff(s)
    return out


def apply_criterion(X: VectorField, sys: PdeSystem, sf: SolvedForm | None = None) -> list:
    """On-shell residuals ``Pr X [Delta_k]`` reduced modulo the system."""
    if sf is None:
        sf = solve_leading(sys)
    pf = prolong(X, max(sys.max_order(), 1), sys)
    return [reduce_mod_system(apply_prolonged(pf, eq, sys), sf) for eq in sys.polys]


class NonlinearAnsatzError(ValueError):
    pass


def extract_determining(residuals: Sequence, unknowns: Sequence[str]) -> list:
    """Split residuals by monomials in the non-unknown symbols.

    Returns linear forms in ``unknowns`` (as Poly), one per distinct monomial.
    """
    unknowns = set(unknowns)
    rows = []
    seen = set()
    for r in residuals:
        num = r.num if isinstance(r, Frac) else r
        others = num.symbols() - unknowns
        for mono, coeff in sorted(num.collect(others).items(), key=lambda kv: str(kv[0])):
            for m in coeff.terms:
                if sum(e for _, e in m) != 1:
                    raise NonlinearAnsatzError(
                        f"coefficient of {mono} is not homogeneous linear in the unknowns: {coeff}")
            key = coeff
            if key not in seen:
                seen.add(key)
                rows.append(coeff)
    return rows
