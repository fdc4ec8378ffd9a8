"""Group-invariant solutions of affine-diagonal generators.

A generator ``(a x + b) d_x + (c y + d) d_y + sum lambda_k u^k d_{u^k}``
has a similarity variable ``s`` and per-dependent prefactors ``p_k`` with
``u^k = p_k F_k(s)``; substituting this form turns each equation into an
ODE in ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exprcore import (Add, Const, Exp, Expr, Frac, Func, Ln, Mul, Poly, Pow, Sym, diff_symbol,
                       poly_normalize, poly_to_expr, rewrite, to_str)
from .exprcore.printer import frac_to_str
from .jet import JetCoord, PdeSystem, solve_leading
from .prolong import VectorField, characteristic_polys

SIM_VAR = "s"
R_VAR = "_r"


class UnsupportedGeneratorError(ValueError):
    pass


class NonInvariantError(ValueError):
    pass


@dataclass(frozen=True)
class Characteristic:
    """``Q_k = phi_k - sum_i xi^i u^k_i`` per dependent."""

    dependents: tuple
    Q: tuple

    def as_dict(self) -> dict:
        return dict(zip(self.dependents, self.Q))


def characteristic(X: VectorField, sys: PdeSystem) -> Characteristic:
    return Characteristic(sys.dependents, characteristic_polys(X, sys))


def affine_diagonal(X: VectorField, sys: PdeSystem) -> tuple:
    """``((a, b), (c, d), lambdas)`` or raise naming the offending component."""
    if sys.p != 2:
        raise UnsupportedGeneratorError("similarity reduction needs exactly two independents")

    def affine(p: Poly, z: str, what: str):
        a = b = Fraction(0)
        for m, v in p.terms.items():
            if m == ():
                b = v
            elif m == ((z, 1),):
                a = v
            else:
                raise UnsupportedGeneratorError(f"{what} = {p} is not of the form a*{z} + b")
        return a, b

    x, y = sys.independents
    ab = affine(X.xi[0], x, f"xi_{x}")
    cd = affine(X.xi[1], y, f"xi_{y}")
    lams = []
    for k, dep in enumerate(sys.dependents):
        lam, off = affine(X.phi[k], dep, f"phi_{dep}")
        if off:
            raise UnsupportedGeneratorError(f"phi_{dep} = {X.phi[k]} has a constant part")
        lams.append(lam)
    return ab, cd, tuple(lams)


@dataclass(frozen=True)
class SimilarityAnsatz:
    """``u^k = prefactors[k] * functions[k](s)``.

    ``rule`` records how ``d/dx`` and ``d/dy`` act in the ``(r, s)`` chart
    used for reduction, where ``r`` is the eliminated variable.
    """

    s: Expr
    prefactors: tuple
    functions: tuple
    eliminated: str
    domain: str
    rule: tuple = field(repr=False, default=())
    exponents: tuple = field(repr=False, default=())
    coords: dict = field(repr=False, default_factory=dict)

    def form(self, k: int) -> Expr:
        return rewrite(Mul((self.prefactors[k], Func(self.functions[k], self.s))))

    def to_json(self, sys: PdeSystem) -> dict:
        return {
            "similarity_variable": to_str(self.s),
            "eliminated": self.eliminated,
            "domain": self.domain,
            "ansatz": {dep: to_str(self.form(k)) for k, dep in enumerate(sys.dependents)},
            "prefactors": {dep: to_str(p) for dep, p in zip(sys.dependents, self.prefactors)},
        }


def _power(base: Expr, e: Fraction) -> Expr:
    if e == 0:
        return Const(Fraction(1))
    return base if e == 1 else Pow(base, Fraction(e))


def _shifted(z: str, shift: Fraction) -> Expr:
    return Sym(z) if not shift else Add((Sym(z), Const(shift)))


def invariants(X: VectorField, sys: PdeSystem) -> SimilarityAnsatz:
    """Similarity variable and prefactors by case analysis on the scaling weights."""
    (a, b), (c, d), lams = affine_diagonal(X, sys)
    x, y = sys.independents
    fnames = tuple(f"F_{dep}" for dep in sys.dependents)
    one = Poly.const(1)
    r = Poly.sym(R_VAR)
    s = Poly.sym(SIM_VAR)
    if a == 0 and c == 0 and b == 0 and d == 0:
        raise UnsupportedGeneratorError("generator moves no independent variable")
    if a == 0 and c != 0:
        # scaling in y only: same construction with the roles of x and y exchanged
        sw = invariants(_swap(X), _swap_sys(sys))
        return SimilarityAnsatz(sw.s, sw.prefactors, fnames, sw.eliminated, sw.domain,
                                tuple(reversed(sw.rule)), sw.exponents, sw.coords)
    if a != 0:
        X_ = _shifted(x, b / a)
        mus = tuple(lam / a for lam in lams)
        pre = tuple(_power(X_, m) for m in mus)
        if c != 0:
            kappa = c / a
            Y_ = _shifted(y, d / c)
            s_expr = rewrite(Mul((Y_, _power(X_, -kappa)))) if kappa else Y_
            # d/dx = d_r - kappa s / r d_s,  d/dy = r^-kappa d_s
            rule = ((one, -kappa * s * Poly.sym(R_VAR, -1)), (Poly(), Poly.sym(R_VAR, -kappa)))
            coords = {x: r - Poly.const(b / a), y: s * Poly.sym(R_VAR, kappa) - Poly.const(d / c)}
        else:
            delta = d / a
            s_expr = Sym(y) if not delta else rewrite(Add((Sym(y), Mul((Const(-delta), Ln(X_))))))
            rule = ((one, Poly.sym(R_VAR, -1).scale(-delta)), (Poly(), one))
            coords = {x: r - Poly.const(b / a)}
            if not delta:
                coords[y] = s
        fractional = any(m.denominator != 1 for m in mus) or (c and (c / a).denominator != 1)
        neg = any(m < 0 for m in mus) or (c and c / a > 0)
        base = to_str(X_)
        if d and not c:
            dom = f"{base} > 0 (logarithm)"
        elif fractional:
            dom = f"{base} > 0 (principal real powers)"
        elif neg:
            dom = f"{base} != 0"
        else:
            dom = "all x, y"
        return SimilarityAnsatz(s_expr, pre, fnames, x, dom, rule, mus, coords)
    # translations only
    if any(lams):
        raise UnsupportedGeneratorError(
            "a translation combined with dependent-variable scaling gives exponential "
            "prefactors, which are outside the supported class")
    pre = tuple(Const(Fraction(1)) for _ in lams)
    mus = tuple(Fraction(0) for _ in lams)
    if b != 0:
        ratio = d / b
        s_expr = rewrite(Add((Sym(y), Mul((Const(-ratio), Sym(x)))))) if ratio else Sym(y)
        rule = ((one, Poly.const(-ratio)), (Poly(), one))
        coords = {x: r, y: s + r.scale(ratio)}
        return SimilarityAnsatz(s_expr, pre, fnames, x, "all x, y", rule, mus, coords)
    rule = ((Poly(), one), (one, Poly()))
    return SimilarityAnsatz(Sym(x), pre, fnames, y, "all x, y", rule, mus, {x: s, y: r})


def _swap_sys(sys: PdeSystem) -> PdeSystem:
    from dataclasses import replace

    return replace(sys, independents=tuple(reversed(sys.independents)))


def _swap(X: VectorField) -> VectorField:
    comps = (X.comps[1], X.comps[0]) + X.comps[2:]
    coords = (X.coords[1], X.coords[0]) + X.coords[2:]
    return VectorField(coords, comps, X.n_indep)


def freeze_functions(e: Expr) -> Expr:
    """Replace every ``F^(k)(arg)`` by the plain symbol ``F'...'``."""
    if isinstance(e, Func):
        return Sym(fjet(e.name, e.order))
    if isinstance(e, Add):
        return Add(tuple(freeze_functions(t) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(freeze_functions(f) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(freeze_functions(e.base), e.exponent)
    if isinstance(e, (Exp, Ln)):
        return type(e)(freeze_functions(e.arg))
    return e


def check_ansatz(X: VectorField, ans: SimilarityAnsatz, sys: PdeSystem) -> list:
    """Characteristics evaluated on the ansatz.

    Derivatives come from the chain rule on expression trees, independently
    of the chart used by :func:`reduce_system`. Every shape function has the
    same argument ``s``, so after freezing ``F(s)`` into symbols the result is
    a Laurent-Puiseux polynomial in x and y; an empty one means the ansatz is
    invariant.
    """
    x, y = sys.independents
    out = []
    for k in range(sys.M):
        u = ans.form(k)
        lam = X.phi[k].coeff(sys.dependents[k], 1)
        q = Add((Mul((poly_to_expr(lam), u)),
                 Mul((Const(Fraction(-1)), poly_to_expr(X.xi[0]), diff_symbol(u, x))),
                 Mul((Const(Fraction(-1)), poly_to_expr(X.xi[1]), diff_symbol(u, y)))))
        out.append(poly_normalize(freeze_functions(q), extended=True))
    return out


# -- reduction --------------------------------------------------------------

def fjet(fname: str, order: int) -> str:
    return fname + "'" * order


class Chart:
    """Derivations ``d_r`` and ``d_s`` on polynomials in r, s and F-jets."""

    def __init__(self, ans: SimilarityAnsatz):
        self.ans = ans
        self.fnames = ans.functions

    def _fjets(self, p: Poly):
        for name in p.symbols():
            base = name.rstrip("'")
            if base in self.fnames:
                yield name

    def d_r(self, p: Poly) -> Poly:
        return p.diff(R_VAR)

    def d_s(self, p: Poly) -> Poly:
        out = p.diff(SIM_VAR)
        for name in self._fjets(p):
            out = out + p.diff(name) * Poly.sym(name + "'")
        return out

    def partial(self, p: Poly, i: int) -> Poly:
        A, B = self.ans.rule[i]
        out = Poly()
        if not A.is_zero():
            out = out + A * self.d_r(p)
        if not B.is_zero():
            out = out + B * self.d_s(p)
        return out


@dataclass
class ReducedSystem:
    variable: str
    unknowns: tuple
    equations: list          # Frac in s and F-jets
    orders: dict
    leading: list            # F-jet name per equation (or None)
    weights: list = field(default_factory=list)   # cancelled power of the eliminated variable

    def equation_strings(self) -> list:
        order = self.symbol_order()
        return [frac_to_str(e, order) for e in self.equations]

    def symbol_order(self) -> dict:
        names = []
        for f in self.unknowns:
            names += [fjet(f, k) for k in range(self.orders.get(f, 0) + 2, -1, -1)]
        return {n: i for i, n in enumerate(names)}

    def symbols(self) -> set:
        out = set()
        for e in self.equations:
            out |= e.num.symbols()
            for f in e.den:
                out |= f.symbols()
        return out

    def to_json(self) -> dict:
        return {"variable": self.variable, "unknowns": list(self.unknowns),
                "orders": dict(self.orders), "equations": self.equation_strings()}

    def to_text(self) -> str:
        return "\n".join(f"{e} = 0" for e in self.equation_strings())


def jet_value(chart: Chart, sys: PdeSystem, ans: SimilarityAnsatz, jc: JetCoord, cache) -> Poly:
    if jc in cache:
        return cache[jc]
    if jc.order == 0:
        v = Poly.sym(R_VAR, ans.exponents[jc.dep]) * Poly.sym(ans.functions[jc.dep])
    else:
        i = max(k for k, m in enumerate(jc.multi) if m)
        lower = JetCoord(jc.dep, tuple(m - (k == i) for k, m in enumerate(jc.multi)))
        v = chart.partial(jet_value(chart, sys, ans, lower, cache), i)
    cache[jc] = v
    return v


def _fjet_info(name: str, fnames) -> tuple | None:
    base = name.rstrip("'")
    if base not in fnames:
        return None
    return fnames.index(base), len(name) - len(base)


def reduce_system(sys: PdeSystem, ans: SimilarityAnsatz) -> ReducedSystem:
    """Substitute the ansatz, cancel the common power of the eliminated
    variable and scale each equation by its leading derivative's coefficient."""
    clash = {SIM_VAR, *ans.functions} & set(sys.coordinates + sys.parameters)
    if clash:
        raise ValueError(f"reserved symbol(s) used by the system: {sorted(clash)}")
    chart = Chart(ans)
    cache: dict = {}
    sf = solve_leading(sys)
    lead_deps = [jc.dep for jc in sf.leading]
    out = []
    leading = []
    weights = []
    orders = {f: 0 for f in ans.functions}
    for idx, eq in enumerate(sys.polys):
        bind = {}
        for name in eq.symbols():
            jc = sys.parse_jet(name)
            if jc is not None:
                bind[name] = jet_value(chart, sys, ans, jc, cache)
            elif name in sys.independents:
                if name not in ans.coords:
                    raise NonInvariantError(f"{name} appears explicitly and has no polynomial "
                                            f"expression in the reduced chart")
                bind[name] = ans.coords[name]
        p = eq.subs(bind)
        p, w = _cancel_r(p, idx)
        weights.append(w)
        if p.is_zero():
            out.append(Frac(p))
            leading.append(None)
            continue
        info = {n: _fjet_info(n, ans.functions) for n in p.symbols()}
        info = {n: v for n, v in info.items() if v is not None}
        for n, (k, o) in info.items():
            f = ans.functions[k]
            orders[f] = max(orders[f], o)
        top = max(o for _, o in info.values())
        cands = sorted((k, n) for n, (k, o) in info.items() if o == top)
        pick = next((n for k, n in cands if k == lead_deps[idx]), cands[0][1])
        leading.append(pick)
        out.append(_normalize(p, pick, sys))
    return ReducedSystem(SIM_VAR, ans.functions, out, orders, leading, weights)


def _cancel_r(p: Poly, idx: int) -> tuple:
    powers = {dict(m).get(R_VAR, Fraction(0)) for m in p.terms}
    if not powers:
        return p, Fraction(0)
    if len(powers) > 1:
        raise NonInvariantError(f"equation {idx + 1} keeps several powers of the eliminated "
                                f"variable: {sorted(powers)}")
    e = Fraction(powers.pop())
    return (p * Poly.sym(R_VAR, -e) if e else p), e


def _normalize(p: Poly, lead: str, sys: PdeSystem) -> Frac:
    if p.degree_in(lead) != 1:
        return Frac(p)
    c = p.coeff(lead, 1)
    if c.is_const():
        return Frac(p.scale(1 / c.const_value()))
    if c.symbols() <= set(sys.parameters):
        return Frac(p).divide_by(c)
    return Frac(p)
