"""Numeric plug-back of reduced solutions.

The reduced ODEs are integrated as an initial-value problem with classical
RK4; the shape functions are interpolated between nodes and pushed back
through the ansatz to evaluate the original PDE residual on a grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .exprcore import Poly, evaluate
from .jet import PdeSystem
from .reduce import R_VAR, SIM_VAR, ReducedSystem, SimilarityAnsatz, Chart, jet_value, fjet


class LeadingTermError(ValueError):
    pass


class NumericBlowupError(ArithmeticError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(f"non-finite state at step {step}")


class CoverageError(ValueError):
    pass


def _compile(p: Poly, names: Sequence[str], params: Mapping[str, float]) -> Callable:
    """Fast evaluator ``f(values)`` of a polynomial over ``names`` with parameters fixed."""
    index = {n: i for i, n in enumerate(names)}
    terms = []
    for mono, c in p.terms.items():
        coef = float(c)
        vars_ = []
        for name, e in mono:
            if name in index:
                vars_.append((index[name], float(e)))
            elif name in params:
                coef *= float(params[name]) ** float(e)
            else:
                raise KeyError(f"no value for symbol {name!r}")
        terms.append((coef, tuple(vars_)))

    def f(vals):
        total = 0.0
        for coef, vs in terms:
            t = coef
            for i, e in vs:
                t *= vals[i] if e == 1 else vals[i] ** e
            total += t
        return total

    return f


@dataclass
class OdeSystem:
    """First-order form: ``state' = rhs(s, state)``.

    ``state_names`` lists ``F, F', ..., F^(k-1)`` per unknown of order ``k``;
    ``solved`` maps each highest derivative to its evaluator, in evaluation
    order so that one solved value may feed the next.
    """

    state_names: tuple
    solved: tuple           # ((name, evaluator), ...)
    names: tuple            # state names + solved names + "s"

    def jets(self, s: float, state) -> np.ndarray:
        vals = list(state) + [0.0] * len(self.solved) + [s]
        base = len(self.state_names)
        for k, (_, f) in enumerate(self.solved):
            vals[base + k] = f(vals)
        return np.array(vals[:-1])

    def rhs(self, s: float, state) -> np.ndarray:
        full = dict(zip(self.names[:-1], self.jets(s, state)))
        return np.array([full[n + "'"] for n in self.state_names])


def to_first_order(rs: ReducedSystem, params: Mapping[str, float]) -> OdeSystem:
    """Order reduction of a reduced system solved for its leading derivatives."""
    state = []
    lead_of = {}
    for f in rs.unknowns:
        k = rs.orders.get(f, 0)
        state += [fjet(f, j) for j in range(k)]
    for eq, lead in zip(rs.equations, rs.leading):
        if lead is None:
            continue
        num = eq.num
        if num.degree_in(lead) != 1:
            raise LeadingTermError(f"{lead} is not isolatable (degree {num.degree_in(lead)})")
        coef = num.coeff(lead, 1)
        if lead in lead_of:
            raise LeadingTermError(f"{lead} is the leading term of two equations")
        rest = num - coef * Poly.sym(lead)
        lead_of[lead] = (coef, rest)
    top = {f: fjet(f, rs.orders.get(f, 0)) for f in rs.unknowns}
    missing = [n for f, n in top.items() if n not in lead_of and rs.orders.get(f, 0) > 0]
    if missing:
        raise LeadingTermError(f"no equation determines {', '.join(missing)}")
    for f in rs.unknowns:
        if rs.orders.get(f, 0) == 0 and top[f] not in lead_of:
            raise LeadingTermError(f"{f} does not appear differentiated in any equation")
    # order the solved derivatives so each only uses state or earlier ones
    known = set(state) | {SIM_VAR}
    pending = dict(lead_of)
    ordered = []
    while pending:
        ready = [n for n, (c, r) in pending.items()
                 if (c.symbols() | r.symbols()) - set(params) <= known]
        if not ready:
            raise LeadingTermError("leading derivatives depend on each other: "
                                   + ", ".join(sorted(pending)))
        for n in sorted(ready):
            ordered.append(n)
            known.add(n)
            del pending[n]
    names = tuple(state) + tuple(ordered) + (SIM_VAR,)
    solved = []
    for n in ordered:
        coef, rest = lead_of[n]
        fc = _compile(coef, names, params)
        fr = _compile(rest, names, params)
        solved.append((n, lambda v, fc=fc, fr=fr: -fr(v) / fc(v)))
    return OdeSystem(tuple(state), tuple(solved), names)


@dataclass
class OdeIvp:
    system: OdeSystem | Callable
    s0: float
    y0: Sequence[float]
    h: float
    steps: int

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("step must be positive")

    def f(self, s, y):
        return self.system.rhs(s, y) if isinstance(self.system, OdeSystem) else \
            np.asarray(self.system(s, y), dtype=float)


@dataclass
class Trajectory:
    s: np.ndarray
    states: np.ndarray
    system: OdeSystem | None = None
    names: tuple = ()
    _jets: np.ndarray | None = field(default=None, repr=False)

    def jet_table(self) -> np.ndarray:
        """State plus solved highest derivatives at every node."""
        if self._jets is None:
            if self.system is None:
                self._jets = self.states
            else:
                self._jets = np.array([self.system.jets(s, y) for s, y in zip(self.s, self.states)])
        return self._jets

    def jet_names(self) -> tuple:
        if self.system is None:
            return self.names
        return self.system.names[:-1]

    def interpolate(self, s: float) -> dict:
        """Four-point Lagrange interpolation of every tabulated jet at ``s``."""
        lo, hi = min(self.s[0], self.s[-1]), max(self.s[0], self.s[-1])
        if not lo - 1e-12 <= s <= hi + 1e-12:
            raise CoverageError(f"s = {s} outside the integrated range [{lo}, {hi}]")
        n = len(self.s)
        h = self.s[1] - self.s[0]
        i = int(math.floor((s - self.s[0]) / h))
        i0 = min(max(i - 1, 0), n - 4)
        nodes = self.s[i0:i0 + 4]
        w = np.ones(4)
        for a in range(4):
            for b in range(4):
                if a != b:
                    w[a] *= (s - nodes[b]) / (nodes[a] - nodes[b])
        vals = w @ self.jet_table()[i0:i0 + 4]
        return dict(zip(self.jet_names(), vals))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(("s",) + tuple(self.jet_names()[:self.states.shape[1]]))
            for s, y in zip(self.s, self.states):
                wr.writerow([repr(float(s))] + [repr(float(v)) for v in y])


def rk4_integrate(ivp: OdeIvp) -> Trajectory:
    """Classical fixed-step fourth-order Runge-Kutta."""
    y = np.asarray(ivp.y0, dtype=float)
    out = np.empty((ivp.steps + 1, y.size))
    out[0] = y
    s = ivp.s0
    h = ivp.h
    for n in range(ivp.steps):
        k1 = ivp.f(s, y)
        k2 = ivp.f(s + h / 2, y + h / 2 * k1)
        k3 = ivp.f(s + h / 2, y + h / 2 * k2)
        k4 = ivp.f(s + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise NumericBlowupError(n + 1)
        s = ivp.s0 + (n + 1) * h
        out[n + 1] = y
    grid = ivp.s0 + h * np.arange(ivp.steps + 1)
    system = ivp.system if isinstance(ivp.system, OdeSystem) else None
    return Trajectory(grid, out, system)


def integrate_range(system: OdeSystem, s0: float, y0, h: float, lo: float, hi: float) -> Trajectory:
    """RK4 from ``s0`` forwards to ``hi`` and backwards to ``lo`` on one uniform grid."""
    up = int(round((hi - s0) / h))
    down = int(round((s0 - lo) / h))
    fwd = rk4_integrate(OdeIvp(system, s0, y0, h, up))
    if down == 0:
        return fwd
    back = rk4_integrate(OdeIvp(lambda t, y: -system.rhs(s0 - t, y), 0.0, y0, h, down))
    s = np.concatenate([s0 - back.s[:0:-1], fwd.s])
    states = np.concatenate([back.states[:0:-1], fwd.states])
    return Trajectory(s, states, system)


def rk4_error_ratio(f: Callable, y0, exact: Callable, T: float, h: float) -> float:
    """``err(h) / err(h/2)`` at ``s = T`` against a closed form; about 16 for RK4."""
    errs = []
    for step in (h, h / 2):
        n = int(round(T / step))
        tr = rk4_integrate(OdeIvp(f, 0.0, y0, step, n))
        errs.append(float(np.max(np.abs(tr.states[-1] - np.asarray(exact(T))))))
    return errs[0] / errs[1]


# -- residuals --------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    x_range: tuple
    y_range: tuple
    nx: int
    ny: int

    def points(self):
        xs = np.linspace(*self.x_range, self.nx)
        ys = np.linspace(*self.y_range, self.ny)
        for x in xs:
            for y in ys:
                yield float(x), float(y)


@dataclass
class ResidualReport:
    grid: GridSpec
    mode: str
    max_abs: list
    mean_abs: list
    fd_step: float | None = None

    @property
    def max_residual(self) -> float:
        return max(self.max_abs) if self.max_abs else 0.0

    def to_json(self) -> dict:
        return {
            "grid": {"x_range": list(self.grid.x_range), "y_range": list(self.grid.y_range),
                     "nx": self.grid.nx, "ny": self.grid.ny},
            "mode": self.mode,
            "fd_step": self.fd_step,
            "equations": [{"index": i + 1, "max_abs": m, "mean_abs": a}
                          for i, (m, a) in enumerate(zip(self.max_abs, self.mean_abs))],
            "max_residual": self.max_residual,
        }


def pde_residual(sys: PdeSystem, ans: SimilarityAnsatz, traj: Trajectory, grid: GridSpec,
                 params: Mapping[str, float], mode: str = "analytic",
                 fd_step: float = 1e-3) -> ResidualReport:
    """Residual of every equation of ``sys`` for the field built from ``traj``.

    ``mode="analytic"`` pushes interpolated ``F, F', F''`` through the chain
    rule; ``mode="fd"`` rebuilds the fields pointwise and differentiates them
    by central differences with step ``fd_step``.
    """
    if mode not in ("analytic", "fd"):
        raise ValueError("mode must be 'analytic' or 'fd'")
    x_name, y_name = sys.independents
    jets = sorted({jc for p in sys.polys for jc in sys.jets_in(p)}, key=lambda j: (j.order, j.dep, j.multi))
    eqs = [_compile(p, [sys.jet_name(j) for j in jets] + list(sys.independents), params)
           for p in sys.polys]
    chart = Chart(ans)
    cache: dict = {}
    jet_polys = [jet_value(chart, sys, ans, j, cache) for j in jets]
    fnames = traj.jet_names()
    sub_names = list(fnames) + [R_VAR, SIM_VAR]
    jet_fns = [_compile(p, sub_names, params) for p in jet_polys]

    def s_r(x, y):
        env = {x_name: x, y_name: y}
        s = float(evaluate(ans.s, env))
        r = float(evaluate(_r_expr(ans, sys), env))
        return s, r

    def fields(x, y):
        s, r = s_r(x, y)
        F = traj.interpolate(s)
        out = []
        for k, dep in enumerate(sys.dependents):
            out.append(float(evaluate(ans.prefactors[k], {x_name: x, y_name: y})) * F[ans.functions[k]])
        return out

    rows = []
    for x, y in grid.points():
        if mode == "analytic":
            s, r = s_r(x, y)
            F = traj.interpolate(s)
            vals = [F[n] for n in fnames] + [r, s]
            jv = [f(vals) for f in jet_fns]
        else:
            jv = [_fd_jet(fields, j, x, y, fd_step) for j in jets]
        env = jv + [x, y]
        rows.append([abs(f(env)) for f in eqs])
    arr = np.array(rows)
    return ResidualReport(grid, mode, [float(v) for v in arr.max(axis=0)],
                          [float(v) for v in arr.mean(axis=0)], fd_step if mode == "fd" else None)


def _r_expr(ans: SimilarityAnsatz, sys: PdeSystem):
    from .exprcore import Add, Const, Sym

    shift = ans.coords[ans.eliminated].terms.get((), Fraction(0))
    z = Sym(ans.eliminated)
    return Add((z, Const(-shift))) if shift else z


def _fd_jet(fields: Callable, jc, x: float, y: float, d: float) -> float:
    """Nested central differences for the multi-index of ``jc``."""
    steps = []
    for i, m in enumerate(jc.multi):
        steps += [i] * m

    def g(x, y, k):
        if k == len(steps):
            return fields(x, y)[jc.dep]
        if steps[k] == 0:
            return (g(x + d, y, k + 1) - g(x - d, y, k + 1)) / (2 * d)
        return (g(x, y + d, k + 1) - g(x, y - d, k + 1)) / (2 * d)

    return g(x, y, 0)
