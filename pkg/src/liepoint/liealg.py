"""Lie brackets, structure constants, adjoint exponentials and one-parameter flows."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .detsolve import field_keys, field_vector
from .exppoly import ExpPoly, exp_matrix
from .exprcore import Const, Exp, Mul, Sym, as_expr, rewrite
from .linalg import solve
from .prolong import VectorField

SIGNS = ("eq6", "paper")


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """``[X, Y]`` with components ``X(Y^k) - Y(X^k)``."""
    comps = tuple(X.apply(b) - Y.apply(a) for a, b in zip(X.comps, Y.comps))
    return VectorField(X.coords, comps, X.n_indep)


class NotClosedError(ValueError):
    def __init__(self, i, j, residual):
        self.pair = (i, j)
        self.residual = residual
        super().__init__(f"[X{i + 1}, X{j + 1}] = {residual} is not in the span of the basis")


@dataclass
class LieAlgebra:
    """Basis fields with exact structure constants ``[X_i, X_j] = sum_k c[i][j][k] X_k``."""

    basis: tuple
    structure: list
    labels: tuple = field(default=())

    def __post_init__(self):
        if not self.labels:
            self.labels = tuple(f"X{i + 1}" for i in range(len(self.basis)))
        self._check()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self):
        n = self.dim
        c = self.structure
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if c[i][j][k] != -c[j][i][k]:
                        raise ValueError(f"antisymmetry fails at ({i}, {j}, {k})")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for m in range(n):
                        s = sum(c[j][k][l] * c[i][l][m] + c[k][i][l] * c[j][l][m]
                                + c[i][j][l] * c[k][l][m] for l in range(n))
                        if s:
                            raise ValueError(f"Jacobi identity fails for ({i}, {j}, {k})")

    def bracket_coords(self, a: Sequence, b: Sequence) -> list:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j]:
                    continue
                for k in range(n):
                    out[k] += a[i] * b[j] * self.structure[i][j][k]
        return out

    def element_field(self, a: Sequence) -> VectorField:
        out = VectorField(self.basis[0].coords, tuple(0 * c for c in self.basis[0].comps),
                          self.basis[0].n_indep)
        for ai, X in zip(a, self.basis):
            if ai:
                out = out + X.scale(ai)
        return out

    def format_element(self, a: Sequence) -> str:
        return format_combination(a, self.labels)


def format_combination(a: Sequence, labels: Sequence[str]) -> str:
    """``X2-X1`` style label: positive terms first, in basis order."""
    pos = [(c, l) for c, l in zip(a, labels) if c > 0]
    negs = [(c, l) for c, l in zip(a, labels) if c < 0]
    out = ""
    for c, l in pos + negs:
        mag = abs(Fraction(c))
        body = l if mag == 1 else f"{mag}*{l}" if mag.denominator == 1 else f"({mag})*{l}"
        if c > 0:
            out += ("+" if out else "") + body
        else:
            out += "-" + body
    return out or "0"


def structure_constants(basis: Sequence[VectorField], labels: Sequence[str] = ()) -> LieAlgebra:
    n = len(basis)
    keys = field_keys(list(basis))
    cols = [field_vector(X, keys) for X in basis]
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            B = bracket(basis[i], basis[j])
            if B.is_zero():
                continue
            extra = field_keys([B])
            if any(k not in keys for k in extra):
                raise NotClosedError(i, j, B)
            x = solve(cols, field_vector(B, keys))
            if x is None:
                raise NotClosedError(i, j, B)
            for k in range(n):
                c[i][j][k] = x[k]
                c[j][i][k] = -x[k]
    return LieAlgebra(tuple(basis), c, tuple(labels))


def ad_matrix(alg: LieAlgebra, i: int) -> list:
    """Matrix of ``[X_i, .]``: column j holds the coordinates of ``[X_i, X_j]``."""
    n = alg.dim
    return [[alg.structure[i][j][k] for j in range(n)] for k in range(n)]


@dataclass(frozen=True)
class LogEps:
    """Symbolic group parameter ``coef * ln(arg)`` with rational coef and positive rational arg."""

    coef: Fraction
    arg: Fraction

    def __float__(self):
        import math

        return float(self.coef) * math.log(self.arg)

    def __str__(self):
        c = "" if self.coef == 1 else f"{self.coef}*"
        return f"{c}ln({self.arg})"


@dataclass(frozen=True)
class AdjointMap:
    """``Ad(exp(eps X_i))`` as a matrix of exponential polynomials in eps."""

    direction: int
    sign: str
    entries: tuple

    def __call__(self, eps) -> np.ndarray:
        e = float(eps)
        return np.array([[m(e) for m in row] for row in self.entries])

    def exact_entry(self, r: int, c: int, eps):
        """Exact value of an entry at a rational or :class:`LogEps` parameter; None if irrational."""
        m = self.entries[r][c]
        if isinstance(eps, LogEps):
            total = Fraction(0)
            for lam, p in m.terms.items():
                if len(p) > 1:
                    return None
                power = lam * eps.coef
                if power.denominator != 1:
                    return None
                total += p[0] * eps.arg ** int(power)
            return total
        eps = Fraction(eps)
        if eps == 0:
            return m.at_zero()
        if not m.is_polynomial():
            return None
        return sum((c * eps ** k for k, c in enumerate(m.poly())), Fraction(0))

    def apply(self, a: Sequence, eps):
        """Transform a coefficient vector; exact when possible, else floats with ``exact=False``."""
        n = len(a)
        exact = []
        for r in range(n):
            acc = Fraction(0)
            for c in range(n):
                if not a[c]:
                    continue
                v = self.exact_entry(r, c, eps)
                if v is None:
                    M = self(eps)
                    return [float(x) for x in M @ np.array([float(t) for t in a])], False
                acc += v * a[c]
            exact.append(acc)
        return exact, True

    def to_str(self, r: int, c: int, var: str = "eps") -> str:
        return self.entries[r][c].to_str(var)


def adjoint_exp(alg: LieAlgebra, i: int, sign: str = "eq6") -> AdjointMap:
    """Closed form of the Lie series ``Y - eps[X_i, Y] + eps^2/2 [X_i,[X_i,Y]] - ...``.

    ``sign="paper"`` flips eps, matching the printed adjoint table's scaling entries.
    """
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}")
    A = ad_matrix(alg, i)
    M = exp_matrix(A, -1 if sign == "eq6" else 1)
    return AdjointMap(i, sign, tuple(tuple(row) for row in M))


def adjoint_series(alg: LieAlgebra, i: int, order: int, sign: str = "eq6") -> list:
    """Truncated Lie series: matrix of Taylor coefficient lists up to ``order``."""
    import math

    A = ad_matrix(alg, i)
    n = alg.dim
    s = -1 if sign == "eq6" else 1
    out = [[[Fraction(0)] * (order + 1) for _ in range(n)] for _ in range(n)]
    P = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    for k in range(order + 1):
        for r in range(n):
            for c in range(n):
                out[r][c][k] = P[r][c] * Fraction(s) ** k / math.factorial(k)
        P = [[sum(A[r][m] * P[m][c] for m in range(n)) for c in range(n)] for r in range(n)]
    return out


def adjoint_table(alg: LieAlgebra, sign: str = "eq6", var: str = "eps") -> list:
    """``table[i][j]`` = string for ``Ad(exp(eps X_i)) X_j`` in the basis labels."""
    rows = []
    for i in range(alg.dim):
        M = adjoint_exp(alg, i, sign)
        rows.append([combination_str([M.entries[k][j] for k in range(alg.dim)], alg.labels, j, var)
                     for j in range(alg.dim)])
    return rows


def combination_str(coeffs, labels, first: int | None = None, var: str = "eps") -> str:
    """Render ``sum_k coeffs[k] X_k`` with ExpPoly coefficients; ``first`` is listed first."""
    order = list(range(len(labels)))
    if first is not None:
        order.remove(first)
        order.insert(0, first)
    out = ""
    for k in order:
        c = coeffs[k]
        if c.is_zero():
            continue
        cs = c.to_str(var)
        neg = cs.startswith("-") and " " not in cs
        if neg:
            cs = cs[1:]
        if cs == "1":
            body = labels[k]
        elif " " in cs:
            body = f"({cs})*{labels[k]}"
        else:
            body = f"{cs}*{labels[k]}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def commutator_table(alg: LieAlgebra) -> list:
    return [[format_combination(alg.structure[i][j], alg.labels) for j in range(alg.dim)]
            for i in range(alg.dim)]


class UnsupportedFlowError(ValueError):
    pass


def affine_coefficients(X: VectorField) -> list:
    """Per coordinate ``(a, b)`` with component ``a*z + b``; raises if outside the class."""
    out = []
    for z, c in zip(X.coords, X.comps):
        a = b = Fraction(0)
        for m, v in c.terms.items():
            if m == ():
                b = v
            elif m == ((z, 1),):
                a = v
            else:
                raise UnsupportedFlowError(
                    f"component for {z} is not of the form a*{z} + b: {c}")
        out.append((a, b))
    return out


def flow(X: VectorField, h: str = "h") -> dict:
    """Closed-form one-parameter group ``z -> z(h)`` for coordinatewise-affine fields."""
    out = {}
    H = Sym(h)
    for z, (a, b) in zip(X.coords, affine_coefficients(X)):
        Z = Sym(z)
        if a == 0:
            e = Z + Const(b) * H if b else Z
        else:
            shift = b / a
            e = (Z + Const(shift)) * Exp(Mul((Const(a), H))) - Const(shift) if shift else Z * Exp(Mul((Const(a), H)))
        out[z] = rewrite(e)
    return out


def flow_matches(computed: dict, expected: dict) -> bool:
    return all(rewrite(as_expr(computed[k])) == rewrite(as_expr(v)) for k, v in expected.items())
