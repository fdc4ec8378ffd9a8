"""Exponential polynomials ``sum_l p_l(eps) exp(l*eps)`` with rational ``l``."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _pderiv(a):
    return _trim(i * a[i] for i in range(1, len(a)))


def _pint(a):
    return _trim([Fraction(0)] + [Fraction(c) / (i + 1) for i, c in enumerate(a)])


class ExpPoly:
    """Immutable map ``rate -> polynomial coefficients (ascending powers of eps)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {}
        for lam, p in (terms or {}).items():
            p = _trim(Fraction(c) for c in p)
            if p:
                self.terms[Fraction(lam)] = p

    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls({0: (Fraction(c),)})

    @classmethod
    def exp(cls, lam, coeff=1) -> "ExpPoly":
        return cls({lam: (Fraction(coeff),)})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        t = dict(self.terms)
        for lam, p in other.terms.items():
            t[lam] = _padd(t.get(lam, ()), p)
        return ExpPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({l: tuple(-c for c in p) for l, p in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExpPoly) else ExpPoly.const(-Fraction(other)))

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return ExpPoly({l: tuple(c * Fraction(other) for c in p) for l, p in self.terms.items()})
        t: dict = {}
        for l1, p1 in self.terms.items():
            for l2, p2 in other.terms.items():
                t[l1 + l2] = _padd(t.get(l1 + l2, ()), _pmul(p1, p2))
        return ExpPoly(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def deriv(self) -> "ExpPoly":
        t: dict = {}
        for lam, p in self.terms.items():
            t[lam] = _padd(_pderiv(p), tuple(lam * c for c in p))
        return ExpPoly(t)

    def at_zero(self) -> Fraction:
        return sum((p[0] for p in self.terms.values()), Fraction(0))

    def is_polynomial(self) -> bool:
        return all(lam == 0 for lam in self.terms)

    def poly(self) -> tuple:
        """Polynomial coefficients when there is no exponential part."""
        if not self.is_polynomial():
            raise ValueError("not a polynomial in eps")
        return self.terms.get(Fraction(0), ())

    def __call__(self, eps: float) -> float:
        total = 0.0
        for lam, p in self.terms.items():
            total += sum(float(c) * eps ** i for i, c in enumerate(p)) * math.exp(float(lam) * eps)
        return total

    def taylor(self, order: int) -> list:
        """Taylor coefficients in eps up to and including ``order``."""
        out = [Fraction(0)] * (order + 1)
        for lam, p in self.terms.items():
            # exp(lam*eps) = sum lam^k eps^k / k!
            ex = [lam ** k / math.factorial(k) for k in range(order + 1)]
            for i, c in enumerate(p):
                for k in range(order + 1 - i):
                    out[i + k] += c * ex[k]
        return out

    def solve_shifted(self, lam) -> "ExpPoly":
        """Particular solution ``r`` of ``r' - lam*r = self``."""
        lam = Fraction(lam)
        t: dict = {}
        for mu, p in self.terms.items():
            if mu == lam:
                t[mu] = _padd(t.get(mu, ()), _pint(p))
            else:
                # q' + (mu - lam) q = p  =>  q = sum_j (-1)^j p^(j) / (mu - lam)^(j+1)
                d = mu - lam
                q = ()
                deriv = p
                j = 0
                while deriv:
                    q = _padd(q, tuple(c * (-1) ** j / d ** (j + 1) for c in deriv))
                    deriv = _pderiv(deriv)
                    j += 1
                t[mu] = _padd(t.get(mu, ()), q)
        return ExpPoly(t)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"ExpPoly({self.to_str()})"

    def to_str(self, var: str = "eps") -> str:
        from .exprcore import Add, Const, Exp, Mul, Pow, Sym, rewrite, to_str

        pieces = []
        for lam in sorted(self.terms, key=lambda l: (l != 0, -l)):
            for i, c in enumerate(self.terms[lam]):
                if c == 0:
                    continue
                f = [Const(c)]
                if i == 1:
                    f.append(Sym(var))
                elif i > 1:
                    f.append(Pow(Sym(var), Fraction(i)))
                if lam != 0:
                    f.append(Exp(Mul((Const(lam), Sym(var)))))
                pieces.append(rewrite(Mul(tuple(f))))
        if not pieces:
            return "0"
        return to_str(Add(tuple(pieces)) if len(pieces) > 1 else pieces[0])


def exp_matrix(A, sign: int = 1) -> list:
    """``exp(sign*eps*A)`` as a matrix of ExpPoly via Putzer's algorithm.

    Requires the characteristic polynomial of ``A`` to split over the
    rationals; raises :class:`~liepoint.ratpoly.NonSplitError` otherwise.
    """
    from .ratpoly import rational_eigenvalues

    n = len(A)
    B = [[Fraction(sign) * Fraction(a) for a in row] for row in A]
    eigs = rational_eigenvalues(B)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    # P_0 = I, P_k = prod_{j<k} (B - eig_j I)
    Ps = [ident]
    for k in range(1, n):
        prev = Ps[-1]
        lam = eigs[k - 1]
        shifted = [[B[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        Ps.append([[sum(prev[i][m] * shifted[m][j] for m in range(n)) for j in range(n)] for i in range(n)])
    rs = []
    r = ExpPoly.exp(eigs[0])
    rs.append(r)
    for k in range(1, n):
        part = rs[-1].solve_shifted(eigs[k])
        c = part.at_zero()
        r = part - ExpPoly.exp(eigs[k], c)
        rs.append(r)
    out = [[ExpPoly() for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if Ps[k][i][j]:
                    out[i][j] = out[i][j] + rs[k] * Ps[k][i][j]
    return out
