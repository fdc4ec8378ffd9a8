"""Univariate rational polynomials: characteristic polynomial and rational roots."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


class NonSplitError(ValueError):
    def __init__(self, factor):
        self.factor = factor
        super().__init__(f"characteristic polynomial has irreducible factor {format_poly(factor)}")


def charpoly(A) -> list:
    """Coefficients (ascending) of ``det(t I - A)`` by Faddeev-LeVerrier."""
    n = len(A)
    A = [[Fraction(a) for a in row] for row in A]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum(A[i][m] * M[m][j] for m in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        AM2 = [[sum(A[i][m] * M[m][j] for m in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AM2[i][i] for i in range(n)) / k
    return coeffs


def _divisors(n: int) -> list:
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.update((d, n // d))
        d += 1
    return sorted(out)


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _deflate(p, r):
    # synthetic division by (t - r), ascending coefficients
    n = len(p) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + p[i]
        q[i - 1] = acc
    return q


def rational_roots(p) -> list:
    """All rational roots with multiplicity; raises NonSplitError when some factor is irreducible."""
    p = [Fraction(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    roots = []
    while len(p) > 1 and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    while len(p) > 1:
        den = lcm(*(c.denominator for c in p))
        ints = [int(c * den) for c in p]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        found = None
        for q in _divisors(ints[-1]):
            for pn in _divisors(ints[0]):
                for s in (1, -1):
                    cand = Fraction(s * pn, q)
                    if _eval(p, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise NonSplitError(p)
        roots.append(found)
        p = _deflate(p, found)
    return roots


def rational_eigenvalues(A) -> list:
    if not A:
        return []
    return rational_roots(charpoly(A))


def format_poly(p, var: str = "t") -> str:
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = Fraction(p[i])
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}" + (f"*{mono}" if mono else "")
        parts.append(("-" if c < 0 else "+") + " " + s)
    out = " ".join(parts).lstrip("+ ")
    return out if not out.startswith("- ") else "-" + out[2:]
