"""Exact rational linear algebra on sparse rows."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def _primitive(row: dict) -> dict:
    """Scale an integer row by its content and make the first entry positive."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    first = min(row)
    if row[first] < 0:
        row = {k: -v for k, v in row.items()}
    return row


def _to_int_row(row) -> dict:
    items = row.items() if isinstance(row, dict) else enumerate(row)
    fr = {k: Fraction(v) for k, v in items if v != 0}
    if not fr:
        return {}
    den = 1
    for v in fr.values():
        den = den * v.denominator // gcd(den, v.denominator)
    return _primitive({k: int(v * den) for k, v in fr.items()})


def echelon(rows: Sequence, ncols: int) -> tuple[list, list]:
    """Fraction-free forward elimination.

    Rows are sparse ``{col: value}`` dicts (or dense sequences). Each step
    cross-multiplies integer rows and divides out the row content, so no
    rational arithmetic happens until the final normalization. Returns
    ``(pivot_rows, pivot_cols)`` with integer rows in echelon form.
    """
    pending = []
    seen = set()
    for r in rows:
        ir = _to_int_row(r)
        if ir:
            key = tuple(sorted(ir.items()))
            if key not in seen:
                seen.add(key)
                pending.append(ir)
    pivots: dict = {}  # col -> row
    for row in pending:
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = row
                break
            a = prow[col]
            b = row[col]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {k: v * ma for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - v * mb
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else {}
    cols = sorted(pivots)
    return [pivots[c] for c in cols], cols


def rref(rows: Sequence, ncols: int) -> tuple[list, list]:
    """Reduced row echelon form with unit pivots, as Fraction rows."""
    erows, cols = echelon(rows, ncols)
    frows = []
    for r, c in zip(erows, cols):
        p = Fraction(r[c])
        frows.append({k: Fraction(v) / p for k, v in r.items()})
    # back substitution: clear entries above each pivot, last pivot first
    for i in range(len(frows) - 1, -1, -1):
        c = cols[i]
        for j in range(i):
            f = frows[j].get(c)
            if f:
                row = frows[j]
                for k, v in frows[i].items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
    return frows, cols


def nullspace(rows: Sequence, ncols: int) -> list:
    """Basis of ``{x : row . x = 0 for all rows}`` as dense Fraction lists.

    One vector per free column, with a 1 in that column and zeros in the other
    free columns; deterministic for a fixed row and column order.
    """
    frows, cols = rref(rows, ncols)
    pivot_set = set(cols)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in zip(frows, cols):
            if f in r:
                v[c] = -r[f]
        basis.append(v)
    return basis


def rank(rows: Sequence, ncols: int) -> int:
    return len(echelon(rows, ncols)[1])


def solve(A_cols: Sequence, b: Sequence) -> list | None:
    """Solve ``sum_j x_j A_cols[j] = b`` exactly; None when inconsistent.

    Columns and ``b`` are dense sequences of equal length.
    """
    n = len(A_cols)
    m = len(b)
    rows = []
    for i in range(m):
        row = {j: Fraction(A_cols[j][i]) for j in range(n) if A_cols[j][i] != 0}
        if b[i] != 0:
            row[n] = Fraction(b[i])
        if row:
            rows.append(row)
    frows, cols = rref(rows, n + 1)
    if n in cols:
        return None
    x = [Fraction(0)] * n
    for r, c in zip(frows, cols):
        x[c] = r.get(n, Fraction(0))
    return x


def in_span(vectors: Sequence, target: Sequence) -> bool:
    return solve(vectors, target) is not None
