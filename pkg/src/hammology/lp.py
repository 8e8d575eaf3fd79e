"""Exact linear programming: two-phase dense tableau simplex over rationals.

    minimize    c @ x
    subject to  A_ub @ x <= b_ub
                A_eq @ x == b_eq
                x >= 0

Arithmetic uses ``gmpy2.mpq`` internally and returns ``Fraction``.  Pivoting
is Dantzig's rule, falling back to Bland's rule after a run of degenerate
pivots so the method cannot cycle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from .errors import LPError

_DEGENERATE_LIMIT = 30


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]


def _q(v) -> mpq:
    if isinstance(v, Fraction):
        return mpq(v.numerator, v.denominator)
    return mpq(v)


_ZERO = mpq(0)


def _qrow(row) -> list:
    return [_ZERO if not v else (mpq(v.numerator, v.denominator) if type(v) is Fraction else mpq(v)) for v in row]


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    def __init__(self, rows, basis, ncols):
        self.rows = rows  # each row: list of ncols coefficients + rhs
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        p = row[col]
        if p != 1:
            inv = 1 / p
            row = [v * inv if v else v for v in row]
            self.rows[r] = row
        nz = [k for k, v in enumerate(row) if v]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                for k in nz:
                    other[k] -= f * row[k]
        self.basis[r] = col

    def run(self, cost: list, allowed: int) -> list:
        """Optimise ``cost`` (length ncols) over columns ``< allowed``; returns reduced costs."""
        rc = list(cost) + [mpq(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for k, v in enumerate(row):
                    if v:
                        rc[k] -= cb * v
        degenerate = 0
        while True:
            if degenerate >= _DEGENERATE_LIMIT:
                col = next((k for k in range(allowed) if rc[k] < 0), None)
            else:
                col, best = None, 0
                for k in range(allowed):
                    if rc[k] < best:
                        col, best = k, rc[k]
            if col is None:
                return rc
            r, ratio = None, None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    t = row[-1] / a
                    if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[r]):
                        r, ratio = i, t
            if r is None:
                raise LPError("linear program is unbounded")
            degenerate = degenerate + 1 if ratio == 0 else 0
            self.pivot(r, col)
            f = rc[col]
            row = self.rows[r]
            for k, v in enumerate(row):
                if v:
                    rc[k] -= f * v


def minimize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    nvar = len(c)
    specs = []  # (coeffs, rhs, kind) with kind in {"le", "ge", "eq"} after sign fix
    for a, b in zip(A_ub, b_ub):
        a = _qrow(a)
        b = _q(b)
        if b >= 0:
            specs.append((a, b, "le"))
        else:
            specs.append(([-v for v in a], -b, "ge"))
    for a, b in zip(A_eq, b_eq):
        a = _qrow(a)
        b = _q(b)
        if b < 0:
            a, b = [-v for v in a], -b
        specs.append((a, b, "eq"))

    n_slack = sum(1 for s in specs if s[2] != "eq")
    n_art = sum(1 for s in specs if s[2] != "le")
    ncols = nvar + n_slack + n_art
    zero = mpq(0)
    rows, basis = [], []
    s_at, a_at = nvar, nvar + n_slack
    for a, b, kind in specs:
        row = a + [zero] * (n_slack + n_art) + [b]
        if kind == "le":
            row[s_at] = mpq(1)
            basis.append(s_at)
            s_at += 1
        else:
            if kind == "ge":
                row[s_at] = mpq(-1)
                s_at += 1
            row[a_at] = mpq(1)
            basis.append(a_at)
            a_at += 1
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    art_start = nvar + n_slack
    if n_art:
        phase1 = [zero] * art_start + [mpq(1)] * n_art
        tab.run(phase1, ncols)
        infeas = sum(row[-1] for row, b in zip(tab.rows, tab.basis) if b >= art_start)
        if infeas > 0:
            raise LPError("linear program is infeasible")
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art_start:
                row = tab.rows[i]
                col = next((k for k in range(art_start) if row[k]), None)
                if col is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, col)
            i += 1
        for k, row in enumerate(tab.rows):
            tab.rows[k] = row[:art_start] + [row[-1]]
        tab.ncols = art_start

    cost = _qrow(c) + [zero] * n_slack
    tab.run(cost, art_start)
    x = [zero] * nvar
    for row, b in zip(tab.rows, tab.basis):
        if b < nvar:
            x[b] = row[-1]
    value = sum((ci * xi for ci, xi in zip(cost, x)), zero)
    return LPResult(_frac(value), tuple(_frac(v) for v in x))
