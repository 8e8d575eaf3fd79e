"""Persistent homology over Z2 by boundary-matrix column reduction.

Columns are Python ints used as bitsets over filtration entry indices.  The
reduction keeps R = D V; a finite bar's representative is the reduced column
of the simplex that kills it, an infinite bar's is the V column of its
birth simplex.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InvariantViolation
from .filtration import Filtration


def bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def boundary_columns(F: Filtration) -> list[int]:
    cols = []
    for s, _ in F.entries:
        col = 0
        if len(s) > 1:
            for i in range(len(s)):
                col |= 1 << F.index(s[:i] + s[i + 1:])
        cols.append(col)
    return cols


@dataclass(frozen=True)
class Bar:
    dim: int
    birth: Fraction
    death: Optional[Fraction]  # None means the class never dies
    birth_index: int
    death_index: Optional[int]
    birth_simplex: tuple
    death_simplex: Optional[tuple]
    representative: int  # bitset over entry indices

    @property
    def infinite(self) -> bool:
        return self.death is None

    @property
    def length(self):
        return None if self.death is None else self.death - self.birth

    @property
    def zero_length(self) -> bool:
        return self.death is not None and self.death == self.birth

    def interval(self) -> tuple:
        return (self.birth, self.death)


@dataclass
class Reduction:
    filtration: Filtration
    D: list[int]
    R: list[int]
    V: list[int]
    dims: list[int]
    pivot: dict  # low row -> column

    def check(self) -> bool:
        """R = D V, V unit upper triangular, distinct lowest ones."""
        lows = set()
        for j, (r, v) in enumerate(zip(self.R, self.V)):
            if not (v >> j) & 1 or v >> (j + 1):
                return False
            dv = 0
            for i in bits(v):
                dv ^= self.D[i]
            if dv != r:
                return False
            if r:
                low = r.bit_length() - 1
                if low in lows:
                    return False
                lows.add(low)
        return True

    def is_positive(self, j: int) -> bool:
        return self.R[j] == 0


def reduce(F: Filtration) -> Reduction:
    D = boundary_columns(F)
    R, V = [], []
    pivot: dict[int, int] = {}
    for j, col in enumerate(D):
        v = 1 << j
        while col:
            low = col.bit_length() - 1
            k = pivot.get(low)
            if k is None:
                pivot[low] = j
                break
            col ^= R[k]
            v ^= V[k]
        R.append(col)
        V.append(v)
    dims = [len(s) - 1 for s, _ in F.entries]
    return Reduction(F, D, R, V, dims, pivot)


@dataclass(frozen=True)
class BarcodeSet:
    bars: tuple
    reduction: Reduction

    def dimension(self, k: int, nonzero: bool = True) -> list[Bar]:
        return [b for b in self.bars if b.dim == k and not (nonzero and b.zero_length)]

    @property
    def max_dim(self) -> int:
        dims = [b.dim for b in self.bars if not b.zero_length]
        return max(dims, default=0)

    def intervals(self, k: int, nonzero: bool = True) -> list[tuple]:
        bars = self.dimension(k, nonzero)
        return sorted(((b.birth, b.death) for b in bars), key=lambda iv: (iv[0], iv[1] is None, iv[1] or 0))

    def betti(self, r) -> Counter:
        alive = Counter()
        for b in self.bars:
            if b.birth <= r and (b.death is None or r < b.death):
                alive[b.dim] += 1
        return alive


def barcodes_from_reduction(red: Reduction) -> BarcodeSet:
    F = red.filtration
    bars = []
    killed = {}
    for j, col in enumerate(red.R):
        if col:
            killed[col.bit_length() - 1] = j
    for i, (s, r) in enumerate(F.entries):
        if red.R[i]:
            continue
        j = killed.get(i)
        if j is None:
            bars.append(Bar(len(s) - 1, r, None, i, None, s, None, red.V[i]))
        else:
            t, rj = F.entries[j]
            bars.append(Bar(len(s) - 1, r, rj, i, j, s, t, red.R[j]))
    return BarcodeSet(tuple(bars), red)


def compute_persistence(F: Filtration) -> BarcodeSet:
    return barcodes_from_reduction(reduce(F))


def classify_simplices(F: Filtration, red: Optional[Reduction] = None) -> dict:
    red = red or reduce(F)
    return {s: ("positive" if red.R[i] == 0 else "negative") for i, (s, _) in enumerate(F.entries)}


def _events(barcodes: BarcodeSet) -> list:
    events = []
    for b in barcodes.bars:
        if b.zero_length:
            continue
        # every vertex is born at level 0, so dimension-0 births carry no order
        if b.dim > 0:
            events.append(b.birth)
        if b.death is not None:
            events.append(b.death)
    return events


def is_morse(barcodes: BarcodeSet) -> bool:
    """No two homology events share a level.

    Events are births of bars in dimension >= 1 and deaths of all bars;
    zero-length bars are ignored.
    """
    counts = Counter(_events(barcodes))
    return all(c == 1 for c in counts.values())


def euler_check(F: Filtration, r, barcodes: Optional[BarcodeSet] = None) -> bool:
    """Alternating simplex count at level r equals the alternating Betti sum."""
    barcodes = barcodes or compute_persistence(F)
    chi = sum((-1) ** (len(s) - 1) for s, rad in F.entries if rad <= r)
    betti = barcodes.betti(r)
    return chi == sum((-1) ** k * c for k, c in betti.items())


# -- Z2 linear algebra ---------------------------------------------------------------


class Z2Span:
    """Incrementally built span of bit vectors, echelonised on the highest bit."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self.rows[v.bit_length() - 1] = v
            return True
        return False

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def copy(self) -> "Z2Span":
        out = Z2Span()
        out.rows = dict(self.rows)
        return out


def is_cycle(red: Reduction, chain: int) -> bool:
    acc = 0
    for i in bits(chain):
        acc ^= red.D[i]
    return acc == 0


def check_barcodes(barcodes: BarcodeSet) -> None:
    """Raise if any representative fails to be a cycle born and dying on time."""
    red = barcodes.reduction
    F = red.filtration
    if not red.check():
        raise InvariantViolation("reduction invariants R = DV violated")
    for b in barcodes.bars:
        rep = b.representative
        if not is_cycle(red, rep):
            raise InvariantViolation(f"representative of {b.interval()} is not a cycle")
        members = bits(rep)
        if b.birth_index not in members or max(members) != b.birth_index:
            raise InvariantViolation("representative not born with its bar")
        if b.death_index is not None:
            before = Z2Span(red.R[j] for j in range(b.death_index) if red.dims[j] == b.dim + 1)
            if rep in before:
                raise InvariantViolation("representative is a boundary before its death")
            before.add(red.R[b.death_index])
            if rep not in before:
                raise InvariantViolation("representative is not a boundary at its death")
        if F.entries[b.birth_index][1] != b.birth:
            raise InvariantViolation("bar birth differs from its simplex radius")
