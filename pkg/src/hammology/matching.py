"""Bottleneck matching, cycle registration through the union, and d_new."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import InputError, InvariantViolation
from .filtration import Filtration, build_filtration
from .metrics import StringSet
from .persistence import Bar, BarcodeSet, Z2Span, barcodes_from_reduction, bits, compute_persistence, is_morse, reduce
from .separation import SeparationResult, UnionSeparation, default_epsilon, separate, separate_union

Interval = tuple  # (birth, death) with death None for infinite bars


def _as_interval(bar) -> Interval:
    if isinstance(bar, Bar):
        return bar.interval()
    b, d = bar
    return (Fraction(b), None if d is None else Fraction(d))


def half_length(iv: Interval):
    return None if iv[1] is None else (iv[1] - iv[0]) / 2


def pair_cost(I: Interval, J: Interval):
    """Smallest δ with I inside J^δ and J inside I^δ; None if impossible."""
    if (I[1] is None) != (J[1] is None):
        return None
    c = abs(I[0] - J[0])
    if I[1] is not None:
        c = max(c, abs(I[1] - J[1]))
    return c


@dataclass(frozen=True)
class BarMatching:
    pairs: tuple  # ((left interval, right interval), ...)
    left_unmatched: tuple
    right_unmatched: tuple
    delta: Optional[Fraction]  # None means infinite

    def is_delta_matching(self, delta) -> bool:
        for I in self.left_unmatched + self.right_unmatched:
            h = half_length(I)
            if h is None or h > delta:
                return False
        for I, J in self.pairs:
            c = pair_cost(I, J)
            if c is None or c > delta:
                return False
        return True


def _feasible(left: list, right: list, delta) -> Optional[np.ndarray]:
    """Perfect matching of the doubled bipartite graph at threshold ``delta``.

    Rows are left bars then one diagonal slot per right bar; columns are
    right bars then one diagonal slot per left bar.
    """
    p, q = len(left), len(right)
    rows, cols = [], []
    for i, I in enumerate(left):
        for j, J in enumerate(right):
            c = pair_cost(I, J)
            if c is not None and c <= delta:
                rows.append(i)
                cols.append(j)
        h = half_length(I)
        if h is not None and h <= delta:
            rows.append(i)
            cols.append(q + i)
    for j, J in enumerate(right):
        h = half_length(J)
        if h is not None and h <= delta:
            rows.append(p + j)
            cols.append(j)
        for i in range(p):
            rows.append(p + j)
            cols.append(q + i)
    size = p + q
    if size == 0:
        return np.zeros(0, dtype=int)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        return None
    return match


def bottleneck(bc1: Sequence, bc2: Sequence) -> tuple[Optional[Fraction], BarMatching]:
    """Exact bottleneck distance between two barcodes of one dimension.

    Zero-length bars are dropped.  Infinite bars may only match infinite
    bars; if their counts differ the distance is infinite and reported as
    ``None``.
    """
    left = [iv for iv in map(_as_interval, bc1) if iv[0] != iv[1]]
    right = [iv for iv in map(_as_interval, bc2) if iv[0] != iv[1]]
    if sum(iv[1] is None for iv in left) != sum(iv[1] is None for iv in right):
        return None, BarMatching((), tuple(left), tuple(right), None)
    cands = {Fraction(0)}
    for I in left:
        for J in right:
            c = pair_cost(I, J)
            if c is not None:
                cands.add(c)
    for I in left + right:
        h = half_length(I)
        if h is not None:
            cands.add(h)
    cands = sorted(cands)
    lo, hi = 0, len(cands) - 1
    if _feasible(left, right, cands[hi]) is None:
        raise InvariantViolation("no matching at the largest candidate threshold")
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(left, right, cands[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    delta = cands[lo]
    match = _feasible(left, right, delta)
    p, q = len(left), len(right)
    pairs, lu, ru = [], [], []
    for i in range(p):
        j = match[i]
        if j < q:
            pairs.append((left[i], right[j]))
        else:
            lu.append(left[i])
    for j in range(q):
        if match[p + j] == j:
            ru.append(right[j])
    result = BarMatching(tuple(pairs), tuple(lu), tuple(ru), delta)
    if not result.is_delta_matching(delta):
        raise InvariantViolation("bottleneck matching violates its own threshold")
    return delta, result


def bottleneck_distance(bc1: Sequence, bc2: Sequence) -> Optional[Fraction]:
    return bottleneck(bc1, bc2)[0]


def single_bar_bottleneck(bar1, bar2) -> Fraction:
    I, J = _as_interval(bar1), _as_interval(bar2)
    if I[1] is None or J[1] is None:
        raise InputError("single-bar distance needs finite bars")
    return min(pair_cost(I, J), max(half_length(I), half_length(J)))


# -- registration ----------------------------------------------------------------------


@dataclass(frozen=True)
class RegistrationReport:
    dim: int
    pairs: tuple  # ((left bar, right bar, union death), ...)
    residual_left: tuple
    residual_right: tuple


@dataclass(frozen=True)
class _ImageBar:
    bar: Bar
    chain: int  # representative over union entry indices
    born: bool  # passes the birth test in the union
    death: Optional[Fraction]  # union death level


def _image_barcodes(union: UnionSeparation, ids: Sequence[int]) -> BarcodeSet:
    strings = StringSet(tuple(union.result.separated[i] for i in ids))
    return compute_persistence(Filtration.from_radii(strings, union.restrict(ids), "generalized"))


class _UnionHomology:
    """Cycle and boundary spaces of the union filtration, by level."""

    def __init__(self, F: Filtration):
        self.F = F
        self.red = reduce(F)
        self.bars = barcodes_from_reduction(self.red)
        self.radius = [r for _, r in F.entries]

    def cycles_before(self, k: int, level) -> Z2Span:
        span = Z2Span()
        for j, (s, r) in enumerate(self.F.entries):
            if r >= level:
                break
            if len(s) - 1 == k and self.red.R[j] == 0:
                span.add(self.red.V[j])
        return span

    def boundary_columns(self, k: int) -> list[tuple]:
        out = []
        for j, (s, r) in enumerate(self.F.entries):
            if len(s) - 1 == k + 1 and self.red.R[j]:
                out.append((r, self.red.R[j]))
        return out

    def classify(self, k: int, chain: int, birth) -> tuple[bool, Optional[Fraction]]:
        """Birth test at ``birth`` and the level where the class merges or dies."""
        span = self.cycles_before(k, birth)
        cols = self.boundary_columns(k)
        i = 0
        while i < len(cols) and cols[i][0] <= birth:
            span.add(cols[i][1])
            i += 1
        if chain in span:
            return False, None
        while i < len(cols):
            level = cols[i][0]
            while i < len(cols) and cols[i][0] == level:
                span.add(cols[i][1])
                i += 1
            if chain in span:
                return True, level
        return True, None


def _lift(bar: Bar, image: BarcodeSet, ids: Sequence[int], F: Filtration) -> int:
    entries = image.reduction.filtration.entries
    chain = 0
    for i in bits(bar.representative):
        s = entries[i][0]
        chain |= 1 << F.index(tuple(sorted(ids[v] for v in s)))
    return chain


def register_images(union: UnionSeparation, k: int, homology: Optional[_UnionHomology] = None) -> list[tuple]:
    """Registered pairs of image bars as ((dim, birth simplex) left, same right, death)."""
    F = union.result.filtration()
    homology = homology or _UnionHomology(F)
    sides = []
    for ids in (union.left_ids, union.right_ids):
        image = _image_barcodes(union, ids)
        if not is_morse(image):
            raise InvariantViolation("image filtration is not Morse")
        found = []
        for bar in image.dimension(k):
            chain = _lift(bar, image, ids, F)
            born, death = homology.classify(k, chain, bar.birth)
            found.append(_ImageBar(bar, chain, born, death))
        sides.append(found)
    pairs = []
    used_right = set()
    for a in sides[0]:
        if not a.born:
            continue
        partners = [i for i, b in enumerate(sides[1]) if b.born and b.death == a.death]
        if len(partners) > 1:
            raise InvariantViolation("a bar registers with two partners")
        if partners:
            i = partners[0]
            if i in used_right:
                raise InvariantViolation("a bar registers with two partners")
            used_right.add(i)
            pairs.append(((k, a.bar.birth_simplex), (k, sides[1][i].bar.birth_simplex), a.death))
    return pairs


def register_cycles(
    left: BarcodeSet, right: BarcodeSet, union: UnionSeparation, k: int,
    homology: Optional[_UnionHomology] = None,
) -> RegistrationReport:
    """Registered pairs between two barcodes, found on their images in the union.

    A pair found on the images is carried over to the bars with the same
    birth simplex; bars without such a partner stay in the residuals.
    """
    for bc in (left, right):
        if not is_morse(bc):
            raise InputError("registration needs Morse filtrations")
    lbars = {b.birth_simplex: b for b in left.dimension(k)}
    rbars = {b.birth_simplex: b for b in right.dimension(k)}
    pairs = []
    for (_, ls), (_, rs), death in register_images(union, k, homology):
        if ls in lbars and rs in rbars:
            pairs.append((lbars.pop(ls), rbars.pop(rs), death))
    by_interval = lambda b: (b.birth, b.death is None, b.death or 0)
    return RegistrationReport(
        k,
        tuple(pairs),
        tuple(sorted(lbars.values(), key=by_interval)),
        tuple(sorted(rbars.values(), key=by_interval)),
    )


# -- distances -------------------------------------------------------------------------------


def _check_pair(A: StringSet, B: StringSet) -> None:
    if (A.n, A.l) != (B.n, B.l):
        raise InputError("ambient mismatch between the two sets")
    if len(A) != len(B):
        raise InputError(f"sets differ in size: {len(A)} vs {len(B)}")
    if len(A) < 2:
        raise InputError("sets need at least two strings")


def zero_lengths(A: StringSet, mode: str) -> list:
    bc = compute_persistence(build_filtration(A, mode))
    return sorted(b.death for b in bc.dimension(0, nonzero=False) if b.death is not None)


def d0(A: StringSet, B: StringSet, mode: Optional[str] = None) -> Fraction:
    """Sorted componentwise comparison of the finite dimension-0 bar lengths.

    ``mode`` defaults to discrete when both sets hold ordinary strings.
    """
    _check_pair(A, B)
    if mode is None:
        mode = "discrete" if A.mode == B.mode == "discrete" else "generalized"
    la, lb = zero_lengths(A, mode), zero_lengths(B, mode)
    return max(abs(a - b) for a, b in zip(la, lb))


@dataclass
class DnewReport:
    value: Fraction
    k0: int
    weights: dict
    epsilon: Fraction
    d: dict  # k -> d_k
    registrations: dict  # k -> RegistrationReport
    sep_a: SeparationResult
    sep_b: SeparationResult
    union: Optional[UnionSeparation]
    barcodes_a: BarcodeSet = field(repr=False)
    barcodes_b: BarcodeSet = field(repr=False)


def top_dimension(*barcodes: BarcodeSet) -> int:
    return max((b.dim for bc in barcodes for b in bc.bars if not b.zero_length and b.dim > 0), default=0)


def weights_for(k0: int) -> dict:
    total = 2 ** (k0 + 1) - 1
    return {k: Fraction(2**k, total) for k in range(k0 + 1)}


def compare(A: StringSet, B: StringSet, epsilon: Optional[Fraction] = None, d0_mode: Optional[str] = None) -> DnewReport:
    """All distances d_k and their weighted sum d_new, with the evidence behind them."""
    _check_pair(A, B)
    if epsilon is None:
        epsilon = default_epsilon(A, B)
    epsilon = Fraction(epsilon)
    sep_a, sep_b = separate(A, epsilon), separate(B, epsilon)
    bca = compute_persistence(sep_a.filtration())
    bcb = compute_persistence(sep_b.filtration())
    k0 = top_dimension(bca, bcb)
    d = {0: d0(A, B, d0_mode)}
    regs = {}
    union = None
    homology = None
    if k0 > 0:
        union = separate_union(A, B, epsilon)
        homology = _UnionHomology(union.result.filtration())
    for k in range(1, k0 + 1):
        if not bca.dimension(k) and not bcb.dimension(k):
            d[k] = Fraction(0)
            continue
        reg = register_cycles(bca, bcb, union, k, homology)
        regs[k] = reg
        total = sum((single_bar_bottleneck(a, b) for a, b, _ in reg.pairs), Fraction(0))
        rest, _ = bottleneck(reg.residual_left, reg.residual_right)
        d[k] = total + rest
    w = weights_for(k0)
    value = sum((w[k] * d[k] for k in range(k0 + 1)), Fraction(0))
    return DnewReport(value, k0, w, epsilon, d, regs, sep_a, sep_b, union, bca, bcb)


def dk(A: StringSet, B: StringSet, k: int, epsilon: Optional[Fraction] = None) -> Fraction:
    if k < 1:
        raise InputError("d_k is defined here for k >= 1; use d0 for dimension 0")
    report = compare(A, B, epsilon)
    return report.d.get(k, Fraction(0))


def dnew(A: StringSet, B: StringSet, epsilon: Optional[Fraction] = None) -> Fraction:
    return compare(A, B, epsilon).value
