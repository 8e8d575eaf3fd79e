"""Simplex radii, centers and minimal generator sets.

Discrete mode solves the closest-string problem exactly; generalized mode
solves an exact LP over centers in S'(n, l).  A simplex is a sorted tuple of
vertex ids into a ``StringSet``; the ``*_points`` functions work directly on
sequences of strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Callable, Optional, Sequence

from . import lp
from .errors import InvariantViolation
from .metrics import (
    ONE,
    ZERO,
    AnyString,
    DiscreteString,
    GeneralizedString,
    StringSet,
    distance,
    embed,
    gh_distance,
    hamming,
)

Simplex = tuple  # sorted tuple of vertex ids


@dataclass(frozen=True)
class RadiusCertificate:
    radius: Fraction
    center: AnyString
    mode: str


@dataclass(frozen=True)
class GeneratorSet:
    simplex: Simplex
    generators: frozenset
    witness_center: GeneralizedString


# -- discrete mode -------------------------------------------------------------


def _closest_string_within(points: Sequence[DiscreteString], r: int) -> Optional[tuple]:
    """Depth-first search for a center with max Hamming distance <= r.

    Candidate letters at a position are those occurring in the column.  A pair
    of vertices that disagree on the remaining positions forces at least one
    mismatch per such position, which gives the pruning bound
    ``partial[a] + partial[b] + remaining_diff[a][b] <= 2r``.
    """
    k, l = len(points), points[0].l
    cols = [tuple(p.symbols[i] for p in points) for i in range(l)]
    order = sorted(range(l), key=lambda i: -len(set(cols[i])))
    cols = [cols[i] for i in order]
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    suffix = [[0] * len(pairs) for _ in range(l + 1)]
    for pos in range(l - 1, -1, -1):
        col = cols[pos]
        suffix[pos] = [suffix[pos + 1][q] + (col[a] != col[b]) for q, (a, b) in enumerate(pairs)]
    partial = [0] * k
    choice = [0] * l

    def feasible(pos: int) -> bool:
        rem = suffix[pos]
        for q, (a, b) in enumerate(pairs):
            if partial[a] + partial[b] + rem[q] > 2 * r:
                return False
        return True

    def search(pos: int) -> bool:
        if pos == l:
            return True
        col = cols[pos]
        letters = sorted(set(col), key=lambda a: (-col.count(a), a))
        for a in letters:
            hit = [v for v in range(k) if col[v] != a]
            ok = True
            for v in hit:
                partial[v] += 1
                if partial[v] > r:
                    ok = False
            if ok and feasible(pos + 1) and search(pos + 1):
                choice[pos] = a
                for v in hit:
                    partial[v] -= 1
                return True
            for v in hit:
                partial[v] -= 1
        return False

    if not feasible(0) or not search(0):
        return None
    center = [0] * l
    for pos, i in enumerate(order):
        center[i] = choice[pos]
    return tuple(center)


def radius_discrete_points(points: Sequence[DiscreteString]) -> RadiusCertificate:
    points = list(points)
    n = points[0].n
    if len(points) == 1:
        return RadiusCertificate(ZERO, points[0], "discrete")
    max_pair = max(hamming(a, b) for i, a in enumerate(points) for b in points[i + 1:])
    lo, hi = ceil(max_pair / 2), max_pair
    best = _closest_string_within(points, hi)
    while lo < hi:
        mid = (lo + hi) // 2
        found = _closest_string_within(points, mid)
        if found is None:
            lo = mid + 1
        else:
            hi, best = mid, found
    center = DiscreteString(best, n)
    return RadiusCertificate(Fraction(hi), center, "discrete")


def radius_discrete(A: StringSet, simplex: Simplex) -> RadiusCertificate:
    return radius_discrete_points([A[i] for i in simplex])


# -- generalized mode ----------------------------------------------------------


class _CenterProgram:
    """Variables and overlap expressions for centers of a point set.

    Positions whose column is identical across all points are fixed to that
    column (any other choice only increases every distance).  Positions with
    equal columns share one center distribution, which is without loss of
    generality by convexity and symmetry.  Letters absent from a column get
    zero center weight.  Overlap min(c, y) is the center variable itself when
    y is 1, absent when y is 0 and an auxiliary variable otherwise.
    """

    def __init__(self, points: Sequence[GeneralizedString]):
        self.points = points
        l = points[0].l
        self.n = points[0].n
        types: dict[tuple, list[int]] = {}
        self.constant: dict[int, tuple] = {}
        ids = [p.row_ids for p in points]
        for i in range(l):
            key = tuple(r[i] for r in ids)
            if all(k == key[0] for k in key):
                self.constant[i] = points[0].weights[i]
            else:
                types.setdefault(key, []).append(i)
        self.types = [(tuple(p.weights[pos[0]] for p in points), pos) for pos in types.values()]
        self.K = sum(len(pos) for _, pos in self.types)
        self.nvar = 0
        self.cvar: list[dict[int, int]] = []
        for col, _ in self.types:
            support = sorted({j for d in col for j, w in enumerate(d) if w})
            self.cvar.append({j: self._new() for j in support})
        # overlap[p] = list of (var, coeff); aux bounds = (var, cvar, cap)
        self.overlap: list[list[tuple[int, int]]] = [[] for _ in points]
        self.aux: list[tuple[int, int, Fraction]] = []
        for t, (col, pos) in enumerate(self.types):
            mult = len(pos)
            for p, dist in enumerate(col):
                for j, w in enumerate(dist):
                    if not w:
                        continue
                    if w == 1:
                        self.overlap[p].append((self.cvar[t][j], mult))
                    else:
                        v = self._new()
                        self.aux.append((v, self.cvar[t][j], w))
                        self.overlap[p].append((v, mult))

    def _new(self) -> int:
        self.nvar += 1
        return self.nvar - 1

    def base_constraints(self, width: int):
        A_ub, b_ub, A_eq, b_eq = [], [], [], []
        for v, c, cap in self.aux:
            row = [0] * width
            row[v], row[c] = 1, -1
            A_ub.append(row)
            b_ub.append(0)
            row = [0] * width
            row[v] = 1
            A_ub.append(row)
            b_ub.append(cap)
        for cv in self.cvar:
            row = [0] * width
            for v in cv.values():
                row[v] = 1
            A_eq.append(row)
            b_eq.append(1)
        return A_ub, b_ub, A_eq, b_eq

    def distance_row(self, p: int, width: int) -> list:
        """Row ``a`` with d(c, points[p]) = K - a @ x."""
        row = [0] * width
        for v, coeff in self.overlap[p]:
            row[v] += coeff
        return row

    def center(self, x: Sequence[Fraction]) -> GeneralizedString:
        rows: list = [None] * self.points[0].l
        for i, d in self.constant.items():
            rows[i] = d
        for t, (_, pos) in enumerate(self.types):
            dist = [ZERO] * self.n
            for j, v in self.cvar[t].items():
                dist[j] = x[v]
            dist = tuple(dist)
            for i in pos:
                rows[i] = dist
        # rows sum to one by the equality constraints of the program
        return GeneralizedString.trusted(tuple(rows))


@lru_cache(maxsize=1 << 16)
def _radius_generalized_cached(points: tuple) -> tuple[Fraction, GeneralizedString]:
    if len(points) == 1:
        return ZERO, points[0]
    prog = _CenterProgram(points)
    width = prog.nvar + 1
    r = prog.nvar
    A_ub, b_ub, A_eq, b_eq = prog.base_constraints(width)
    for p in range(len(points)):
        row = [-a for a in prog.distance_row(p, width)]
        row[r] = -1
        A_ub.append(row)
        b_ub.append(-prog.K)
    cost = [0] * width
    cost[r] = 1
    res = lp.minimize(cost, A_ub, b_ub, A_eq, b_eq)
    center = prog.center(res.x)
    radius = res.value
    if any(gh_distance(center, y) > radius for y in points):
        raise InvariantViolation("LP center does not certify its radius")
    return radius, center


def radius_generalized_points(points: Sequence[AnyString]) -> RadiusCertificate:
    pts = tuple(embed(p) for p in points)
    radius, center = _radius_generalized_cached(pts)
    return RadiusCertificate(radius, center, "generalized")


def radius_generalized(A: StringSet, simplex: Simplex) -> RadiusCertificate:
    return radius_generalized_points([A[i] for i in simplex])


def radius_points(points: Sequence[AnyString], mode: str) -> RadiusCertificate:
    if mode == "discrete":
        return radius_discrete_points(points)
    return radius_generalized_points(points)


@lru_cache(maxsize=1 << 16)
def _min_distance_cached(points: tuple, r: Fraction, u: GeneralizedString):
    prog = _CenterProgram(points + (u,))
    width = prog.nvar
    A_ub, b_ub, A_eq, b_eq = prog.base_constraints(width)
    for p in range(len(points)):
        A_ub.append([-a for a in prog.distance_row(p, width)])
        b_ub.append(r - prog.K)
    cost = [-a for a in prog.distance_row(len(points), width)]
    res = lp.minimize(cost, A_ub, b_ub, A_eq, b_eq)
    center = prog.center(res.x)
    return prog.K + res.value, center


def min_distance_over_centers(
    points: Sequence[AnyString], u: AnyString, radius: Optional[Fraction] = None
) -> tuple[Fraction, GeneralizedString]:
    """Minimise d_GH(c, u) over centers c with d_GH(c, y) <= radius for all points y.

    ``radius`` defaults to the radius of the points, i.e. the centers of
    their miniballs.
    """
    pts = tuple(embed(p) for p in points)
    if radius is None:
        radius = _radius_generalized_cached(pts)[0]
    return _min_distance_cached(pts, Fraction(radius), embed(u))


def is_center(c: AnyString, points: Sequence[AnyString], r) -> bool:
    return all(distance(c, y) <= r for y in points)


def minimal_generators_points(
    points: Sequence[AnyString],
    radius: Optional[Fraction] = None,
    face_radius: Optional[Callable[[int], Fraction]] = None,
) -> tuple[frozenset, GeneralizedString]:
    """Indices of the minimal generator set, plus a witness center.

    A vertex is a generator iff it is at distance exactly r from every center,
    decided by minimising its distance over the center polytope.  Two shortcuts
    avoid LPs: a vertex whose removal lowers the radius must be a generator,
    and any center found along the way with a vertex strictly inside certifies
    that vertex as a non-generator.  ``face_radius(i)``, when given, returns the
    radius of the points with index ``i`` removed.
    """
    pts = tuple(embed(p) for p in points)
    k = len(pts)
    if radius is None:
        radius = _radius_generalized_cached(pts)[0]
    if k <= 2:
        return frozenset(range(k)), _radius_generalized_cached(pts)[1]
    gens: set[int] = set()
    outside: set[int] = set()
    centers = []
    if face_radius is not None:
        for i in range(k):
            if face_radius(i) < radius:
                gens.add(i)
    for i in range(k):
        if i in gens or i in outside:
            continue
        value, c = _min_distance_cached(pts, radius, pts[i])
        if value < radius:
            centers.append(c)
            for y in range(k):
                if y not in gens and gh_distance(c, pts[y]) < radius:
                    outside.add(y)
        else:
            gens.add(i)
    if centers:
        witness = _average(centers)
    else:
        witness = _radius_generalized_cached(pts)[1]
    for i, p in enumerate(pts):
        d = gh_distance(witness, p)
        if d > radius or (d == radius) != (i in gens):
            raise InvariantViolation("generator witness center is inconsistent")
    if not gens:
        raise InvariantViolation("empty minimal generator set")
    return frozenset(gens), witness


def _average(centers: Sequence[GeneralizedString]) -> GeneralizedString:
    k = len(centers)
    l, n = centers[0].l, centers[0].n
    rows = []
    for i in range(l):
        rows.append(tuple(sum((c.weights[i][j] for c in centers), ZERO) / k for j in range(n)))
    return GeneralizedString.trusted(tuple(rows))


def minimal_generators(A: StringSet, simplex: Simplex) -> GeneratorSet:
    simplex = tuple(simplex)
    gens, witness = minimal_generators_points([A[i] for i in simplex])
    return GeneratorSet(simplex, frozenset(simplex[i] for i in gens), witness)


def approx_equivalent(A: StringSet, sigma: Simplex, tau: Simplex) -> bool:
    return minimal_generators(A, sigma).generators == minimal_generators(A, tau).generators


def d_sigma(A: StringSet, simplex: Simplex, u: int) -> Fraction:
    """Smallest distance from vertex ``u`` to a miniball center of ``simplex``.

    The centers used are those of the simplex itself; each of them has the
    minimal generators on its boundary.
    """
    points = [A[i] for i in simplex]
    if len(points) == 1:
        return distance(points[0], A[u])
    return min_distance_over_centers(points, A[u])[0]


def clear_caches() -> None:
    _radius_generalized_cached.cache_clear()
    _min_distance_cached.cache_clear()
