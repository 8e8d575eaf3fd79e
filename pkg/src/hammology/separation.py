"""Separation of simplex radii by appending perturbed coordinates.

Each step appends one position to every string.  All strings put weight 1
on letter 1 there, except a chosen vertex z which puts 1 - 1/j on letter 1
and 1/j on letter 2.  Simplices whose minimal generators contain z grow by
a little, the others keep their radius, and a suitable j keeps every
previously distinct pair of radii in the same order.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InputError, InvariantViolation
from .filtration import DEFAULT_MAX_SET_SIZE, Filtration, _check_cap, all_simplices
from .metrics import ONE, ZERO, GeneralizedString, StringSet, embed, gh_distance
from .miniball import (
    Simplex,
    min_distance_over_centers,
    minimal_generators_points,
    radius_generalized_points,
)
from .persistence import compute_persistence

EPSILON_CAP = Fraction(1, 8)


@dataclass(frozen=True)
class SeparationStep:
    z: int
    j: int
    target_pair: tuple  # (simplex that keeps its radius, simplex that rises)
    appended_position: int  # 0-based index of the new coordinate
    bounds: tuple  # (epsilon / 2^i, min positive r - D, min nonzero gap); None if empty


@dataclass(frozen=True)
class SeparationResult:
    original: StringSet
    separated: StringSet
    bijection: dict  # vertex id -> vertex id; ids are kept
    steps: tuple
    epsilon: Fraction
    original_radii: dict
    radii: dict
    generators: dict  # simplex -> frozenset of vertex ids

    @property
    def appended(self) -> int:
        return len(self.steps)

    def filtration(self) -> Filtration:
        return Filtration.from_radii(self.separated, self.radii, "generalized")

    def original_filtration(self) -> Filtration:
        return Filtration.from_radii(self.original.generalized(), self.original_radii, "generalized")

    def equivalence_classes(self) -> list[list[Simplex]]:
        """Classes of simplices sharing a minimal generator set, sorted."""
        classes = defaultdict(list)
        for s, g in self.generators.items():
            classes[g].append(s)
        return sorted((sorted(c, key=lambda s: (len(s), s)) for c in classes.values()), key=lambda c: (len(c[0]), c[0]))


# -- state ---------------------------------------------------------------------------


@dataclass
class _State:
    strings: list
    radii: dict
    gens: dict
    witness: dict  # simplex -> center with exactly its generators on the boundary
    simplices: list = field(default_factory=list)

    def points(self, s: Simplex) -> list:
        return [self.strings[i] for i in s]

    def witness_for(self, s: Simplex) -> GeneralizedString:
        """The stored witness, padded with the coordinates appended since."""
        w = self.witness[s]
        l = self.strings[0].l
        if w.l < l:
            plain = (ONE,) + (ZERO,) * (w.n - 1)
            w = GeneralizedString.trusted(w.weights + (plain,) * (l - w.l))
        return w


def _generators(strings: Sequence[GeneralizedString], radii: dict, s: Simplex) -> tuple[frozenset, GeneralizedString]:
    pts = [strings[i] for i in s]

    def face_radius(i: int) -> Fraction:
        return radii[s[:i] + s[i + 1:]]

    local, witness = minimal_generators_points(pts, radii[s], face_radius if len(s) > 1 else None)
    return frozenset(s[i] for i in local), witness


def _initial_state(A: StringSet) -> _State:
    strings = [embed(s) for s in A]
    simplices = all_simplices(len(strings))
    radii = {s: radius_generalized_points([strings[i] for i in s]).radius for s in simplices}
    gens, witness = {}, {}
    for s in simplices:
        gens[s], witness[s] = _generators(strings, radii, s)
    return _State(strings, radii, gens, witness, simplices)


def find_tied_pair(radii: dict, gens: dict, vertices: Optional[frozenset] = None) -> Optional[tuple]:
    """Lowest positive radius shared by two simplices that are not equivalent.

    Returns ``(σ1, σ2)`` with σ1 the first simplex of that level in
    (dimension, vertices) order and σ2 the first one not equivalent to it.
    Only simplices inside ``vertices`` are considered when it is given.
    """
    by_level = defaultdict(list)
    for s, r in radii.items():
        if r > 0 and (vertices is None or vertices.issuperset(s)):
            by_level[r].append(s)
    for r in sorted(by_level):
        group = sorted(by_level[r], key=lambda s: (len(s), s))
        if len({gens[s] for s in group}) < 2:
            continue
        for i, s1 in enumerate(group):
            for s2 in group[i + 1:]:
                if gens[s1] != gens[s2]:
                    return s1, s2
    return None


def choose_z(gens: dict, s1: Simplex, s2: Simplex) -> tuple[int, Simplex, Simplex]:
    """The vertex to move and the orientation ``(z, fixed, rising)``.

    z comes from the difference taken against the lexicographically smaller
    generator set, smallest id first; the simplex whose generators contain z
    is the one that rises.
    """
    g1, g2 = gens[s1], gens[s2]
    if g1 == g2:
        raise InputError(f"{s1} and {s2} share their minimal generators; no vertex separates them")
    first, second = (s1, s2) if tuple(sorted(g1)) <= tuple(sorted(g2)) else (s2, s1)
    diff = gens[first] - gens[second]
    if diff:
        return min(diff), second, first
    return min(gens[second] - gens[first]), first, second


def min_nonzero_gap(values: Iterable[Fraction]) -> Optional[Fraction]:
    levels = sorted(set(values))
    gaps = [b - a for a, b in zip(levels, levels[1:])]
    return min(gaps, default=None)


def lemma_bounds(state: _State, z: int, epsilon: Fraction, step: int, room: Optional[dict] = None) -> tuple:
    """The three quantities 1/j must stay strictly below at step ``step`` (1-based).

    ``room``, when given, collects ``σ -> (D(σ, z), center)`` for the
    simplices containing z without having it as a generator.
    """
    zs = state.strings[z]
    slack = None
    for s in state.simplices:
        r = state.radii[s]
        if len(s) == 1 or z in state.gens[s]:
            continue  # r - D is 0 or negative there
        if z not in s:
            # D(σ, z) >= d(y, z) - r for every y in σ
            if max(gh_distance(state.strings[y], zs) for y in s) - r >= r:
                continue
        d, c = min_distance_over_centers(state.points(s), zs, r)
        if room is not None and z in s:
            room[s] = (d, c)
        if d < r and (slack is None or r - d < slack):
            slack = r - d
    return (epsilon / 2**step, slack, min_nonzero_gap(state.radii.values()))


def choose_j(bounds: Sequence[Optional[Fraction]]) -> int:
    """Smallest power of two j with 1/j strictly below every given bound."""
    limit = min(b for b in bounds if b is not None)
    if limit <= 0:
        raise InputError("bounds must be positive")
    j = 1
    while Fraction(1, j) >= limit:
        j *= 2
    return j


def perturb(strings: Sequence[GeneralizedString], z: int, j: int) -> list[GeneralizedString]:
    n = strings[0].n
    if n < 2:
        raise InputError("separation needs an alphabet of at least two letters")
    plain = (ONE,) + (ZERO,) * (n - 1)
    moved = (ONE - Fraction(1, j), Fraction(1, j)) + (ZERO,) * (n - 2)
    return [s.appended(moved if i == z else plain) for i, s in enumerate(strings)]


def _blend(w: GeneralizedString, c: GeneralizedString, t: Fraction) -> GeneralizedString:
    rows = []
    for p, q in zip(w.weights, c.weights):
        rows.append(tuple(t * a + (1 - t) * b for a, b in zip(p, q)))
    return GeneralizedString.trusted(tuple(rows))


def _certify_unchanged(state: _State, strings: list, s: Simplex, room: tuple, j: int) -> Optional[GeneralizedString]:
    """A center showing that the step leaves radius and generators of ``s`` alone.

    With z strictly inside by more than 1/j, a blend of the stored witness
    and the center closest to z keeps the non-generators strictly inside;
    every center of the new simplex restricts to a center of the old one,
    so the old generators stay on every boundary.  Checked exactly.
    """
    r, G = state.radii[s], state.gens[s]
    d, c = room
    step = Fraction(1, j)
    if d + step >= r:
        return None
    t = (r - d - step) / (2 * (r - d))
    n = c.n
    blended = _blend(state.witness_for(s), c, t)
    center = blended.appended((ONE,) + (ZERO,) * (n - 1))
    for v in s:
        dist = gh_distance(center, strings[v])
        if dist > r or (dist == r) != (v in G):
            return None
    return center


def _apply_step(state: _State, z: int, j: int, room: Optional[dict] = None) -> _State:
    strings = perturb(state.strings, z, j)
    radii = dict(state.radii)
    gens = dict(state.gens)
    witness = dict(state.witness)
    room = room or {}
    touched = [s for s in state.simplices if z in s]
    redo = []
    # strings other than z are unchanged up to a zero-distance coordinate
    for s in touched:
        cert = _certify_unchanged(state, strings, s, room[s], j) if s in room else None
        if cert is not None:
            witness[s] = cert
        else:
            radii[s] = radius_generalized_points([strings[i] for i in s]).radius
            redo.append(s)
    for s in sorted(redo, key=len):
        gens[s], witness[s] = _generators(strings, radii, s)
    return _State(strings, radii, gens, witness, state.simplices)


def _verify_step(before: _State, after: _State, fixed: Simplex, rising: Simplex, j: int) -> None:
    if after.radii[fixed] != before.radii[fixed]:
        raise InvariantViolation(f"radius of {fixed} moved during its separation step")
    if not after.radii[rising] > before.radii[rising]:
        raise InvariantViolation(f"radius of {rising} did not rise")
    step = Fraction(1, j)
    for s in before.simplices:
        shift = after.radii[s] - before.radii[s]
        if shift < 0 or shift > step:
            raise InvariantViolation(f"radius of {s} shifted by {shift}, outside [0, 1/{j}]")
    _verify_order(before.radii, after.radii)


def _verify_order(old: dict, new: dict) -> None:
    """Strict order of distinct old radii must survive in the new radii."""
    groups = defaultdict(list)
    for s, r in old.items():
        groups[r].append(new[s])
    prev_max = None
    for r in sorted(groups):
        lo, hi = min(groups[r]), max(groups[r])
        if prev_max is not None and lo <= prev_max:
            raise InvariantViolation("separation step broke the order of distinct radii")
        prev_max = hi


def _verify_result(original: dict, final: dict, gens: dict, epsilon: Fraction) -> None:
    for s, r in original.items():
        shift = final[s] - r
        if shift < 0 or shift >= epsilon:
            raise InvariantViolation(f"total shift of {s} is {shift}, not in [0, {epsilon})")
    seen: dict = {}
    for s, r in final.items():
        if r == 0:
            continue
        other = seen.setdefault(r, s)
        if gens[other] != gens[s]:
            raise InvariantViolation(f"{other} and {s} still share radius {r}")


def default_epsilon(A: StringSet, B: Optional[StringSet] = None) -> Fraction:
    """A quarter of the smallest gap between distinct radii of the union, at most 1/8."""
    strings = list(embed(s) for s in A)
    if B is not None:
        seen = set(strings)
        strings += [t for t in (embed(s) for s in B) if t not in seen]
    radii = [radius_generalized_points([strings[i] for i in s]).radius for s in all_simplices(len(strings))]
    gap = min_nonzero_gap(radii)
    if gap is None:
        return EPSILON_CAP
    return min(gap / 4, EPSILON_CAP)


def separate(
    A: StringSet,
    epsilon: Optional[Fraction] = None,
    phases: Optional[Sequence[Iterable[int]]] = None,
    max_size: int = DEFAULT_MAX_SET_SIZE,
) -> SeparationResult:
    """Iterate single-coordinate steps until only equivalent simplices share a radius.

    ``phases`` lists vertex sets whose internal ties are resolved before
    ties involving other vertices; the whole set is always the last phase.
    """
    _check_cap(len(A), max_size)
    if epsilon is None:
        epsilon = default_epsilon(A)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    state = _initial_state(A)
    original = dict(state.radii)
    order = [frozenset(p) for p in (phases or ())] + [None]
    steps = []
    while True:
        pair = None
        for vertices in order:
            pair = find_tied_pair(state.radii, state.gens, vertices)
            if pair is not None:
                break
        if pair is None:
            break
        if len(steps) >= len(A):
            raise InvariantViolation(f"separation needs more than {len(A)} steps")
        z, fixed, rising = choose_z(state.gens, *pair)
        room: dict = {}
        bounds = lemma_bounds(state, z, epsilon, len(steps) + 1, room)
        j = choose_j(bounds)
        after = _apply_step(state, z, j, room)
        _verify_step(state, after, fixed, rising, j)
        steps.append(SeparationStep(z, j, (fixed, rising), state.strings[0].l, bounds))
        state = after
    _verify_result(original, state.radii, state.gens, epsilon)
    return SeparationResult(
        original=A,
        separated=StringSet(tuple(state.strings)),
        bijection={i: i for i in range(len(A))},
        steps=tuple(steps),
        epsilon=epsilon,
        original_radii=original,
        radii=dict(state.radii),
        generators=dict(state.gens),
    )


def separate_pair(A: StringSet, s1: Simplex, s2: Simplex, j: int):
    """One step separating two equal-radius, non-equivalent simplices.

    Returns ``(B, f, z, rising)`` where B is the perturbed set, f the vertex
    bijection and ``rising`` the simplex whose radius grows.
    """
    s1, s2 = tuple(sorted(s1)), tuple(sorted(s2))
    state = _initial_state(A)
    if state.radii[s1] != state.radii[s2]:
        raise InputError(f"radii differ: {state.radii[s1]} vs {state.radii[s2]}")
    z, fixed, rising = choose_z(state.gens, s1, s2)
    if state.radii[fixed] > 0 and z in fixed:
        # the fixed simplex only keeps its radius when 1/j fits inside its slack
        d, _ = min_distance_over_centers(state.points(fixed), state.strings[z], state.radii[fixed])
        if Fraction(1, j) > state.radii[fixed] - d:
            raise InputError(f"1/{j} exceeds the room z has inside {fixed}")
    after = _apply_step(state, z, j)
    _verify_step_local(state, after, fixed, rising, j)
    return StringSet(tuple(after.strings)), {i: i for i in range(len(A))}, z, rising


def _verify_step_local(before: _State, after: _State, fixed: Simplex, rising: Simplex, j: int) -> None:
    if after.radii[fixed] != before.radii[fixed] or not after.radii[rising] > before.radii[rising]:
        raise InvariantViolation("separating step failed its radius post-conditions")
    step = Fraction(1, j)
    for s in before.simplices:
        if not 0 <= after.radii[s] - before.radii[s] <= step:
            raise InvariantViolation(f"radius of {s} moved outside [0, 1/{j}]")


def replay_separation(original: StringSet, steps: Sequence[SeparationStep]) -> StringSet:
    """Rebuild the separated set from its trace."""
    strings = [embed(s) for s in original]
    for st in steps:
        if st.appended_position != strings[0].l:
            raise InputError(f"step appends position {st.appended_position}, expected {strings[0].l}")
        strings = perturb(strings, st.z, st.j)
    return StringSet(tuple(strings))


# -- union ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnionSeparation:
    result: SeparationResult
    left_ids: tuple  # union vertex id of each vertex of the left set
    right_ids: tuple
    swapped: bool  # True when the right set was placed first

    def restrict(self, ids: Sequence[int]) -> dict:
        """Radius table of the image of a subset, keyed by local vertex tuples."""
        table = {}
        for s in all_simplices(len(ids)):
            table[s] = self.result.radii[tuple(sorted(ids[i] for i in s))]
        return table

    def induced(self, side: str) -> SeparationResult:
        ids = self.left_ids if side == "left" else self.right_ids
        res = self.result
        strings = StringSet(tuple(res.separated[i] for i in ids))
        original = StringSet(tuple(res.original[i] for i in ids))
        gens = {}
        pos = {u: i for i, u in enumerate(ids)}
        for s in all_simplices(len(ids)):
            g = res.generators[tuple(sorted(ids[i] for i in s))]
            gens[s] = frozenset(pos[u] for u in g)
        orig = {s: res.original_radii[tuple(sorted(ids[i] for i in s))] for s in all_simplices(len(ids))}
        return SeparationResult(original, strings, dict(pos), res.steps, res.epsilon, orig, self.restrict(ids), gens)


def canonical_key(A: StringSet) -> tuple:
    return tuple(sorted(tuple(tuple(row) for row in embed(s).weights) for s in A))


def union_layout(A: StringSet, B: StringSet) -> tuple[StringSet, tuple, tuple, bool]:
    """Union of two sets with the canonically smaller one first.

    Returns the union and, for each input, the union id of its vertices.
    """
    swapped = canonical_key(B) < canonical_key(A)
    first, second = (B, A) if swapped else (A, B)
    elems = [embed(s) for s in first]
    where = {s: i for i, s in enumerate(elems)}
    second_ids = []
    for s in second:
        s = embed(s)
        if s not in where:
            where[s] = len(elems)
            elems.append(s)
        second_ids.append(where[s])
    first_ids = tuple(range(len(first)))
    ids = (tuple(second_ids), first_ids) if swapped else (first_ids, tuple(second_ids))
    return StringSet(tuple(elems)), ids[0], ids[1], swapped


def separate_union(
    A: StringSet, B: StringSet, epsilon: Optional[Fraction] = None, max_size: int = 2 * DEFAULT_MAX_SET_SIZE
) -> UnionSeparation:
    """One run over the union, resolving ties inside each set before mixed ties."""
    if (A.n, A.l) != (B.n, B.l):
        raise InputError("ambient mismatch between the two sets")
    U, left, right, swapped = union_layout(A, B)
    if epsilon is None:
        epsilon = default_epsilon(U)
    phases = [right, left] if swapped else [left, right]
    res = separate(U, epsilon, phases=phases, max_size=max_size)
    return UnionSeparation(res, left, right, swapped)


# -- equivalent simplices --------------------------------------------------------------


def equivalent_class_invariance(res: SeparationResult) -> dict:
    """Per class and dimension, whether removing the class changes any real bar.

    For every equivalence class E with at least two simplices at a positive
    radius r0, compares the nonzero-length bars of the filtration truncated
    at r0 with and without E.  Returns ``{(r0, generators): {k: bool}}``.
    """
    F = res.filtration()
    out = {}
    for cls in res.equivalence_classes():
        if len(cls) < 2:
            continue
        r0 = res.radii[cls[0]]
        if r0 == 0:
            continue
        E = set(cls)
        at_level = {s for s, r in F.entries if r == r0}
        if at_level != E:
            raise InvariantViolation(f"level {r0} holds simplices outside the class")
        full = tuple((s, r) for s, r in F.entries if r <= r0)
        cut = tuple((s, r) for s, r in full if s not in E)
        with_e = compute_persistence(Filtration(F.strings, full, F.mode))
        without = compute_persistence(Filtration(F.strings, cut, F.mode))
        dims = range(max(len(s) for s in E))
        out[(r0, res.generators[cls[0]])] = {k: with_e.intervals(k) == without.intervals(k) for k in dims}
    return out


def class_is_interval(res: SeparationResult, cls: Sequence[Simplex]) -> bool:
    """Whether the class is every G ∪ X for X a subset of its interior vertices.

    This is the shape the pairing (σ, σ ∪ {x}) needs; it can fail when the
    interior vertices lie in different circumscribed balls of G.
    """
    gens = res.generators[cls[0]]
    inner = set().union(*(set(s) - gens for s in cls))
    members = {frozenset(s) for s in cls}
    if len(members) != 2 ** len(inner):
        return False
    return all(gens | set(x) in members for k in range(len(inner) + 1) for x in combinations(sorted(inner), k))


def pairing_inside_class(res: SeparationResult, cls: Sequence[Simplex]) -> list[tuple]:
    """Birth/death pairs formed inside a class at its level, as (positive, negative)."""
    F = res.filtration()
    bc = compute_persistence(F)
    E = set(cls)
    return [
        (b.birth_simplex, b.death_simplex)
        for b in bc.bars
        if b.birth_simplex in E and b.death_simplex in E
    ]
