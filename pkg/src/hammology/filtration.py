"""Čech filtrations adjoined to string sets, plus isomorphism searches."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

from .errors import CapExceededError, InputError, InvariantViolation
from .metrics import DiscreteString, StringSet, hamming
from .miniball import Simplex, radius_points

DEFAULT_MAX_SET_SIZE = 12
DEFAULT_MAX_ISO_SIZE = 9


def all_simplices(m: int) -> list[Simplex]:
    return [s for k in range(1, m + 1) for s in combinations(range(m), k)]


def entry_key(simplex: Simplex, radius: Fraction):
    return (radius, len(simplex), simplex)


@dataclass(frozen=True)
class Filtration:
    strings: StringSet
    entries: tuple  # ((simplex, radius), ...) sorted by (radius, dim, vertices)
    mode: str
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {s: i for i, (s, _) in enumerate(self.entries)})

    @classmethod
    def from_radii(cls, strings: StringSet, radii: Mapping[Simplex, Fraction], mode: str) -> "Filtration":
        entries = sorted(radii.items(), key=lambda e: entry_key(*e))
        return cls(strings, tuple(entries), mode)

    @property
    def levels(self) -> list[Fraction]:
        return sorted({r for _, r in self.entries})

    def index(self, simplex: Simplex) -> int:
        return self._index[tuple(simplex)]

    def radius(self, simplex: Simplex) -> Fraction:
        return self.entries[self._index[tuple(simplex)]][1]

    def radii(self) -> dict:
        return dict(self.entries)

    def __len__(self):
        return len(self.entries)

    def check_face_monotone(self) -> bool:
        for s, r in self.entries:
            if len(s) > 1:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1:]
                    if self.radius(face) > r or self.index(face) > self.index(s):
                        return False
        return True


@dataclass(frozen=True)
class LevelComplex:
    filtration: Filtration
    level: Fraction
    simplices: tuple

    def count_by_dimension(self) -> Counter:
        return Counter(len(s) - 1 for s in self.simplices)


def _check_cap(m: int, cap: int) -> None:
    if m > cap:
        raise CapExceededError(f"set has {m} strings; the cap is {cap} (2^m simplices)")


def build_filtration(A: StringSet, mode: str = "generalized", max_size: int = DEFAULT_MAX_SET_SIZE) -> Filtration:
    _check_cap(len(A), max_size)
    if mode == "discrete":
        if A.mode != "discrete":
            raise InputError("discrete mode needs ordinary strings")
        strings = A
    elif mode == "generalized":
        strings = A.generalized()
    else:
        raise InputError(f"unknown mode {mode!r}")
    radii = {}
    for s in all_simplices(len(A)):
        radii[s] = radius_points([strings[i] for i in s], mode).radius
    return Filtration.from_radii(strings, radii, mode)


def sublevel(F: Filtration, r) -> LevelComplex:
    r = Fraction(r)
    if r < 0:
        raise InputError("level must be nonnegative")
    return LevelComplex(F, r, tuple(s for s, rad in F.entries if rad <= r))


# -- filtration isomorphism ----------------------------------------------------


def _vertex_profiles(F: Filtration) -> list:
    m = len(F.strings)
    prof = [[] for _ in range(m)]
    for s, r in F.entries:
        for v in s:
            prof[v].append((len(s), r))
    return [tuple(sorted(p)) for p in prof]


def filtration_isomorphic(
    F1: Filtration, F2: Filtration, max_size: int = DEFAULT_MAX_ISO_SIZE
) -> Optional[dict]:
    """A vertex bijection matching every sublevel complex, or ``None``.

    Both filtrations must have the same level set; then σ is in C_A at every
    level iff f[σ] is in C_B, which is the same as r(f[σ]) = r(σ) for all σ.
    """
    m = len(F1.strings)
    if m != len(F2.strings) or F1.levels != F2.levels:
        return None
    _check_cap(m, max_size)
    p1, p2 = _vertex_profiles(F1), _vertex_profiles(F2)
    if sorted(p1) != sorted(p2):
        return None
    cands = [[w for w in range(m) if p2[w] == p1[v]] for v in range(m)]
    f: list[int] = []
    used = [False] * m

    def consistent(v: int) -> bool:
        for k in range(0, v + 1):
            for rest in combinations(range(v), k):
                s = rest + (v,)
                image = tuple(sorted(f[u] for u in s))
                if F1.radius(s) != F2.radius(image):
                    return False
        return True

    def search(v: int) -> bool:
        if v == m:
            return True
        for w in cands[v]:
            if used[w]:
                continue
            f.append(w)
            used[w] = True
            if consistent(v) and search(v + 1):
                return True
            f.pop()
            used[w] = False
        return False

    return {v: f[v] for v in range(m)} if search(0) else None


# -- Hamming isometries ----------------------------------------------------------


@dataclass(frozen=True)
class HammingIsometry:
    """Position permutation composed with per-position letter permutations.

    The image t of s has ``t[position_map[i]] = letter_maps[i][s[i] - 1]``.
    """

    position_map: tuple
    letter_maps: tuple

    def apply(self, s: DiscreteString) -> DiscreteString:
        out = [0] * s.l
        for i, a in enumerate(s.symbols):
            out[self.position_map[i]] = self.letter_maps[i][a - 1]
        return DiscreteString(tuple(out), s.n)

    def apply_set(self, A: StringSet) -> StringSet:
        return StringSet(tuple(self.apply(s) for s in A))

    @classmethod
    def identity(cls, n: int, l: int) -> "HammingIsometry":
        return cls(tuple(range(l)), tuple(tuple(range(1, n + 1)) for _ in range(l)))

    @classmethod
    def random(cls, n: int, l: int, rng) -> "HammingIsometry":
        pos = list(range(l))
        rng.shuffle(pos)
        maps = []
        for _ in range(l):
            letters = list(range(1, n + 1))
            rng.shuffle(letters)
            maps.append(tuple(letters))
        return cls(tuple(pos), tuple(maps))


def _pattern(labels) -> tuple:
    seen: dict = {}
    return tuple(seen.setdefault(a, len(seen)) for a in labels)


def dh_isomorphism(A: StringSet, B: StringSet, max_size: int = DEFAULT_MAX_ISO_SIZE) -> Optional[HammingIsometry]:
    """Search the isometry group of (S(n,l), d_H) for a map sending A onto B.

    Enumerates vertex bijections that preserve pairwise distances; a bijection
    lifts to an isometry iff the equality patterns of the columns of A
    (transported along it) and of B agree as multisets.
    """
    if A.mode != "discrete" or B.mode != "discrete":
        raise InputError("Hamming isometries act on ordinary strings")
    if (A.n, A.l) != (B.n, B.l):
        raise InputError("ambient mismatch between the two sets")
    m, l, n = len(A), A.l, A.n
    if m != len(B):
        return None
    _check_cap(m, max_size)
    dA = [[hamming(a, b) for b in A] for a in A]
    dB = [[hamming(a, b) for b in B] for a in B]
    if sorted(sorted(r) for r in dA) != sorted(sorted(r) for r in dB):
        return None
    sigA = Counter(tuple(sorted(Counter(s.symbols[i] for s in A).values())) for i in range(l))
    sigB = Counter(tuple(sorted(Counter(s.symbols[i] for s in B).values())) for i in range(l))
    if sigA != sigB:
        return None
    colsB = [tuple(s.symbols[p] for s in B) for p in range(l)]
    patB = [_pattern(c) for c in colsB]
    f: list[int] = []
    used = [False] * m
    result: list = []

    def lift() -> Optional[HammingIsometry]:
        inv = [0] * m
        for v, w in enumerate(f):
            inv[w] = v
        free: dict = {}
        for p in range(l):
            free.setdefault(patB[p], []).append(p)
        pos_map, letter_maps = [0] * l, []
        for i in range(l):
            col = tuple(A[inv[w]].symbols[i] for w in range(m))
            bucket = free.get(_pattern(col))
            if not bucket:
                return None
            p = bucket.pop(0)
            pos_map[i] = p
            mapping = {}
            for w in range(m):
                mapping[col[w]] = colsB[p][w]
            targets = iter(sorted(set(range(1, n + 1)) - set(mapping.values())))
            letter_maps.append(tuple(mapping[a] if a in mapping else next(targets) for a in range(1, n + 1)))
        return HammingIsometry(tuple(pos_map), tuple(letter_maps))

    def search(v: int) -> bool:
        if v == m:
            iso = lift()
            if iso is not None:
                result.append(iso)
                return True
            return False
        for w in range(m):
            if used[w] or sorted(dA[v]) != sorted(dB[w]):
                continue
            if any(dA[u][v] != dB[f[u]][w] for u in range(v)):
                continue
            f.append(w)
            used[w] = True
            if search(v + 1):
                return True
            f.pop()
            used[w] = False
        return False

    if not search(0):
        return None
    iso = result[0]
    if set(iso.apply_set(A)) != set(B):
        raise InvariantViolation("lifted isometry does not map A onto B")
    return iso
