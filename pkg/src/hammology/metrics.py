"""Strings over {1..n}, generalized strings and the distances between them.

Everything is exact: weights and distances are ``fractions.Fraction`` and
comparisons are equality tests, never tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DiscreteString:
    symbols: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"alphabet size must be positive, got {self.n}")
        if not self.symbols:
            raise InputError("empty string")
        for a in self.symbols:
            if not (isinstance(a, int) and 1 <= a <= self.n):
                raise InputError(f"symbol {a!r} outside alphabet 1..{self.n}")

    @property
    def l(self) -> int:
        return len(self.symbols)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "DiscreteString":
        """Parse ``"12244131"`` or ``"[1,10,3]"``; ``n`` defaults to the max letter."""
        text = text.strip()
        if text.startswith("["):
            if not text.endswith("]"):
                raise InputError(f"unterminated bracket list: {text!r}")
            body = text[1:-1].strip()
            try:
                symbols = tuple(int(tok) for tok in body.split(",")) if body else ()
            except ValueError as exc:
                raise InputError(f"bad symbol list {text!r}") from exc
        else:
            if not text.isdigit():
                raise InputError(f"bad string {text!r}: expected digits 1-9")
            symbols = tuple(int(ch) for ch in text)
        if n is None:
            n = max(symbols, default=1)
        return cls(symbols, n)

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(str(a) for a in self.symbols)
        return "[" + ",".join(str(a) for a in self.symbols) + "]"


_ROW_IDS: dict = {}
_ROWS: list = []
_MISMATCH: dict = {}


def _intern_row(dist: tuple) -> int:
    i = _ROW_IDS.get(dist)
    if i is None:
        i = _ROW_IDS[dist] = len(_ROWS)
        _ROWS.append(dist)
    return i


def _row_mismatch(i: int, j: int) -> Fraction:
    """1 minus the overlap of two interned rows."""
    key = (i, j) if i < j else (j, i)
    v = _MISMATCH.get(key)
    if v is None:
        overlap = ZERO
        for a, b in zip(_ROWS[i], _ROWS[j]):
            if a and b:
                overlap += a if a < b else b
        v = _MISMATCH[key] = ONE - overlap
    return v


@dataclass(frozen=True, eq=False)
class GeneralizedString:
    """Per-position probability distributions over the alphabet.

    ``weights[i][j]`` is the weight of letter ``j + 1`` at position ``i``.
    """

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.weights:
            raise InputError("empty generalized string")
        n = len(self.weights[0])
        for i, dist in enumerate(self.weights):
            if len(dist) != n:
                raise InputError(f"position {i + 1}: expected {n} weights, got {len(dist)}")
            if any(not isinstance(w, Fraction) for w in dist):
                raise InputError(f"position {i + 1}: weights must be Fractions")
            if any(w < 0 or w > 1 for w in dist):
                raise InputError(f"position {i + 1}: weights must lie in [0, 1]")
            if sum(dist) != 1:
                raise InputError(f"position {i + 1}: weights sum to {sum(dist)}, not 1")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.row_ids)
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if not isinstance(other, GeneralizedString):
            return NotImplemented
        return self is other or self.row_ids == other.row_ids

    @property
    def row_ids(self) -> tuple[int, ...]:
        """Interned ids of the position distributions; equal rows share an id."""
        ids = self.__dict__.get("_row_ids")
        if ids is None:
            ids = tuple(_intern_row(d) for d in self.weights)
            object.__setattr__(self, "_row_ids", ids)
        return ids

    @classmethod
    def trusted(cls, weights: tuple) -> "GeneralizedString":
        """Build without validation; for distributions already known to be valid."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "weights", weights)
        return obj

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "GeneralizedString":
        return cls(tuple(tuple(Fraction(w) for w in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.weights[0])

    @property
    def l(self) -> int:
        return len(self.weights)

    def appended(self, dist: Sequence[Fraction]) -> "GeneralizedString":
        dist = tuple(dist)
        GeneralizedString((dist,))  # validates the new position
        return GeneralizedString.trusted(self.weights + (dist,))

    def to_discrete(self) -> DiscreteString | None:
        """The underlying ordinary string, or ``None`` if some position is fractional."""
        symbols = []
        for dist in self.weights:
            if sorted(dist)[-1] != 1:
                return None
            symbols.append(dist.index(ONE) + 1)
        return DiscreteString(tuple(symbols), self.n)

    def __str__(self) -> str:
        plain = self.to_discrete()
        if plain is not None:
            return str(plain)
        cells = []
        for dist in self.weights:
            cells.append("{" + ",".join(f"{j + 1}:{w}" for j, w in enumerate(dist) if w) + "}")
        return "".join(cells)


AnyString = Union[DiscreteString, GeneralizedString]


def _check_shape(s: AnyString, t: AnyString) -> None:
    if s.n != t.n or s.l != t.l:
        raise InputError(f"shape mismatch: (n={s.n}, l={s.l}) vs (n={t.n}, l={t.l})")


def hamming(s: DiscreteString, t: DiscreteString) -> int:
    _check_shape(s, t)
    return sum(1 for a, b in zip(s.symbols, t.symbols) if a != b)


def embed(s: AnyString) -> GeneralizedString:
    if isinstance(s, GeneralizedString):
        return s
    rows = []
    for a in s.symbols:
        row = [ZERO] * s.n
        row[a - 1] = ONE
        rows.append(tuple(row))
    return GeneralizedString.trusted(tuple(rows))


def gh_distance(s: AnyString, t: AnyString) -> Fraction:
    """Generalized Hamming distance: summed per-position non-overlap."""
    _check_shape(s, t)
    s, t = embed(s), embed(t)
    total = ZERO
    for i, j in zip(s.row_ids, t.row_ids):
        if i != j:
            total += _row_mismatch(i, j)
    return total


def distance(s: AnyString, t: AnyString) -> Fraction:
    """Hamming distance when both are ordinary strings, generalized otherwise."""
    if isinstance(s, DiscreteString) and isinstance(t, DiscreteString):
        return Fraction(hamming(s, t))
    return gh_distance(s, t)


@dataclass(frozen=True)
class StringSet:
    """A finite set of equal-shape strings; vertex ids are positions in ``elements``."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        if not elems:
            raise InputError("a string set needs at least one element")
        first = elems[0]
        for s in elems[1:]:
            _check_shape(first, s)
        if any(isinstance(s, GeneralizedString) for s in elems):
            elems = tuple(embed(s) for s in elems)
            object.__setattr__(self, "elements", elems)
        seen = {}
        for i, s in enumerate(elems):
            if s in seen:
                raise InputError(f"duplicate string {s} at vertices {seen[s]} and {i}")
            seen[s] = i

    @classmethod
    def parse(cls, texts: Iterable[str], n: int | None = None) -> "StringSet":
        strings = [DiscreteString.parse(t) for t in texts]
        if n is None:
            n = max(s.n for s in strings)
        return cls(tuple(DiscreteString(s.symbols, n) for s in strings))

    @property
    def n(self) -> int:
        return self.elements[0].n

    @property
    def l(self) -> int:
        return self.elements[0].l

    @property
    def mode(self) -> str:
        return "discrete" if isinstance(self.elements[0], DiscreteString) else "generalized"

    def generalized(self) -> "StringSet":
        if self.mode == "generalized":
            return self
        return StringSet(tuple(embed(s) for s in self.elements))

    def subset(self, ids: Iterable[int]) -> "StringSet":
        return StringSet(tuple(self.elements[i] for i in ids))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]


def hausdorff(A: StringSet, B: StringSet) -> Fraction:
    """Hausdorff distance under d_H (both discrete) or d_GH (otherwise)."""
    if (A.n, A.l) != (B.n, B.l):
        raise InputError("ambient mismatch between the two sets")
    directed_ab = max(min(distance(a, b) for b in B) for a in A)
    directed_ba = max(min(distance(a, b) for a in A) for b in B)
    return max(directed_ab, directed_ba)
