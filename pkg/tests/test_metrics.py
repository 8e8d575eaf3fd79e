from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hammology.errors import InputError
from hammology.metrics import (
    DiscreteString,
    GeneralizedString,
    StringSet,
    embed,
    gh_distance,
    hamming,
    hausdorff,
)


def discrete(n, l):
    return st.lists(st.integers(1, n), min_size=l, max_size=l).map(lambda s: DiscreteString(tuple(s), n))


@st.composite
def distribution(draw, n):
    cuts = sorted(draw(st.lists(st.integers(0, 12), min_size=n - 1, max_size=n - 1)))
    edges = [0] + cuts + [12]
    return tuple(Fraction(b - a, 12) for a, b in zip(edges, edges[1:]))


@st.composite
def generalized(draw, n=3, l=3):
    return GeneralizedString(tuple(draw(distribution(n)) for _ in range(l)))


def test_hamming_counts_mismatches():
    assert hamming(DiscreteString.parse("12244131"), DiscreteString.parse("32143431", 4)) == 4


def test_parse_bracketed_and_digits_agree():
    assert DiscreteString.parse("[1,2,3]", 10).symbols == DiscreteString.parse("123").symbols
    assert str(DiscreteString.parse("[1,10,3]")) == "[1,10,3]"


@pytest.mark.parametrize("bad", ["", "12a", "[1,2", "105"])
def test_parse_rejects_bad_text(bad):
    with pytest.raises(InputError):
        DiscreteString.parse(bad, 4)


def test_generalized_rows_must_sum_to_one():
    with pytest.raises(InputError, match="sum"):
        GeneralizedString.from_rows([[Fraction(1, 2), Fraction(1, 3)]])
    with pytest.raises(InputError):
        GeneralizedString.from_rows([[Fraction(3, 2), Fraction(-1, 2)]])


def test_duplicates_rejected():
    with pytest.raises(InputError, match="duplicate"):
        StringSet.parse(["12", "12"])


def test_shape_mismatch_rejected():
    with pytest.raises(InputError):
        hamming(DiscreteString.parse("12"), DiscreteString.parse("123"))


def test_embedding_restricts_exhaustively():
    for n in (2, 3):
        for l in (1, 2, 3):
            words = [DiscreteString(w, n) for w in product(range(1, n + 1), repeat=l)]
            for s in words:
                for t in words:
                    assert gh_distance(embed(s), embed(t)) == hamming(s, t)


def test_gh_distance_half_weights():
    s = GeneralizedString.from_rows([[Fraction(1, 2), Fraction(1, 2)], [1, 0]])
    t = GeneralizedString.from_rows([[1, 0], [0, 1]])
    assert gh_distance(s, t) == Fraction(3, 2)


@given(generalized(), generalized(), generalized())
def test_gh_metric_axioms(a, b, c):
    assert gh_distance(a, a) == 0
    assert gh_distance(a, b) == gh_distance(b, a)
    assert gh_distance(a, c) <= gh_distance(a, b) + gh_distance(b, c)
    assert 0 <= gh_distance(a, b) <= a.l
    assert (gh_distance(a, b) == 0) == (a == b)


@given(discrete(3, 4), discrete(3, 4), discrete(3, 4))
def test_hamming_metric_axioms(a, b, c):
    assert hamming(a, b) == hamming(b, a)
    assert hamming(a, c) <= hamming(a, b) + hamming(b, c)
    assert (hamming(a, b) == 0) == (a == b)


def test_hausdorff_small_example():
    A = StringSet.parse(["11", "22"])
    B = StringSet.parse(["12", "22"])
    assert hausdorff(A, B) == 1
    assert hausdorff(A, A) == 0


def test_hausdorff_singletons_reduce_to_distance():
    s, t = DiscreteString.parse("1212"), DiscreteString.parse("2211")
    assert hausdorff(StringSet((s,)), StringSet((t,))) == hamming(s, t)


def test_hausdorff_zero_iff_equal_sets():
    words = ["11", "12", "21", "22"]
    subsets = [[w for k, w in enumerate(words) if mask >> k & 1] for mask in range(1, 16)]
    for a in subsets:
        for b in subsets:
            d = hausdorff(StringSet.parse(a, 2), StringSet.parse(b, 2))
            assert (d == 0) == (set(a) == set(b))


def test_mixed_set_is_embedded():
    g = GeneralizedString.from_rows([[Fraction(1, 2), Fraction(1, 2)], [1, 0]])
    A = StringSet((DiscreteString.parse("12"), g))
    assert A.mode == "generalized"
    assert all(isinstance(s, GeneralizedString) for s in A)
