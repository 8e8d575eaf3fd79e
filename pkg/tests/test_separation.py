import random
from fractions import Fraction

import pytest
from conftest import random_set
from oracles import float_radius_generalized

from hammology.errors import InputError
from hammology.filtration import all_simplices
from hammology.metrics import StringSet, embed
from hammology.miniball import minimal_generators_points, radius_generalized_points
from hammology.persistence import compute_persistence, is_morse
from hammology.separation import (
    choose_j,
    default_epsilon,
    equivalent_class_invariance,
    pairing_inside_class,
    replay_separation,
    separate,
    separate_pair,
    separate_union,
)

F = Fraction


def fresh_radii(strings):
    """Radius table recomputed from scratch, no shortcuts."""
    return {s: radius_generalized_points([strings[i] for i in s]).radius for s in all_simplices(len(strings))}


def fresh_generators(strings, s):
    return minimal_generators_points([strings[i] for i in s])[0]


def assert_theorem(res):
    before = fresh_radii([embed(x) for x in res.original])
    after = fresh_radii(list(res.separated))
    assert after == res.radii
    for s in before:
        assert 0 <= after[s] - before[s] < res.epsilon
    assert len(res.steps) <= len(res.original)
    by_radius = {}
    for s, r in after.items():
        by_radius.setdefault(r, []).append(s)
    for r, group in by_radius.items():
        if r == 0 or len(group) < 2:
            continue
        gens = {frozenset(s[i] for i in fresh_generators(res.separated, s)) for s in group}
        assert len(gens) == 1, (r, group)


def test_choose_j_arithmetic():
    # epsilon 1/4 at step one gives 1/8, the gap is 1/2
    assert choose_j([F(1, 8), None, F(1, 2)]) == 16
    assert choose_j([F(1, 3)]) == 4
    assert choose_j([F(1, 4), F(1, 2)]) == 8


def test_pair_example():
    A = StringSet.parse(["11", "12", "21"], 2)
    before = fresh_radii([embed(x) for x in A])
    assert before[(0, 1)] == before[(0, 2)] == F(1, 2)
    B, f, z, rising = separate_pair(A, (0, 1), (0, 2), 8)
    assert f == {0: 0, 1: 1, 2: 2}
    after = fresh_radii(list(B))
    assert after[(0, 1)] != after[(0, 2)]
    for s in before:
        assert 0 <= after[s] - before[s] <= F(1, 8)
        assert abs(float(after[s]) - float_radius_generalized([B[i] for i in s])) < 1e-9 or len(s) == 1
    fixed = (0, 2) if rising == (0, 1) else (0, 1)
    assert after[fixed] == before[fixed]
    assert after[rising] > before[rising]


def test_pair_rejects_unequal_radii():
    A = StringSet.parse(["111", "122", "211"], 2)
    with pytest.raises(InputError):
        separate_pair(A, (0, 1), (0, 2), 8)


def test_worked_set_separation(worked_set):
    res = separate(worked_set, F(1, 10))
    assert 0 < len(res.steps) <= 5
    assert res.separated.l == 8 + len(res.steps)
    assert_theorem(res)
    assert is_morse(compute_persistence(res.filtration()))


def test_already_separated_takes_no_steps():
    A = StringSet.parse(["1111", "1222"], 2)
    res = separate(A, F(1, 8))
    assert res.steps == ()
    assert list(res.separated) == [embed(x) for x in A]


def test_random_sets_satisfy_theorem():
    rng = random.Random(21)
    for _ in range(8):
        A = random_set(rng, rng.randint(2, 3), rng.randint(3, 5), rng.randint(3, 4))
        res = separate(A)
        assert_theorem(res)
        assert is_morse(compute_persistence(res.filtration()))


def test_steps_respect_recorded_bounds(worked_set):
    res = separate(worked_set, F(1, 10))
    for st in res.steps:
        assert st.j & (st.j - 1) == 0
        assert all(F(1, st.j) < b for b in st.bounds if b is not None)
        fixed, rising = st.target_pair
        assert fixed != rising


def test_replay_is_bit_exact(worked_set):
    res = separate(worked_set, F(1, 10))
    assert replay_separation(worked_set, res.steps) == res.separated


def test_default_epsilon(worked_set):
    # discrete levels are whole numbers, so the generalized gaps decide
    eps = default_epsilon(worked_set)
    assert 0 < eps <= F(1, 8)


def test_union_contains_both_separations(worked_set):
    A = StringSet(tuple(worked_set[i] for i in (0, 1, 2)))
    B = StringSet(tuple(worked_set[i] for i in (3, 4)))
    u = separate_union(A, B, F(1, 10))
    for side, ids in (("left", u.left_ids), ("right", u.right_ids)):
        ind = u.induced(side)
        for s, r in ind.radii.items():
            assert r == u.result.radii[tuple(sorted(ids[i] for i in s))]
        assert ind.radii == fresh_radii(list(ind.separated))
        assert is_morse(compute_persistence(ind.filtration()))
    assert is_morse(compute_persistence(u.result.filtration()))


def test_union_with_itself():
    A = StringSet.parse(["1122", "2211", "1212"], 2)
    u = separate_union(A, A, F(1, 8))
    assert u.left_ids == u.right_ids
    assert u.induced("left").radii == separate(A, F(1, 8)).radii


THETA_SET = ["1111", "2222", "1212", "3333"]
SQUARE_SET = ["1111", "2222", "1212", "2121"]


def test_equivalent_class_invariance_on_constructed_instance():
    A = StringSet.parse(THETA_SET, 3)
    res = separate(A, F(1, 8))
    classes = [c for c in res.equivalence_classes() if len(c) >= 2 and res.radii[c[0]] > 0]
    assert [(0, 1), (0, 1, 2)] in classes
    report = equivalent_class_invariance(res)
    assert len(report) == len(classes)
    assert all(all(flags.values()) for flags in report.values())


def test_square_class_changes_only_the_loop():
    # the two interior points sit in different circumscribed balls of the outer edge,
    # so the class has three members and closes the loop of the square
    A = StringSet.parse(SQUARE_SET, 2)
    res = separate(A, F(1, 8))
    report = equivalent_class_invariance(res)
    outer = [flags for (r0, gens), flags in report.items() if gens == frozenset({0, 1})]
    assert outer == [{0: True, 1: False, 2: True}]
    assert all(flags[k] for flags in report.values() for k in flags if k > 1)


def test_pairing_inside_class():
    A = StringSet.parse(THETA_SET, 3)
    res = separate(A, F(1, 8))
    order = {s: i for i, (s, _) in enumerate(res.filtration().entries)}
    seen = 0
    for cls in res.equivalence_classes():
        if len(cls) < 2 or res.radii[cls[0]] == 0:
            continue
        pairs = pairing_inside_class(res, cls)
        assert 2 * len(pairs) == len(cls)
        for pos, neg in pairs:
            assert len(neg) == len(pos) + 1 and set(pos) < set(neg)
            assert order[pos] < order[neg]
        seen += 1
    assert seen


def test_non_interval_class_changes_dimension_two():
    from hammology.filtration import Filtration
    from hammology.metrics import gh_distance
    from hammology.miniball import is_center
    from hammology.separation import class_is_interval

    A = StringSet.parse(["111111", "222222", "121212", "112211", "333333"], 3)
    res = separate(A, F(1, 8))
    S = res.separated
    r0 = res.radii[(0, 4)]
    # the edge needs r0, and each triangle has its own center with the extra vertex strictly inside
    assert gh_distance(S[0], S[4]) == 2 * r0
    for t, inner in (((0, 2, 4), 2), ((0, 3, 4), 3)):
        gens, w = minimal_generators_points([S[i] for i in t])
        assert is_center(w, [S[i] for i in t], r0)
        assert gh_distance(w, S[inner]) < r0
    assert res.radii[(0, 2, 3, 4)] > r0
    cls = next(c for c in res.equivalence_classes() if (0, 4) in c)
    assert sorted(cls) == [(0, 2, 4), (0, 3, 4), (0, 4)]
    assert not class_is_interval(res, cls)
    full = tuple(e for e in res.filtration().entries if e[1] <= r0)
    cut = tuple(e for e in full if e[0] not in cls)
    with_e = compute_persistence(Filtration(S, full, "generalized"))
    without = compute_persistence(Filtration(S, cut, "generalized"))
    assert with_e.intervals(2) == [(r0, None)]
    assert without.intervals(2) == []
