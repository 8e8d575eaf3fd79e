"""Acceptance criteria 1-11, one printed PASS/FAIL line each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
Criteria 1 and 2 fail as stated: one row of the listed radius table is
wrong (see the decisions ledger), and the tests are strict xfails.
"""
import itertools
import os
import random
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import brute_bottleneck, brute_radius_discrete  # noqa: E402

from hammology.filtration import HammingIsometry, all_simplices, build_filtration, dh_isomorphism, filtration_isomorphic  # noqa: E402
from hammology.matching import bottleneck_distance, compare  # noqa: E402
from hammology.metrics import DiscreteString, GeneralizedString, StringSet, embed, gh_distance, hamming  # noqa: E402
from hammology.miniball import approx_equivalent, is_center, minimal_generators, radius_discrete, radius_generalized  # noqa: E402
from hammology.miniball import minimal_generators_points, radius_generalized_points  # noqa: E402
from hammology.persistence import compute_persistence, is_morse  # noqa: E402
from hammology.separation import class_is_interval, equivalent_class_invariance, separate  # noqa: E402

F = Fraction
WORKED = ["12244131", "22223443", "32143431", "14443214", "22134222"]

# the listed table, vertices numbered from 0
TABLE = {
    (0,): 0, (1,): 0, (2,): 0, (3,): 0, (4,): 0,
    (0, 2): 2,
    (0, 1): 3, (1, 2): 3, (0, 1, 2): 3, (0, 3): 3, (2, 3): 3, (0, 2, 3): 3,
    (0, 4): 3, (1, 4): 3, (2, 4): 3, (0, 2, 4): 3,
    (1, 3): 4, (0, 1, 3): 4, (1, 2, 3): 4, (0, 1, 2, 3): 4, (0, 1, 4): 4,
    (1, 2, 4): 4, (0, 1, 2, 4): 4, (3, 4): 4, (1, 3, 4): 4, (2, 3, 4): 4,
    (1, 2, 3, 4): 4, (0, 3, 4): 4,
    (0, 1, 3, 4): 5, (0, 2, 3, 4): 5, (0, 1, 2, 3, 4): 5,
}

LINES: list = []  # printed again in the pytest terminal summary

BUDGET = {1: 5, 2: 5, 3: 10, 4: 5, 5: 10, 6: 120, 7: 120, 8: 30, 9: 60, 10: 120, 11: 30}


def report(n: int, ok: bool, detail: str, seconds: float) -> str:
    in_time = seconds < BUDGET[n]
    verdict = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {n:2d}: {verdict}  {detail}  [{seconds:.2f}s of {BUDGET[n]}s]"
    LINES.append(line)
    print(line, flush=True)
    return verdict


def timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# -- criteria ------------------------------------------------------------------------


def radius_table():
    A = StringSet.parse(WORKED)
    got = {s: radius_discrete(A, s).radius for s in all_simplices(5)}
    wrong = sorted(s for s in got if got[s] != TABLE[s])
    detail = f"{31 - len(wrong)}/31 rows equal"
    if wrong:
        detail += "; differing: " + ", ".join(
            f"{{{','.join('s%d' % (v + 1) for v in s)}}} computed {got[s]} listed {TABLE[s]}" for s in wrong
        )
    return not wrong, detail


def worked_barcodes():
    A = StringSet.parse(WORKED)
    bc = compute_persistence(build_filtration(A, "discrete"))
    want = {
        0: [(0, 2), (0, 3), (0, 3), (0, 3), (0, None)],
        1: [(3, 4)],
        2: [(4, 5)],
    }
    got = {k: bc.intervals(k) for k in range(3)}
    bad = [k for k in want if got[k] != want[k]]
    detail = "BC_0, BC_1, BC_2 as listed" if not bad else "; ".join(
        f"BC_{k} computed {[(str(b), 'inf' if d is None else str(d)) for b, d in got[k]]}" for k in bad
    )
    return not bad, detail


def center_example():
    A = StringSet.parse(["111112", "111113", "222221", "333331"], 3)
    r = radius_generalized(A, (0, 1, 2, 3)).radius
    mid, one = (F(7, 15), F(4, 15), F(4, 15)), (F(1), F(0), F(0))
    b = GeneralizedString((mid,) * 5 + (one,))
    b2 = GeneralizedString(((F(5, 15),) * 3, (F(9, 15), F(3, 15), F(3, 15))) + (mid,) * 3 + (one,))
    ok = r == F(11, 3) and is_center(b, list(A), F(11, 3)) and is_center(b2, list(A), F(11, 3))
    return ok, f"radius {r}; b and b' are centers: {ok}"


def generators_example():
    A = StringSet.parse(["1111", "2222", "1222", "1212"], 2)
    sigma, tau, theta = (0, 1), (0, 1, 2), (0, 1, 3)
    gens = [minimal_generators(A, s).generators for s in (sigma, tau, theta)]
    ok = all(g == frozenset({0, 1}) for g in gens)
    ok = ok and approx_equivalent(A, sigma, tau) and approx_equivalent(A, sigma, theta)
    return ok, "generators {1111, 2222} for all three; both ≈ relations hold" if ok else f"generators {gens}"


def isomorphism_example():
    S1 = StringSet.parse(["11113", "22223", "33333"], 3)
    S2 = StringSet.parse(["11113", "22223", "33122"], 3)
    f = filtration_isomorphic(build_filtration(S1, "discrete"), build_filtration(S2, "discrete"))
    iso = dh_isomorphism(S1, S2)
    ok = f == {0: 0, 1: 1, 2: 2} and iso is None
    return ok, f"filtration map {None if f is None else {v + 1: w + 1 for v, w in f.items()}} (s3 -> s4); Hamming isometry: {iso}"


def suite_sets():
    rng = random.Random(2024)
    sets = [StringSet.parse(WORKED)]
    while len(sets) < 21:
        n, l = rng.randint(2, 4), rng.randint(3, 6)
        m = rng.randint(3, min(6, n**l))
        pool = set()
        while len(pool) < m:
            pool.add(tuple(rng.randint(1, n) for _ in range(l)))
        sets.append(StringSet(tuple(DiscreteString(s, n) for s in sorted(pool))))
    return sets


_SUITE: list = []


def separation_suite():
    """Run separation once for criteria 6 and 7."""
    if not _SUITE:
        for A in suite_sets():
            eps = F(1, 10)
            _SUITE.append((A, separate(A, eps)))
    return _SUITE


def separation_theorem():
    problems = []
    steps = []
    for A, res in separation_suite():
        before = {s: radius_generalized_points([embed(A[i]) for i in s]).radius for s in all_simplices(len(A))}
        after = {s: radius_generalized_points([res.separated[i] for i in s]).radius for s in before}
        steps.append(len(res.steps))
        if len(res.steps) > len(A):
            problems.append("too many steps")
        if any(not 0 <= after[s] - before[s] < res.epsilon for s in before):
            problems.append("shift outside [0, eps)")
        gens = {s: frozenset(s[i] for i in minimal_generators_points([res.separated[v] for v in s])[0]) for s in after}
        for s, t in itertools.combinations(after, 2):
            if after[s] == after[t] and after[s] > 0 and gens[s] != gens[t]:
                problems.append(f"tie between {s} and {t}")
                break
        if not is_morse(compute_persistence(res.filtration())):
            problems.append("not Morse")
    detail = f"{len(steps)} sets, steps per set {min(steps)}..{max(steps)}"
    return not problems, detail if not problems else detail + "; " + ", ".join(problems[:3])


def stability():
    worst = F(0)
    for A, res in separation_suite():
        bc_a = compute_persistence(build_filtration(A, "generalized"))
        bc_s = compute_persistence(res.filtration())
        for k in range(len(A)):
            d = bottleneck_distance(bc_a.intervals(k), bc_s.intervals(k))
            if d is None or d > res.epsilon:
                return False, f"dimension {k}: {d} exceeds {res.epsilon}"
            worst = max(worst, d)
    return True, f"largest bottleneck shift {worst} <= eps = 1/10"


EQUIVALENT_INSTANCES = [
    (["1111", "2222", "1212", "3333"], 3),
    (["111111", "222222", "121212", "333311"], 3),
    (["1111", "2222", "1212", "1211"], 2),
    (["111111", "222222", "121212", "121211", "333333"], 3),
    # interior points in different balls of the same generators
    (["1111", "2222", "1212", "2121"], 2),
    (["111111", "222222", "121212", "112211", "333333"], 3),
]


def equivalent_classes():
    """Classes shaped as full intervals over their generators must not change any bar.

    Classes of another shape are counted and reported; they fall outside the
    pairing argument and can change a dimension.
    """
    interval, other = 0, []
    for texts, n in EQUIVALENT_INSTANCES:
        res = separate(StringSet.parse(texts, n), F(1, 8))
        rep = equivalent_class_invariance(res)
        if not rep:
            return False, f"no class of size >= 2 in {texts}"
        for cls in res.equivalence_classes():
            key = (res.radii[cls[0]], res.generators[cls[0]])
            if key not in rep:
                continue
            changed = [k for k, same in rep[key].items() if not same]
            if class_is_interval(res, cls):
                interval += 1
                if changed:
                    return False, f"{texts}: interval class at {key[0]} changes dimensions {changed}"
            else:
                other.append((texts[2:4], changed))
    detail = f"{interval} interval classes over {len(EQUIVALENT_INSTANCES)} instances leave every bar unchanged"
    if other:
        detail += f"; {len(other)} non-interval classes change dimensions {[c for _, c in other]}"
    return interval > 0, detail


def bottleneck_oracle():
    rng = random.Random(99)

    def barcode():
        out = []
        for _ in range(rng.randint(0, 5)):
            b = F(rng.randint(0, 10), rng.randint(1, 4))
            out.append((b, b + F(rng.randint(0, 10), rng.randint(1, 4))))
        return out

    for i in range(100):
        x, y = barcode(), barcode()
        if bottleneck_distance(x, y) != brute_bottleneck(x, y):
            return False, f"pair {i} differs"
    return True, "100/100 pairs equal the exhaustive matching"


def isometry_invariance():
    """Sets with bars above dimension zero are preferred so registration is exercised."""
    rng = random.Random(31)
    k0s = []
    flat_allowed = 2
    while len(k0s) < 10:
        n, l = rng.randint(2, 3), rng.randint(4, 6)
        m = rng.randint(3, 4)
        pool = set()
        while len(pool) < m:
            pool.add(tuple(rng.randint(1, n) for _ in range(l)))
        A = StringSet(tuple(DiscreteString(s, n) for s in sorted(pool)))
        flat = not any(b.dim > 0 for b in compute_persistence(build_filtration(A)).bars if not b.zero_length)
        if flat:
            if not flat_allowed:
                continue
            flat_allowed -= 1
        B = HammingIsometry.random(n, l, rng).apply_set(A)
        same, image = compare(A, A), compare(A, B)
        k0s.append(image.k0)
        for rep in (same, image):
            if rep.value != 0 or sum(rep.weights.values()) != 1:
                return False, f"d_new {rep.value}, weights sum {sum(rep.weights.values())}"
    return True, f"10 sets, d_new(A,A) = d_new(A,phi A) = 0, k0 values {sorted(k0s)}"


def restriction():
    count = 0
    for n in (1, 2, 3):
        for l in (1, 2, 3, 4):
            words = [DiscreteString(w, n) for w in itertools.product(range(1, n + 1), repeat=l)]
            emb = [embed(w) for w in words]
            for (a, ea), (b, eb) in itertools.product(zip(words, emb), repeat=2):
                if gh_distance(ea, eb) != hamming(a, b):
                    return False, f"{a} vs {b}"
                count += 1
    return True, f"{count} ordered pairs agree"


CRITERIA = {
    1: radius_table,
    2: worked_barcodes,
    3: center_example,
    4: generators_example,
    5: isomorphism_example,
    6: separation_theorem,
    7: stability,
    8: equivalent_classes,
    9: bottleneck_oracle,
    10: isometry_invariance,
    11: restriction,
}

KNOWN_RED = {
    1: "the listed radius of {s1,s3,s4,s5} is 5; exhaustive search finds radius 4 (center 12143221)",
    2: "follows from criterion 1: with the true radii the level-4 complex is a cone, so BC_2 is empty",
}


def check(n):
    ok, detail, seconds = timed(CRITERIA[n])
    verdict = report(n, ok, detail, seconds)
    assert verdict == "PASS", detail


@pytest.mark.parametrize(
    "n",
    [pytest.param(n, marks=pytest.mark.xfail(strict=True, reason=KNOWN_RED[n])) if n in KNOWN_RED else n
     for n in CRITERIA],
)
def test_criterion(n):
    check(n)


# -- evidence behind the two red criteria ----------------------------------------------------


def test_listed_row_is_beaten_by_an_explicit_center():
    A = StringSet.parse(WORKED)
    c = DiscreteString.parse("12143221", 4)
    pts = [A[i] for i in (0, 2, 3, 4)]
    assert max(hamming(c, p) for p in pts) == 4
    assert brute_radius_discrete(pts) == 4


def test_listed_table_reproduces_listed_barcodes():
    from hammology.filtration import Filtration

    A = StringSet.parse(WORKED)
    bc = compute_persistence(Filtration.from_radii(A, {s: F(r) for s, r in TABLE.items()}, "discrete"))
    assert bc.intervals(0) == [(0, 2), (0, 3), (0, 3), (0, 3), (0, None)]
    assert bc.intervals(1) == [(3, 4)]
    assert bc.intervals(2) == [(4, 5)]


if __name__ == "__main__":
    failed = 0
    for n in CRITERIA:
        ok, detail, seconds = timed(CRITERIA[n])
        failed += report(n, ok, detail, seconds) != "PASS"
    sys.exit(1 if failed else 0)
