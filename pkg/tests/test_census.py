import numpy as np
import pytest

from numberwall import census as cz
from numberwall.census import BladeShape as B
from numberwall.errors import (NoSeedWithBlade, OutOfRegime, OverlappingPortions, SpaceTooLarge,
                               UnsupportedShapePair)
from numberwall.ffield import field_make
from numberwall.wall import detect_windows, frame_batch, wall_frame

F2, F3, F5 = field_make(2), field_make(3), field_make(5)


def reference_contains(W, l, n, m):
    """Containment read off detect_windows, one wall at a time."""
    for w in detect_windows(W):
        r0, r1, c0, c1 = cz.certain_box(W, w)
        if r0 <= m and m + l - 1 <= r1 and c0 <= n and n + l - 1 <= c1:
            return True
    return False


@pytest.mark.parametrize("q,r", [(2, 8), (3, 6)])
def test_vectorised_containment_matches_reference(q, r):
    F = field_make(q)
    S = cz.all_sequences(q, r)
    M = cz.RunMaps(frame_batch(F, S).astype(np.int64), r)
    walls = [wall_frame([int(x) for x in s], F) for s in S]
    for P in cz.admissible_portions(r):
        v = M.contains(P.n, P.m, P.l)
        for i in range(0, len(S), 3):
            assert bool(v[i]) == reference_contains(walls[i], P.l, P.n, P.m), (S[i], P)


def test_enumerate_portion_examples():
    assert cz.enumerate_portion(F2, 5, cz.SquarePortion(1, 2, 0)) == 16
    assert cz.enumerate_portion(F3, 7, cz.SquarePortion(2, 3, 1)) == 243
    with pytest.raises(OutOfRegime):
        cz.enumerate_portion(F2, 4, cz.SquarePortion(3, 2, 1))


def test_budget_guard(monkeypatch):
    monkeypatch.setenv("NW_BUDGET", "100")
    with pytest.raises(SpaceTooLarge):
        cz.enumerate_portion(F2, 8, cz.SquarePortion(1, 2, 0))


@pytest.mark.parametrize("q,rmax", [(2, 10), (3, 7), (5, 5)])
def test_containment_counts(q, rmax):
    F = field_make(q)
    for r in range(1, rmax + 1):
        assert all(rep.verdict == "match" for rep in cz.contain_full(F, r))


def test_jobs_do_not_change_counts():
    ps = cz.admissible_portions(9)
    assert cz.enumerate_portions(F3, 9, ps, jobs=1) == cz.enumerate_portions(F3, 9, ps, jobs=3)


def test_formula_rect_examples():
    assert cz.formula_rect(2, 12, 3, 1, 2, 1) == 640
    for q, r, l, m in [(2, 9, 3, 1), (3, 7, 2, 2)]:
        assert cz.formula_rect(q, r, l, 0, m + 1, m) == q ** (r - l)
    with pytest.raises(OutOfRegime):
        cz.formula_rect(2, 3, 3, 1, 1, 1)
    with pytest.raises(OutOfRegime):
        cz.formula_rect(2, 12, 3, -2, 1, 1)  # tall rectangles need m - n <= d


@pytest.mark.parametrize("q,rmax", [(2, 10), (3, 7)])
def test_rect_counts(q, rmax):
    F = field_make(q)
    for r in range(3, rmax + 1):
        reps = cz.rect_census(F, r)
        assert reps and all(x.verdict == "match" for x in reps)


def test_rect_enumeration_example():
    (rep,) = cz.rect_census(F2, 12, [(3, 1, 2, 1)])
    assert rep.enumerated_value == 640 == rep.formula_value


def test_q_formula_examples():
    for q in (2, 3, 5):
        assert cz.q_formula(B.FULL, B.FULL, 1, q) == (q - 1) * (q - 2)
        assert cz.q_formula(B.TOP_ZERO, B.TR_ZERO, 1, q) == 0
        for b in cz.TARGET_BLADES:
            assert cz.q_formula(b, b, 0, q) == 1
    with pytest.raises(UnsupportedShapePair):
        cz.q_formula(B.FULL, B.TL_ZERO, 1, 3)
    with pytest.raises(UnsupportedShapePair):
        cz.q_formula(B.ZERO, B.FULL, 1, 3)


def test_q_rows_sum_to_transitions():
    # every 2m-extension lands somewhere; Q only sees three targets so the sum is at most q^(2m)
    for q in (2, 3, 4, 5):
        for b1 in cz.NONZERO_BLADES:
            for m in range(1, 5):
                assert sum(cz.q_formula(b1, b2, m, q) for b2 in cz.TARGET_BLADES) <= q ** (2 * m)


@pytest.mark.parametrize("spec", [(2, 1), (3, 1), (2, 2), (5, 1)])
def test_q_table_and_trees(spec):
    F = field_make(*spec)
    mmax = 2 if F.q == 5 else 3
    reps = cz.q_table(F, mmax=mmax, nseeds=20)
    assert all(x.verdict == "match" and x.stats["well_defined"] for x in reps)
    trees = cz.tree_diagrams(F, nseeds=20)
    assert all(x.verdict == "match" for x in trees)
    for x in trees:
        assert sum(x.enumerated_value.values()) == F.q ** 2


def test_q_enumerate_indicator_and_seeds():
    assert cz.q_enumerate(F3, B.FULL, B.FULL, 0, nseeds=3) == [1, 1, 1]
    seeds = cz.find_seeds(F3, B.TL_B_ZERO, 25)
    assert len(set(seeds)) == 25
    with pytest.raises(NoSeedWithBlade):
        cz.find_seeds(F2, B.TL_B_ZERO, 5, lengths=[1])


def test_two_window():
    P1, P2 = cz.SquarePortion(1, 2, 0), cz.SquarePortion(1, 7, 0)
    (rep,) = cz.two_window_census(F2, 10, [(P1, P2)])
    assert rep.parameters["case"] == "disjoint-hat-cones"
    assert rep.enumerated_value == 2 ** 8 and rep.verdict == "match"
    with pytest.raises(OverlappingPortions):
        cz.two_window_census(F2, 10, [(cz.SquarePortion(2, 3, 0), cz.SquarePortion(1, 4, 1))])
    rep = cz.overlap_redirect(F2, 10, cz.SquarePortion(2, 3, 0), cz.SquarePortion(2, 4, 0))
    assert rep.verdict == "match"


def test_two_window_random_sweep():
    rng = np.random.Generator(np.random.PCG64(1))
    for q, r in ((2, 10), (3, 7)):
        F = field_make(q)
        reps = cz.two_window_census(F, r, cz.random_pairs(r, 30, rng), C=2)
        assert all(x.verdict in ("match", "bounded") for x in reps)


def test_window_continue():
    for k, i, m in [(1, 1, 2), (1, 2, 2), (2, 1, 2)]:
        rep = cz.window_continue(F3, k, i, m, 1)
        assert rep.verdict == "match"
        assert rep.stats["clear_seeds"] > 0


@pytest.mark.parametrize("q,rmax,target", [(2, 12, 3), (2, 10, 2), (3, 8, 3), (3, 8, 2)])
def test_pruned_search_matches_full_sweep(q, rmax, target):
    F = field_make(q)
    for r in range(1, rmax + 1):
        assert cz.survivors_pruned(F, r, target) == cz.survivors_unpruned(F, r, target)


def test_search_results():
    rep = cz.min_window_search(F5, 8, 1)
    assert rep["result"] == "witness"
    W = wall_frame(rep["sequence"], F5)
    assert all(W[m, n] for m, n in W.cells() if m >= 0)
    rep = cz.min_window_search(F3, 12, 1)
    assert rep["result"] == "exhausted" and rep["first_length_without_survivors"] == 5
    rep = cz.min_window_search(F2, 20, 3)
    W = wall_frame(rep["sequence"], F2)
    assert max((max(w.width, w.height) for w in W.windows), default=0) < 3


def test_shared_and_distinct_window_counts():
    r = 8
    ps = cz.admissible_portions(r)
    pairs = [(a, b) for i, a in enumerate(ps) for b in ps[i + 1:] if not cz.overlapping(a, b)][::7]
    S = cz.all_sequences(2, r)
    walls = [wall_frame([int(x) for x in s], F2, provenance=False) for s in S]
    boxes = [[cz.certain_box(W, w) for w in W.windows] for W in walls]

    def holders(bx, P):
        return {k for k, (r0, r1, c0, c1) in enumerate(bx)
                if r0 <= P.m and P.m + P.l - 1 <= r1 and c0 <= P.n and P.n + P.l - 1 <= c1}
    reps = cz.two_window_census(F2, r, pairs, C=3)
    for (P1, P2), rep in zip(pairs, reps):
        shared = distinct = 0
        for bx in boxes:
            a, b = holders(bx, P1), holders(bx, P2)
            if a and b:
                shared += bool(a & b)
                distinct += not (a & b)
        assert (rep.stats["shared_window"], rep.stats["distinct_windows"]) == (shared, distinct)


def test_stacked_pairs_ratio_grows_with_side():
    # one window holding both portions behaves like an l x 2l rectangle
    ratios = []
    for l in (1, 2, 3):
        P1, P2 = cz.SquarePortion(l, l + 1, 0), cz.SquarePortion(l, l + 1, l)
        (rep,) = cz.two_window_census(F2, 3 * l + 3, [(P1, P2)], C=10)
        ratios.append(rep.stats["ratio"])
        assert rep.stats["distinct_windows"] == 0
    assert ratios == ["3/2", "2", "5/2"]
