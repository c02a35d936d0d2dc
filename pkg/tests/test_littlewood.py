import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from numberwall.census import all_sequences
from numberwall.errors import InsufficientPrefix, ReducibleBase
from numberwall.ffield import field_make
from numberwall.littlewood import (ONE, GrowthFn, dio_exponent, equivalence_audit, parse_growth,
                                   transfer, truncated_inf, window_check)
from numberwall.polylaurent import LaurentTrunc, Poly
from numberwall.seqgen import literal, pf_seq, random_seq
from numberwall.wall import wall_frame

F2, F3 = field_make(2), field_make(3)


def straight_line_exponent(s, N, q):
    """Exponent of |N| |N|_t |<N Theta>| for Theta = sum s_i t^-i, from the definitions."""
    c = list(N.coeffs)
    deg = len(c) - 1
    val = next(i for i, x in enumerate(c) if x)
    i = 1
    while i + deg <= len(s):
        coef = sum(c[j] * s[i + j - 1] for j in range(len(c))) % q
        if coef:
            return -deg + val + i
        i += 1
    return None


def test_dio_examples():
    w = dio_exponent(LaurentTrunc.from_seq(F2, [1] + [0] * 9), Poly.t(F2), Poly.t(F2))
    assert not w.exact
    w = dio_exponent(LaurentTrunc.from_seq(F2, [1, 1]), Poly(F2, [1]), Poly.t(F2))
    assert w.exact and w.exponent == 1
    assert w.exponent == sum(w.ledger.values())


def test_dio_against_straight_line_oracle():
    for seed in range(10):
        s = list(random_seq(F3, 30, seed).values)
        th = LaurentTrunc.from_seq(F3, s)
        for d in range(4):
            for tail in itertools.product(range(3), repeat=d):
                for lead in (1, 2):
                    N = Poly(F3, list(tail) + [lead])
                    w = dio_exponent(th, N, Poly.t(F3))
                    want = straight_line_exponent(s, N, 3)
                    if want is not None:
                        assert w.exact and w.exponent == want
                    assert w.exponent == sum(w.ledger.values())


def test_growth_functions():
    assert ONE.b(10, 3) == 0
    assert parse_growth("const:9").b(5, 3) == 2
    assert parse_growth("const:1/3").b(5, 3) == -1
    g = parse_growth("log2")
    assert [g.b(k, 2) for k in range(6)] == [0, 0, 2, 3, 4, 4]
    h = parse_growth("loglog")
    assert h.b(0, 2) == 0 and h.b(4, 2) == 3  # 4 log2 4 = 8 = 2^3
    for fn in (g, h, parse_growth("table:1,3,9,27")):
        assert fn.check_monotone(40, 3)
    with pytest.raises(ValueError):
        GrowthFn("table", table=(Fraction(9), Fraction(1))).check_monotone(3, 3)
    with pytest.raises(ValueError):
        parse_growth("const:0")


def test_truncated_inf_single_candidate():
    s = list(random_seq(F3, 20, 4).values)
    th = LaurentTrunc.from_seq(F3, s)
    rep = truncated_inf(th, 0, 0, Poly.t(F3))
    assert rep.candidates == 1
    assert rep.l_star == dio_exponent(th, Poly(F3, [1]), Poly.t(F3)).exponent


def test_rational_theta_has_exact_zero_witness():
    th = LaurentTrunc.from_seq(F2, [1] * 24)  # 1/(t+1)
    rep = truncated_inf(th, 2, 2, Poly.t(F2))
    assert not rep.exact
    assert not rep.witness.exact
    W = wall_frame([1] * 24, F2)
    assert any(not w.size_known for w in W.windows)


def test_window_check_examples():
    F5 = field_make(5)
    for seed in range(100):
        S = random_seq(F5, 6, seed)
        if not wall_frame(S).windows:
            assert window_check(S, 1)["verdict"] == "pass"
            break
    S = literal(F3, [1, 2, 1, 1, 0, 0, 0, 0, 1, 2, 1, 1, 2, 1, 1])
    rep = window_check(S, 4)
    assert rep["verdict"] == "violation"
    assert (rep["first"]["m"], rep["first"]["column"], rep["first"]["size"]) == (0, 5, 4)
    assert window_check(S, 5)["verdict"] == "pass"


def test_window_check_sharpness():
    for seed in range(40):
        S = random_seq(F3, 50, seed)
        rep = window_check(S, 1)
        if not rep["violations"]:
            continue
        top = max(v["size"] for v in rep["violations"])
        assert rep["max_complete"] <= top
        assert window_check(S, top)["verdict"] == "violation"
        assert window_check(S, top + 1)["verdict"] == "pass"


def test_window_check_growth_raises_threshold():
    S = pf_seq(F3, 1, 81)
    assert window_check(S, 3)["verdict"] == "violation"
    assert window_check(S, 3, parse_growth("log2"))["verdict"] == "pass"


def test_diagonal_addressing_differs_only_in_key():
    S = random_seq(F3, 40, 2)
    a = window_check(S, 1, addressing="column")
    b = window_check(S, 1, addressing="diagonal")
    assert a["violations"] == b["violations"]  # constant f: b = 0 either way


def test_audit_small():
    rep = equivalence_audit(random_seq(F3, 40, 5), 1, D=4)
    assert rep["verdict"] == "match" and rep["mismatch_count"] == 0
    assert equivalence_audit(random_seq(F3, 60, 5), 10, parse_growth("log2"), D=3)["verdict"] == "match"
    with pytest.raises(InsufficientPrefix):
        equivalence_audit(random_seq(F3, 10, 5), 1, D=8)


@pytest.mark.parametrize("r", [7, 8])
def test_audit_exhaustive_gf2(r):
    for s in all_sequences(2, r):
        rep = equivalence_audit(literal(F2, [int(x) for x in s]), 1, D=2)
        assert rep["verdict"] == "match", s


def test_audit_rational_theta_reports_open_windows():
    rep = equivalence_audit(literal(F2, [1] * 30), 1, D=4)
    assert rep["verdict"] == "match"
    assert rep["exact_zero_witnesses"] > 0 and rep["open_windows"] > 0


def test_transfer_identity_and_scaling():
    b = list(random_seq(F3, 60, 9).values)
    rep = transfer(b, Poly.t(F3), 3, 1, 30)
    assert rep["verdict"] == "match" and rep["l_trans"] == rep["l_base"]
    rep = transfer(list(random_seq(F2, 60, 3).values), Poly(F2, [1, 1, 1]), 2, 1, 40)
    assert rep["verdict"] == "match" and rep["l_trans"] == 2 * rep["l_base"]
    with pytest.raises(ReducibleBase):
        transfer(b, Poly(F3, [1, 1, 0, 1]), 1, 1, 30)  # t^3 + t + 1 = (t - 1)(t^2 + t + 2) over GF(3)


@pytest.mark.slow
def test_transfer_paper_folding():
    b = list(pf_seq(F3, 1, 200).values)
    rep = transfer(b, Poly(F3, [1, 0, 1]), 4, 2, 120)
    assert rep["verdict"] == "match" and rep["l_trans"] == 2 * rep["l_base"]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_transfer_scaling_random(seed):
    b = list(random_seq(F2, 40, seed).values)
    rep = transfer(b, Poly(F2, [1, 1, 0, 1]), 1, 1, 30)
    assert rep["verdict"] in ("match", "inconclusive")
    if rep["verdict"] == "match":
        assert rep["l_trans"] == 3 * rep["l_base"]
