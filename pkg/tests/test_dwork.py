import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mirrormap import arith, dwork, mirror
from mirrormap.arith import INFINITY, vp
from mirrormap.mirror import BOLD, PLAIN, MirrorFamily
from mirrormap.series import TruncSeries


def case(rep, **want):
    hits = [c for c in rep.cases if all(c.case.get(k) == v for k, v in want.items())]
    assert hits, f"no case matching {want}"
    return hits


# ---------------------------------------------------------------- criteria on series

def test_dieudonne_dwork_examples():
    geo = TruncSeries([1] * 21)
    assert dwork.dieudonne_dwork(geo, 3).passed
    bad = dwork.dieudonne_dwork(TruncSeries([1, Fraction(1, 2)] + [0] * 6), 2)
    assert not bad.passed and bad.first_bad_index is not None
    assert dwork.dieudonne_dwork(TruncSeries.one(10), 5).passed
    with pytest.raises(ValueError):
        dwork.dieudonne_dwork(TruncSeries([2, 1]), 2)


def test_dieudonne_dwork_certifies_integral_series():
    q = mirror.q_canonical(MirrorFamily((3,), PLAIN, None, 30))
    for p in (2, 3, 5, 7):
        assert dwork.dieudonne_dwork(q, p).passed


def test_lemma4_examples():
    fam = MirrorFamily((5,), PLAIN, 5, 40)
    assert dwork.lemma4_check(mirror.series_F(fam), mirror.series_GL(fam), 1, 2).passed
    one, z = TruncSeries.one(4), TruncSeries.z(4)
    rep = dwork.lemma4_check(one, z, 1, 2)
    assert not rep.passed
    assert case(rep, index=1)[0].margin.passed
    assert not case(rep, index=2)[0].margin.passed
    assert dwork.lemma4_check(one, TruncSeries.zero(4), 1, 3).passed
    with pytest.raises(ValueError):
        dwork.lemma4_check(z, z, 1, 2)


# ---------------------------------------------------------------- C(a + Kp)

def test_C_coefficient_examples():
    assert dwork.C_coefficient(0, 0, 5, (6,), 3) == 0
    assert vp(dwork.C_coefficient(2, 1, 5, (6,), 3, BOLD), 5) >= 1
    need = 1 + arith.vp(Fraction(arith.M_N((5,)), arith.theta_L(5)), 3)
    assert vp(dwork.C_coefficient(1, 2, 3, (5,), 5, PLAIN), 3) >= need
    with pytest.raises(ValueError):
        dwork.C_coefficient(5, 1, 5, (6,), 1)


@pytest.mark.parametrize("nvec", [(4,), (5,), (6,), (2, 3)])
@pytest.mark.parametrize("flavor", [BOLD, PLAIN])
def test_C_coefficient_two_paths(nvec, flavor):
    for p in (2, 3, 5):
        for L in range(1, max(nvec) + 1):
            for a in range(p):
                for K in range((40 - a) // p + 1):
                    assert dwork.C_coefficient(a, K, p, nvec, L, flavor) == \
                        dwork.C_from_series(a, K, p, nvec, L, flavor)


# ---------------------------------------------------------------- condition (iii)

def test_condition3_examples():
    assert dwork.dwork_condition_iii((4,), 2, 2, 8).passed
    assert dwork.dwork_condition_iii((5,), 5, 2, 8).passed
    m = dwork.condition_iii_margin((5,), BOLD, 5, 0, 0, 0, 0)
    assert m.achieved is INFINITY and m.passed


@pytest.mark.parametrize("nvec", [(4,), (6,), (2, 3)])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_condition3_padic_route_matches_exact(nvec, p):
    for flavor in (BOLD, PLAIN):
        for s in range(3):
            for u in range(p ** s):
                for v in range(p):
                    for n in range(6):
                        fast = dwork.condition_iii_margin(nvec, flavor, p, s, u, v, n)
                        slow = dwork.condition_iii_margin(nvec, flavor, p, s, u, v, n, exact=True)
                        assert fast.passed == slow.passed
                        if fast.exact:
                            assert fast.achieved == slow.achieved


def test_valuation_margin():
    m = dwork.ValuationMargin(3, 2)
    assert not m.passed and m.slack == -1
    assert dwork.ValuationMargin(1, INFINITY).passed


# ---------------------------------------------------------------- S sums

def test_sum_S_examples():
    # K < m p^s and a + Kp < m p^{s+1}: all terms vanish
    assert dwork.sum_S(1, 2, 1, 3, 1, (6,)) == 0
    S = dwork.sum_S(1, 3, 1, 2, 1, (6,))
    assert vp(S, 2) >= 1 + 1 + arith.vp_int(arith.B_bold(6, 1), 2)


def test_sum_S_matches_series_coefficient():
    for nvec in ((4,), (6,), (2, 3)):
        for p in (2, 3):
            for s in range(2):
                for K in range(8):
                    for a in range(p):
                        for m in range(K // p ** s + 1):
                            assert dwork.sum_S(a, K, s, p, m, nvec) == \
                                dwork.S_from_series(a, K, s, p, m, nvec)


# ---------------------------------------------------------------- lemma sweeps

def test_lemma_12a_examples():
    rep = dwork.lemma_12a_sweep((6,), 5, 2)
    assert rep.passed
    for c in case(rep, p=5, a=4, j=1, L=6):
        assert c.margin.achieved >= 1
    for c in rep.cases:
        if (c.case["L"] * c.case["a"]) // c.case["p"] == 0:
            assert c.margin.achieved is INFINITY
    rep30 = dwork.lemma_12a_sweep((30,), 7, 0)
    assert case(rep30, p=7, a=6, j=0, L=30)[0].margin.achieved >= 1


def test_lemma_12_examples():
    rep = dwork.lemma_12_sweep((5,), 2, 1)
    c = case(rep, p=2, a=1, j=1, L=5)[0]
    assert c.margin.required == 2 and c.margin.passed
    rep = dwork.lemma_12_sweep((2, 2), 3, 2)
    c = case(rep, p=3, a=2, j=2, L=2)[0]
    assert c.margin.required == 1 and c.margin.passed


def test_strat4_examples():
    rep = dwork.lemma_strat4_sweep((6,), 2, 3, 1, BOLD)
    c = case(rep, p=2, m=3, s=1, L=4)[0]
    assert c.margin.required == -1 and c.margin.passed
    rep = dwork.lemma_strat4_sweep((5,), 5, 2, 2, PLAIN)
    c = case(rep, p=5, m=2, s=2, L=5)[0]
    assert c.margin.required == -2 and c.margin.passed


def test_ultime_examples():
    rep = dwork.lemma_ultime_sweep((4,), 3, 1, 1)
    c = case(rep, p=3, r=1, w=2, m=1)[0]
    assert c.margin.achieved == vp(Fraction(arith.B_bold(4, 5), arith.B_bold(4, 1)), 3) >= 0
    assert case(rep, r=0, w=0, m=0)[0].margin.achieved == 0
    rep = dwork.lemma_ultime_sweep((30,), 2, 2, 2)
    assert case(rep, p=2, r=2, w=3, m=2)[0].margin.passed


def test_identity107a_examples():
    r = dwork.dwork_combinatorial_identity(0, 0, 3, (5,), 1)
    assert r.passed and r.details["lhs"] == 0 == r.details["rhs"]
    assert dwork.dwork_combinatorial_identity(1, 3, 2, (5,), 5).passed
    assert dwork.dwork_combinatorial_identity(2, 4, 3, (6,), 2).passed


def test_identity107a_plain():
    assert dwork.identity107a_sweep((4,), 5, 8, PLAIN).passed


def test_harmonic_J_sweep():
    rep = dwork.harmonic_J_sweep(13, 400)
    assert rep.passed and rep.details["cases"] == 6 * 401


@pytest.mark.parametrize("name", sorted(dwork.LEMMAS))
def test_every_lemma_on_small_grid(name):
    rep = dwork.run_lemma(name, (6,), p_max=5, j_max=6, m_max=6, K_max=6, s_max=2, n_max=6)
    assert rep.passed, rep.to_json()
    assert rep.summary()["failures"] == 0


def test_run_lemma_unknown():
    with pytest.raises(KeyError):
        dwork.run_lemma("nope", (6,))


def test_sweep_jsonl_lines():
    import json
    rep = dwork.lemma_12a_sweep((2,), 2, 1)
    lines = list(rep.jsonl())
    assert len(lines) == len(rep.cases)
    first = json.loads(lines[0])
    assert set(first) == {"case", "required", "achieved", "slack", "pass"}
    assert isinstance(first["required"], str)


# ---------------------------------------------------------------- p-adic helpers

@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]),
       st.lists(st.integers(0, 60), min_size=1, max_size=4),
       st.lists(st.integers(0, 60), min_size=1, max_size=4))
def test_padic_factorial_ratio(p, num, den):
    from mirrormap import padic
    E = 6
    x = padic.factorial_ratio(p, E, num, den)
    exact = Fraction(math.prod(math.factorial(n) for n in num),
                     math.prod(math.factorial(n) for n in den))
    assert x.val == vp(exact, p)
    unit = exact / Fraction(p) ** x.val
    mod = p ** E
    assert (unit.numerator - x.unit * unit.denominator) % mod == 0


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_padic_sub_valuation(p, a, b):
    from mirrormap import padic
    E = 40
    val, exact = padic.sub_valuation(padic.from_int(a, p, E), padic.from_int(b, p, E))
    if a == b:
        assert not exact
    else:
        assert exact and val == vp(a - b, p)
