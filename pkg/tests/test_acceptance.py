"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary. Running this file directly
with ``python tests/test_acceptance.py`` prints the same lines.

Criteria 8 and 9 contain cases that are false as stated (see
notes/decisions.md). They are run in full and marked as strict expected
failures, so the suite turns red if either one ever starts passing.
"""

import time
from fractions import Fraction

import pytest

from mirrormap import arith, campaign, dwork, landau, mirror, ode
from mirrormap.mirror import BOLD, PLAIN
from mirrormap.series import TruncSeries, power, root_exponent

NVECS = [(2,), (3,), (4,), (5,), (6,), (8,), (12,), (30,), (2, 3), (4, 6)]


def _fail_list(items, limit=3):
    return ", ".join(map(str, items[:limit])) + (" ..." if len(items) > limit else "")


def criterion_1():
    bad = [(nv, L) for nv in NVECS for L in range(1, max(nv) + 1)
           if not mirror.verify_theorem4(nv, L, 60).passed]
    n = sum(max(nv) for nv in NVECS)
    return not bad, f"{n} (nvec, L) pairs, bold q_L integral to M=60" + (
        f"; failing {_fail_list(bad)}" if bad else "")


def criterion_2():
    bad = [(nv, L) for nv in NVECS for L in range(1, max(nv) + 1)
           if not mirror.verify_theorem2(nv, L, 60).passed]
    sharp = [nv for nv in NVECS if not mirror.theorem2_sharpness(nv, 2).passed]
    ok = not bad and not sharp
    detail = "plain roots M_N/Theta_L integral to M=60; doubled L=1 root fails at index 1 for every nvec"
    if bad:
        detail += f"; root failures {_fail_list(bad)}"
    if sharp:
        detail += f"; sharpness probe did not fail for {_fail_list(sharp)}"
    return ok, detail


def criterion_3():
    W = mirror.corollary1_root(5, 1)
    rep = mirror.verify_corollary1(5, 1, 100)
    ok = W == 10 and rep.passed
    return ok, f"root {W} from N!^k kN/Theta_N, (z^-1 q_(5))^(1/{W}) {rep.status} to M=100"


def criterion_4():
    rep = mirror.verify_six_family(100, with_exponents=False)
    return rep.passed, "q_{L,(6)} roots 60,6,2,1,1,1 for L=1..6 " + rep.status + " to M=100"


def criterion_5():
    problems = []
    for N in range(1, 31):
        for m in range(51):
            if arith.B_bold_pochhammer(N, m) != arith.B_bold(N, m):
                problems.append(("pochhammer", N, m))
            if arith.H_bold(N, m) != arith.H_bold_alt(N, m):
                problems.append(("H_alt", N, m))
    pairs = [(n,) for n in range(1, 9)] + [(a, b) for a in range(2, 9) for b in range(a, 9)]
    for nv in pairs:
        msg = mirror.plain_matches_bold(nv, 40)
        if msg:
            problems.append(("divisors", nv, msg))
    for nv in NVECS:
        for fl in (BOLD, PLAIN):
            if not dwork.identity107a_sweep(nv, 7, 12, fl).passed:
                problems.append(("107a", nv, fl))
    for N, k in ((2, 1), (3, 2), (5, 1)):
        lhs, rhs = mirror.truemap_sides(N, k, 40)
        if lhs != rhs:
            problems.append(("truemap", N, k))
    return not problems, (f"5 identity families exact ({len(pairs)} divisor-family vectors)"
                          + (f"; mismatches {_fail_list(problems)}" if problems else ""))


def criterion_6():
    failures, cases = [], 0
    for name in sorted(dwork.LEMMAS):
        for nv in NVECS:
            rep = dwork.run_lemma(name, nv)
            cases += len(rep.cases)
            if not rep.passed:
                failures.append((name, nv))
    for nv in NVECS:
        for p in arith.primes_up_to(7):
            for fl in (BOLD, PLAIN):
                rep = dwork.dwork_condition_iii(nv, p, 2, 12, fl)
                cases += len(rep.cases)
                if not rep.passed:
                    failures.append(("condition3", nv, p, fl))
    rep = dwork.harmonic_J_sweep(13, 400)
    cases += len(rep.cases)
    if not rep.passed:
        failures.append(("eq_J",))
    return not failures, f"{cases} valuation cases over {len(dwork.LEMMAS)} lemma sweeps, condition (iii), eq_J" + (
        f"; failing {_fail_list(failures)}" if failures else "")


def criterion_7():
    problems = []
    for N in range(2, 61):
        try:
            landau.delta_profile(N)
        except landau.LandauViolation as exc:
            problems.append((N, exc.prop))
    for N in range(1, 61):
        for p in arith.primes_up_to(7):
            for m in range(31):
                if not landau.check_valuation_identity(N, m, p, arith.B_bold(N, m)):
                    problems.append(("valuation", N, p, m))
    return not problems, "profiles N<=60 and valuation identity p<=7, m<=30" + (
        f"; violations {_fail_list(problems)}" if problems else "")


def criterion_8():
    results = {nv: ode.apply_and_verify(nv, 50) for nv in [(2,), (3,), (5,), (6,), (2, 3)]}
    bad = {nv: r for nv, r in results.items() if not r.passed}
    detail = "F and G + log z F annihilated through index 49"
    if bad:
        detail += "; nonzero residual for " + ", ".join(
            f"{nv} ({r.details.get('residual')} at index {r.first_bad_index}, value {r.witness})"
            for nv, r in bad.items())
    return not bad, detail


def criterion_9():
    ident = arith.gamma_p_identity_failures(13, 30)
    cong = arith.gamma_p_congruence_failures(7, 3, 20)
    detail = "gamma_p (i) p<=13, n<=30; (ii) p<=7, s<=3, k,n<=20"
    if ident:
        detail += f"; (i) fails at {_fail_list(ident)}"
    if cong:
        moduli = sorted({(p, s) for p, s, _, _ in cong})
        detail += f"; (ii) fails in {len(cong)} cases, all with (p, s) in {moduli}"
    return not ident and not cong, detail


def criterion_10(tmp_dir):
    bad = dwork.dieudonne_dwork(TruncSeries([1, Fraction(1, 2)] + [0] * 9), 2)
    c1 = not bad.passed and bad.first_bad_index is not None and bad.witness is not None
    c2 = root_exponent(power(TruncSeries([1, 1] + [0] * 19), 4)) == 4
    cfg = campaign.CampaignConfig(
        targets=[{"command": "refinement_B1", "params": {"nvec": [6], "root": 61}}],
        order=100, output_dir=str(tmp_dir / "reports"), cache_dir=str(tmp_dir / "cache"))
    res = campaign.run_campaign(cfg)
    rep = res.reports[0][1]
    c3 = res.exit_code == 1 and rep.first_bad_index == 1
    return c1 and c2 and c3, (
        f"Dwork criterion on 1+z/2 {bad.status} (index {bad.first_bad_index}); "
        f"root_exponent((1+z)^4) check {'ok' if c2 else 'wrong'}; "
        f"root-61 campaign exit {res.exit_code}, witness index {rep.first_bad_index}")


UNATTAINABLE = {
    8: "nvec (2) gives a first-order operator, which has no logarithmic solution",
    9: "Gamma_2(k + 4n) is congruent to (-1)^n Gamma_2(k) mod 4, not to Gamma_2(k)",
}


def _check(number, record, *args):
    t0 = time.perf_counter()
    ok, detail = globals()[f"criterion_{number}"](*args)
    record(number, ok, f"{detail} [{time.perf_counter() - t0:.1f}s]")
    assert ok, detail


def _mark(number):
    if number in UNATTAINABLE:
        return pytest.mark.xfail(strict=True, reason=UNATTAINABLE[number])
    return []


@pytest.mark.parametrize("number", [pytest.param(n, marks=_mark(n), id=f"criterion_{n}")
                                    for n in range(1, 10)])
def test_criterion(number, record_criterion):
    _check(number, record_criterion)


def test_criterion_10_negative_controls(record_criterion, tmp_path, monkeypatch):
    monkeypatch.delenv("MIRRORMAP_CACHE", raising=False)
    _check(10, record_criterion, tmp_path)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    for n in range(1, 11):
        args = (Path(tempfile.mkdtemp()),) if n == 10 else ()
        t0 = time.perf_counter()
        ok, detail = globals()[f"criterion_{n}"](*args)
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail} [{time.perf_counter() - t0:.1f}s]",
              flush=True)
