"""Hypergeometric series F, G, G_L, canonical coordinates and their
integrality checks.

Two flavours of coefficient are supported:

* ``bold``:  A(m) = prod_j B_{N_j}(m), weights sum_j H_{N_j}(m);
* ``plain``: A(m) = prod_j (N_j m)!/m!^{N_j}, weights sum_j N_j (H_{N_j m} - H_m).

A plain vector (N_1..N_k) gives the same series as the bold vector made of
all divisors of each N_j.

The canonical coordinate q(z) = z exp(G/F) is always handled through the
unit series z^{-1} q(z) = exp(G/F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import arith
from .report import Report, timed
from .series import (
    TruncSeries,
    div,
    exp_series,
    integrality,
    mul,
    nth_root,
    power,
    reversion,
    root_exponent,
)

PLAIN = "plain"
BOLD = "bold"


class HypothesisError(ValueError):
    """L outside 1..max(nvec) without an explicit override."""


def parse_nvec(nvec) -> tuple[int, ...]:
    if isinstance(nvec, str):
        nvec = [int(t) for t in nvec.replace(" ", "").split(",") if t]
    elif isinstance(nvec, int):
        nvec = [nvec]
    out = tuple(int(n) for n in nvec)
    if not out or any(n < 1 for n in out):
        raise ValueError(f"nvec must be a non-empty list of positive integers, got {nvec!r}")
    return out


@dataclass(frozen=True)
class MirrorFamily:
    nvec: tuple[int, ...]
    flavor: str = BOLD
    L: Optional[int] = None
    order: int = 100
    outside_hypotheses: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nvec", parse_nvec(self.nvec))
        if self.flavor not in (PLAIN, BOLD):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if self.L is not None:
            if self.L < 1:
                raise HypothesisError("L must be positive")
            if self.L > max(self.nvec) and not self.outside_hypotheses:
                raise HypothesisError(
                    f"L = {self.L} exceeds max(nvec) = {max(self.nvec)}; "
                    "pass outside_hypotheses=True to explore anyway")

    def with_L(self, L: int) -> "MirrorFamily":
        return MirrorFamily(self.nvec, self.flavor, L, self.order, self.outside_hypotheses)

    def key(self) -> str:
        nv = ",".join(map(str, self.nvec))
        return f"{self.flavor}:{nv}"


# -- coefficients ---------------------------------------------------------------

def coefficient(nvec, flavor: str, m: int) -> int:
    """A(m) for the given flavour; zero for negative m."""
    if m < 0:
        return 0
    if flavor == BOLD:
        return math.prod(arith.B_bold(N, m) for N in nvec)
    return math.prod(arith.B_plain(N, m) for N in nvec)


def weight(nvec, flavor: str, m: int) -> Fraction:
    if flavor == BOLD:
        return sum((arith.H_bold(N, m) for N in nvec), Fraction(0))
    Hm = arith.harmonic(m)
    return sum((N * (arith.harmonic(N * m) - Hm) for N in nvec), Fraction(0))


@lru_cache(maxsize=256)
def _F(nvec, flavor, order):
    return TruncSeries([coefficient(nvec, flavor, m) for m in range(order + 1)])


@lru_cache(maxsize=256)
def _G(nvec, flavor, order):
    F = _F(nvec, flavor, order)
    return TruncSeries([0] + [weight(nvec, flavor, m) * F[m] for m in range(1, order + 1)])


@lru_cache(maxsize=1024)
def _GL(nvec, flavor, L, order):
    F = _F(nvec, flavor, order)
    return TruncSeries([0] + [arith.harmonic(L * m) * F[m] for m in range(1, order + 1)])


@lru_cache(maxsize=1024)
def _log_qL(nvec, flavor, L, order):
    return div(_GL(nvec, flavor, L, order), _F(nvec, flavor, order))


@lru_cache(maxsize=256)
def _log_q(nvec, flavor, order):
    return div(_G(nvec, flavor, order), _F(nvec, flavor, order))


def series_F(fam: MirrorFamily) -> TruncSeries:
    return _F(fam.nvec, fam.flavor, fam.order)


def series_G(fam: MirrorFamily) -> TruncSeries:
    return _G(fam.nvec, fam.flavor, fam.order)


def _need_L(fam):
    if fam.L is None:
        raise HypothesisError("this family needs a value of L")
    return fam.L


def series_GL(fam: MirrorFamily) -> TruncSeries:
    return _GL(fam.nvec, fam.flavor, _need_L(fam), fam.order)


def q_canonical(fam: MirrorFamily) -> TruncSeries:
    """z^{-1} q(z) = exp(G/F)."""
    return exp_series(_log_q(fam.nvec, fam.flavor, fam.order))


def q_L(fam: MirrorFamily) -> TruncSeries:
    """exp(G_L/F)."""
    return exp_series(_log_qL(fam.nvec, fam.flavor, _need_L(fam), fam.order))


def q_L_root(fam: MirrorFamily, W: int) -> TruncSeries:
    """q_L^(1/W), computed as exp(G_L/(W F))."""
    return exp_series(_log_qL(fam.nvec, fam.flavor, _need_L(fam), fam.order) / W)


def q_canonical_root(fam: MirrorFamily, W: int) -> TruncSeries:
    return exp_series(_log_q(fam.nvec, fam.flavor, fam.order) / W)


def log_qL_series(nvec, flavor, L, M, cache=None) -> TruncSeries:
    """G_L/F, optionally served from an on-disk :class:`SeriesCache`."""
    nvec = parse_nvec(nvec)
    if cache is None:
        return _log_qL(nvec, flavor, L, M)
    key = f"logqL:{flavor}:{','.join(map(str, nvec))}:L={L}"
    return TruncSeries(cache.get_or_compute(
        key, lambda order: _log_qL(nvec, flavor, L, order).coeffs, M))


def log_q_series(nvec, flavor, M, cache=None) -> TruncSeries:
    """G/F, optionally served from an on-disk cache."""
    nvec = parse_nvec(nvec)
    if cache is None:
        return _log_q(nvec, flavor, M)
    key = f"logq:{flavor}:{','.join(map(str, nvec))}"
    return TruncSeries(cache.get_or_compute(
        key, lambda order: _log_q(nvec, flavor, order).coeffs, M))


def clear_caches():
    for f in (_F, _G, _GL, _log_qL, _log_q):
        f.cache_clear()


# -- verifications ----------------------------------------------------------------

def _check_integral(rep: Report, series: TruncSeries) -> Report:
    res = integrality(series)
    if not res.integral:
        rep.fail(res.first_bad_index, res.witness)
    rep.details["verified_through_index"] = (
        series.order if res.integral else res.first_bad_index - 1)
    return rep


def verify_theorem4(nvec, L: int, M: int, outside_hypotheses: bool = False,
                    cache=None) -> Report:
    """exp(G_L/F) (bold) has integral coefficients through z^M."""
    nvec = parse_nvec(nvec)
    MirrorFamily(nvec, BOLD, L, M, outside_hypotheses)  # validates L
    rep = Report("thm4", {"nvec": list(nvec), "L": L, "flavor": BOLD}, M)
    with timed(rep):
        _check_integral(rep, exp_series(log_qL_series(nvec, BOLD, L, M, cache)))
        rep.details["outside_hypotheses"] = L > max(nvec)
    return rep


def theorem2_root(nvec, L: int) -> int:
    """M_N / Theta_L as an exact integer."""
    MN = arith.M_N(nvec)
    th = arith.theta_L(L)
    if MN % th:
        raise ArithmeticError(f"Theta_{L} = {th} does not divide M_N = {MN}")
    return MN // th


def verify_theorem2(nvec, L: int, M: int, root: Optional[int] = None,
                    outside_hypotheses: bool = False, cache=None) -> Report:
    """exp(G_L/F)^(Theta_L/M_N) (plain) integral through z^M.

    ``root`` overrides the exponent denominator (used for sharpness probes).
    """
    nvec = parse_nvec(nvec)
    MirrorFamily(nvec, PLAIN, L, M, outside_hypotheses)
    W = theorem2_root(nvec, L) if root is None else root
    params = {"nvec": list(nvec), "L": L, "flavor": PLAIN, "root": W}
    rep = Report("thm2", params, M)
    rep.details.update(M_N=arith.M_N(nvec), theta_L=arith.theta_L(L))
    with timed(rep):
        _check_integral(rep, exp_series(log_qL_series(nvec, PLAIN, L, M, cache) / W))
    return rep


def theorem2_sharpness(nvec, M: int = 2, cache=None) -> Report:
    """Evidence that the L = 1 root is best possible.

    With W = M_N the z^1 coefficient of q_1^(1/W) is c = A(1)/W. Taking
    the smallest prime q not dividing c, the root qW must already fail
    at index 1. The report PASSES when that failure is observed.
    """
    nvec = parse_nvec(nvec)
    W = theorem2_root(nvec, 1)
    T = log_qL_series(nvec, PLAIN, 1, max(M, 1), cache)
    c = exp_series(T / W)[1]
    q = next(r for r in arith.primes_up_to(max(2, abs(c.numerator) + 2))
             if c.numerator % r)
    res = integrality(exp_series(T / (q * W)))
    rep = Report("thm2_sharpness", {"nvec": list(nvec), "L": 1, "root": W, "prime": q}, M)
    rep.details.update(first_coefficient=c, probe_root=q * W,
                       probe_first_bad_index=res.first_bad_index, probe_witness=res.witness)
    if res.integral or res.first_bad_index != 1:
        rep.fail(res.first_bad_index, res.witness, note="probe root did not fail at index 1")
    return rep


def corollary1_root(N: int, k: int) -> int:
    num = arith.factorial(N) ** k * k * N
    th = arith.theta_L(N)
    if num % th:
        raise ArithmeticError("Theta_N does not divide N!^k k N")
    return num // th


def verify_corollary1(N: int, k: int, M: int, cache=None) -> Report:
    """(z^{-1} q_{(N,...,N)})^(Theta_N/(N!^k k N)) integral through z^M."""
    nvec = (N,) * k
    W = corollary1_root(N, k)
    params = {"N": N, "k": k, "root": W}
    rep = Report("coro1", params, M)
    with timed(rep):
        _check_integral(rep, exp_series(log_q_series(nvec, PLAIN, M, cache) / W))
    return rep


SIX_FAMILY_ROOTS = {1: 60, 2: 6, 3: 2, 4: 1, 5: 1, 6: 1}


def verify_six_family(M: int, with_exponents: bool = True, cache=None) -> Report:
    """q_{L,(6)} (bold) roots 60, 6, 2, 1, 1, 1 for L = 1..6.

    Also records the empirical largest root exponent at order M, as evidence
    only; maximality is not asserted.
    """
    rep = Report("six_family", {"nvec": [6], "flavor": BOLD}, M)
    with timed(rep):
        per_L = {}
        for L, W in SIX_FAMILY_ROOTS.items():
            T = log_qL_series((6,), BOLD, L, M, cache)
            res = integrality(exp_series(T / W))
            entry = {"root": W, "status": "PASS" if res.integral else "FAIL"}
            if with_exponents:
                entry["empirical_root_exponent"] = root_exponent(exp_series(T))
            if not res.integral:
                entry["first_bad_index"] = res.first_bad_index
                rep.fail(res.first_bad_index, res.witness, failing_L=L)
            per_L[L] = entry
        rep.details["per_L"] = per_L
    return rep


def verify_refinement_B1(nvec, M: int, root: Optional[int] = None, cache=None) -> Report:
    """q_{1,N}^(1/B_N(1)) (bold) integral through z^M."""
    nvec = parse_nvec(nvec)
    W = coefficient(nvec, BOLD, 1) if root is None else root
    params = {"nvec": list(nvec), "L": 1, "flavor": BOLD, "root": W}
    rep = Report("refinement_B1", params, M)
    with timed(rep):
        _check_integral(rep, exp_series(log_qL_series(nvec, BOLD, 1, M, cache) / W))
    return rep


def verify_conjecture(nvec, M: int, flavor: str = BOLD, cache=None) -> Report:
    """z^{-1} q_N(z) integral through z^M (finite-prefix evidence only)."""
    nvec = parse_nvec(nvec)
    params = {"nvec": list(nvec), "flavor": flavor}
    rep = Report("conjecture", params, M)
    with timed(rep):
        _check_integral(rep, exp_series(log_q_series(nvec, flavor, M, cache)))
    return rep


def mirror_map(fam: MirrorFamily) -> TruncSeries:
    """q^{-1} z(q) as a unit series of order fam.order - 1."""
    unit = q_canonical(fam)
    q_of_z = unit.shift(1)
    z_of_q = reversion(q_of_z)
    return TruncSeries(z_of_q.coeffs[1:])


def mirror_inverse_check(fam: MirrorFamily, M: Optional[int] = None,
                         tau: Optional[int] = None) -> Report:
    """If (z^{-1}q)^(1/tau) is integral then so is (q^{-1}z(q))^(1/tau).

    tau defaults to the empirical root exponent of z^{-1} q(z).
    """
    if M is not None:
        fam = MirrorFamily(fam.nvec, fam.flavor, fam.L, M, fam.outside_hypotheses)
    M = fam.order
    params = {"nvec": list(fam.nvec), "flavor": fam.flavor}
    rep = Report("mirror_inverse", params, M)
    with timed(rep):
        unit = q_canonical(fam)
        inv = mirror_map(fam)
        check_unit = unit.truncate(M - 1)
        if tau is None:
            if check_unit.order >= 1 and check_unit[1] != 0:
                tau = root_exponent(check_unit)
            else:
                tau = 1
        params["tau"] = tau
        fwd = integrality(exp_series(_log_q(fam.nvec, fam.flavor, M).truncate(M - 1) / tau))
        bwd = integrality(nth_root(inv, tau))
        rep.details["forward_integral"] = fwd.integral
        rep.details["inverse_integral"] = bwd.integral
        if fwd.integral != bwd.integral:
            idx = bwd.first_bad_index if not bwd.integral else fwd.first_bad_index
            rep.fail(idx, bwd.witness if not bwd.integral else fwd.witness)
        elif not fwd.integral:
            rep.fail(fwd.first_bad_index, fwd.witness, note="forward root not integral")
    return rep


def truemap_sides(N: int, k: int, M: int):
    """Both sides of z^{-1} q_{(N..N)} = q_{N,(N..N)}^{kN} q_{1,(N..N)}^{-kN}."""
    nvec = (N,) * k
    lhs = q_canonical(MirrorFamily(nvec, PLAIN, None, M))
    qN = q_L(MirrorFamily(nvec, PLAIN, N, M))
    q1 = q_L(MirrorFamily(nvec, PLAIN, 1, M))
    rhs = mul(power(qN, k * N), power(q1, -k * N))
    return lhs, rhs


def plain_matches_bold(nvec, M: int) -> Optional[str]:
    """Compare plain series over nvec with bold series over the divisor
    multiset. Returns None on agreement, otherwise a description."""
    nvec = parse_nvec(nvec)
    dvec = tuple(arith.divisor_multiset(nvec))
    if _F(nvec, PLAIN, M) != _F(dvec, BOLD, M):
        return "F differs"
    if _G(nvec, PLAIN, M) != _G(dvec, BOLD, M):
        return "G differs"
    for L in range(1, max(nvec) + 1):
        if _GL(nvec, PLAIN, L, M) != _GL(dvec, BOLD, L, M):
            return f"G_L differs at L = {L}"
    return None
