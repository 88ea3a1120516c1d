"""p-adic verification engine.

Dwork's criterion for series, the coefficient reductions behind the two
integrality theorems, and exhaustive small-range sweeps of each congruence
lemma. Every sweep records, per case, the required lower bound on v_p, the
achieved valuation, and the slack between them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional

from . import arith, padic
from .arith import INFINITY, harmonic, primes_up_to, vp
from .mirror import BOLD, PLAIN, coefficient, parse_nvec
from .report import Report, timed
from .series import TruncSeries, div, mul, power

DEFAULT_BOUNDS = {"p_max": 7, "j_max": 12, "m_max": 12, "K_max": 12, "s_max": 2, "n_max": 12}


@dataclass
class ValuationMargin:
    required: int
    achieved: object  # int or INFINITY
    exact: bool = True

    @property
    def slack(self):
        if self.achieved is INFINITY:
            return INFINITY
        return self.achieved - self.required

    @property
    def passed(self) -> bool:
        return self.achieved >= self.required


@dataclass
class CaseResult:
    case: dict
    margin: ValuationMargin

    def to_dict(self) -> dict:
        from .report import to_jsonable
        m = self.margin
        d = {"case": to_jsonable(self.case), "required": to_jsonable(m.required),
             "achieved": to_jsonable(m.achieved), "slack": to_jsonable(m.slack),
             "pass": m.passed}
        if not m.exact:
            d["achieved_is_lower_bound"] = True
        return d


@dataclass
class SweepReport(Report):
    cases: list = field(default_factory=list)

    def add(self, case: dict, required: int, achieved, exact: bool = True):
        res = CaseResult(case, ValuationMargin(required, achieved, exact))
        self.cases.append(res)
        if not res.margin.passed:
            self.fail(len(self.cases) - 1, case)
        return res

    def summary(self) -> dict:
        finite = [c.margin.slack for c in self.cases if c.margin.slack is not INFINITY]
        return {"cases": len(self.cases),
                "failures": sum(not c.margin.passed for c in self.cases),
                "min_slack": min(finite) if finite else None}

    def jsonl(self) -> Iterator[str]:
        for c in self.cases:
            yield json.dumps(c.to_dict(), sort_keys=True)


def _A(nvec, flavor):
    def A(m):
        return coefficient(nvec, flavor, m)
    return A


def _valid_L(nvec):
    return range(1, max(nvec) + 1)


def _vp_MN_over_theta(nvec, L, p) -> int:
    return vp(Fraction(arith.M_N(nvec), arith.theta_L(L)), p)


# -- series-level criteria ----------------------------------------------------------

def dieudonne_dwork(S: TruncSeries, p: int) -> SweepReport:
    """Check S(z^p)/S(z)^p in 1 + p z Z_p[[z]] through the order of S.

    By Dwork's lemma this holds iff S has p-integral coefficients, so a PASS
    is also prefix evidence that S is in 1 + z Z_p[[z]].
    """
    if S[0] != 1:
        raise ValueError("Dwork's criterion needs S(0) = 1")
    rep = SweepReport("dieudonne_dwork", {"p": p}, S.order)
    with timed(rep):
        R = div(S.substitute_power(p), power(S, p))
        for i in range(1, S.order + 1):
            rep.add({"index": i}, 1, vp(R[i], p))
        rep.details.update(rep.summary())
    return rep


def lemma4_check(f: TruncSeries, g: TruncSeries, tau: int, p: int) -> SweepReport:
    """f(z) g(z^p) - p f(z^p) g(z) in p tau z Z_p[[z]]."""
    if f[0] != 1:
        raise ValueError("f must have constant term 1")
    if g[0] != 0:
        raise ValueError("g must have zero constant term")
    rep = SweepReport("lemma4", {"p": p, "tau": tau}, f.order)
    with timed(rep):
        T = mul(f, g.substitute_power(p)) - mul(f.substitute_power(p), g) * p
        need = 1 + arith.vp_int(tau, p)
        for i in range(1, f.order + 1):
            rep.add({"index": i}, need, vp(T[i], p))
        rep.details.update(rep.summary())
    return rep


# -- the C(a + Kp) coefficients -------------------------------------------------------

def C_coefficient(a: int, K: int, p: int, nvec, L: int, flavor: str = BOLD) -> Fraction:
    """sum_j A(a+jp) A(K-j) (H_{L(K-j)} - p H_{La+Ljp})."""
    if not 0 <= a < p:
        raise ValueError("need 0 <= a < p")
    A = _A(parse_nvec(nvec), flavor)
    total = Fraction(0)
    for j in range(K + 1):
        total += A(a + j * p) * A(K - j) * (harmonic(L * (K - j)) - p * harmonic(L * a + L * j * p))
    return total


def C_from_series(a: int, K: int, p: int, nvec, L: int, flavor: str = BOLD) -> Fraction:
    """The (a+Kp)-th coefficient of F(z) G_L(z^p) - p F(z^p) G_L(z)."""
    nvec = parse_nvec(nvec)
    M = a + K * p
    A = _A(nvec, flavor)
    F = TruncSeries([A(m) for m in range(M + 1)])
    GL = TruncSeries([0] + [harmonic(L * m) * A(m) for m in range(1, M + 1)])
    T = mul(F, GL.substitute_power(p)) - mul(F.substitute_power(p), GL) * p
    return T[M]


def C_reduced(a: int, K: int, p: int, nvec, L: int, flavor: str = BOLD) -> Fraction:
    """sum_j A(a+jp) A(K-j) (H_{L(K-j)} - H_{floor(La/p)+Lj})."""
    A = _A(parse_nvec(nvec), flavor)
    c = (L * a) // p
    return sum((A(a + j * p) * A(K - j) * (harmonic(L * (K - j)) - harmonic(c + L * j))
                for j in range(K + 1)), Fraction(0))


def cequiv_sweep(nvec, p_max: int = 7, K_max: int = 12, flavor: str = BOLD,
                 L_values: Optional[Iterable[int]] = None) -> SweepReport:
    """C(a+Kp) minus its reduced form has v_p >= 1 (bold) or
    >= 1 + v_p(M_N) (plain)."""
    nvec = parse_nvec(nvec)
    rep = SweepReport("cequiv", {"nvec": list(nvec), "flavor": flavor,
                                 "p_max": p_max, "K_max": K_max})
    Ls = list(L_values) if L_values is not None else list(_valid_L(nvec))
    with timed(rep):
        for p in primes_up_to(p_max):
            extra = arith.vp_int(arith.M_N(nvec), p) if flavor == PLAIN else 0
            for L in Ls:
                for a in range(p):
                    for K in range(K_max + 1):
                        d = C_coefficient(a, K, p, nvec, L, flavor) - C_reduced(a, K, p, nvec, L, flavor)
                        rep.add({"p": p, "L": L, "a": a, "K": K}, 1 + extra, vp(d, p))
        rep.details.update(rep.summary())
    return rep


def C_congruence_sweep(nvec, p_max: int = 7, K_max: int = 12, flavor: str = BOLD,
                       L_values: Optional[Iterable[int]] = None) -> SweepReport:
    """C(a+Kp) in p Z_p (bold) or p M_N/Theta_L Z_p (plain)."""
    nvec = parse_nvec(nvec)
    rep = SweepReport("C_congruence", {"nvec": list(nvec), "flavor": flavor,
                                       "p_max": p_max, "K_max": K_max})
    Ls = list(L_values) if L_values is not None else list(_valid_L(nvec))
    with timed(rep):
        for p in primes_up_to(p_max):
            for L in Ls:
                need = 1 + (_vp_MN_over_theta(nvec, L, p) if flavor == PLAIN else 0)
                for a in range(p):
                    for K in range(K_max + 1):
                        rep.add({"p": p, "L": L, "a": a, "K": K}, need,
                                vp(C_coefficient(a, K, p, nvec, L, flavor), p))
        rep.details.update(rep.summary())
    return rep


# -- formal congruences -------------------------------------------------------------------

def _factorial_lists(nvec, flavor, m):
    num, den = [], []
    for N in nvec:
        if flavor == BOLD:
            fd = arith.factor_data(N)
            num.extend(a * m for a in fd.alphas)
            den.extend(b * m for b in fd.betas)
        else:
            num.append(N * m)
            den.extend([m] * N)
    return num, den


def padic_A(nvec, flavor, m: int, p: int, E: int) -> padic.PAdic:
    num, den = _factorial_lists(nvec, flavor, m)
    return padic.factorial_ratio(p, E, num, den)


def vp_A(nvec, flavor, m: int, p: int) -> int:
    num, den = _factorial_lists(nvec, flavor, m)
    return (sum(arith.vp_factorial(n, p) for n in num)
            - sum(arith.vp_factorial(n, p) for n in den))


def condition_iii_margin(nvec, flavor, p, s, u, v, n, exact: bool = False) -> ValuationMargin:
    """Margin for A(v+up+np^{s+1})/A(v+up) - A(u+np^s)/A(u) with g = A.

    The default route works with valuations and unit parts mod p^E; with
    ``exact=True`` the ratios are formed as rationals instead.
    """
    x0 = v + u * p
    x1 = x0 + n * p ** (s + 1)
    y1 = u + n * p ** s
    required = s + 1 + vp_A(nvec, flavor, n, p) - vp_A(nvec, flavor, x0, p)
    if n == 0:
        return ValuationMargin(required, INFINITY)  # both ratios are 1
    if exact:
        A = _A(nvec, flavor)
        diff = Fraction(A(x1), A(x0)) - Fraction(A(y1), A(u))
        return ValuationMargin(required, vp(diff, p))
    v1 = vp_A(nvec, flavor, x1, p) - vp_A(nvec, flavor, x0, p)
    v2 = vp_A(nvec, flavor, y1, p) - vp_A(nvec, flavor, u, p)
    E = max(required - min(v1, v2), 1) + 2
    r1 = padic_A(nvec, flavor, x1, p, E) / padic_A(nvec, flavor, x0, p, E)
    r2 = padic_A(nvec, flavor, y1, p, E) / padic_A(nvec, flavor, u, p, E)
    val, is_exact = padic.sub_valuation(r1, r2)
    return ValuationMargin(required, val, is_exact)


def dwork_condition_iii(nvec, p: int, s_max: int = 2, n_max: int = 12,
                        flavor: str = BOLD, exact: bool = False) -> SweepReport:
    """Conditions (i)-(iii) of Dwork's formal congruence theorem with g = A."""
    nvec = parse_nvec(nvec)
    rep = SweepReport("condition3", {"nvec": list(nvec), "p": p, "flavor": flavor,
                                     "s_max": s_max, "n_max": n_max})
    with timed(rep):
        # (i): A(0) = 1 is a p-adic unit; (ii) is trivial for g = A
        rep.add({"condition": "i"}, 0, vp(coefficient(nvec, flavor, 0), p))
        for s in range(s_max + 1):
            for u in range(p ** s):
                for v in range(p):
                    for n in range(n_max + 1):
                        m = condition_iii_margin(nvec, flavor, p, s, u, v, n, exact)
                        rep.cases.append(CaseResult({"s": s, "u": u, "v": v, "n": n}, m))
                        if not m.passed:
                            rep.fail(len(rep.cases) - 1, {"s": s, "u": u, "v": v, "n": n})
        rep.details.update(rep.summary())
    return rep


def sum_S(a: int, K: int, s: int, p: int, m: int, nvec, flavor: str = BOLD) -> int:
    """sum_{j=mp^s}^{(m+1)p^s-1} (A(a+jp)A(K-j) - A(j)A(a+(K-j)p)), A(neg) = 0."""
    A = _A(parse_nvec(nvec), flavor)
    lo = m * p ** s
    hi = min((m + 1) * p ** s - 1, K)  # every term has a factor A(K-j)-like zero beyond K
    total = 0
    for j in range(lo, hi + 1):
        total += A(a + j * p) * A(K - j) - A(j) * A(a + (K - j) * p)
    return total


def S_from_series(a: int, K: int, s: int, p: int, m: int, nvec, flavor: str = BOLD) -> int:
    """(a+pK)-th coefficient of F(z^p) F_{m,s+1}(z) - F(z) F_{m,s}(z^p)."""
    A = _A(parse_nvec(nvec), flavor)
    M = a + p * K
    F = TruncSeries([A(i) for i in range(M + 1)])

    def block(t):
        lo, hi = m * p ** t, (m + 1) * p ** t - 1
        return TruncSeries([A(i) if lo <= i <= hi else 0 for i in range(M + 1)])

    T = mul(F.substitute_power(p), block(s + 1)) - mul(F, block(s).substitute_power(p))
    c = T[M]
    assert c.denominator == 1
    return c.numerator


def strat3_sweep(nvec, p_max: int = 7, K_max: int = 12, s_max: int = 2,
                 flavor: str = BOLD) -> SweepReport:
    """S(a,K,s,p,m) in p^{s+1} A(m) Z_p for all cases with S possibly nonzero."""
    nvec = parse_nvec(nvec)
    rep = SweepReport("strat3", {"nvec": list(nvec), "flavor": flavor, "p_max": p_max,
                                 "K_max": K_max, "s_max": s_max})
    with timed(rep):
        for p in primes_up_to(p_max):
            for s in range(s_max + 1):
                for K in range(K_max + 1):
                    for a in range(p):
                        for m in range(K // p ** s + 1):
                            need = s + 1 + vp_A(nvec, flavor, m, p)
                            val = arith.vp_int(sum_S(a, K, s, p, m, nvec, flavor), p)
                            rep.add({"p": p, "s": s, "K": K, "a": a, "m": m}, need, val)
        rep.details.update(rep.summary())
    return rep


# -- harmonic congruences --------------------------------------------------------------------

def lemma_12a_sweep(nvec, p_max: int = 7, j_max: int = 12) -> SweepReport:
    """B_N(a+pj) (H_{Lj+floor(La/p)} - H_{Lj}) in p Z_p (bold)."""
    return _lemma12_generic(nvec, p_max, j_max, BOLD, "lemma_12a")


def lemma_12_sweep(nvec, p_max: int = 7, j_max: int = 12) -> SweepReport:
    """Same expression for plain coefficients, in p M_N/Theta_L Z_p."""
    return _lemma12_generic(nvec, p_max, j_max, PLAIN, "lemma_12")


def _lemma12_generic(nvec, p_max, j_max, flavor, claim):
    nvec = parse_nvec(nvec)
    A = _A(nvec, flavor)
    rep = SweepReport(claim, {"nvec": list(nvec), "p_max": p_max, "j_max": j_max})
    with timed(rep):
        for p in primes_up_to(p_max):
            for L in _valid_L(nvec):
                need = 1 + (_vp_MN_over_theta(nvec, L, p) if flavor == PLAIN else 0)
                for a in range(p):
                    c = (L * a) // p
                    for j in range(j_max + 1):
                        x = A(a + p * j) * (harmonic(L * j + c) - harmonic(L * j))
                        rep.add({"p": p, "L": L, "a": a, "j": j}, need, vp(x, p))
        rep.details.update(rep.summary())
    return rep


def lemma_strat4_sweep(nvec, p_max: int = 7, m_max: int = 12, s_max: int = 2,
                       flavor: str = BOLD, L_values: Optional[Iterable[int]] = None,
                       extra_B1: bool = False) -> SweepReport:
    """A(m) (H_{Lmp^s} - H_{L floor(m/p) p^{s+1}}) in p^{-s} Z_p (bold) or
    M_N/(p^s Theta_L) Z_p (plain).

    ``extra_B1`` adds v_p(A(1)) to the bound (the strengthened form used for
    q_{1,N}^{1/B_N(1)}).
    """
    nvec = parse_nvec(nvec)
    A = _A(nvec, flavor)
    claim = "strat4" if flavor == BOLD else "lemma_11"
    if extra_B1:
        claim = "eq_BH"
    rep = SweepReport(claim, {"nvec": list(nvec), "flavor": flavor, "p_max": p_max,
                              "m_max": m_max, "s_max": s_max})
    Ls = list(L_values) if L_values is not None else list(_valid_L(nvec))
    with timed(rep):
        for p in primes_up_to(p_max):
            b1 = arith.vp_int(A(1), p) if extra_B1 else 0
            for L in Ls:
                base = _vp_MN_over_theta(nvec, L, p) if flavor == PLAIN else 0
                for s in range(s_max + 1):
                    for m in range(m_max + 1):
                        hd = harmonic(L * m * p ** s) - harmonic(L * (m // p) * p ** (s + 1))
                        rep.add({"p": p, "L": L, "s": s, "m": m}, -s + base + b1,
                                vp(A(m) * hd, p))
        rep.details.update(rep.summary())
    return rep


def Y_ms(a, K, s, p, m, nvec, L, flavor=BOLD) -> Fraction:
    S = sum_S(a, K, s, p, m, nvec, flavor)
    if S == 0:
        return Fraction(0)
    return (harmonic(L * m * p ** s) - harmonic(L * (m // p) * p ** (s + 1))) * S


def _min_r(K: int, p: int) -> int:
    r = 0
    while p ** r <= K:
        r += 1
    return r


def Y_sweep(nvec, p_max: int = 7, K_max: int = 12, flavor: str = BOLD) -> SweepReport:
    """Y_{m,s} in p Z_p (bold) or p M_N/Theta_L Z_p (plain)."""
    nvec = parse_nvec(nvec)
    rep = SweepReport("Y_ms", {"nvec": list(nvec), "flavor": flavor,
                               "p_max": p_max, "K_max": K_max})
    with timed(rep):
        for p in primes_up_to(p_max):
            for L in _valid_L(nvec):
                need = 1 + (_vp_MN_over_theta(nvec, L, p) if flavor == PLAIN else 0)
                for K in range(K_max + 1):
                    r = _min_r(K, p)
                    for a in range(p):
                        for s in range(r + 1):
                            for m in range(K // p ** s + 1):
                                y = Y_ms(a, K, s, p, m, nvec, L, flavor)
                                rep.add({"p": p, "L": L, "K": K, "a": a, "s": s, "m": m},
                                        need, vp(y, p))
        rep.details.update(rep.summary())
    return rep


def dwork_combinatorial_identity(a: int, K: int, p: int, nvec, L: int,
                                 flavor: str = BOLD) -> Report:
    """sum_j H_{Lj}(A(a+jp)A(K-j) - A(j)A(a+(K-j)p)) equals
    sum_{s=0}^{r} sum_{m=0}^{p^{r+1-s}-1} Y_{m,s}, with r minimal such that K < p^r."""
    nvec = parse_nvec(nvec)
    A = _A(nvec, flavor)
    r = _min_r(K, p)
    rep = Report("identity107a", {"a": a, "K": K, "p": p, "nvec": list(nvec),
                                  "L": L, "flavor": flavor, "r": r})
    with timed(rep):
        lhs = sum((harmonic(L * j) * (A(a + j * p) * A(K - j) - A(j) * A(a + (K - j) * p))
                   for j in range(K + 1)), Fraction(0))
        rhs = Fraction(0)
        for s in range(r + 1):
            for m in range(p ** (r + 1 - s)):
                if m * p ** s > K:
                    break  # S vanishes: every index j >= m p^s exceeds K
                rhs += Y_ms(a, K, s, p, m, nvec, L, flavor)
        rep.details.update(lhs=lhs, rhs=rhs)
        if lhs != rhs:
            rep.fail(None, lhs - rhs)
    return rep


def identity107a_sweep(nvec, p_max: int = 7, K_max: int = 12, flavor: str = BOLD,
                       L_values: Optional[Iterable[int]] = None) -> Report:
    nvec = parse_nvec(nvec)
    rep = Report("identity107a_sweep", {"nvec": list(nvec), "flavor": flavor,
                                        "p_max": p_max, "K_max": K_max})
    Ls = list(L_values) if L_values is not None else list(_valid_L(nvec))
    count = 0
    with timed(rep):
        for p in primes_up_to(p_max):
            for L in Ls:
                for a in range(p):
                    for K in range(K_max + 1):
                        r = dwork_combinatorial_identity(a, K, p, nvec, L, flavor)
                        count += 1
                        if not r.passed:
                            rep.fail(count - 1, r.params)
        rep.details["cases"] = count
    return rep


def lemma_ultime_sweep(nvec, p_max: int = 7, r_max: int = 2, m_max: int = 12) -> SweepReport:
    """B_N(w + m p^r) / B_N(m) in Z_p for 0 <= w < p^r (bold).

    Valuations come from Legendre's formula; no factorial is formed.
    """
    nvec = parse_nvec(nvec)
    rep = SweepReport("ultime", {"nvec": list(nvec), "p_max": p_max,
                                 "r_max": r_max, "m_max": m_max})
    with timed(rep):
        for p in primes_up_to(p_max):
            for r in range(r_max + 1):
                for m in range(m_max + 1):
                    base = vp_A(nvec, BOLD, m, p)
                    for w in range(p ** r):
                        val = vp_A(nvec, BOLD, w + m * p ** r, p) - base
                        rep.add({"p": p, "r": r, "m": m, "w": w}, 0, val)
        rep.details.update(rep.summary())
    return rep


def harmonic_J_sweep(p_max: int = 13, J_max: int = 400) -> SweepReport:
    """p H_J - H_{floor(J/p)} in p Z_p."""
    rep = SweepReport("eq_J", {"p_max": p_max, "J_max": J_max})
    with timed(rep):
        for p in primes_up_to(p_max):
            for J in range(J_max + 1):
                rep.add({"p": p, "J": J}, 1, vp(p * harmonic(J) - harmonic(J // p), p))
        rep.details.update(rep.summary())
    return rep


LEMMAS = {
    "12a": lambda nvec, b: lemma_12a_sweep(nvec, b["p_max"], b["j_max"]),
    "12": lambda nvec, b: lemma_12_sweep(nvec, b["p_max"], b["j_max"]),
    "strat3": lambda nvec, b: strat3_sweep(nvec, b["p_max"], b["K_max"], b["s_max"], BOLD),
    "10": lambda nvec, b: strat3_sweep(nvec, b["p_max"], b["K_max"], b["s_max"], PLAIN),
    "strat4": lambda nvec, b: lemma_strat4_sweep(nvec, b["p_max"], b["m_max"], b["s_max"], BOLD),
    "11": lambda nvec, b: lemma_strat4_sweep(nvec, b["p_max"], b["m_max"], b["s_max"], PLAIN),
    "BH": lambda nvec, b: lemma_strat4_sweep(nvec, b["p_max"], b["m_max"], b["s_max"], BOLD,
                                             L_values=[1], extra_B1=True),
    "ultime": lambda nvec, b: lemma_ultime_sweep(nvec, b["p_max"], b["s_max"], b["m_max"]),
    "Yms": lambda nvec, b: Y_sweep(nvec, b["p_max"], b["K_max"], BOLD),
    "yms": lambda nvec, b: Y_sweep(nvec, b["p_max"], b["K_max"], PLAIN),
    "cequiv": lambda nvec, b: cequiv_sweep(nvec, b["p_max"], b["K_max"], BOLD),
    "firstreduction": lambda nvec, b: cequiv_sweep(nvec, b["p_max"], b["K_max"], PLAIN),
    "Cconga": lambda nvec, b: C_congruence_sweep(nvec, b["p_max"], b["K_max"], BOLD),
    "Ccong": lambda nvec, b: C_congruence_sweep(nvec, b["p_max"], b["K_max"], PLAIN),
}


def run_lemma(name: str, nvec, **bounds) -> SweepReport:
    if name not in LEMMAS:
        raise KeyError(f"unknown lemma {name!r}; choose from {sorted(LEMMAS)}")
    b = dict(DEFAULT_BOUNDS)
    b.update({k: v for k, v in bounds.items() if v is not None})
    return LEMMAS[name](parse_nvec(nvec), b)
