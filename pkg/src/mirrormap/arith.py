"""Exact integer and rational building blocks.

Valuations, factorials, harmonic numbers, the factor vectors attached to a
positive integer N, the factorial ratios B_N(m) built from them, their
harmonic weights H_N(m), and the p-adic Gamma function at positive integers.

All rationals are :class:`fractions.Fraction`, which is always stored
reduced with a positive denominator.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

Rational = Fraction


class _Infinity:
    """Valuation of zero. Compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("finite - INFINITY is not a valuation")


INFINITY = _Infinity()


# -- primes -----------------------------------------------------------------

@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def primes_up_to(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def totient(n: int) -> int:
    result = n
    for q in prime_factors(n):
        result = result // q * (q - 1)
    return result


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# -- valuations ---------------------------------------------------------------

def vp_int(n: int, p: int):
    """p-adic valuation of an integer; INFINITY for 0."""
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int):
    """p-adic valuation of a rational (or int). INFINITY for zero."""
    _check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INFINITY
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def vp_factorial(n: int, p: int) -> int:
    """Legendre's formula: sum of floor(n / p^k) over k >= 1."""
    _check_prime(p)
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    n //= p
    while n:
        total += n
        n //= p
    return total


# -- factorials and harmonic numbers ------------------------------------------

@lru_cache(maxsize=4096)
def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return math.factorial(n)


_harmonic_lock = threading.Lock()
_harmonic_table: list[Fraction] = [Fraction(0)]


def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0.

    Values are memoized incrementally, so asking for H_n costs one addition
    per index not yet seen.
    """
    if n < 0:
        raise ValueError("harmonic number of a negative index")
    table = _harmonic_table
    if n < len(table):
        return table[n]
    with _harmonic_lock:
        while len(table) <= n:
            k = len(table)
            table.append(table[-1] + Fraction(1, k))
        return table[n]


def harmonic_diff(a: int, b: int) -> Fraction:
    """H_a - H_b."""
    return harmonic(a) - harmonic(b)


def harmonic_shift(x, m: int) -> Fraction:
    """H(x, m) = sum_{n=0}^{m-1} 1/(x + n)."""
    x = Fraction(x)
    if m < 0:
        raise ValueError("m must be non-negative")
    total = Fraction(0)
    for n in range(m):
        if x + n == 0:
            raise ZeroDivisionError(f"pole of H(x, m) at x = {x}, n = {n}")
        total += 1 / (x + n)
    return total


def theta_L(L: int) -> int:
    """Reduced denominator of H_L, i.e. L!/gcd(L!, L! H_L)."""
    if L < 1:
        raise ValueError("L must be positive")
    fL = factorial(L)
    num = harmonic(L) * fL
    assert num.denominator == 1
    return fL // math.gcd(fL, num.numerator)


def pochhammer(x, m: int) -> Fraction:
    x = Fraction(x)
    out = Fraction(1)
    for i in range(m):
        out *= x + i
    return out


# -- factor vectors -----------------------------------------------------------

@dataclass(frozen=True)
class FactorData:
    N: int
    alphas: tuple[int, ...]
    betas: tuple[int, ...]
    residues: tuple[int, ...]
    phi: int
    constantC: int


@lru_cache(maxsize=None)
def factor_data(N: int) -> FactorData:
    """Factor vectors of N.

    alphas are N divided by products of even-size sets of distinct primes of
    N, betas the same for odd-size sets, padded with ones so both lists have
    the same sum. N = 1 gets empty vectors (B_1 = 1, H_1 = 0).
    """
    if N < 1:
        raise ValueError("N must be positive")
    phi = totient(N)
    residues = tuple(r for r in range(1, N + 1) if math.gcd(r, N) == 1)
    if N == 1:
        return FactorData(1, (), (), residues, phi, 1)
    primes = prime_factors(N)
    alphas, betas = [], []
    for size in range(len(primes) + 1):
        for subset in combinations(primes, size):
            (alphas if size % 2 == 0 else betas).append(N // math.prod(subset))
    pad = sum(alphas) - sum(betas)
    assert pad >= 0, "even-subset sum must dominate"
    betas.extend([1] * pad)
    alphas.sort(reverse=True)
    betas.sort(reverse=True)

    C = N ** phi
    for q in primes:
        e, rem = divmod(phi, q - 1)
        assert rem == 0, f"(p-1) must divide phi(N) for p = {q}"
        C *= q ** e
    return FactorData(N, tuple(alphas), tuple(betas), residues, phi, C)


# -- the B and H families -------------------------------------------------------

@lru_cache(maxsize=8192)
def B_bold(N: int, m: int) -> int:
    """prod (alpha_j m)! / prod (beta_j m)!; always a positive integer."""
    if m < 0:
        raise ValueError("m must be non-negative")
    fd = factor_data(N)
    num = math.prod(factorial(a * m) for a in fd.alphas)
    den = math.prod(factorial(b * m) for b in fd.betas)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"B_{N}({m}) is not integral; factor vectors are wrong")
    return q


def B_bold_pochhammer(N: int, m: int) -> Fraction:
    """C_N^m prod_j (r_j/N)_m / m! over the residues r_j coprime to N."""
    if N == 1:
        return Fraction(1)
    fd = factor_data(N)
    out = Fraction(fd.constantC) ** m
    fm = factorial(m)
    for r in fd.residues:
        out *= pochhammer(Fraction(r, N), m) / fm
    return out


def vp_B_bold(N: int, m: int, p: int) -> int:
    """v_p(B_N(m)) via Legendre's formula, without forming B_N(m)."""
    fd = factor_data(N)
    return (sum(vp_factorial(a * m, p) for a in fd.alphas)
            - sum(vp_factorial(b * m, p) for b in fd.betas))


def H_bold(N: int, m: int) -> Fraction:
    """sum alpha_j H_{alpha_j m} - sum beta_j H_{beta_j m}; zero for N = 1."""
    if m < 0:
        raise ValueError("m must be non-negative")
    fd = factor_data(N)
    return (sum((a * harmonic(a * m) for a in fd.alphas), Fraction(0))
            - sum((b * harmonic(b * m) for b in fd.betas), Fraction(0)))


def H_bold_alt(N: int, m: int) -> Fraction:
    """Residue form: sum_j H(r_j/N, m) - phi(N) H(1, m)."""
    fd = factor_data(N)
    if N == 1:
        return Fraction(0)
    total = sum((harmonic_shift(Fraction(r, N), m) for r in fd.residues), Fraction(0))
    return total - fd.phi * harmonic(m)


def B_plain(N: int, m: int) -> int:
    """(N m)! / m!^N."""
    return factorial(N * m) // factorial(m) ** N


def gamma_p(n: int, p: int) -> int:
    """Morita's p-adic Gamma at a positive integer:
    (-1)^n times the product of 1 <= k < n with p not dividing k."""
    _check_prime(p)
    if n < 1:
        raise ValueError("gamma_p is defined here for n >= 1 only")
    prod = 1
    for k in range(1, n):
        if k % p:
            prod *= k
    return -prod if n % 2 else prod


def divisor_multiset(nvec) -> list[int]:
    """Concatenated sorted divisor lists of each entry."""
    out = []
    for N in nvec:
        if N < 1:
            raise ValueError("entries must be positive")
        out.extend(divisors(N))
    return out


def M_N(nvec) -> int:
    """Product of N_j!."""
    return math.prod(factorial(N) for N in nvec)


def gamma_p_identity_failures(p_max: int = 13, n_max: int = 30) -> list:
    """Cases (p, n) where (np)!/n! != (-1)^{np+1} p^n gamma_p(1+np)."""
    bad = []
    for p in primes_up_to(p_max):
        for n in range(1, n_max + 1):
            lhs = Fraction(factorial(n * p), factorial(n))
            if lhs != (-1) ** (n * p + 1) * p ** n * gamma_p(1 + n * p, p):
                bad.append((p, n))
    return bad


def gamma_p_congruence_failures(p_max: int = 7, s_max: int = 3, kn_max: int = 20,
                                signed: bool = False) -> list:
    """Cases (p, s, k, n) with gamma_p(k + n p^s) != gamma_p(k) mod p^s.

    With ``signed=True`` the right side carries the factor (-1)^n when
    p^s = 4, the one modulus where the units multiply to -1 for p = 2.
    """
    bad = []
    for p in primes_up_to(p_max):
        for s in range(s_max + 1):
            mod = p ** s
            for k in range(1, kn_max + 1):
                base = gamma_p(k, p)
                for n in range(1, kn_max + 1):
                    sign = (-1) ** n if signed and mod == 4 else 1
                    if (gamma_p(k + n * mod, p) - sign * base) % mod:
                        bad.append((p, s, k, n))
    return bad
