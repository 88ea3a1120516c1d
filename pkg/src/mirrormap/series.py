"""Truncated formal power series over the rationals.

A :class:`TruncSeries` of order M holds the coefficients of z^0 .. z^M.
Binary operations require both operands to have the same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import divisors


class OrderMismatch(ValueError):
    pass


class TruncSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: Optional[int] = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            cs = cs[: order + 1] + [Fraction(0)] * (order + 1 - len(cs))
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = tuple(cs)

    # construction helpers
    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls([1], order)

    @classmethod
    def z(cls, order: int) -> "TruncSeries":
        return cls([0, 1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"TruncSeries([{terms}{more}], order={self.order})"

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, order)

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries([other], self.order)
        if other.order != self.order:
            raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")
        return other

    # ring operations
    def __add__(self, other):
        other = self._check(other)
        return TruncSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        return TruncSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return TruncSeries([c * a for a in self.coeffs])
        return mul(self, other)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return TruncSeries([a / c for a in self.coeffs])
        return div(self, other)

    def __pow__(self, n: int):
        return power(self, n)

    def derivative(self) -> "TruncSeries":
        """d/dz, padded with a zero top coefficient to keep the order."""
        cs = self.coeffs
        return TruncSeries([k * cs[k] for k in range(1, len(cs))], self.order)

    def theta(self) -> "TruncSeries":
        """z d/dz."""
        return TruncSeries([k * c for k, c in enumerate(self.coeffs)])

    def shift(self, k: int = 1) -> "TruncSeries":
        """Multiply by z^k and truncate."""
        return TruncSeries([0] * k + list(self.coeffs), self.order)

    def substitute_power(self, p: int) -> "TruncSeries":
        """a(z^p) truncated at the same order."""
        out = [Fraction(0)] * (self.order + 1)
        for i, c in enumerate(self.coeffs):
            if i * p > self.order:
                break
            out[i * p] = c
        return TruncSeries(out)

    def compose(self, b: "TruncSeries") -> "TruncSeries":
        """self(b(z)) for b with zero constant term (Horner)."""
        b = self._check(b)
        if b.coeffs[0] != 0:
            raise ValueError("inner series must have zero constant term")
        out = TruncSeries([self.coeffs[-1]], self.order)
        for c in reversed(self.coeffs[:-1]):
            out = mul(out, b) + c
        return out

    def to_strings(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "TruncSeries":
        return cls([Fraction(s) for s in items])


def _as_pair(a: TruncSeries, b: TruncSeries):
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    return a.coeffs, b.coeffs


def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Cauchy product truncated at the common order."""
    x, y = _as_pair(a, b)
    M = len(x) - 1
    nz_x = [(i, c) for i, c in enumerate(x) if c]
    nz_y = [(j, c) for j, c in enumerate(y) if c]
    out = [Fraction(0)] * (M + 1)
    for i, ci in nz_x:
        lim = M - i
        for j, cj in nz_y:
            if j > lim:
                break
            out[i + j] += ci * cj
    return TruncSeries(out)


def div(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Exact quotient a/b; b must have a nonzero constant term."""
    x, y = _as_pair(a, b)
    if y[0] == 0:
        raise ZeroDivisionError("divisor has zero constant term")
    inv0 = 1 / y[0]
    nz_y = [(j, c) for j, c in enumerate(y) if c and j]
    out = []
    for n in range(len(x)):
        s = x[n]
        for j, c in nz_y:
            if j > n:
                break
            s -= c * out[n - j]
        out.append(s * inv0)
    return TruncSeries(out)


def power(a: TruncSeries, n: int) -> TruncSeries:
    """Integer power; negative exponents need an invertible constant term."""
    if n < 0:
        return div(TruncSeries.one(a.order), power(a, -n))
    result = TruncSeries.one(a.order)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def exp_series(a: TruncSeries) -> TruncSeries:
    """exp(a) for a(0) = 0, from the recurrence n e_n = sum k a_k e_{n-k}."""
    cs = a.coeffs
    if cs[0] != 0:
        raise ValueError("exp_series needs a zero constant term")
    ka = [(k, k * c) for k, c in enumerate(cs) if c and k]
    e = [Fraction(1)]
    for n in range(1, len(cs)):
        s = Fraction(0)
        for k, c in ka:
            if k > n:
                break
            s += c * e[n - k]
        e.append(s / n)
    return TruncSeries(e)


def log_series(a: TruncSeries) -> TruncSeries:
    """log(a) for a(0) = 1, from n a_n = n l_n + sum_{k<n} k l_k a_{n-k}."""
    cs = a.coeffs
    if cs[0] != 1:
        raise ValueError("log_series needs constant term 1")
    l = [Fraction(0)]
    for n in range(1, len(cs)):
        s = n * cs[n]
        for k in range(1, n):
            if cs[n - k]:
                s -= k * l[k] * cs[n - k]
        l.append(s / n)
    return TruncSeries(l)


def nth_root(a: TruncSeries, V: int) -> TruncSeries:
    """a^(1/V) for a(0) = 1."""
    if V < 1:
        raise ValueError("root index must be positive")
    if a.coeffs[0] != 1:
        raise ValueError("nth_root needs constant term 1")
    if V == 1:
        return a
    return exp_series(log_series(a) / V)


def reversion(a: TruncSeries) -> TruncSeries:
    """Compositional inverse of a = z + c2 z^2 + ... by Newton iteration.

    Each step b <- b - (a(b) - q) / a'(b) doubles the number of correct
    coefficients.
    """
    cs = a.coeffs
    M = a.order
    if cs[0] != 0 or (M >= 1 and cs[1] != 1):
        raise ValueError("reversion needs a series of the form z + O(z^2)")
    q = TruncSeries.z(M)
    if M <= 1:
        return q
    da = a.derivative()
    b = q
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        bt = b.truncate(prec)
        at, dat, qt = a.truncate(prec), da.truncate(prec), q.truncate(prec)
        bt = bt - div(at.compose(bt) - qt, dat.compose(bt))
        b = bt.truncate(M)
    return b


def lagrange_reversion(a: TruncSeries) -> TruncSeries:
    """Brute-force compositional inverse: [q^n] b = (1/n) [z^(n-1)] (z/a)^n."""
    M = a.order
    cs = a.coeffs
    if cs[0] != 0 or (M >= 1 and cs[1] != 1):
        raise ValueError("reversion needs a series of the form z + O(z^2)")
    # z/a(z) as a unit series
    unit = TruncSeries(list(cs[1:]) + [0])
    h = div(TruncSeries.one(M), unit)
    out = [Fraction(0)] * (M + 1)
    hp = TruncSeries.one(M)
    for n in range(1, M + 1):
        hp = mul(hp, h)
        out[n] = hp.coeffs[n - 1] / n
    return TruncSeries(out)


@dataclass(frozen=True)
class IntegralityReport:
    integral: bool
    first_bad_index: Optional[int] = None
    witness: Optional[Fraction] = None
    checked_order: int = 0


def integrality(a: TruncSeries, scale: int = 1) -> IntegralityReport:
    """Is scale * a_i an integer for every i?"""
    for i, c in enumerate(a.coeffs):
        c = c * scale
        if c.denominator != 1:
            return IntegralityReport(False, i, c, a.order)
    return IntegralityReport(True, None, None, a.order)


def root_exponent(a: TruncSeries, M: Optional[int] = None) -> int:
    """Largest V (within the divisors of the z^1 coefficient) such that
    a^(1/V) is integral through order M.

    Integral roots are closed under lcm, so the answer is the lcm of the
    passing divisors. This is an upper bound for the true exponent: more
    coefficients can only shrink it.
    """
    if M is not None:
        a = a.truncate(M)
    if a.coeffs[0] != 1:
        raise ValueError("root_exponent needs constant term 1")
    if a.order < 1:
        raise ValueError("need at least the z^1 coefficient")
    c1 = a.coeffs[1]
    if c1 == 0 or c1.denominator != 1:
        raise ValueError("z^1 coefficient must be a nonzero integer")
    if not integrality(a).integral:
        raise ValueError("input series is not integral")
    V = 1
    log_a = log_series(a)
    for d in divisors(abs(c1.numerator)):
        if V % d == 0:
            continue
        if integrality(exp_series(log_a / d)).integral:
            V = math.lcm(V, d)
    return V
