"""Factorial ratios as p-adic numbers: exact valuation plus unit part mod p^E.

Deciding v_p(x) >= R for a rational x only needs the valuation of x and its
unit part modulo a large enough power of p, so huge factorial ratios never
have to be formed. Everything here is exact; precision is tracked
explicitly and a decision is only returned when it is determined.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

from .arith import INFINITY, vp_factorial


class _UnitTable:
    """Prefix products of the integers in 1..n coprime to p, modulo p^E."""

    def __init__(self, p: int, E: int):
        self.p, self.E, self.mod = p, E, p ** E
        self.prefix = [1]

    def extend(self, n: int):
        pre, p, mod = self.prefix, self.p, self.mod
        k = len(pre)
        acc = pre[-1]
        while k <= n:
            if k % p:
                acc = acc * k % mod
            pre.append(acc)
            k += 1

    def unit_factorial(self, n: int) -> int:
        """n! / p^{v_p(n!)} mod p^E."""
        if n >= len(self.prefix):
            self.extend(n)
        out = 1
        pre, p, mod = self.prefix, self.p, self.mod
        while n > 1:
            out = out * pre[n] % mod
            n //= p
        return out


_tables: dict[tuple[int, int], _UnitTable] = {}
_tables_lock = threading.Lock()


def _table(p: int, E: int) -> _UnitTable:
    key = (p, E)
    tab = _tables.get(key)
    if tab is None:
        with _tables_lock:
            tab = _tables.setdefault(key, _UnitTable(p, E))
    return tab


@dataclass(frozen=True)
class PAdic:
    """p^val * unit with the unit known modulo p^prec (relative precision).

    val is INFINITY for an exact zero.
    """
    p: int
    val: object
    unit: int
    prec: int

    def __mul__(self, other: "PAdic") -> "PAdic":
        if self.val is INFINITY or other.val is INFINITY:
            return PAdic(self.p, INFINITY, 0, max(self.prec, other.prec))
        prec = min(self.prec, other.prec)
        return PAdic(self.p, self.val + other.val,
                     self.unit * other.unit % self.p ** prec, prec)

    def inverse(self) -> "PAdic":
        if self.val is INFINITY:
            raise ZeroDivisionError("inverse of zero")
        mod = self.p ** self.prec
        return PAdic(self.p, -self.val, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other: "PAdic") -> "PAdic":
        return self * other.inverse()

    def absolute_precision(self):
        return INFINITY if self.val is INFINITY else self.val + self.prec


def sub_valuation(x: PAdic, y: PAdic):
    """Valuation of x - y.

    Returns (value, exact): exact is False when the difference vanished to
    the available precision, in which case value is a lower bound.
    """
    p = x.p
    if x.val is INFINITY and y.val is INFINITY:
        return INFINITY, True
    if x.val is INFINITY:
        return y.val, True
    if y.val is INFINITY:
        return x.val, True
    if x.val != y.val:
        return min(x.val, y.val), True
    prec = min(x.prec, y.prec)
    mod = p ** prec
    d = (x.unit - y.unit) % mod
    if d == 0:
        return x.val + prec, False
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return x.val + k, True


def factorial_ratio(p: int, E: int, num: Sequence[int], den: Sequence[int]) -> PAdic:
    """prod n! over num divided by prod n! over den."""
    tab = _table(p, E)
    mod = tab.mod
    v = sum(vp_factorial(n, p) for n in num) - sum(vp_factorial(n, p) for n in den)
    u_num = 1
    for n in num:
        u_num = u_num * tab.unit_factorial(n) % mod
    u_den = 1
    for n in den:
        u_den = u_den * tab.unit_factorial(n) % mod
    return PAdic(p, v, u_num * pow(u_den, -1, mod) % mod, E)


def from_int(n: int, p: int, E: int) -> PAdic:
    if n == 0:
        return PAdic(p, INFINITY, 0, E)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return PAdic(p, v, n % p ** E, E)
