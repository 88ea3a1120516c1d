"""The hypergeometric operator theta^D - C z prod (theta + r/N) and the check
that F and G + log(z) F are annihilated by it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .mirror import BOLD, coefficient, parse_nvec, weight
from .report import Report, timed
from .series import TruncSeries


def poly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_eval(poly: list, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class ThetaOperator:
    """P0(theta) - C z P1(theta); polynomials as ascending coefficient lists."""
    poly0: tuple
    poly1: tuple
    scalarC: int
    skipped_ones: int = 0

    @property
    def degree(self) -> int:
        return len(self.poly0) - 1

    def __str__(self):
        return f"theta^{self.degree} - {self.scalarC} z P1(theta)"


def build_operator(nvec) -> ThetaOperator:
    """Entries equal to 1 contribute nothing (B_1 = 1) and are skipped."""
    nvec = parse_nvec(nvec)
    D = 0
    P1 = [Fraction(1)]
    C = 1
    skipped = 0
    for N in nvec:
        if N == 1:
            skipped += 1
            continue
        fd = arith.factor_data(N)
        D += fd.phi
        C *= fd.constantC
        for r in fd.residues:
            P1 = poly_mul(P1, [Fraction(r, N), Fraction(1)])
    P0 = [Fraction(0)] * D + [Fraction(1)]
    return ThetaOperator(tuple(P0), tuple(P1), C, skipped)


class LogSeries:
    """a(z) + log(z) b(z)."""

    __slots__ = ("analytic", "logpart")

    def __init__(self, analytic: TruncSeries, logpart: TruncSeries):
        if analytic.order != logpart.order:
            raise ValueError("parts must share an order")
        self.analytic, self.logpart = analytic, logpart

    def theta(self) -> "LogSeries":
        # theta(a + log z b) = (theta a + b) + log z theta b
        return LogSeries(self.analytic.theta() + self.logpart, self.logpart.theta())

    def shift(self, k: int = 1) -> "LogSeries":
        return LogSeries(self.analytic.shift(k), self.logpart.shift(k))

    def scale(self, c) -> "LogSeries":
        return LogSeries(self.analytic * c, self.logpart * c)

    def __add__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.analytic + other.analytic, self.logpart + other.logpart)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return LogSeries(self.analytic - other.analytic, self.logpart - other.logpart)


def apply_poly(poly, y: LogSeries) -> LogSeries:
    zero = TruncSeries.zero(y.analytic.order)
    out = LogSeries(zero, zero)
    power = y
    for i, c in enumerate(poly):
        if i:
            power = power.theta()
        if c:
            out = out + power.scale(c)
    return out


def apply_operator(op: ThetaOperator, y: LogSeries) -> LogSeries:
    return apply_poly(op.poly0, y) - apply_poly(op.poly1, y).shift(1).scale(op.scalarC)


def recurrence_holds(op: ThetaOperator, nvec, M: int) -> int | None:
    """A(m+1)(m+1)^D = C A(m) P1(m) for m < M. Returns the first failing m."""
    nvec = parse_nvec(nvec)
    for m in range(M):
        lhs = coefficient(nvec, BOLD, m + 1) * (m + 1) ** op.degree
        rhs = op.scalarC * coefficient(nvec, BOLD, m) * poly_eval(list(op.poly1), m)
        if lhs != rhs:
            return m
    return None


def apply_and_verify(nvec, M: int) -> Report:
    """L[F] and L[G + log z F] vanish through index M - 1 (bold series)."""
    nvec = parse_nvec(nvec)
    if M < 2:
        raise ValueError("need M >= 2")
    op = build_operator(nvec)
    if op.degree == 0:
        raise ValueError("operator is degenerate (every entry equals 1)")
    rep = Report("ode", {"nvec": list(nvec)}, M)
    with timed(rep):
        F = TruncSeries([coefficient(nvec, BOLD, m) for m in range(M + 1)])
        G = TruncSeries([0] + [weight(nvec, BOLD, m) * F[m] for m in range(1, M + 1)])
        zero = TruncSeries.zero(M)
        rF = apply_operator(op, LogSeries(F, zero))
        rG = apply_operator(op, LogSeries(G, F))
        cutoff = M - 1
        residual_zero = True
        for name, part in (("F", rF.analytic), ("F_log", rF.logpart),
                           ("G", rG.analytic), ("G_log", rG.logpart)):
            for i in range(cutoff + 1):
                if part[i] != 0:
                    residual_zero = False
                    rep.fail(i, part[i], residual=name)
                    break
        first = recurrence_holds(op, nvec, M)
        rep.details.update(
            operator_degree=op.degree, C=op.scalarC, max_checked_index=cutoff,
            residual_zero=residual_zero, recurrence_ok=first is None,
            skipped_unit_entries=op.skipped_ones,
        )
        if first is not None:
            rep.fail(first, None, residual="recurrence")
    return rep
