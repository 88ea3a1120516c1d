"""The Landau step function of a factorial ratio and its properties."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factor_data, vp_int


class LandauViolation(AssertionError):
    """A structural property of Delta failed; carries the offending point."""

    def __init__(self, prop: str, N: int, x: Fraction, detail: str = ""):
        self.prop, self.N, self.x, self.detail = prop, N, x, detail
        super().__init__(f"Delta_{N}: property {prop} fails at x = {x}. {detail}".strip())


def floor_sum_delta(alphas, betas, x) -> int:
    x = Fraction(x)
    return sum(math.floor(a * x) for a in alphas) - sum(math.floor(b * x) for b in betas)


def delta(N: int, x) -> int:
    """sum floor(alpha_i x) - sum floor(beta_i x) for the factor vectors of N."""
    fd = factor_data(N)
    return floor_sum_delta(fd.alphas, fd.betas, x)


def landau_integral(alphas, betas) -> bool:
    """Landau's criterion: prod (a m)!/prod (b m)! is integral for every m iff
    the floor-sum difference is non-negative on [0, 1). Requires equal sums
    (which makes the function 1-periodic)."""
    if sum(alphas) != sum(betas):
        raise ValueError("criterion implemented for balanced vectors only")
    D = math.lcm(*alphas, *betas) if (alphas or betas) else 1
    return all(floor_sum_delta(alphas, betas, Fraction(k, D)) >= 0 for k in range(D))


@dataclass
class DeltaProfile:
    N: int
    jump_positions: list[Fraction] = field(default_factory=list)
    jump_sizes: list[int] = field(default_factory=list)
    plateau_values: list[int] = field(default_factory=list)
    grid: int = 1

    def plateaus(self):
        """(x_lo, x_hi, value) triples covering [0, 1)."""
        edges = [Fraction(0)] + list(self.jump_positions) + [Fraction(1)]
        return [(edges[i], edges[i + 1], v) for i, v in enumerate(self.plateau_values)]

    def to_csv(self) -> str:
        lines = ["x_lo,x_hi,value"]
        for lo, hi, v in self.plateaus():
            lines.append(f"{lo},{hi},{v}")
        return "\n".join(lines) + "\n"


def delta_profile(N: int) -> DeltaProfile:
    """Scan Delta_N on the grid k/D, D = lcm of the factor vectors, and check
    periodicity, weak increase on [0, 1), non-negativity, Delta >= 1 at
    reduced fractions with denominator in 2..N, and that the jumps are +1 at
    exactly the r/N with gcd(r, N) = 1."""
    if N < 2:
        raise ValueError("profile needs N >= 2")
    fd = factor_data(N)
    D = math.lcm(*fd.alphas, *fd.betas)
    values = [delta(N, Fraction(k, D)) for k in range(D)]

    prof = DeltaProfile(N, grid=D)
    prof.plateau_values.append(values[0])
    for k in range(D):
        x = Fraction(k, D)
        for shift in (-1, 1, 2):
            if delta(N, x + shift) != values[k]:
                raise LandauViolation("(i) periodicity", N, x, f"shift {shift}")
        if values[k] < 0:
            raise LandauViolation("(iii) non-negativity", N, x, f"value {values[k]}")
        if k and values[k] != values[k - 1]:
            jump = values[k] - values[k - 1]
            if jump < 0:
                raise LandauViolation("(ii) weak increase", N, x, f"jump {jump}")
            prof.jump_positions.append(x)
            prof.jump_sizes.append(jump)
            prof.plateau_values.append(values[k])
    if values[0] != 0:
        raise LandauViolation("(i) periodicity", N, Fraction(0), "Delta(0) != 0")

    # (iv) within one period; periodicity carries it to all rationals
    for b in range(2, N + 1):
        for a in range(1, b):
            if math.gcd(a, b) == 1 and delta(N, Fraction(a, b)) < 1:
                raise LandauViolation("(iv) Delta(r) >= 1", N, Fraction(a, b))

    expected = [Fraction(r, N) for r in fd.residues if r < N]
    if prof.jump_positions != expected:
        raise LandauViolation("jump locations", N, Fraction(0),
                              f"found {prof.jump_positions}, expected {expected}")
    if any(s != 1 for s in prof.jump_sizes):
        raise LandauViolation("jump sizes", N, Fraction(0), f"sizes {prof.jump_sizes}")
    return prof


def delta_valuation(N: int, m: int, p: int) -> int:
    """sum over l >= 1 of Delta_N(m / p^l), which equals v_p(B_N(m))."""
    fd = factor_data(N)
    top = max(fd.alphas, default=0) * m
    total = 0
    pl = p
    while pl <= top:
        total += delta(N, Fraction(m, pl))
        pl *= p
    return total


def check_valuation_identity(N: int, m: int, p: int, B: int) -> bool:
    return delta_valuation(N, m, p) == vp_int(B, p)
