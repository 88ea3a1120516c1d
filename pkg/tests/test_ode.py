from fractions import Fraction

import pytest

from mirrormap import arith, mirror, ode
from mirrormap.mirror import BOLD, PLAIN, MirrorFamily
from mirrormap.series import TruncSeries


def expand(roots):
    poly = [Fraction(1)]
    for r in roots:
        poly = ode.poly_mul(poly, [r, Fraction(1)])
    return poly


def test_build_operator_quintic():
    op = ode.build_operator((5,))
    assert op.degree == 4 and op.scalarC == 5 ** 5
    assert list(op.poly0) == [0, 0, 0, 0, 1]
    assert list(op.poly1) == expand([Fraction(r, 5) for r in range(1, 5)])


def test_build_operator_two():
    op = ode.build_operator((2,))
    assert op.degree == 1 and op.scalarC == 4
    assert list(op.poly1) == [Fraction(1, 2), 1]


def test_build_operator_skips_ones():
    op = ode.build_operator((1, 2, 3, 6))
    assert op.skipped_ones == 1
    assert op.degree == 1 + 2 + 2
    assert op.scalarC == 4 * 27 * 432
    with pytest.raises(ValueError):
        ode.apply_and_verify((1,), 10)


def test_ratio_test_for_binomials():
    op = ode.build_operator((2,))
    for m in range(30):
        A0, A1 = arith.B_bold(2, m), arith.B_bold(2, m + 1)
        assert Fraction(A1, A0) == 4 * (m + Fraction(1, 2)) / (m + 1)
    assert ode.recurrence_holds(op, (2,), 30) is None


@pytest.mark.parametrize("nvec", [(3,), (5,), (6,), (2, 3), (4,), (1, 2, 3, 6)])
def test_operator_annihilates_both_solutions(nvec):
    rep = ode.apply_and_verify(nvec, 50)
    assert rep.passed, rep.to_json()
    assert rep.details["max_checked_index"] == 49
    assert rep.details["residual_zero"] and rep.details["recurrence_ok"]


def test_divisor_expanded_six():
    # plain (6) equals bold over its divisors, so the same operator kills it
    M = 30
    F_plain = mirror.series_F(MirrorFamily((6,), PLAIN, None, M))
    assert F_plain == mirror.series_F(MirrorFamily((1, 2, 3, 6), BOLD, None, M))
    op = ode.build_operator((1, 2, 3, 6))
    res = ode.apply_operator(op, ode.LogSeries(F_plain, TruncSeries.zero(M)))
    assert all(res.analytic[i] == 0 for i in range(M))


def test_first_order_case_has_no_log_solution():
    # theta - 4z(theta + 1/2) is first order: the log solution cannot exist
    rep = ode.apply_and_verify((2,), 50)
    assert not rep.passed
    assert rep.details["residual"] == "G" and rep.first_bad_index == 0 and rep.witness == 1
    assert rep.details["recurrence_ok"]


def test_log_bookkeeping():
    # the log part of L[G + log z F] is L[F]
    M = 20
    op = ode.build_operator((3,))
    F = mirror.series_F(MirrorFamily((3,), BOLD, None, M))
    G = mirror.series_G(MirrorFamily((3,), BOLD, None, M))
    out = ode.apply_operator(op, ode.LogSeries(G, F))
    plain = ode.apply_operator(op, ode.LogSeries(F, TruncSeries.zero(M)))
    assert out.logpart == plain.analytic


def test_theta_on_log_series():
    M = 5
    a = TruncSeries([1, 2, 3, 4, 5, 6])
    b = TruncSeries([0, 1, 0, 0, 0, 0])
    t = ode.LogSeries(a, b).theta()
    assert t.analytic == a.theta() + b and t.logpart == b.theta()
    with pytest.raises(ValueError):
        ode.LogSeries(a, TruncSeries.zero(M - 1))


def test_poly_eval():
    assert ode.poly_eval([1, 2, 3], 2) == 17
