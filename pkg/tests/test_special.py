from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from zetaforms.special import bernoulli, digamma, digamma_many, hurwitz_general, hurwitz_zeta, working, zeta_ratio


def test_digamma_classical_values():
    with mpmath.workprec(300):
        g = mpmath.euler
        assert abs(digamma(1, 256) + g) < mpmath.ldexp(1, -248)
        assert abs(digamma(Fraction(1, 2), 256) + g + 2 * mpmath.log(2)) < mpmath.ldexp(1, -248)
        assert abs(digamma(2, 256) - (1 - g)) < mpmath.ldexp(1, -248)


def test_digamma_rejects_non_positive():
    with pytest.raises(ValueError):
        digamma(0)
    with pytest.raises(ValueError):
        digamma(Fraction(-1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_digamma_matches_mpmath(p, q):
    x = Fraction(p, q)
    with mpmath.workprec(300):
        want = mpmath.digamma(mpmath.mpf(p) / q)
        got = digamma(x, 256)
        assert abs(got - want) <= mpmath.ldexp(abs(want) + 1, -(256 - 8))


def test_digamma_many_matches_single():
    xs = [Fraction(1, 3), Fraction(7, 2), Fraction(100, 7)]
    assert digamma_many(xs, 128) == [digamma(x, 128) for x in xs]


def test_hurwitz_classical_values():
    with mpmath.workprec(300):
        pi = mpmath.pi
        tol = mpmath.ldexp(1, -248)
        assert abs(hurwitz_zeta(2, 1, 256) - pi**2 / 6) < tol
        assert abs(hurwitz_zeta(2, Fraction(1, 2), 256) - pi**2 / 2) < tol
        assert abs(hurwitz_zeta(3, 1, 256) - mpmath.zeta(3)) < tol


def test_hurwitz_multiplication_fold():
    with working(256):
        lhs = hurwitz_zeta(3, Fraction(1, 2), 256) + hurwitz_zeta(3, 1, 256)
        assert abs(lhs - 8 * hurwitz_zeta(3, 1, 256)) < mpmath.ldexp(1, -200)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(1, 50), st.integers(1, 50))
def test_hurwitz_matches_mpmath(i, a, b):
    alpha = Fraction(min(a, b), max(a, b))
    with mpmath.workprec(300):
        want = mpmath.zeta(i, mpmath.mpf(alpha.numerator) / alpha.denominator)
        assert abs(hurwitz_zeta(i, alpha, 256) - want) <= mpmath.ldexp(want, -(256 - 8))


def test_hurwitz_high_precision():
    with mpmath.workprec(2100):
        want = mpmath.zeta(5, mpmath.mpf(1) / 3)
        assert abs(hurwitz_general(5, Fraction(1, 3), 2048) - want) <= mpmath.ldexp(want, -2040)


def test_hurwitz_domain():
    with pytest.raises(ValueError):
        hurwitz_zeta(1, 1)
    with pytest.raises(ValueError):
        hurwitz_zeta(2, Fraction(3, 2))
    with pytest.raises(ValueError):
        hurwitz_zeta(2, 0)


def test_bernoulli():
    assert bernoulli(0) == 1 and bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6) and bernoulli(12) == Fraction(-691, 2730)
    assert bernoulli(7) == 0


def test_zeta_ratio_stable_across_precisions():
    vals = [float(zeta_ratio(b)) for b in (128, 256, 512)]
    assert vals[0] == pytest.approx(1.9435964368207, abs=1e-12)
    assert max(vals) - min(vals) < 1e-12
