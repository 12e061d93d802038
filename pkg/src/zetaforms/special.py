"""Digamma and Hurwitz zeta at rational arguments, to a requested bit precision.

The series and their truncation rules live here; mpmath (and MPFR through
gmpy2 for the digamma inner loop) only supply the floating-point type.  Callers doing further arithmetic on the results
should stay inside :func:`working` so mpmath's global precision matches.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

import gmpy2

import mpmath

from .arith import RationalLike, WorkingPrecision, as_precision, to_fraction

GUARD_BITS = 32


@contextmanager
def working(prec: WorkingPrecision | int | None) -> Iterator[int]:
    """Set mpmath's working precision to ``prec`` plus guard bits."""
    bits = as_precision(prec).bits + GUARD_BITS
    with mpmath.workprec(bits):
        yield bits


def mpf_of(x: RationalLike | str):
    x = to_fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


@lru_cache(maxsize=None)
def _bernoulli_table(upto: int) -> tuple[Fraction, ...]:
    """B_0..B_upto (B_1 = -1/2), from the standard recurrence."""
    B = [Fraction(1)]
    for m in range(1, upto + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * B[k]
            binom = binom * (m + 1 - k) // (k + 1)
        B.append(-acc / (m + 1))
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    size = 64
    while size < n:
        size *= 2
    return _bernoulli_table(size)[n]


@lru_cache(maxsize=16)
def _digamma_coeffs(bits: int) -> tuple:
    """B_2k / (2k) as MPFR floats at ``bits``."""
    with gmpy2.context(precision=bits):
        out = []
        for k in range(1, bits // 4 + 8):
            b = bernoulli(2 * k)
            out.append(gmpy2.mpfr(b.numerator) / (b.denominator * 2 * k))
        return tuple(out)


def _shift_threshold(bits: int) -> int:
    # the asymptotic terms behave like (2k)!/(2 pi z)^(2k); at z ~ bits/5 about
    # bits/14 of them reach 2^-bits
    return max(12, bits // 5)


def _to_mpf(v) -> mpmath.mpf:
    man, exp = v.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def _digamma_core(num: int, den: int, bits: int, coeffs, eps):
    x = gmpy2.mpfr(num) / den
    shift = max(0, _shift_threshold(bits) - num // den)
    acc = gmpy2.mpfr(0)
    for j in range(shift):
        acc += 1 / (x + j)
    z = x + shift
    z2inv = 1 / (z * z)
    out = gmpy2.log(z) - 1 / (2 * z)
    zpow = z2inv
    for c in coeffs:
        term = c * zpow
        out -= term
        if abs(term) < eps:
            break
        zpow *= z2inv
    else:  # pragma: no cover - the threshold keeps the series short
        raise ArithmeticError("digamma asymptotic series did not settle")
    return out - acc


def digamma_many(xs: Iterable[RationalLike], prec: WorkingPrecision | int | None = None) -> list:
    """:func:`digamma` over many rationals, sharing the per-precision setup."""
    bits = as_precision(prec).bits + GUARD_BITS
    coeffs = _digamma_coeffs(bits)
    out = []
    with gmpy2.context(precision=bits):
        eps = gmpy2.mpfr(2) ** (-bits)
        for x in xs:
            x = to_fraction(x)
            if x <= 0:
                raise ValueError("digamma is only evaluated for x > 0")
            out.append(_to_mpf(_digamma_core(x.numerator, x.denominator, bits, coeffs, eps)))
    return out


def digamma(x: RationalLike | str, prec: WorkingPrecision | int | None = None):
    """psi(x) for rational x > 0.

    Upward recurrence psi(x) = psi(x + N) - sum_{j<N} 1/(x + j) moves the
    argument past a precision-dependent threshold, then the asymptotic series
    ln z - 1/(2z) - sum B_2k / (2k z^2k) is summed until a term drops below the
    target; for real z > 0 the remainder is bounded by the first omitted term.
    Arithmetic runs on MPFR floats; the result is an mpmath float.
    """
    return digamma_many([x], prec)[0]


def hurwitz_general(i: int, alpha, prec: WorkingPrecision | int | None = None):
    """zeta(i, alpha) for integer i >= 2 and real alpha > 0 (mpf or rational).

    Euler-Maclaurin with N explicit terms; for real arguments the remainder
    after the last Bernoulli term is bounded by the next term, which is what
    the loop stops on.
    """
    if i < 2:
        raise ValueError("Hurwitz zeta needs i >= 2")
    with working(prec) as bits:
        a = alpha if isinstance(alpha, mpmath.mpf) else mpf_of(alpha)
        if a <= 0:
            raise ValueError("Hurwitz zeta needs alpha > 0")
        eps = mpmath.ldexp(1, -bits)
        n_direct = max(0, math.ceil(bits / 4 + i / 2 - float(a)))
        head = mpmath.fsum((a + m) ** (-i) for m in range(n_direct))
        z = a + n_direct
        zi = z ** (-i)
        tail = z * zi / (i - 1) + zi / 2
        # term_k = B_2k/(2k)! * i(i+1)...(i+2k-2) * z^(-i-2k+1)
        rising = mpmath.mpf(i)
        zpow = zi / z
        z2inv = 1 / (z * z)
        fact = mpmath.mpf(2)
        k = 1
        while True:
            term = mpmath.bernoulli(2 * k) / fact * rising * zpow
            tail += term
            if abs(term) < eps * abs(tail) * mpmath.ldexp(1, -2):
                break
            rising *= (i + 2 * k - 1) * (i + 2 * k)
            fact *= (2 * k + 1) * (2 * k + 2)
            zpow *= z2inv
            k += 1
            if k > 4 * bits:
                raise ArithmeticError("Euler-Maclaurin tail did not settle; increase the direct range")
        return +(head + tail)


def hurwitz_zeta(i: int, alpha: RationalLike | str, prec: WorkingPrecision | int | None = None):
    """zeta(i, alpha) = sum_{m >= 0} (m + alpha)^(-i) for 0 < alpha <= 1."""
    alpha = to_fraction(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if i < 2:
        raise ValueError("Hurwitz zeta needs i >= 2")
    return hurwitz_general(i, alpha, prec)


def zeta_ratio(prec: WorkingPrecision | int | None = None):
    """zeta(2) zeta(3) / zeta(6)."""
    with working(prec):
        return hurwitz_zeta(2, 1, prec) * hurwitz_zeta(3, 1, prec) / hurwitz_zeta(6, 1, prec)
