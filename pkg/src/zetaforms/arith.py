"""Exact integer and rational primitives.

Everything here is pure and works on Python ints and :class:`fractions.Fraction`.
Large prime-power products (the normalisation factors, D_m, Phi_n) are kept as
exponent maps so they never have to be materialised as integers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

import gmpy2

Rational = Fraction
RationalLike = Union[int, Fraction]


class Valuation(enum.Enum):
    """Distinguished value of v_p(0)."""

    INFINITY = "inf"

    def __repr__(self) -> str:
        return "+inf"


INF = Valuation.INFINITY


def to_fraction(x: RationalLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fraction_str(x: Fraction) -> str:
    """Render as ``p/q`` (always with a denominator, so it round-trips)."""
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# primes
# ---------------------------------------------------------------------------

def primes_upto(n: int) -> list[int]:
    """All primes <= n, by a bytearray sieve."""
    if n < 2:
        return []
    bs = bytearray(b"\x01") * (n + 1)
    bs[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if bs[p]:
            bs[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(bs) if v]


def is_prime(p: int) -> bool:
    return p >= 2 and bool(gmpy2.is_prime(p, 50))


def prime_factors(b: int) -> list[int]:
    """Distinct prime divisors of ``b`` in increasing order (trial division)."""
    out = []
    d = 2
    while d * d <= b:
        if b % d == 0:
            out.append(d)
            while b % d == 0:
                b //= d
        d += 1 if d == 2 else 2
    if b > 1:
        out.append(b)
    return out


def factorize(b: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for p in prime_factors(b):
        e = 0
        while b % p == 0:
            b //= p
            e += 1
        out[p] = e
    return out


# ---------------------------------------------------------------------------
# arithmetic functions
# ---------------------------------------------------------------------------

def lcm_upto(m: int) -> int:
    """D_m = lcm(1, ..., m)."""
    if m < 1:
        raise ValueError("lcm_upto needs m >= 1")
    out = 1
    for p in primes_upto(m):
        pk = p
        while pk * p <= m:
            pk *= p
        out *= pk
    return out


def log_lcm_upto(m: int) -> float:
    """log D_m as the Chebyshev sum over prime powers <= m."""
    terms = []
    for p in primes_upto(m):
        e, pk = 0, p
        while pk <= m:
            e += 1
            pk *= p
        terms.append(e * math.log(p))
    return math.fsum(terms)


def lcm_factored(m: int) -> "PrimePowerProduct":
    """D_m as an exponent map."""
    exps = {}
    for p in primes_upto(m):
        e, pk = 0, p
        while pk <= m:
            e += 1
            pk *= p
        exps[p] = e
    return PrimePowerProduct(exps)


def euler_phi(b: int) -> int:
    if b < 1:
        raise ValueError("euler_phi needs b >= 1")
    out = b
    for p in prime_factors(b):
        out -= out // p
    return out


def mu_factor(m: int, b: int) -> int:
    """mu_m(b) = b^m * prod_{p | b} p^floor(m/(p-1))."""
    if m < 1 or b < 1:
        raise ValueError("mu_factor needs m >= 1 and b >= 1")
    out = b**m
    for p in prime_factors(b):
        out *= p ** (m // (p - 1))
    return out


def padic_valuation(p: int, x: RationalLike) -> int | Valuation:
    """v_p(x) for a rational x; returns :data:`INF` for x = 0."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    x = to_fraction(x)
    if x == 0:
        return INF
    num = int(gmpy2.remove(abs(x.numerator), p)[1])
    den = int(gmpy2.remove(x.denominator, p)[1])
    return num - den


def valuation_at_least(v: int | Valuation, bound: RationalLike) -> bool:
    """``v >= bound`` with +inf handled explicitly."""
    if v is INF:
        return True
    return v >= bound


# ---------------------------------------------------------------------------
# prime power products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimePowerProduct:
    """A formal product prod p^e with rational exponents, stored sparsely."""

    exponents: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for p, e in self.exponents.items():
            e = to_fraction(e)
            if e != 0:
                clean[int(p)] = e
        object.__setattr__(self, "exponents", dict(sorted(clean.items())))

    @classmethod
    def from_int(cls, n: int) -> "PrimePowerProduct":
        if n < 1:
            raise ValueError("only positive integers factor into prime powers")
        return cls({p: Fraction(e) for p, e in factorize(n).items()})

    def __getitem__(self, p: int) -> Fraction:
        return self.exponents.get(p, Fraction(0))

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def items(self):
        return self.exponents.items()

    def __mul__(self, other: "PrimePowerProduct") -> "PrimePowerProduct":
        out = dict(self.exponents)
        for p, e in other.exponents.items():
            out[p] = out.get(p, Fraction(0)) + e
        return PrimePowerProduct(out)

    def __truediv__(self, other: "PrimePowerProduct") -> "PrimePowerProduct":
        return self * other.power(-1)

    def power(self, k: RationalLike) -> "PrimePowerProduct":
        k = to_fraction(k)
        return PrimePowerProduct({p: e * k for p, e in self.exponents.items()})

    def is_integral(self) -> bool:
        """All exponents are non-negative integers."""
        return all(e >= 0 and e.denominator == 1 for e in self.exponents.values())

    def log(self) -> float:
        return math.fsum(float(e) * math.log(p) for p, e in self.exponents.items())

    def log_mp(self):
        import mpmath

        return mpmath.fsum(mpmath.mpf(e.numerator) / e.denominator * mpmath.log(p) for p, e in self.exponents.items())

    def to_int(self) -> int:
        """Materialise; only sensible for small products."""
        if not self.is_integral():
            raise ValueError("product is not an integer")
        out = 1
        for p, e in self.exponents.items():
            out *= p ** int(e)
        return out

    def to_fraction(self) -> Fraction:
        if any(e.denominator != 1 for e in self.exponents.values()):
            raise ValueError("product has fractional exponents")
        out = Fraction(1)
        for p, e in self.exponents.items():
            out *= Fraction(p) ** int(e)
        return out


def first_obstruction(x: RationalLike, scale: PrimePowerProduct) -> int | None:
    """A prime p with v_p(x * scale) < 0, or None if x * scale is an integer.

    Works prime by prime on x's numerator and denominator; the scale itself is
    never multiplied out.  Primes of x's denominator outside the scale's
    support are reported as -1 when nothing more specific is known.
    """
    x = to_fraction(x)
    if x == 0:
        return None
    num = gmpy2.mpz(abs(x.numerator))
    den = gmpy2.mpz(x.denominator)
    for p, e in sorted(scale.items()):
        num, vn = gmpy2.remove(num, p)
        den, vd = gmpy2.remove(den, p)
        if vn - vd + e < 0:
            return p
    if den != 1:
        return -1
    return None


def product_of(factors: Iterable[PrimePowerProduct]) -> PrimePowerProduct:
    out = PrimePowerProduct()
    for f in factors:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# precision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WorkingPrecision:
    """Significand width in bits for mpmath evaluations."""

    bits: int = 256

    def __post_init__(self) -> None:
        if int(self.bits) < 64:
            raise ValueError("working precision must be at least 64 bits")


def as_precision(prec: WorkingPrecision | int | None) -> WorkingPrecision:
    if prec is None:
        return WorkingPrecision()
    if isinstance(prec, WorkingPrecision):
        return prec
    return WorkingPrecision(int(prec))
