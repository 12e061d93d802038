"""B-dependent sets Psi_B, Z_B, the factors A_1(B), A_2(B) and the period P."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import PrimePowerProduct, RationalLike, euler_phi, factorize, prime_factors, to_fraction


def psi_set(B: int) -> list[int]:
    """{b : phi(b) <= B}.

    phi(b) >= sqrt(b/2) for every b, so nothing beyond 2B^2 + 6 can qualify.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    return [b for b in range(1, 2 * B * B + 7) if euler_phi(b) <= B]


def z_set(psi: list[int]) -> list[Fraction]:
    out = {Fraction(a, b) for b in psi for a in range(1, b + 1) if math.gcd(a, b) == 1}
    return sorted(out)


@dataclass(frozen=True)
class SieveSets:
    B: int
    psi: tuple[int, ...]
    z: tuple[Fraction, ...]
    period: int
    a1: PrimePowerProduct
    a2: PrimePowerProduct

    @property
    def z_size(self) -> int:
        return len(self.z)

    def log_a1(self) -> float:
        return self.a1.log()

    def log_a2(self) -> float:
        return self.a2.log()


def build_sieve_sets(B: int, M: int, r: RationalLike | str) -> SieveSets:
    r = to_fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if M < 1:
        raise ValueError("M must be >= 1")
    psi = psi_set(B)
    z = z_set(psi)
    weight = (2 * r + 1) * M

    a1: dict[int, Fraction] = {}
    a2: dict[int, Fraction] = {}
    lcm = 1
    for b in psi:
        phi = euler_phi(b)
        for p, e in factorize(b).items():
            a1[p] = a1.get(p, Fraction(0)) + weight * phi * e
            a2[p] = a2.get(p, Fraction(0)) + weight * phi / (p - 1)
        for p in prime_factors(b):
            lcm = math.lcm(lcm, p - 1)

    period = 2 * r.denominator * lcm
    return SieveSets(
        B=B,
        psi=tuple(psi),
        z=tuple(z),
        period=period,
        a1=PrimePowerProduct(a1),
        a2=PrimePowerProduct(a2),
    )
