"""Pure-Python omega kernel; the reference the compiled kernel must match."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Sequence


def omega_pq(p: int, q: int, M: int, deltas: Sequence[int]) -> int:
    """omega(p/q) for p >= 0, q > 0 by a sweep over the jump points in y.

    With a_j = frac(delta_j x) and b_j = frac((M - delta_j) x) the y-dependent
    part of the objective is #{a_j > y} + #{b_j < y}; its minimum over [0, 1)
    is attained at 0 or at one of the a_j, b_j.
    """
    J = len(deltas)
    const = 0
    A = []
    B = []
    for d in deltas:
        u = d * p
        v = (M - d) * p
        const += ((M - 2 * d) * p) // q + u // q - v // q
        A.append(u % q)
        B.append(v % q)
    A.sort()
    B.sort()
    best = J + J
    for y in (0, *A, *B):
        val = J - bisect_right(A, y) + bisect_left(B, y)
        if val < best:
            best = val
    return const + best


def omega_batch(nums: Sequence[int], dens: Sequence[int], M: int, deltas: Sequence[int]) -> list[int]:
    ds = [int(d) for d in deltas]
    return [omega_pq(int(p), int(q), M, ds) for p, q in zip(nums, dens)]
