"""The floor-sum function omega, its step-function table, Phi_n and varpi.

``omega_at`` is a direct, exact evaluation of the min-over-y definition and
serves as the oracle.  ``omega_table`` evaluates omega on a superset of its
breakpoints with the fast kernel and cross-checks itself against the oracle.
"""

from __future__ import annotations

import bisect
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from . import kernels
from .arith import PrimePowerProduct, RationalLike, WorkingPrecision, primes_upto, to_fraction
from .params import ProofParameters
from .special import digamma_many, mpf_of, working


class OmegaTableError(RuntimeError):
    """The breakpoint superset missed a jump of omega."""


def omega_at(x: RationalLike, params: ProofParameters) -> int:
    """omega(x) by brute force over candidate y values, in exact integer arithmetic.

    The objective is piecewise constant in y with jumps only at 0, frac(delta_j x)
    and frac((M - delta_j) x); it is evaluated at each of those and at the
    midpoint of every gap (including the gap up to 1).
    """
    x = to_fraction(x)
    if x <= 0:
        raise ValueError("omega_at needs x > 0")
    p, q = x.numerator, x.denominator
    M, ds = params.M, params.deltas
    Q = 2 * q  # every candidate y is an integer multiple of 1/Q
    cands = {0}
    for d in ds:
        cands.add(2 * ((d * p) % q))
        cands.add(2 * (((M - d) * p) % q))
    pts = sorted(cands)
    ys = list(pts)
    for lo, hi in zip(pts, pts[1:] + [Q]):
        ys.append((lo + hi) // 2 if (lo + hi) % 2 == 0 else None)
    # odd sums cannot occur: every candidate is even and Q is even
    best = None
    for Y in ys:
        if Y is None:  # pragma: no cover
            raise AssertionError("midpoint fell off the 1/(2q) grid")
        total = 0
        for d in ds:
            total += ((M - 2 * d) * p) // q - (Y - 2 * d * p) // Q - (2 * (M - d) * p - Y) // Q
        if best is None or total < best:
            best = total
    return best


# ---------------------------------------------------------------------------
# step function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepFunction:
    """Exact piecewise-constant function on [0, 1].

    ``values[i]`` holds on the open interval (breakpoints[i], breakpoints[i+1]);
    ``point_values[i]`` at breakpoints[i] itself.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[int, ...]
    point_values: tuple[int, ...]

    def __post_init__(self) -> None:
        bp = self.breakpoints
        if len(bp) < 2 or bp[0] != 0 or bp[-1] != 1:
            raise ValueError("breakpoints must run from 0 to 1")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(self.values) != len(bp) - 1 or len(self.point_values) != len(bp):
            raise ValueError("value arrays do not match the breakpoints")
        if min(self.values) < 0:
            raise ValueError("step values must be non-negative")

    def __call__(self, x: RationalLike) -> int:
        x = to_fraction(x)
        if not 0 <= x <= 1:
            raise ValueError("step function is defined on [0, 1]")
        i = bisect.bisect_left(self.breakpoints, x)
        if self.breakpoints[i] == x:
            return self.point_values[i]
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    def intervals(self):
        bp = self.breakpoints
        for i, v in enumerate(self.values):
            yield bp[i], bp[i + 1], v


def farey(order: int) -> list[tuple[int, int]]:
    """Reduced fractions in [0, 1] with denominator <= order, ascending, as (num, den)."""
    a, b, c, d = 0, 1, 1, order
    out = [(0, 1)]
    while c <= order:
        k = (order + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        out.append((a, b))
    return out


def _batched(nums: Sequence[int], dens: Sequence[int], params: ProofParameters, threads: int) -> list[int]:
    M, ds = params.M, list(params.deltas)
    if threads <= 1 or len(nums) < 4096:
        return kernels.omega_batch(nums, dens, M, ds)
    size = math.ceil(len(nums) / threads)
    chunks = [(nums[i : i + size], dens[i : i + size]) for i in range(0, len(nums), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: kernels.omega_batch(c[0], c[1], M, ds), chunks))
    return [v for part in parts for v in part]


def omega_table(
    params: ProofParameters,
    *,
    merge: bool = True,
    validate: int = 1000,
    seed: int = 0,
    threads: int = 1,
) -> StepFunction:
    """omega on [0, 1] as an exact step function.

    Candidate breakpoints are all k/d with d <= 2M; omega is sampled at each
    candidate and at the midpoint of each gap.  ``validate`` random rationals
    are then checked against :func:`omega_at`.
    """
    fr = farey(2 * params.M)
    mid_n = [a * d + c * b for (a, b), (c, d) in zip(fr, fr[1:])]
    mid_d = [2 * b * d for (a, b), (c, d) in zip(fr, fr[1:])]
    inner = _batched(mid_n, mid_d, params, threads)
    at_pts = _batched([a for a, _ in fr], [b for _, b in fr], params, threads)

    idx = [0]
    vals: list[int] = []
    for i, v in enumerate(inner):
        # interval i runs from fr[i] to fr[i + 1]; fr[i] is idx[-1]
        if merge and vals and vals[-1] == v and at_pts[i] == v:
            idx[-1] = i + 1
        else:
            vals.append(v)
            idx.append(i + 1)

    table = StepFunction(
        breakpoints=tuple(Fraction(*fr[i]) for i in idx),
        values=tuple(vals),
        point_values=tuple(at_pts[i] for i in idx),
    )
    if validate:
        rng = random.Random(seed)
        for _ in range(validate):
            den = rng.randint(1, 10**6)
            x = Fraction(rng.randint(1, den), den)
            got, want = table(x), omega_at(x, params)
            if got != want:
                raise OmegaTableError(f"omega table gives {got} at x={x}, direct evaluation {want}")
    return table


def phi_n(n: int, params: ProofParameters) -> PrimePowerProduct:
    """Phi_n = prod_{sqrt(Mn) < p <= (M - 2 delta_1) n} p^omega(n/p)."""
    if n < 1:
        raise ValueError("n must be positive")
    primes = phi_primes(n, params)
    exps = kernels.omega_batch([n] * len(primes), primes, params.M, list(params.deltas))
    return PrimePowerProduct({p: e for p, e in zip(primes, exps) if e})


def phi_primes(n: int, params: ProofParameters) -> list[int]:
    Mn = params.M * n
    return [p for p in primes_upto(params.top_width * n) if p * p > Mn]


def log_phi_n(n: int, params: ProofParameters) -> float:
    return phi_n(n, params).log()


def varpi(
    params: ProofParameters,
    prec: WorkingPrecision | int | None = None,
    *,
    table: StepFunction | None = None,
    merge: bool = True,
    threads: int = 1,
    validate: int = 1000,
):
    """int_0^1 omega dpsi - int_0^{1/(M - 2 delta_1)} omega(x) dx / x^2.

    Both integrals are exact sums over the table: psi differences at the ends
    of each interval, and 1/x_left - 1/x_right for the second.  The interval
    at 0 must carry omega = 0, otherwise the two integrals diverge separately.
    """
    if table is None:
        table = omega_table(params, merge=merge, threads=threads, validate=validate)
    if table.values[0] != 0:
        raise ValueError("omega does not vanish next to 0; the table is corrupt")
    cut = Fraction(1, params.top_width)
    bp = table.breakpoints

    # psi part: sum over breakpoints of psi(x_b) * (omega left of b - omega right of b)
    weights: dict[int, int] = {}
    inverse_part = Fraction(0)
    for i, v in enumerate(table.values):
        if v == 0:
            continue
        weights[i + 1] = weights.get(i + 1, 0) + v
        weights[i] = weights.get(i, 0) - v
        lo, hi = bp[i], bp[i + 1]
        if lo < cut:
            inverse_part += v * (1 / lo - 1 / min(hi, cut))
    nodes = sorted(b for b, w in weights.items() if w)
    with working(prec):
        psis = digamma_many([bp[b] for b in nodes], prec)
        psi_part = mpmath.fsum(weights[b] * v for b, v in zip(nodes, psis))
        return +(psi_part - mpf_of(inverse_part))


def fixed_decimal(x, places: int = 12) -> str:
    """Round to ``places`` decimals and render without exponent."""
    with mpmath.workprec(max(mpmath.mp.prec, 128)):
        scaled = int(mpmath.nint(mpmath.mpf(x) * mpmath.mpf(10) ** places))
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}" if places else f"{sign}{digits}"
