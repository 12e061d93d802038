"""The growth functions f, g, u of the linear forms and their roots x_0, x_1, x_2.

Everything is evaluated in log space: g carries the factors A_1(B) A_2(B),
whose size rules out any direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .arith import WorkingPrecision, as_precision
from .params import ProofParameters
from .sieve import SieveSets
from .special import mpf_of, working


class RootBracketError(RuntimeError):
    """Bisection could not find a sign change."""


def _check_x(x) -> mpmath.mpf:
    x = mpmath.mpf(x)
    if x <= 0:
        raise ValueError("x must be positive")
    return x


def _common(params: ProofParameters, sieve: SieveSets):
    r = mpf_of(params.r)
    M = params.M
    return r, M, sieve.z_size, mpmath.mpf(params.s) / params.J


def _need_s(params: ProofParameters) -> None:
    if params.s is None:
        raise ValueError("the growth functions need s in the parameters")


def log_f(x, params: ProofParameters, sieve: SieveSets, prec: WorkingPrecision | int | None = None):
    _need_s(params)
    with working(prec):
        x = _check_x(x)
        r, M, Z, sJ = _common(params, sieve)
        out = Z * (mpmath.log((2 * r + 1) * M + x) - mpmath.log(x))
        out += mpmath.log(r * M + x) - mpmath.log((r + 1) * M + x)
        for d in params.deltas:
            out += sJ * (mpmath.log(r * M + d + x) - mpmath.log((r + 1) * M - d + x))
        return out


def log_g(x, params: ProofParameters, sieve: SieveSets, prec: WorkingPrecision | int | None = None):
    _need_s(params)
    with working(prec):
        x = _check_x(x)
        r, M, Z, sJ = _common(params, sieve)
        out = sieve.a1.log_mp() + sieve.a2.log_mp()
        out += ((2 * r + 1) * M * Z - M) * mpmath.log(params.den_r)
        for d in params.deltas:
            w = M - 2 * d
            out += sJ * w * mpmath.log(w)
        out += (2 * r + 1) * M * Z * mpmath.log((2 * r + 1) * M + x)
        out += r * M * mpmath.log(r * M + x) - (r + 1) * M * mpmath.log((r + 1) * M + x)
        for d in params.deltas:
            lo, hi = r * M + d, (r + 1) * M - d
            out += sJ * (lo * mpmath.log(lo + x) - hi * mpmath.log(hi + x))
        return out


def log_h(x, params: ProofParameters, sieve: SieveSets, prec: WorkingPrecision | int | None = None):
    """log of h(x) = f(x)^x g(x)."""
    with working(prec):
        x = _check_x(x)
        return x * log_f(x, params, sieve, prec) + log_g(x, params, sieve, prec)


def u_val(x, params: ProofParameters, sieve: SieveSets, prec: WorkingPrecision | int | None = None):
    """u(x) with f'/f = u(x) / (x ((2r+1)M + x)); increasing in x."""
    _need_s(params)
    with working(prec):
        x = _check_x(x)
        r, M, Z, sJ = _common(params, sieve)
        out = -(2 * r + 1) * M * Z + M * (1 - (r * M) * ((r + 1) * M) / ((r * M + x) * ((r + 1) * M + x)))
        for d in params.deltas:
            lo, hi = r * M + d, (r + 1) * M - d
            out += sJ * (M - 2 * d) * (1 - lo * hi / ((lo + x) * (hi + x)))
        return out


@dataclass(frozen=True)
class AsymptoticsReport:
    x1: mpmath.mpf
    x0: mpmath.mpf
    x2: mpmath.mpf | None
    log_g_x0: mpmath.mpf
    prec: WorkingPrecision

    @property
    def log_h_x0(self):
        """log h(x_0); equals log g(x_0) because f(x_0) = 1."""
        return self.log_g_x0


def _bisect(fn, lo, hi, bits: int, increasing: bool):
    # near full width: the residual checks on f(x_0) and u(x_1) are at 2^-(bits - 16)
    tol = mpmath.mpf(2) ** (-(bits - 4))
    while hi - lo > tol * hi:
        mid = (lo + hi) / 2
        if (fn(mid) < 0) == increasing:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def solve_roots(
    params: ProofParameters,
    sieve: SieveSets,
    s: int | None = None,
    prec: WorkingPrecision | int | None = None,
) -> AsymptoticsReport:
    """x_1 (root of u), x_0 (root of log f) and the bound x_2.

    x_2 exists only when s > (2r+1)M|Z_B|; otherwise the upper end of the
    bracket for x_1 is found by doubling, as long as u is eventually positive.
    """
    if s is not None and s != params.s:
        params = params.with_(s=s)
    _need_s(params)
    prec = as_precision(prec)
    with working(prec):
        r, M, Z, _ = _common(params, sieve)
        base = (2 * r + 1) * M * Z
        x2 = (2 * r + 1) ** 2 * M**2 * Z / (params.s - base) if params.s > base else None

        def u(x):
            return u_val(x, params, sieve, prec)

        def lf(x):
            return log_f(x, params, sieve, prec)

        hi = x2 if x2 is not None else mpmath.mpf(M)
        grow = 0
        while u(hi) <= 0:
            hi *= 2
            grow += 1
            if grow > 200:
                samples = ", ".join(mpmath.nstr(u(mpmath.mpf(10) ** k), 6) for k in range(0, 7, 2))
                raise RootBracketError(f"u stays non-positive; u(1), u(100), u(1e4), u(1e6) = {samples}")
        lo = hi / 2
        while u(lo) >= 0:
            lo /= 2
        x1 = _bisect(u, lo, hi, prec.bits, increasing=True)

        lo = x1 / 2
        shrink = 0
        while lf(lo) <= 0:
            lo /= 2
            shrink += 1
            if shrink > 400:
                raise RootBracketError("log f is not positive near 0")
        if lf(x1) >= 0:
            raise RootBracketError(f"log f(x_1) = {mpmath.nstr(lf(x1), 6)} is not negative")
        x0 = _bisect(lf, lo, x1, prec.bits, increasing=False)
        return AsymptoticsReport(x1=x1, x0=x0, x2=x2, log_g_x0=log_g(x0, params, sieve, prec), prec=prec)
