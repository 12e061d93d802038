"""The optimisation constants r_0, F(r_0), C_0 and the sufficient conditions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .arith import WorkingPrecision, as_precision
from .omega import varpi as compute_varpi
from .params import ProofParameters
from .special import working, zeta_ratio


class TheoremInapplicable(ValueError):
    """r_0 <= 0: the lower-bound theorem does not apply to these parameters."""


class BracketError(RuntimeError):
    pass


def _xlogx(v):
    return mpmath.mpf(0) if v == 0 else v * mpmath.log(v)


def G_val(r, M: int, deltas: Sequence[int], varpi):
    """G(r), proportional to F'(r); strictly decreasing on (-delta_1/M, oo)."""
    r = mpmath.mpf(r)
    if r * M + deltas[0] <= 0:
        raise ValueError("G is defined for r > -delta_1/M")
    d1 = deltas[0]
    J = len(deltas)
    out = -2 * mpmath.mpf(varpi) + 2 * J * (M - 2 * d1)
    for d in deltas:
        w = M - 2 * d
        out += 2 * w * mpmath.log(w) - w * (mpmath.log((r + 1) * M - d) + mpmath.log(r * M + d))
    return out


def F_val(r, M: int, deltas: Sequence[int], varpi):
    r = mpmath.mpf(r)
    if r * M + deltas[0] <= 0:
        raise ValueError("F is defined for r > -delta_1/M")
    J = len(deltas)
    acc = mpmath.mpf(varpi) - J * (M - 2 * deltas[0])
    for d in deltas:
        acc += _xlogx((r + 1) * M - d) - _xlogx(r * M + d) - _xlogx(mpmath.mpf(M - 2 * d))
    return acc / ((2 * r + 1) * M * J)


def solve_r0(M: int, deltas: Sequence[int], varpi, prec: WorkingPrecision | int | None = None):
    """Root of G on (-delta_1/M, oo) by bisection, relative width <= 2^(-prec/2)."""
    bits = as_precision(prec).bits
    with working(prec):
        floor = mpmath.mpf(-deltas[0]) / M
        lo = floor + mpmath.mpf(2) ** -40 * max(1, abs(floor))
        shrink = 0
        while G_val(lo, M, deltas, varpi) <= 0:
            lo = floor + (lo - floor) / 2**20
            shrink += 1
            if shrink > 50:
                raise BracketError("G is not positive near -delta_1/M")
        hi = max(lo + 1, mpmath.mpf(1))
        grow = 0
        while G_val(hi, M, deltas, varpi) >= 0:
            lo, hi = hi, 2 * hi
            grow += 1
            if grow > 400:
                raise BracketError("G did not change sign while expanding the bracket")
        tol = mpmath.mpf(2) ** (-(bits // 2))
        while hi - lo > tol * max(abs(lo), abs(hi), mpmath.mpf(2) ** -64):
            mid = (lo + hi) / 2
            if G_val(mid, M, deltas, varpi) > 0:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2


def c0_closed_form(M: int, deltas: Sequence[int], r0, ratio):
    J = len(deltas)
    s = mpmath.fsum(mpmath.log(((r0 + 1) * M - d) / (r0 * M + d)) for d in deltas)
    return mpmath.sqrt(2 * ratio * s / J)


def c0_constant(M: int, deltas: Sequence[int], varpi, r0, prec: WorkingPrecision | int | None = None):
    """C_0 from the closed form, cross-checked against sqrt(4 ratio F(r_0))."""
    if r0 <= 0:
        raise TheoremInapplicable(f"r_0 = {mpmath.nstr(r0, 8)} <= 0: theorem inapplicable")
    bits = as_precision(prec).bits
    with working(prec):
        ratio = zeta_ratio(prec)
        closed = c0_closed_form(M, deltas, r0, ratio)
        via_f = mpmath.sqrt(4 * ratio * F_val(r0, M, deltas, varpi))
        if abs(closed - via_f) > mpmath.mpf(2) ** (-(bits // 4)) * closed:
            raise ArithmeticError("the two expressions for C_0 disagree; r_0 is not a root of G")
        return closed


@dataclass(frozen=True)
class CriterionReport:
    varpi: mpmath.mpf
    r0: mpmath.mpf
    F_r0: mpmath.mpf
    C0: Optional[mpmath.mpf]
    c_max: Optional[mpmath.mpf]
    zeta_ratio: mpmath.mpf
    prec: WorkingPrecision
    applicable: bool = True

    def r0_rational(self, max_den: int = 10**6) -> Fraction:
        """A rational approximant of r_0, for the exact tier."""
        with mpmath.workprec(self.prec.bits):
            man, exp = self.r0.man_exp
            return (Fraction(int(man)) * Fraction(2) ** int(exp)).limit_denominator(max_den)


def constants(
    params: ProofParameters,
    prec: WorkingPrecision | int | None = None,
    *,
    varpi=None,
    threads: int = 1,
) -> CriterionReport:
    """varpi, r_0, F(r_0), C_0 and the largest admissible c for one parameter set."""
    prec = as_precision(prec)
    if varpi is None:
        varpi = compute_varpi(params, prec, threads=threads)
    M, ds = params.M, params.deltas
    with working(prec):
        ratio = zeta_ratio(prec)
        r0 = solve_r0(M, ds, varpi, prec)
        F0 = F_val(r0, M, ds, varpi)
        c_max = mpmath.sqrt(4 * F0 / ratio) if F0 > 0 else None
        try:
            C0 = c0_constant(M, ds, varpi, r0, prec)
            ok = True
        except TheoremInapplicable:
            C0, ok = None, False
        return CriterionReport(
            varpi=+mpmath.mpf(varpi),
            r0=r0,
            F_r0=F0,
            C0=C0,
            c_max=c_max,
            zeta_ratio=ratio,
            prec=prec,
            applicable=ok,
        )


@dataclass(frozen=True)
class ConditionReport:
    condition_holds: bool
    margin: mpmath.mpf
    c: mpmath.mpf
    c_bound: mpmath.mpf
    c_ok: bool


def condition_margin(log_g_x0, s: int, varpi, J: int, top_width: int):
    """log g(x_0) + s (-varpi/J + (M - 2 delta_1))."""
    return log_g_x0 + s * (-mpmath.mpf(varpi) / J + top_width)


def check_condition(params: ProofParameters, c, asym, varpi, prec: WorkingPrecision | int | None = None) -> ConditionReport:
    """Evaluate the growth condition on g(x_0) and the bound on c.

    The first is the sign of log g(x_0) + s(-varpi/J + M - 2 delta_1), the
    second is c^2 < 4 zeta(6) / (zeta(2) zeta(3)) * F(r) at the configured r.
    """
    if params.s is None:
        raise ValueError("check_condition needs s in the parameters")
    with working(prec):
        margin = condition_margin(asym.log_g_x0, params.s, varpi, params.J, params.top_width)
        ratio = zeta_ratio(prec)
        r = mpmath.mpf(params.r.numerator) / params.r.denominator
        bound_sq = 4 / ratio * F_val(r, params.M, params.deltas, varpi)
        c = mpmath.mpf(c)
        return ConditionReport(
            condition_holds=bool(margin < 0),
            margin=margin,
            c=c,
            c_bound=mpmath.sqrt(bound_sq) if bound_sq > 0 else mpmath.mpf(0),
            c_ok=bool(c * c < bound_sq),
        )
