"""The rational functions R_n(t), their partial fractions and the linear forms.

R_n(t) is never expanded.  It is held as a constant times a product of linear
factors (t + c)^e with rational shifts c and signed multiplicities e, which is
enough for exact evaluation, exact partial fractions at every pole and
numerical summation of the series S_{n,theta}.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq

from .arith import PrimePowerProduct, RationalLike, WorkingPrecision, as_precision, to_fraction
from .params import ProofParameters
from .sieve import SieveSets
from .special import hurwitz_general, mpf_of, working


class FormError(ValueError):
    """The requested form cannot be built for these parameters."""


def _fr(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True)
class FactoredForm:
    """R_n(t) = scalar * power_scalar * (2t + Mn)^[extra_linear] * prod (t + c)^e."""

    n: int
    s: int
    M: int
    rMn: int
    scalar: Fraction
    power_scalar: PrimePowerProduct
    factors: tuple[tuple[Fraction, int], ...]
    extra_linear: bool = True

    @property
    def degree(self) -> int:
        return (1 if self.extra_linear else 0) + sum(e for _, e in self.factors)

    @property
    def numerator_degree(self) -> int:
        return (1 if self.extra_linear else 0) + sum(e for _, e in self.factors if e > 0)

    @property
    def denominator_degree(self) -> int:
        return -sum(e for _, e in self.factors if e < 0)

    def poles(self) -> list[int]:
        return sorted(int(c) for c, e in self.merged_factors() if e < 0)

    def lead(self) -> Fraction:
        """Constant in front of the monic product, the 2 of 2t + Mn included."""
        return self._lead

    def merged_factors(self) -> list[tuple[Fraction, int]]:
        """Factors with the linear term folded in as (t + Mn/2)."""
        return list(self._merged)

    @cached_property
    def _merged(self) -> tuple[tuple[Fraction, int], ...]:
        out: dict[Fraction, int] = defaultdict(int)
        for c, e in self.factors:
            out[c] += e
        if self.extra_linear:
            out[Fraction(self.M * self.n, 2)] += 1
        return tuple(sorted((c, e) for c, e in out.items() if e))

    @cached_property
    def _lead(self) -> Fraction:
        c = self.scalar * self.power_scalar.to_fraction()
        return 2 * c if self.extra_linear else c

    def order_at(self, t: RationalLike) -> int:
        """Multiplicity of t as a zero (positive) or pole (negative) of R_n."""
        c = -to_fraction(t)
        return dict(self._merged).get(c, 0)

    def step_ratio(self) -> list[tuple[Fraction, int]]:
        """R_n(t + 1) / R_n(t) as prod (t + d)^(e(d - 1) - e(d)).

        Runs of consecutive shifts telescope, so only run ends survive.
        """
        ex = dict(self._merged)
        ds = set(ex) | {c + 1 for c in ex}
        out = [(d, ex.get(d - 1, 0) - ex.get(d, 0)) for d in sorted(ds)]
        return [(d, e) for d, e in out if e]

    def evaluate(self, t: RationalLike) -> Fraction:
        """Exact R_n(t); raises ZeroDivisionError at a pole."""
        t = to_fraction(t)
        num = mpq(1)
        den = mpq(1)
        tq = mpq(t.numerator, t.denominator)
        for c, e in self._merged:
            v = tq + mpq(c.numerator, c.denominator)
            if e > 0:
                num *= v**e
            else:
                den *= v ** (-e)
        lead = self.lead()
        return _fr(mpq(lead.numerator, lead.denominator) * num / den)

    def evaluate_mp(self, t):
        """R_n(t) in the current mpmath precision; t is an mpf."""
        lead = self.lead()
        acc = mpmath.mpf(lead.numerator) / lead.denominator
        for c, e in self._merged:
            acc *= (t + mpf_of(c)) ** e
        return acc


def build_rational_function(n: int, params: ProofParameters, sieve: SieveSets) -> FactoredForm:
    """R_n(t) for n a multiple of the period."""
    if params.s is None:
        raise FormError("s must be set to build R_n")
    if n < 1 or n % sieve.period:
        raise FormError(f"n = {n} is not a positive multiple of the period {sieve.period}")
    M, J, s, r = params.M, params.J, params.s, params.r
    den_r = r.denominator
    rMn = r * M * n
    if rMn.denominator != 1:  # pragma: no cover - excluded by the period
        raise FormError("rMn is not an integer")
    rMn = int(rMn)
    width = int((2 * r + 1) * M * n)
    zs = len(sieve.z)

    fact_exp = den_r * (2 * r + 1) * M * zs - den_r * M
    if fact_exp.denominator != 1:  # pragma: no cover
        raise FormError("factorial exponent is not an integer")
    block = math.factorial(n // den_r)
    scalar = Fraction(1)
    for d in params.deltas:
        scalar *= Fraction(math.factorial((M - 2 * d) * n)) ** (s // J)
    scalar /= Fraction(block) ** int(fact_exp)
    power = (sieve.a1 * sieve.a2).power(n)
    if not power.is_integral():
        raise FormError("A_1^n A_2^n is not an integer; n must be a multiple of the period")

    mult: dict[Fraction, int] = defaultdict(int)
    for m in range(rMn):
        mult[Fraction(-rMn + m)] += 1
        mult[Fraction(M * n + 1 + m)] += 1
    for theta in sieve.z:
        if theta == 1:
            continue
        for m in range(width):
            mult[Fraction(-rMn) + theta + m] += 1
    for d in params.deltas:
        for m in range((M - 2 * d) * n + 1):
            mult[Fraction(d * n + m)] -= s // J
    factors = tuple(sorted((c, e) for c, e in mult.items() if e))

    form = FactoredForm(
        n=n,
        s=s,
        M=M,
        rMn=rMn,
        scalar=scalar,
        power_scalar=power,
        factors=factors,
        extra_linear=True,
    )
    if form.degree > -2:
        raise FormError(f"deg R_n = {form.degree} > -2; increase s relative to (2r+1)M|Z_B|")
    return form


# ---------------------------------------------------------------------------
# partial fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialFractionTable:
    n: int
    s: int
    k_min: int
    k_max: int
    coefficients: tuple[tuple[Fraction, ...], ...]  # [i - 1][k - k_min]

    def a(self, i: int, k: int) -> Fraction:
        return self.coefficients[i - 1][k - self.k_min]

    def ks(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def column_sum(self, i: int) -> Fraction:
        return sum(self.coefficients[i - 1], Fraction(0))

    def evaluate(self, t: RationalLike) -> Fraction:
        """sum_i sum_k a[i][k] / (t + k)^i, exactly."""
        t = to_fraction(t)
        tq = mpq(t.numerator, t.denominator)
        acc = mpq(0)
        for k in self.ks():
            inv = 1 / (tq + k)
            pw = inv
            for i in range(1, self.s + 1):
                a = self.coefficients[i - 1][k - self.k_min]
                if a:
                    acc += mpq(a.numerator, a.denominator) * pw
                pw *= inv
        return _fr(acc)


class _ShiftClass:
    """Factors whose shifts share one fractional part, with prefix tables.

    For d = theta + j (j integer, d != 0) the tables hold running sums of
    d^-l for l = 1..L and running products of d, so any block of consecutive
    shifts contributes O(L) operations per pole.
    """

    def __init__(self, theta: Fraction, entries: Mapping[int, int], j_lo: int, j_hi: int, L: int):
        self.theta = theta
        self.runs = _runs(entries)
        self.j_lo = j_lo
        th = mpq(theta.numerator, theta.denominator)
        size = j_hi - j_lo + 1
        sums = [[mpq(0)] * (size + 1) for _ in range(L)]
        prods = [mpq(1)] * (size + 1)
        for idx in range(size):
            d = th + (j_lo + idx)
            if d == 0:
                for l in range(L):
                    sums[l][idx + 1] = sums[l][idx]
                prods[idx + 1] = prods[idx]
                continue
            inv = 1 / d
            pw = inv
            for l in range(L):
                sums[l][idx + 1] = sums[l][idx] + pw
                pw *= inv
            prods[idx + 1] = prods[idx] * d
        self.sums = sums
        self.prods = prods

    def contribution(self, k: int, L: int):
        """(power sums p_1..p_L, product of d^e) over this class, skipping d = 0."""
        ps = [mpq(0)] * L
        prod_num = mpq(1)
        prod_den = mpq(1)
        for j0, j1, e in self.runs:
            lo = j0 - k - self.j_lo
            hi = j1 - k - self.j_lo + 1
            for l in range(L):
                ps[l] += e * (self.sums[l][hi] - self.sums[l][lo])
            block = self.prods[hi] / self.prods[lo]
            if e > 0:
                prod_num *= block**e
            else:
                prod_den *= block ** (-e)
        return ps, prod_num / prod_den


def _runs(entries: Mapping[int, int]) -> list[tuple[int, int, int]]:
    out: list[list[int]] = []
    for j in sorted(entries):
        e = entries[j]
        if out and out[-1][1] == j - 1 and out[-1][2] == e:
            out[-1][1] = j
        else:
            out.append([j, j, e])
    return [tuple(r) for r in out]


def partial_fractions(form: FactoredForm) -> PartialFractionTable:
    """All a[i][k] with R_n(t) = sum a[i][k] / (t + k)^i.

    At each pole k, R_n(t)(t+k)^s = lead * u^m * prod_{c != k} (u + c - k)^e with
    u = t + k.  The product is K * exp(sum_l (-1)^(l+1) p_l u^l / l) where
    p_l = sum e/(c - k)^l; a[i][k] is the coefficient of u^(s-i).
    """
    s = form.s
    factors = form.merged_factors()
    poles = form.poles()
    if not poles:
        raise FormError("form has no poles")
    k_min, k_max = poles[0], poles[-1]
    L = s - 1

    by_class: dict[Fraction, dict[int, int]] = defaultdict(dict)
    at_int: dict[int, int] = {}
    for c, e in factors:
        j = math.floor(c)
        by_class[c - j][j] = e
        if c.denominator == 1:
            at_int[int(c)] = e
    classes = []
    for theta, entries in sorted(by_class.items()):
        j_lo = min(entries) - k_max
        j_hi = max(entries) - k_min
        classes.append(_ShiftClass(theta, entries, j_lo, j_hi, max(L, 1)))

    lead = form.lead()
    lead_q = mpq(lead.numerator, lead.denominator)
    rows: list[list[Fraction]] = [[Fraction(0)] * (k_max - k_min + 1) for _ in range(s)]
    for k in range(k_min, k_max + 1):
        order = s + at_int.get(k, 0)
        if order < 0:
            raise FormError(f"pole at t = -{k} has order {-at_int[k]} > s")
        ps = [mpq(0)] * max(L, 1)
        K = mpq(1)
        for cls in classes:
            cps, cprod = cls.contribution(k, max(L, 1))
            for l in range(len(ps)):
                ps[l] += cps[l]
            K *= cprod
        # exp of sum_l (-1)^(l+1) p_l u^l / l, to order s - 1 - order
        top = s - 1 - order
        g = [mpq(1)]
        for j in range(1, top + 1):
            acc = mpq(0)
            for l in range(1, j + 1):
                term = ps[l - 1] * g[j - l]
                acc += term if l % 2 else -term
            g.append(acc / j)
        base = lead_q * K
        for i in range(1, s + 1):
            idx = s - i - order
            if 0 <= idx <= top:
                rows[i - 1][k - k_min] = _fr(base * g[idx])
    return PartialFractionTable(
        n=form.n,
        s=s,
        k_min=k_min,
        k_max=k_max,
        coefficients=tuple(tuple(r) for r in rows),
    )


# ---------------------------------------------------------------------------
# linear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    n: int
    rho_odd: Mapping[int, Fraction]
    rho0: Mapping[Fraction, Fraction] = field(default_factory=dict)


def rho_odd_coeffs(table: PartialFractionTable) -> dict[int, Fraction]:
    return {i: table.column_sum(i) for i in range(3, table.s, 2)}


def rho0_coeff(table: PartialFractionTable, theta: RationalLike) -> Fraction:
    """-sum_k sum_{l<k} sum_i a[i][k] / (l + theta)^i."""
    theta = to_fraction(theta)
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    th = mpq(theta.numerator, theta.denominator)
    s = table.s
    # partial[i] = sum_{l < k} (l + theta)^-i, advanced with k
    partial = [mpq(0)] * s
    for l in range(table.k_min):
        inv = 1 / (l + th)
        pw = inv
        for i in range(s):
            partial[i] += pw
            pw *= inv
    acc = mpq(0)
    for k in table.ks():
        for i in range(1, s + 1):
            a = table.coefficients[i - 1][k - table.k_min]
            if a:
                acc += mpq(a.numerator, a.denominator) * partial[i - 1]
        inv = 1 / (k + th)
        pw = inv
        for i in range(s):
            partial[i] += pw
            pw *= inv
    return _fr(-acc)


def linear_form_coeffs(table: PartialFractionTable, z: Iterable[RationalLike]) -> LinearForm:
    rho_odd = rho_odd_coeffs(table)
    rho0 = {to_fraction(th): rho0_coeff(table, th) for th in z}
    return LinearForm(n=table.n, rho_odd=rho_odd, rho0=rho0)


def _log2_bound(x: Fraction) -> int:
    """An integer b with |x| < 2^b (x != 0)."""
    return abs(x.numerator).bit_length() - x.denominator.bit_length() + 1


def cancellation_bits(lf: LinearForm, theta: RationalLike, value) -> int:
    """Bits lost when rho_0 + sum rho_i zeta(i, theta) collapses to ``value``.

    Uses zeta(i, theta) < theta^-i + 2, so the bound only errs upward.
    """
    theta = to_fraction(theta)
    sizes = [_log2_bound(lf.rho0[theta])] if lf.rho0.get(theta) else []
    for i, rho in lf.rho_odd.items():
        if rho:
            sizes.append(_log2_bound(rho) + _log2_bound(theta ** (-i) + 2))
    if not sizes:
        return 0
    top = max(sizes)
    v = mpmath.mpf(value)
    if v == 0:
        return top
    return max(0, top - int(mpmath.floor(mpmath.log(abs(v), 2))))


def linear_form_value(lf: LinearForm, theta: RationalLike, prec: WorkingPrecision | int | None = None):
    """rho_0,theta + sum_i rho_i zeta(i, theta) in floating point."""
    theta = to_fraction(theta)
    with working(prec):
        acc = mpf_of(lf.rho0[theta])
        for i, rho in lf.rho_odd.items():
            if rho:
                acc += mpf_of(rho) * hurwitz_general(i, theta, prec)
        return acc


# ---------------------------------------------------------------------------
# series evaluation
# ---------------------------------------------------------------------------

def _power_sums(factors: Sequence[tuple[Fraction, int]], K: int) -> list[Fraction]:
    """sum_c e c^l for l = 1..K, exactly, in integers over a common denominator."""
    L = math.lcm(*(c.denominator for c, _ in factors))
    nums = [gmpy2.mpz(c.numerator * (L // c.denominator)) for c, _ in factors]
    es = [gmpy2.mpz(e) for _, e in factors]
    pw = list(es)
    out = []
    for l in range(1, K + 1):
        pw = [p * a for p, a in zip(pw, nums)]
        out.append(Fraction(int(sum(pw)), L**l))
    return out


def _head_sum(form: FactoredForm, theta, first: int, stop: int):
    """sum_{first <= m < stop} R_n(m + theta), stepping with R_n(t + 1) / R_n(t)."""
    ratio = [(mpf_of(d), e) for d, e in form.step_ratio()]
    terms = []
    t = theta + first
    term = form.evaluate_mp(t)
    for _ in range(first, stop):
        terms.append(term)
        step = mpmath.mpf(1)
        for d, e in ratio:
            v = t + d
            if v == 0:
                step = None
                break
            step *= v**e
        t += 1
        term = form.evaluate_mp(t) if step is None or term == 0 else term * step
    return mpmath.fsum(terms)


def evaluate_series(form: FactoredForm, theta: RationalLike, prec: WorkingPrecision | int | None = None):
    """S_{n,theta} = sum_{m >= 0} R_n(m + theta), by direct summation plus a tail.

    The first rMn terms vanish and are skipped.  Terms are summed directly up
    to T = N + theta >= 4 max|c|; beyond that R_n(t) = lead t^deg h(1/t) with
    h(w) = prod (1 + c w)^e analytic for |w| < 1/max|c|, so the tail is
    sum_j h_j zeta(j - deg, T).  Cauchy's estimate on |w| = 1/(2 max|c|) bounds
    |h_j| and fixes how many h_j are needed.
    """
    theta = to_fraction(theta)
    if form.degree > -2:
        raise FormError("series diverges unless deg R_n <= -2")
    prec = as_precision(prec)
    factors = form.merged_factors()
    R0 = max(abs(c) for c, _ in factors)
    R0 = max(R0, Fraction(1))
    first = form.rMn
    T_int = max(first, math.ceil(4 * R0 - theta) + 1)
    deg = form.degree

    with working(prec) as bits:
        # Cauchy bound on |w| = rho = 1/(2 R0): |h_j| <= H (2 R0)^j
        rho = 1 / (2 * mpf_of(R0))
        logH = mpmath.mpf(0)
        for c, e in factors:
            x = abs(mpf_of(c)) * rho
            logH += e * mpmath.log(1 + x) if e > 0 else e * mpmath.log(1 - x)
        extra = int(mpmath.ceil(logH / mpmath.log(2))) + 16
    with mpmath.workprec(bits + max(extra, 0) + 32):
        lead = form.lead()
        lead_mp = mpf_of(lead)
        head = _head_sum(form, mpf_of(theta), first, T_int)
        T = mpf_of(theta) + T_int
        # |term_j| <= |lead| H (2R0/T)^j T^deg (1 + T) and 2R0/T <= 1/2
        scale = abs(lead_mp) * mpmath.exp(logH) * T**deg * (1 + T)
        target = mpmath.ldexp(1, -bits) * max(abs(head), mpmath.mpf(1)) / 4
        K = 1
        while scale * mpmath.mpf(2) ** (-K) > target:
            K += 1
        P = [mpf_of(v) for v in _power_sums(factors, K)]
        h = [mpmath.mpf(1)]
        for j in range(1, K + 1):
            acc = mpmath.mpf(0)
            for l in range(1, j + 1):
                term = P[l - 1] * h[j - l]
                acc += term if l % 2 else -term
            h.append(acc / j)
        tail = mpmath.fsum(hj * hurwitz_general(j - deg, T, bits + extra) for j, hj in enumerate(h) if hj)
        total = head + lead_mp * tail
    with working(prec):
        return +total
