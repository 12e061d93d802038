"""Property suites for R_n, its partial fractions and the linear forms at one n.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
property, only on a violated precondition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2
import mpmath

from .arith import PrimePowerProduct, WorkingPrecision, as_precision, first_obstruction, lcm_factored
from .elimination import EliminationError, assemble_tilde_S, default_eliminated, integer_weights
from .forms import (
    FactoredForm,
    LinearForm,
    PartialFractionTable,
    build_rational_function,
    cancellation_bits,
    evaluate_series,
    linear_form_coeffs,
    linear_form_value,
    partial_fractions,
)
from .omega import omega_at, phi_n, phi_primes
from .params import ProofParameters
from .sieve import SieveSets, build_sieve_sets
from .special import working


class PreconditionError(ValueError):
    """The requested check needs a larger scale than configured."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Artifacts:
    """Objects built along the way, kept for callers that want to inspect them."""

    sieve: SieveSets
    form: FactoredForm
    table: PartialFractionTable
    linear_form: LinearForm
    series: dict = field(default_factory=dict)


def _sample_points(rng: random.Random, count: int) -> list[Fraction]:
    # non-integers never hit a pole: all poles are integers
    out = []
    while len(out) < count:
        q = rng.randint(2, 60)
        p = rng.randint(-400 * q, 400 * q)
        if p % q:
            out.append(Fraction(p, q))
    return out


def _tolerance(bits: int, size) -> mpmath.mpf:
    """Absolute residual allowed for a value of magnitude ``size``: 2^-(bits - 56) relative, floor 1."""
    return mpmath.ldexp(max(mpmath.mpf(1), abs(size)), -(bits - 56))


def check_reconstruction(form: FactoredForm, table: PartialFractionTable, points) -> CheckResult:
    bad = [t for t in points if table.evaluate(t) != form.evaluate(t)]
    return CheckResult("reconstruction", not bad, f"{len(points)} points" + (f"; first mismatch at t={bad[0]}" if bad else ""))


def check_symmetry(form: FactoredForm, points) -> CheckResult:
    shift = form.M * form.n
    bad = [t for t in points if form.evaluate(-t - shift) != -form.evaluate(t)]
    return CheckResult("symmetry", not bad, f"{len(points)} points" + (f"; fails at t={bad[0]}" if bad else ""))


def check_zeros(form: FactoredForm, z) -> CheckResult:
    missing = [(m, th) for th in z for m in range(form.rMn) if form.order_at(m + th) <= 0]
    return CheckResult(
        "zeros",
        not missing,
        f"R_n(m + theta) = 0 for 0 <= m < {form.rMn}, theta in Z_B" + (f"; not at {missing[0]}" if missing else ""),
    )


def check_column_sums(table: PartialFractionTable) -> list[CheckResult]:
    out = [CheckResult("residue_sum", table.column_sum(1) == 0, "sum_k a[1][k] = 0")]
    bad = [i for i in range(2, table.s + 1, 2) if table.column_sum(i) != 0]
    out.append(CheckResult("even_column_sums", not bad, "sum_k a[i][k] = 0 for even i" + (f"; fails at i={bad}" if bad else "")))
    return out


def check_denominators(table: PartialFractionTable, m: int) -> CheckResult:
    """D_m^(s - i) a[i][k] is an integer for every (i, k)."""
    D = lcm_factored(m)
    s = table.s
    scales = {i: D.power(s - i) for i in range(1, s + 1)}
    count = 0
    for i in range(1, s + 1):
        for k in table.ks():
            a = table.a(i, k)
            if not a:
                continue
            count += 1
            p = first_obstruction(a, scales[i])
            if p is not None:
                return CheckResult("denominators", False, f"a[{i}][{k}] times D_{m}^{s - i} is not integral at p={p}")
    return CheckResult("denominators", True, f"{count} nonzero coefficients, m={m}")


def check_linear_form_identity(lf: LinearForm, series: dict, prec: WorkingPrecision) -> list[CheckResult]:
    out = []
    for th, S in sorted(series.items()):
        # the rho side cancels heavily at larger n; evaluate it with enough extra bits
        extra = cancellation_bits(lf, th, S)
        L = linear_form_value(lf, th, prec.bits + extra + 16)
        with working(prec.bits + extra + 16):
            res = abs(S - L)
            tol = _tolerance(prec.bits, S)
            out.append(
                CheckResult(
                    f"linear_form_identity[theta={th}]",
                    bool(res <= tol),
                    f"residual {mpmath.nstr(res, 5)} <= {mpmath.nstr(tol, 5)}; rho side at +{extra} bits",
                )
            )
    return out


def check_phi_valuations(table: PartialFractionTable, params: ProofParameters, n: int) -> CheckResult:
    """v_p(a[i][k]) >= -(s - i) + (s/J) omega(n/p) for the primes that build Phi_n."""
    s, J = table.s, params.J
    primes = [p for p in phi_primes(n, params) if p > s]
    count = 0
    for p in primes:
        w = omega_at(Fraction(n, p), params)
        for i in range(1, s + 1):
            need = Fraction(-(s - i)) + Fraction(s, J) * w
            for k in table.ks():
                a = table.a(i, k)
                if not a:
                    continue
                count += 1
                v = gmpy2.remove(gmpy2.mpz(abs(a.numerator)), p)[1] - gmpy2.remove(gmpy2.mpz(a.denominator), p)[1]
                if v < need:
                    return CheckResult("phi_valuations", False, f"v_{p}(a[{i}][{k}]) = {v} < {need}")
    return CheckResult("phi_valuations", True, f"{len(primes)} primes, {count} (p, i, k) triples")


def _scaled(name: str, x: Fraction, scale: PrimePowerProduct) -> CheckResult:
    p = first_obstruction(x, scale)
    return CheckResult(name, p is None, "integral" if p is None else f"denominator survives at p={p}")


def check_rho_integrality(lf: LinearForm, params: ProofParameters, n: int, s: int) -> list[CheckResult]:
    J = params.J
    m = params.top_width * n
    D = lcm_factored(m)
    phi_inv = phi_n(n, params).power(Fraction(-s, J))
    out = [_scaled(f"rho_odd_integrality[i={i}]", rho, phi_inv * D.power(s - i)) for i, rho in sorted(lf.rho_odd.items())]
    for th, rho in sorted(lf.rho0.items()):
        if th != 1:
            out.append(_scaled(f"rho0_integrality[theta={th}]", rho, phi_inv * D.power(s)))
    if Fraction(1) in lf.rho0:
        worst = PrimePowerProduct()
        for d in params.deltas:
            worst = worst * lcm_factored(max(params.top_width, params.M - d) * n).power(Fraction(s, J))
        out.append(_scaled("rho0_integrality[theta=1]", lf.rho0[Fraction(1)], phi_inv * worst))
    return out


def run_suite(
    params: ProofParameters,
    n: int,
    *,
    prec: WorkingPrecision | int | None = None,
    phi_checks: Optional[bool] = None,
    points: int = 20,
    seed: int = 0,
    series: bool = True,
    eliminated: Optional[list[int]] = None,
) -> tuple[list[CheckResult], Artifacts]:
    """All property checks for R_n at the configured parameters.

    ``phi_checks``: True demands the Phi_n-sharpened checks (and needs
    n > s^2), False skips them, None runs them whenever n > s^2.
    """
    if params.s is None or params.B is None:
        raise PreconditionError("verify needs s and B in the parameters")
    s = params.s
    if phi_checks and n <= s * s:
        raise PreconditionError(f"the Phi_n checks require n > s^2 = {s * s}, got n = {n}")
    prec = as_precision(prec)
    sieve = build_sieve_sets(params.B, params.M, params.r)
    form = build_rational_function(n, params, sieve)
    table = partial_fractions(form)
    lf = linear_form_coeffs(table, sieve.z)
    art = Artifacts(sieve=sieve, form=form, table=table, linear_form=lf)

    pts = _sample_points(random.Random(seed), points)
    checks = [
        check_reconstruction(form, table, pts),
        check_symmetry(form, pts),
        check_zeros(form, sieve.z),
        *check_column_sums(table),
        check_denominators(table, params.top_width * n),
    ]
    if phi_checks or (phi_checks is None and n > s * s):
        checks.append(check_phi_valuations(table, params, n))
        checks.extend(check_rho_integrality(lf, params, n, s))

    if series:
        with working(prec):
            art.series = {th: evaluate_series(form, th, prec) for th in sieve.z}
        checks.extend(check_linear_form_identity(lf, art.series, prec))
        checks.extend(_elimination_checks(params, sieve, n, prec, art, eliminated))
    return checks, art


def _elimination_checks(params, sieve, n, prec, art: Artifacts, eliminated) -> list[CheckResult]:
    try:
        I = default_eliminated(sieve.psi, params.s) if eliminated is None else eliminated
        wv = integer_weights(sieve.psi, I)
    except EliminationError as exc:
        return [CheckResult("elimination_weights", False, str(exc))]
    zero = all(wv.moment(i) == 0 for i in (0, *wv.eliminated))
    out = [CheckResult("elimination_weights", zero and wv.moment(1) != 0, f"w={list(wv.weights)}, I={list(wv.eliminated)}")]
    wit = assemble_tilde_S(wv, params, sieve, n, prec, form=art.form, linear_form=art.linear_form, series=art.series)
    tol = _tolerance(prec.bits, wit.tilde_S)
    out.append(
        CheckResult("elimination_residual", bool(wit.residual <= tol), f"residual {mpmath.nstr(wit.residual, 5)} <= {mpmath.nstr(tol, 5)}")
    )
    return out


def summarize(checks: list[CheckResult]) -> bool:
    return all(c.passed for c in checks)

