"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; the lines are printed in a block at
the end of the pytest run.
"""

import math
import time
from fractions import Fraction

import mpmath
import pytest

from conftest import record_criterion
from zetaforms.arith import log_lcm_upto
from zetaforms.asymptotics import solve_roots
from zetaforms.criterion import constants
from zetaforms.forms import build_rational_function, evaluate_series
from zetaforms.omega import fixed_decimal, phi_n, varpi
from zetaforms.params import ProofParameters
from zetaforms.presets import HEADLINE_DELTAS, PRESETS
from zetaforms.search import scan_M
from zetaforms.sieve import build_sieve_sets
from zetaforms.special import working
from zetaforms.verify import run_suite

PUBLISHED = {
    1: {"varpi": "0", "r0": "2.263884", "C0": "1.192507"},
    7: {"varpi": "2.284309", "r0": "1.850170", "C0": "1.197980"},
    57: {"varpi": "238.966249", "r0": "1.573948", "C0": "1.262672"},
    563: {"varpi": "12694.987927", "r0": "1.502726", "C0": "1.284579"},
}
BUDGET = {1: 1.0, 7: 10.0, 57: 300.0, 563: 3600.0}
CRITERION_FOR_M = {1: 1, 7: 2, 57: 3, 563: 4}
TOL = 1e-6 + 1e-12  # one unit in the sixth decimal, plus float slack

_REPORTS: dict = {}


def _timed_constants(M):
    if M not in _REPORTS:
        start = time.perf_counter()
        rep = constants(PRESETS[M], 256)
        _REPORTS[M] = (rep, time.perf_counter() - start)
    return _REPORTS[M]


def _six(x) -> float:
    return float(fixed_decimal(x, 6))


@pytest.mark.parametrize("M", [1, 7, 57, pytest.param(563, marks=pytest.mark.slow)])
def test_published_constants(M):
    rep, secs = _timed_constants(M)
    want = PUBLISHED[M]
    got = {"varpi": rep.varpi, "r0": rep.r0, "C0": rep.C0}
    diffs = {k: abs(_six(got[k]) - float(want[k])) for k in want}
    ok = all(d <= TOL for d in diffs.values()) and secs < BUDGET[M]
    if M == 1:
        ok = ok and rep.varpi == 0
    detail = (
        f"M={M}: varpi={fixed_decimal(rep.varpi, 6)} r0={fixed_decimal(rep.r0, 6)} "
        f"C0={fixed_decimal(rep.C0, 6)} in {secs:.1f}s (budget {BUDGET[M]:.0f}s)"
    )
    record_criterion(CRITERION_FOR_M[M], ok, detail)
    assert ok, detail


@pytest.mark.slow
def test_m_scan_argmax():
    start = time.perf_counter()
    res = scan_M(76, HEADLINE_DELTAS, range(561, 566), 256)
    secs = time.perf_counter() - start
    table = ", ".join(f"{e.params.M}:{fixed_decimal(e.C0, 9)}" for e in res.evaluations)
    ok = res.best_params.M == 563
    record_criterion(5, ok, f"argmax M={res.best_params.M} over 561..565 ({table}) in {secs:.0f}s")
    assert ok


def test_exact_suite_config_a():
    params = ProofParameters(1, (0,), r=1, s=6, B=1)
    start = time.perf_counter()
    lines = []
    ok = True
    for n in (2, 4):
        checks, _ = run_suite(params, n, prec=256, points=20)
        by_name = {c.name: c for c in checks}
        needed = [
            "reconstruction",
            "symmetry",
            "residue_sum",
            "even_column_sums",
            "denominators",
            "linear_form_identity[theta=1]",
            "linear_form_identity[theta=1/2]",
            "elimination_residual",
        ]
        ok = ok and all(by_name[k].passed for k in needed)
        # the suite tolerance scales with |S|; re-check the absolute 2^-200 bound here
        for name in ("linear_form_identity[theta=1]", "linear_form_identity[theta=1/2]", "elimination_residual"):
            res = mpmath.mpf(by_name[name].detail.split()[1])
            ok = ok and res <= mpmath.ldexp(1, -200)
        lines.append(f"n={n}: {sum(c.passed for c in checks)}/{len(checks)} checks")
    secs = time.perf_counter() - start
    ok = ok and secs < 30
    record_criterion(6, ok, f"{'; '.join(lines)} in {secs:.1f}s (budget 30s)")
    assert ok


def test_phi_suite_config_b():
    params = ProofParameters(7, (0, 1), r=1, s=8, B=1)
    start = time.perf_counter()
    checks, _ = run_suite(params, 66, prec=256, phi_checks=True)
    secs = time.perf_counter() - start
    by_name = {c.name: c for c in checks}
    needed = [
        "phi_valuations",
        "rho_odd_integrality[i=3]",
        "rho_odd_integrality[i=5]",
        "rho_odd_integrality[i=7]",
        "rho0_integrality[theta=1/2]",
        "rho0_integrality[theta=1]",
    ]
    triples = int(by_name["phi_valuations"].detail.split(", ")[1].split()[0])
    ok = all(by_name[k].passed for k in needed) and triples >= 200 and secs < 1800
    failed = [c.name for c in checks if not c.passed]
    record_criterion(
        7,
        ok,
        f"n=66: {by_name['phi_valuations'].detail}; integrality checks "
        f"{'all pass' if not failed else 'failed: ' + ', '.join(failed)} in {secs:.0f}s (budget 1800s)",
    )
    assert ok
    assert not failed


def test_asymptotic_trends():
    params = ProofParameters(1, (0,), r=1, s=6, B=1)
    sieve = build_sieve_sets(1, 1, 1)
    asym = solve_roots(params, sieve, prec=128)
    growth, ratio = [], []
    with working(128):
        for n in (4, 8, 12):
            form = build_rational_function(n, params, sieve)
            S1 = evaluate_series(form, 1, 128)
            Sh = evaluate_series(form, Fraction(1, 2), 128)
            growth.append(float(abs(mpmath.log(S1) / n - asym.log_g_x0)))
            ratio.append(float(abs(S1 / Sh - 1)))
    lcm_err = [abs(log_lcm_upto(m) / m - 1) for m in (10**3, 10**4, 10**5)]
    vp = float(varpi(PRESETS[7], 128))
    phi_err = [abs(phi_n(n, PRESETS[7]).log() / n - vp) for n in (10**3, 10**4, 10**5)]

    def dec(xs):
        return all(a > b for a, b in zip(xs, xs[1:]))

    ok = dec(growth) and dec(ratio) and dec(lcm_err) and dec(phi_err) and phi_err[-1] <= 0.5
    record_criterion(
        8,
        ok,
        "growth " + ", ".join(f"{v:.3g}" for v in growth)
        + "; S ratio " + ", ".join(f"{v:.3g}" for v in ratio)
        + "; D_m " + ", ".join(f"{v:.3g}" for v in lcm_err)
        + "; Phi_n " + ", ".join(f"{v:.3g}" for v in phi_err),
    )
    assert ok


@pytest.mark.slow
def test_two_expressions_for_c0_agree():
    worst = 0.0
    for M in (1, 7, 57, 563):
        rep, _ = _timed_constants(M)
        with mpmath.workprec(rep.prec.bits):
            other = mpmath.sqrt(4 * rep.zeta_ratio * rep.F_r0)
            worst = max(worst, float(abs(other - rep.C0)))
    ok = worst <= 1e-9
    record_criterion(9, ok, f"max |sqrt(4 ratio F(r0)) - C0| = {worst:.3g} over M in 1, 7, 57, 563")
    assert ok
