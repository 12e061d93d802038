import mpmath
import pytest

from zetaforms.asymptotics import solve_roots
from zetaforms.criterion import (
    F_val,
    G_val,
    TheoremInapplicable,
    c0_constant,
    check_condition,
    condition_margin,
    constants,
    solve_r0,
)
from zetaforms.omega import fixed_decimal
from zetaforms.params import ProofParameters
from zetaforms.sieve import build_sieve_sets
from zetaforms.special import zeta_ratio

VARPI7 = mpmath.mpf("2.284309620528")


def test_G_decreasing():
    rs = [mpmath.mpf(k) / 10 for k in range(1, 51)]
    gs = [G_val(r, 7, (0, 1), VARPI7) for r in rs]
    assert all(a > b for a, b in zip(gs, gs[1:]))


def test_F_vanishes_at_infinity():
    assert abs(F_val(10**6, 1, (0,), 0)) <= 1e-3


def test_F_maximum_at_r0():
    r0 = solve_r0(7, (0, 1), VARPI7, 128)
    assert F_val(r0 - 0.01, 7, (0, 1), VARPI7) < F_val(r0, 7, (0, 1), VARPI7) > F_val(r0 + 0.01, 7, (0, 1), VARPI7)


def test_r0_closed_form_for_trivial_config():
    with mpmath.workprec(300):
        want = (mpmath.sqrt(1 + 4 * mpmath.e**2) - 1) / 2
        got = solve_r0(1, (0,), 0, 256)
        assert abs(got - want) < mpmath.ldexp(want, -120)


def test_domain_checks():
    with pytest.raises(ValueError):
        G_val(-1, 7, (0, 1), VARPI7)
    with pytest.raises(TheoremInapplicable):
        c0_constant(7, (0, 1), VARPI7, mpmath.mpf(-0.1))


def test_identity_between_the_two_expressions():
    rep = constants(ProofParameters(7, (0, 1)), 256)
    with mpmath.workprec(256):
        s = mpmath.fsum(mpmath.log(((rep.r0 + 1) * 7 - d) / (rep.r0 * 7 + d)) for d in (0, 1))
        assert abs(rep.F_r0 - s / 4) < mpmath.ldexp(1, -64)
        assert abs(rep.C0 - mpmath.sqrt(4 * rep.zeta_ratio * rep.F_r0)) < mpmath.ldexp(1, -64)


def test_varpi_monotonicity_of_F():
    for r in (0.5, 1, 2, 5):
        vals = [F_val(r, 7, (0, 1), v) for v in (0, 1, 2, 3)]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_constants_report():
    rep = constants(ProofParameters(1, (0,)), 256)
    assert rep.varpi == 0 and rep.applicable
    # published digits are truncated: 1.1925078... appears as 1.192507
    assert abs(float(fixed_decimal(rep.r0, 6)) - 2.263884) <= 1e-6 + 1e-12
    assert abs(float(fixed_decimal(rep.C0, 6)) - 1.192507) <= 1e-6 + 1e-12
    assert rep.r0_rational().denominator <= 10**6
    assert abs(float(rep.r0_rational()) - float(rep.r0)) < 1e-10


def test_zeta_ratio_value():
    assert float(zeta_ratio(128)) == pytest.approx(1.94359643682, abs=1e-11)


def test_condition_on_c():
    params = ProofParameters(1, (0,), r=1, s=60, B=1)
    sieve = build_sieve_sets(1, 1, 1)
    asym = solve_roots(params, sieve, prec=128)
    bound = mpmath.sqrt(4 / zeta_ratio(128) * F_val(1, 1, (0,), 0))
    assert check_condition(params, 0.99 * bound, asym, 0, 128).c_ok
    assert not check_condition(params, 1.01 * bound, asym, 0, 128).c_ok


def test_condition_margin_recomputed():
    params = ProofParameters(1, (0,), r="113/50", s=60, B=1)
    sieve = build_sieve_sets(1, 1, "113/50")
    asym = solve_roots(params, sieve, prec=128)
    rep = check_condition(params, 0.5, asym, 0, 128)
    with mpmath.workprec(160):
        # log g(x_0) + s (-varpi / J + M - 2 delta_1) with varpi = 0, J = 1
        want = asym.log_g_x0 + 60 * 1
        assert abs(rep.margin - want) < mpmath.ldexp(1, -100)
        assert rep.condition_holds == (want < 0)
        assert condition_margin(asym.log_g_x0, 60, 0, 1, 1) == rep.margin
