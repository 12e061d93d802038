import mpmath
import pytest

from zetaforms.asymptotics import log_f, log_g, log_h, solve_roots, u_val
from zetaforms.forms import build_rational_function, evaluate_series
from zetaforms.params import ProofParameters
from zetaforms.sieve import build_sieve_sets

CONFIGS = {
    "M1": (ProofParameters(1, (0,), r=1, s=60, B=1), build_sieve_sets(1, 1, 1)),
    "M7": (ProofParameters(7, (0, 1), r=1, s=100, B=1), build_sieve_sets(1, 7, 1)),
}


@pytest.fixture(scope="module", params=sorted(CONFIGS))
def config(request):
    params, sieve = CONFIGS[request.param]
    return params, sieve, solve_roots(params, sieve, prec=128)


def test_u_at_zero(config):
    params, sieve, _ = config
    base = (2 * params.r + 1) * params.M * sieve.z_size
    u0 = u_val(mpmath.mpf("1e-9"), params, sieve, 128)
    assert u0 < 0 and abs(u0 + base) < 1e-3


def test_u_increasing(config):
    params, sieve, rep = config
    xs = [rep.x2 * 10 * k / 100 for k in range(1, 101)]
    us = [u_val(x, params, sieve, 128) for x in xs]
    assert all(a < b for a, b in zip(us, us[1:]))


def test_f_tends_to_one(config):
    params, sieve, _ = config
    assert abs(log_f(mpmath.mpf(10) ** 8 * params.M, params, sieve, 128)) <= 1e-6


def test_roots_ordered_and_accurate(config):
    params, sieve, rep = config
    assert 0 < rep.x0 < rep.x1 < rep.x2
    assert abs(log_f(rep.x0, params, sieve, 128)) <= mpmath.ldexp(1, -(128 - 16)) * 10
    assert abs(u_val(rep.x1, params, sieve, 128)) <= mpmath.ldexp(1, -(128 - 16)) * 10 ** 3


def test_sign_structure(config):
    params, sieve, rep = config
    assert log_f(rep.x0 / 2, params, sieve, 128) > 0
    assert log_f((rep.x0 + rep.x1) / 2, params, sieve, 128) < 0


def test_h_increasing_before_x0(config):
    params, sieve, rep = config
    hs = [log_h(rep.x0 * k / 10, params, sieve, 128) for k in range(1, 11)]
    assert all(a < b for a, b in zip(hs, hs[1:]))


def test_log_g_at_root(config):
    params, sieve, rep = config
    assert rep.log_g_x0 == log_g(rep.x0, params, sieve, 128)
    assert rep.log_h_x0 == rep.log_g_x0


def test_domain_errors():
    params, sieve = CONFIGS["M1"]
    with pytest.raises(ValueError):
        log_f(0, params, sieve)
    with pytest.raises(ValueError):
        u_val(-1, params, sieve)


def test_small_s_expands_the_bracket():
    params = ProofParameters(1, (0,), r=1, s=6, B=1)
    rep = solve_roots(params, build_sieve_sets(1, 1, 1), prec=128)
    assert rep.x2 is None
    assert 0 < rep.x0 < rep.x1


def test_growth_matches_series():
    params, sieve = CONFIGS["M1"]
    rep = solve_roots(params, sieve, prec=128)
    errs = []
    for n in (4, 8, 12):
        S = evaluate_series(build_rational_function(n, params, sieve), 1, 128)
        errs.append(abs(mpmath.log(S) / n - rep.log_g_x0))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] / abs(rep.log_g_x0) < 0.15
