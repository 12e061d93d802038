import pytest

from zetaforms.verify import PreconditionError, run_suite


def test_config_a_all_checks_pass(config_a):
    for n in (2, 4):
        checks, _ = run_suite(config_a, n, prec=256)
        failed = [c for c in checks if not c.passed]
        assert not failed, failed
        names = {c.name for c in checks}
        assert {"reconstruction", "symmetry", "zeros", "residue_sum", "even_column_sums", "denominators"} <= names
        assert "phi_valuations" not in names


def test_phi_checks_need_large_n(config_b):
    with pytest.raises(PreconditionError, match="n > s"):
        run_suite(config_b, 10, phi_checks=True)


def test_phi_checks_off_runs_plain_suite(config_b):
    checks, _ = run_suite(config_b, 10, phi_checks=False, series=False)
    assert all(c.passed for c in checks)
