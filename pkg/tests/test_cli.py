import json
import random

import pytest

from zetaforms.cli import ConfigError, emit_config, main, parse_config
from zetaforms.params import ParameterError


def _run(tmp_path, cfg, *args):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out.json"
    code = main([args[0], "--config", str(path), "--out", str(out), *args[1:]])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_constants_m7(tmp_path):
    code, rep = _run(tmp_path, {"schema": 1, "params": {"M": 7, "J": 2, "deltas": [0, 1]}}, "constants")
    assert code == 0
    res = rep["results"]
    assert res["varpi"].startswith("2.284309")
    assert res["r0"].startswith("1.850170")
    assert res["C0"].startswith("1.197980")


def test_constants_m1_zero_varpi(tmp_path):
    code, rep = _run(tmp_path, {"schema": 1, "params": {"M": 1, "J": 1, "deltas": [0]}}, "constants")
    assert code == 0 and rep["results"]["varpi"] == "0.000000000000"


def test_bad_deltas_exit_2(tmp_path, capsys):
    code, _ = _run(tmp_path, {"schema": 1, "params": {"M": 7, "deltas": [4, 3]}}, "constants")
    assert code == 2
    assert "deltas must be non-decreasing" in capsys.readouterr().err


@pytest.mark.parametrize(
    "cfg",
    [
        {"schema": 2, "params": {"M": 7, "deltas": [0, 1]}},
        {"schema": 1, "params": {"M": 7, "deltas": [0, 1]}, "colour": "red"},
        {"schema": 1, "params": {"M": 7, "deltas": [0, 1], "N": 3}},
        {"schema": 1, "params": {"M": 7, "deltas": [0, 1], "r": "x/y"}},
        {"schema": 1, "params": {"M": 7, "deltas": [0, 1]}, "precision_bits": 16},
    ],
)
def test_invalid_configs_exit_2(tmp_path, cfg):
    code, _ = _run(tmp_path, cfg, "constants")
    assert code == 2


def test_verify_config_a(tmp_path):
    cfg = {"schema": 1, "params": {"M": 1, "J": 1, "deltas": [0], "r": "1/1", "B": 1, "s": 6}, "verify": {"n": 2}}
    code, rep = _run(tmp_path, cfg, "verify")
    assert code == 0
    assert rep["results"]["all_passed"]
    assert all(c["passed"] for c in rep["checks"])


def test_verify_precondition_exit_3(tmp_path):
    cfg = {
        "schema": 1,
        "params": {"M": 7, "J": 2, "deltas": [0, 1], "r": "1/1", "B": 1, "s": 8},
        "verify": {"n": 10, "phi_checks": True},
    }
    code, _ = _run(tmp_path, cfg, "verify")
    assert code == 3


def test_verify_bad_n_exit_3(tmp_path):
    cfg = {"schema": 1, "params": {"M": 1, "deltas": [0], "B": 1, "s": 6}, "verify": {"n": 3}}
    assert _run(tmp_path, cfg, "verify")[0] == 3


def test_report_illustration(tmp_path):
    code, rep = _run(tmp_path, {"schema": 1, "params": {"M": 1, "deltas": [0]}, "report": {"s": 10**6}}, "report")
    assert code == 0
    assert rep["results"]["C0"].startswith("1.192507")
    assert "not a proven count" in rep["illustration"]["note"]


def test_search_with_csv(tmp_path):
    csv_path = tmp_path / "scan.csv"
    cfg = {"schema": 1, "params": {"M": 1, "deltas": [0]}, "search": {"M_range": [1, 3]}}
    code, rep = _run(tmp_path, cfg, "search", "--csv", str(csv_path))
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "M,deltas,varpi,r0,C0" and len(lines) == 4
    assert rep["results"]["budget_used"] == 3


def test_reports_are_byte_stable(tmp_path):
    cfg = {"schema": 1, "params": {"M": 7, "deltas": [0, 1]}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        assert main(["constants", "--config", str(path), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_command_mismatch(tmp_path):
    cfg = {"schema": 1, "command": "verify", "params": {"M": 7, "deltas": [0, 1]}}
    assert _run(tmp_path, cfg, "constants")[0] == 2


def _random_config(rng):
    J = rng.randint(1, 5)
    M = rng.randint(1, 40)
    top = (M - 1) // 2
    deltas = sorted(rng.randint(0, top) for _ in range(J))
    cfg = {
        "schema": 1,
        "params": {"M": M, "J": J, "deltas": deltas, "r": f"{rng.randint(1, 9)}/{rng.randint(1, 9)}"},
        "precision_bits": rng.choice([64, 128, 256]),
        "threads": rng.randint(1, 4),
    }
    if rng.random() < 0.5:
        cfg["params"]["s"] = 2 * J * rng.randint(1, 10)
        cfg["params"]["B"] = rng.randint(1, 5)
        cfg["verify"] = {"n": rng.randint(1, 50)}
    if rng.random() < 0.3:
        cfg["search"] = {"budget": rng.randint(0, 9)}
    if rng.random() < 0.3:
        cfg["command"] = rng.choice(["constants", "verify", "search", "report"])
    return cfg


def test_config_round_trip():
    rng = random.Random(7)
    for _ in range(100):
        cfg = parse_config(_random_config(rng))
        assert parse_config(json.loads(json.dumps(emit_config(cfg)))) == cfg


def test_parse_errors_are_typed():
    with pytest.raises(ConfigError):
        parse_config({"schema": 1})
    with pytest.raises(ParameterError):
        parse_config({"schema": 1, "params": {"M": 2, "deltas": [1]}})
