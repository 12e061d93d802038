"""``zetaforms`` command line: constants, verify, search and report.

Configs and reports are JSON with ``"schema": 1``.  Rationals travel as
"p/q" strings and reals as fixed-point decimal strings, so reports are
byte-stable for a given config and version.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import mpmath

from . import __version__
from .arith import WorkingPrecision, fraction_str, to_fraction
from .criterion import constants
from .forms import FormError
from .omega import fixed_decimal
from .params import ParameterError, ProofParameters
from .search import SearchResult, local_search, scan_M
from .verify import PreconditionError, run_suite

SCHEMA = 1
COMMANDS = ("constants", "verify", "search", "report")
EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_CHECK = 0, 2, 3, 4

_TOP_KEYS = {"schema", "command", "params", "precision_bits", "threads", "verify", "search", "report", "output"}
_PARAM_KEYS = {"M", "J", "deltas", "r", "s", "B"}
_VERIFY_KEYS = {"n", "phi_checks", "points", "seed", "series"}
_SEARCH_KEYS = {"M_range", "budget"}
_REPORT_KEYS = {"s"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: Optional[str]
    params: ProofParameters
    precision_bits: int = 256
    threads: int = 1
    verify: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    report: dict = field(default_factory=dict)
    output: Optional[str] = None


def _check_keys(obj: Any, allowed: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return obj


def _int(v: Any, name: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer")
    return v


def parse_config(data: Any) -> RunConfig:
    """Validate a decoded JSON config; raises ConfigError or ParameterError."""
    _check_keys(data, _TOP_KEYS, "config")
    if data.get("schema") != SCHEMA:
        raise ConfigError(f'config must carry "schema": {SCHEMA}')
    command = data.get("command")
    if command is not None and command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}")
    if "params" not in data:
        raise ConfigError("config needs a params object")
    p = _check_keys(data["params"], _PARAM_KEYS, "params")
    if "M" not in p or "deltas" not in p:
        raise ConfigError("params need M and deltas")
    deltas = p["deltas"]
    if not isinstance(deltas, list):
        raise ConfigError("deltas must be a list of integers")
    r = p.get("r", "1/1")
    if not isinstance(r, (str, int)) or isinstance(r, bool):
        raise ConfigError('r must be a rational string such as "1/1"')
    try:
        r = to_fraction(r)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"r is not a rational: {exc}") from None
    params = ProofParameters(
        M=_int(p["M"], "M"),
        deltas=[_int(d, "deltas") for d in deltas],
        r=r,
        s=None if p.get("s") is None else _int(p["s"], "s"),
        B=None if p.get("B") is None else _int(p["B"], "B"),
        J=None if p.get("J") is None else _int(p["J"], "J"),
    )
    bits = _int(data.get("precision_bits", 256), "precision_bits")
    try:
        WorkingPrecision(bits)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    threads = _int(data.get("threads", 1), "threads")
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    ver = dict(_check_keys(data.get("verify", {}), _VERIFY_KEYS, "verify"))
    if "n" in ver:
        _int(ver["n"], "verify.n")
    if ver.get("phi_checks") not in (None, True, False):
        raise ConfigError("verify.phi_checks must be true, false or null")
    sea = dict(_check_keys(data.get("search", {}), _SEARCH_KEYS, "search"))
    if "M_range" in sea:
        mr = sea["M_range"]
        if not (isinstance(mr, list) and len(mr) == 2 and all(isinstance(v, int) for v in mr) and mr[0] <= mr[1]):
            raise ConfigError("search.M_range must be [first, last] with first <= last")
    if "budget" in sea and _int(sea["budget"], "search.budget") < 0:
        raise ConfigError("search.budget must be >= 0")
    rep = dict(_check_keys(data.get("report", {}), _REPORT_KEYS, "report"))
    if "s" in rep and _int(rep["s"], "report.s") < 3:
        raise ConfigError("report.s must be >= 3")
    out = data.get("output")
    if out is not None and not isinstance(out, str):
        raise ConfigError("output must be a path string")
    return RunConfig(command, params, bits, threads, ver, sea, rep, out)


def emit_config(cfg: RunConfig) -> dict:
    """Inverse of :func:`parse_config`."""
    p = cfg.params
    params: dict[str, Any] = {"M": p.M, "J": p.J, "deltas": list(p.deltas), "r": fraction_str(p.r)}
    if p.s is not None:
        params["s"] = p.s
    if p.B is not None:
        params["B"] = p.B
    out: dict[str, Any] = {"schema": SCHEMA, "params": params, "precision_bits": cfg.precision_bits, "threads": cfg.threads}
    if cfg.command is not None:
        out["command"] = cfg.command
    for key in ("verify", "search", "report"):
        if getattr(cfg, key):
            out[key] = dict(getattr(cfg, key))
    if cfg.output is not None:
        out["output"] = cfg.output
    return out


def _dec(x) -> Optional[str]:
    return None if x is None else fixed_decimal(x, 12)


def _constants_block(cfg: RunConfig) -> dict:
    rep = constants(cfg.params, cfg.precision_bits, threads=cfg.threads)
    return {
        "varpi": _dec(rep.varpi),
        "r0": _dec(rep.r0),
        "r0_rational": fraction_str(rep.r0_rational()),
        "F_r0": _dec(rep.F_r0),
        "C0": _dec(rep.C0),
        "c_max": _dec(rep.c_max),
        "zeta_ratio": _dec(rep.zeta_ratio),
        "theorem_applicable": rep.applicable,
    }, rep


def run_constants(cfg: RunConfig) -> tuple[dict, int]:
    block, _ = _constants_block(cfg)
    return {"results": block}, EXIT_OK


def run_report(cfg: RunConfig) -> tuple[dict, int]:
    block, rep = _constants_block(cfg)
    s = cfg.report.get("s", 10**6)
    out = {"results": block}
    if rep.C0 is not None:
        with mpmath.workprec(cfg.precision_bits):
            value = rep.C0 * mpmath.sqrt(mpmath.mpf(s) / mpmath.log(s))
        out["illustration"] = {
            "s": s,
            "expression": "C0 * sqrt(s / log s)",
            "value": _dec(value),
            "note": "asymptotic constant evaluated at this s; not a proven count of irrational values",
        }
    return out, EXIT_OK


def run_verify(cfg: RunConfig) -> tuple[dict, int]:
    opts = cfg.verify
    if "n" not in opts:
        raise ConfigError("verify needs verify.n")
    checks, art = run_suite(
        cfg.params,
        opts["n"],
        prec=cfg.precision_bits,
        phi_checks=opts.get("phi_checks"),
        points=opts.get("points", 20),
        seed=opts.get("seed", 0),
        series=opts.get("series", True),
    )
    ok = all(c.passed for c in checks)
    results = {
        "n": opts["n"],
        "period": art.sieve.period,
        "degree": art.form.degree,
        "all_passed": ok,
        "size_condition": cfg.params.size_condition(),
    }
    return {
        "results": results,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }, (EXIT_OK if ok else EXIT_CHECK)


def _search_rows(res: SearchResult) -> list[dict]:
    return [
        {"M": e.params.M, "deltas": list(e.params.deltas), "varpi": _dec(e.varpi), "r0": _dec(e.r0), "C0": _dec(e.C0)}
        for e in res.evaluations
    ]


def run_search(cfg: RunConfig) -> tuple[dict, int]:
    opts = cfg.search
    p = cfg.params
    if "M_range" in opts:
        lo, hi = opts["M_range"]
        res = scan_M(p.J, p.deltas, range(lo, hi + 1), cfg.precision_bits, threads=cfg.threads)
    elif "budget" in opts:
        res = local_search(p, opts["budget"], cfg.precision_bits, threads=cfg.threads)
    else:
        raise ConfigError("search needs search.M_range or search.budget")
    return {
        "results": {
            "best": {"M": res.best_params.M, "deltas": list(res.best_params.deltas), "C0": _dec(res.best_C0)},
            "budget_used": res.budget_used,
            "evaluations": _search_rows(res),
            "skipped": list(res.skipped),
        }
    }, EXIT_OK


RUNNERS = {"constants": run_constants, "verify": run_verify, "search": run_search, "report": run_report}


def write_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "deltas", "varpi", "r0", "C0"])
        for row in rows:
            w.writerow([row["M"], " ".join(map(str, row["deltas"])), row["varpi"], row["r0"], row["C0"] or ""])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zetaforms", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config file (schema 1)")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--precision", type=int, help="working precision in bits (overrides the config)")
    ap.add_argument("--threads", type=int, help="worker threads for omega evaluation")
    ap.add_argument("--csv", help="search only: also write the evaluation table as CSV")
    ap.add_argument("--timing", action="store_true", help="add wall-clock timing (makes the report non-reproducible)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        data = json.loads(Path(args.config).read_text())
        cfg = parse_config(data)
        if cfg.command is not None and cfg.command != args.command:
            raise ConfigError(f"config is for '{cfg.command}', not '{args.command}'")
        overrides = {}
        if args.precision is not None:
            WorkingPrecision(args.precision)
            overrides["precision_bits"] = args.precision
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("--threads must be >= 1")
            overrides["threads"] = args.threads
        if overrides:
            cfg = RunConfig(**{**cfg.__dict__, **overrides})
    except (OSError, json.JSONDecodeError, ConfigError, ParameterError, ValueError) as exc:
        print(f"zetaforms: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    start = time.perf_counter()
    try:
        body, code = RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"zetaforms: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PreconditionError, FormError) as exc:
        print(f"zetaforms: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ArithmeticError as exc:
        print(f"zetaforms: internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK

    report = {
        "schema": SCHEMA,
        "tool": "zetaforms",
        "version": __version__,
        "command": args.command,
        "config": emit_config(cfg),
        **body,
    }
    if args.timing:
        report["timing"] = {"seconds": f"{time.perf_counter() - start:.3f}"}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    out = args.out or cfg.output
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        if args.command != "search":
            print("zetaforms: --csv only applies to search", file=sys.stderr)
        else:
            write_csv(body["results"]["evaluations"], args.csv)
    if code == EXIT_CHECK:
        failed = [c["name"] for c in body.get("checks", []) if not c["passed"]]
        print(f"zetaforms: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
