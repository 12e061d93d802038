"""Scans over M and hill climbing over (M, delta) to maximise C_0."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import mpmath

from .arith import WorkingPrecision, as_precision
from .criterion import constants
from .omega import varpi
from .params import ParameterError, ProofParameters

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Evaluation:
    params: ProofParameters
    varpi: mpmath.mpf
    r0: mpmath.mpf
    C0: Optional[mpmath.mpf]

    @property
    def digest(self) -> str:
        return self.params.digest()


@dataclass(frozen=True)
class SearchResult:
    best_params: ProofParameters
    best_C0: Optional[mpmath.mpf]
    evaluations: tuple[Evaluation, ...]
    budget_used: int
    skipped: tuple[str, ...] = field(default_factory=tuple)


def _rank(ev: Evaluation):
    """Sort key: larger C_0 first, then smaller M, then smaller deltas."""
    c = ev.C0 if ev.C0 is not None else mpmath.mpf("-inf")
    return (-c, ev.params.M, ev.params.deltas)


class _Evaluator:
    def __init__(self, prec: WorkingPrecision, threads: int, validate: int):
        self.prec = prec
        self.threads = threads
        self.validate = validate
        self.cache: dict[str, Evaluation] = {}

    def __call__(self, params: ProofParameters) -> Evaluation:
        key = params.digest()
        if key not in self.cache:
            vp = varpi(params, self.prec, threads=self.threads, validate=self.validate)
            rep = constants(params, self.prec, varpi=vp)
            self.cache[key] = Evaluation(params=params, varpi=rep.varpi, r0=rep.r0, C0=rep.C0)
        return self.cache[key]


def _best(evals: Sequence[Evaluation]) -> Evaluation:
    return min(evals, key=_rank)


def scan_M(
    J: int,
    deltas: Sequence[int],
    M_range: Iterable[int],
    prec: WorkingPrecision | int | None = None,
    *,
    threads: int = 1,
    validate: int = 1000,
    progress: Optional[Callable[[Evaluation], None]] = None,
) -> SearchResult:
    """(varpi, r_0, C_0) for each admissible M with the deltas held fixed."""
    if len(deltas) != J:
        raise ParameterError(f"J = {J} but {len(deltas)} deltas were given")
    ev = _Evaluator(as_precision(prec), threads, validate)
    evals: list[Evaluation] = []
    skipped: list[str] = []
    for M in M_range:
        try:
            params = ProofParameters(M, deltas)
        except ParameterError as exc:
            log.warning("skipping M=%d: %s", M, exc)
            skipped.append(f"M={M}: {exc}")
            continue
        e = ev(params)
        evals.append(e)
        if progress:
            progress(e)
    if not evals:
        raise ParameterError("no admissible M in the range")
    best = _best(evals)
    return SearchResult(best.params, best.C0, tuple(evals), len(evals), tuple(skipped))


def neighbours(params: ProofParameters) -> list[ProofParameters]:
    """delta_j - 1, delta_j + 1 for each j, then M - 1, M + 1; inadmissible moves dropped."""
    out: list[ProofParameters] = []
    ds = list(params.deltas)
    for j in range(len(ds)):
        for step in (-1, 1):
            moved = ds.copy()
            moved[j] += step
            try:
                out.append(params.with_(deltas=tuple(moved)))
            except ParameterError:
                pass
    for step in (-1, 1):
        try:
            out.append(params.with_(M=params.M + step))
        except ParameterError:
            pass
    return out


def local_search(
    seed: ProofParameters,
    budget: int,
    prec: WorkingPrecision | int | None = None,
    *,
    threads: int = 1,
    validate: int = 1000,
) -> SearchResult:
    """Steepest-ascent hill climbing on C_0.

    The seed is always evaluated; ``budget`` bounds the number of further
    distinct parameter sets evaluated.  Stops at a local optimum.
    """
    ev = _Evaluator(as_precision(prec), threads, validate)
    current = ev(seed)
    evals = [current]
    used = 0
    while used < budget:
        better: list[Evaluation] = []
        for nb in neighbours(current.params):
            if nb.digest() in ev.cache:
                continue
            if used >= budget:
                break
            e = ev(nb)
            used += 1
            evals.append(e)
            better.append(e)
        if not better:
            break
        top = _best(better)
        if _rank(top) < _rank(current):
            current = top
        else:
            break
    best = _best(evals)
    return SearchResult(best.params, best.C0, tuple(evals), used)
