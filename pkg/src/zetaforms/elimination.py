"""Integer weights over Psi_B that cancel chosen zeta values, and the combined series.

The weights solve sum_b w_b b^i = 0 for i in {0} and a set I of odd indices.
Summing S_{n,k/b} over k = 1..b turns every Hurwitz value into b^i zeta(i),
so the weighted combination keeps only the zeta(i) with i outside I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import mpmath

from .arith import WorkingPrecision, as_precision
from .forms import FactoredForm, LinearForm, build_rational_function, cancellation_bits, evaluate_series, linear_form_coeffs, partial_fractions
from .params import ProofParameters
from .sieve import SieveSets
from .special import hurwitz_zeta, mpf_of, working


class EliminationError(ValueError):
    pass


@dataclass(frozen=True)
class WeightVector:
    psi: tuple[int, ...]
    weights: tuple[int, ...]
    eliminated: tuple[int, ...]

    def moment(self, i: int) -> int:
        """sum_b w_b b^i."""
        return sum(w * b**i for b, w in zip(self.psi, self.weights))


def default_eliminated(psi: Sequence[int], s: int) -> list[int]:
    """The |psi| - 2 largest odd indices in [3, s - 1]."""
    want = len(psi) - 2
    odd = list(range(3, s, 2))
    if want < 0 or want > len(odd):
        raise EliminationError(f"need {want} odd indices below s = {s}, only {len(odd)} exist")
    return odd[len(odd) - want :] if want else []


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel by exact reduced row echelon form."""
    A = [list(r) for r in rows]
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pr = next((i for i in range(row, len(A)) if A[i][col] != 0), None)
        if pr is None:
            continue
        A[row], A[pr] = A[pr], A[row]
        piv = A[row][col]
        A[row] = [v / piv for v in A[row]]
        for i in range(len(A)):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
        if row == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r_idx, pc in enumerate(pivots):
            v[pc] = -A[r_idx][fc]
        basis.append(v)
    return basis


def integer_weights(psi: Sequence[int], I: Sequence[int]) -> WeightVector:
    psi = tuple(int(b) for b in psi)
    I = tuple(sorted(int(i) for i in I))
    if len(set(psi)) != len(psi) or any(b < 1 for b in psi):
        raise EliminationError("psi must hold distinct positive integers")
    if len(I) != len(psi) - 2:
        raise EliminationError(f"|I| must be |psi| - 2 = {len(psi) - 2}, got {len(I)}")
    if any(i < 3 or i % 2 == 0 for i in I) or len(set(I)) != len(I):
        raise EliminationError("I must hold distinct odd integers >= 3")
    rows = [[Fraction(b) ** i for b in psi] for i in (0,) + I]
    basis = _nullspace(rows, len(psi))
    if len(basis) != 1:
        raise EliminationError(f"kernel has dimension {len(basis)}, expected 1")
    vec = basis[0]
    den = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    if next(v for v in ints if v) < 0:
        ints = [-v for v in ints]
    wv = WeightVector(psi=psi, weights=tuple(ints), eliminated=I)
    if any(wv.moment(i) for i in (0,) + I):  # pragma: no cover - guaranteed by the kernel
        raise EliminationError("weights do not annihilate the chosen moments")
    if wv.moment(1) == 0:
        raise EliminationError("sum_b w_b b vanishes; the combination loses its main term")
    return wv


@dataclass(frozen=True)
class EliminationWitness:
    n: int
    tilde_S: mpmath.mpf
    predicted: mpmath.mpf
    residual: mpmath.mpf


def _thetas(psi: Sequence[int]) -> list[Fraction]:
    return sorted({Fraction(k, b) for b in psi for k in range(1, b + 1)})


def assemble_tilde_S(
    wv: WeightVector,
    params: ProofParameters,
    sieve: SieveSets,
    n: int,
    prec: WorkingPrecision | int | None = None,
    *,
    form: Optional[FactoredForm] = None,
    linear_form: Optional[LinearForm] = None,
    series: Optional[Mapping[Fraction, mpmath.mpf]] = None,
) -> EliminationWitness:
    """S~_n by direct series, against its prediction from rho and zeta(i).

    The prediction drops the theta = 1 terms: their total is
    rho_{n,0,1} sum_b w_b = 0.
    """
    prec = as_precision(prec)
    if form is None:
        form = build_rational_function(n, params, sieve)
    if linear_form is None:
        linear_form = linear_form_coeffs(partial_fractions(form), _thetas(wv.psi))
    with working(prec):
        known = dict(series or {})
        series = {th: known[th] if th in known else evaluate_series(form, th, prec) for th in _thetas(wv.psi)}
        tilde = mpmath.fsum(w * series[Fraction(k, b)] for b, w in zip(wv.psi, wv.weights) for k in range(1, b + 1))
    # the prediction is a sum of huge rationals that nearly cancel; size its precision to that
    extra = max(cancellation_bits(linear_form, th, series[th]) for th in series) + max(wv.moment(i).bit_length() for i in range(1, params.s))
    hi = prec.bits + extra + 16
    with working(hi):
        pred = mpmath.fsum(
            w * mpf_of(linear_form.rho0[Fraction(k, b)]) for b, w in zip(wv.psi, wv.weights) for k in range(1, b)
        )
        for i, rho in linear_form.rho_odd.items():
            if i in wv.eliminated or not rho:
                continue
            pred += wv.moment(i) * mpf_of(rho) * hurwitz_zeta(i, 1, hi)
        return EliminationWitness(n=n, tilde_S=+tilde, predicted=+pred, residual=abs(tilde - pred))
