"""The parameter tuple (M, delta_1..delta_J, r, s, B) and its admissibility rules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arith import RationalLike, to_fraction


class ParameterError(ValueError):
    """Inadmissible parameter set."""


@dataclass(frozen=True)
class ProofParameters:
    M: int
    deltas: tuple[int, ...]
    r: Fraction = Fraction(1)
    s: Optional[int] = None
    B: Optional[int] = None
    J: int = field(default=0)

    def __init__(
        self,
        M: int,
        deltas: Sequence[int],
        r: RationalLike | str = 1,
        s: Optional[int] = None,
        B: Optional[int] = None,
        J: Optional[int] = None,
    ) -> None:
        deltas = tuple(int(d) for d in deltas)
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "r", to_fraction(r))
        object.__setattr__(self, "s", None if s is None else int(s))
        object.__setattr__(self, "B", None if B is None else int(B))
        object.__setattr__(self, "J", len(deltas) if J is None else int(J))
        self.validate()

    def validate(self) -> None:
        M, ds = self.M, self.deltas
        if M < 1:
            raise ParameterError("M must be a positive integer")
        if not ds:
            raise ParameterError("at least one delta is required")
        if self.J != len(ds):
            raise ParameterError(f"J = {self.J} but {len(ds)} deltas were given")
        if any(d < 0 for d in ds):
            raise ParameterError("deltas must be non-negative")
        if any(a > b for a, b in zip(ds, ds[1:])):
            raise ParameterError("deltas must be non-decreasing")
        if 2 * ds[-1] >= M:
            raise ParameterError("deltas must satisfy delta_J < M/2")
        if self.r <= 0:
            raise ParameterError("r must be positive")
        if self.s is not None:
            if self.s < 1 or self.s % (2 * self.J) != 0:
                raise ParameterError("s must be a positive multiple of 2J")
        if self.B is not None and self.B < 1:
            raise ParameterError("B must be a positive integer")

    @property
    def delta1(self) -> int:
        return self.deltas[0]

    @property
    def den_r(self) -> int:
        return self.r.denominator

    @property
    def top_width(self) -> int:
        """M - 2*delta_1, the widest denominator block."""
        return self.M - 2 * self.deltas[0]

    def size_condition(self) -> bool | None:
        """Whether s >= 10(2r+1)M B^2 holds; None when s or B is unset.

        Reported only: desk-scale exact runs routinely violate it.
        """
        if self.s is None or self.B is None:
            return None
        return self.s >= 10 * (2 * self.r + 1) * self.M * self.B**2

    def with_(self, **changes) -> "ProofParameters":
        kw = dict(M=self.M, deltas=self.deltas, r=self.r, s=self.s, B=self.B)
        kw.update(changes)
        if "deltas" in changes:
            kw["J"] = len(kw["deltas"])
        return ProofParameters(**kw)

    def digest(self) -> str:
        return f"M={self.M};deltas={','.join(map(str, self.deltas))}"
