"""Published parameter sets, keyed by M."""

from __future__ import annotations

from .params import ProofParameters

HEADLINE_DELTAS: tuple[int, ...] = (
    (1, 1, 1, 1, 1, 2, 2, 3, 3, 4, 4, 5)
    + tuple(range(6, 25))
    + tuple(range(26, 105, 2))
    + (108, 112, 116, 120, 124)
)

M57_DELTAS: tuple[int, ...] = (1, 1, 1, 1, 1, 2, 2, 3, 3, 5, 5, 6, 6, 7, 8, 9, 10, 12)

PRESETS: dict[int, ProofParameters] = {
    1: ProofParameters(1, (0,)),
    7: ProofParameters(7, (0, 1)),
    57: ProofParameters(57, M57_DELTAS),
    563: ProofParameters(563, HEADLINE_DELTAS),
}
