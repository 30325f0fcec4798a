"""Model parameters for the two-group evolution process."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

Pair = tuple[float, float]


def _pair(value, name: str, lo: float, hi: float,
          lo_open: bool = False, hi_open: bool = False) -> Pair:
    """Normalize a scalar or length-2 sequence to a validated float pair."""
    if np.isscalar(value):
        pair = (float(value), float(value))
    else:
        seq = tuple(float(v) for v in value)
        if len(seq) != 2:
            raise ValueError(f"{name} must be a scalar or a pair")
        pair = seq
    for v in pair:
        if not np.isfinite(v):
            raise ValueError(f"{name}={v} is not finite")
        ok_lo = v > lo if lo_open else v >= lo
        ok_hi = v < hi if hi_open else v <= hi
        if not (ok_lo and ok_hi):
            bounds = f"{'(' if lo_open else '['}{lo}, {hi}{')' if hi_open else ']'}"
            raise ValueError(f"{name}={v} outside {bounds}")
    return pair


@dataclass(frozen=True)
class ModelParams:
    """Per-group probabilities of the evolution process.

    p_swap: probability the focal node plays a swap move.
    p_assort: probability the same-group edge wins a mixed-group swap.
    alpha: per-edge removal probability in the remove move, in (0, 1].
    group_sizes: node counts (N_0, N_1).
    p_remove: probability the change move removes rather than adds, in (0, 1).

    Scalars broadcast to both groups.
    """

    p_swap: Pair
    p_assort: Pair
    alpha: Pair
    group_sizes: tuple[int, int]
    p_remove: Union[float, Pair] = (0.5, 0.5)

    def __post_init__(self):
        object.__setattr__(self, "p_swap", _pair(self.p_swap, "p_swap", 0.0, 1.0))
        object.__setattr__(self, "p_assort", _pair(self.p_assort, "p_assort", 0.0, 1.0))
        object.__setattr__(self, "alpha", _pair(self.alpha, "alpha", 0.0, 1.0, lo_open=True))
        object.__setattr__(self, "p_remove",
                           _pair(self.p_remove, "p_remove", 0.0, 1.0, lo_open=True, hi_open=True))
        sizes = tuple(int(n) for n in self.group_sizes)
        if len(sizes) != 2 or sizes[0] < 1 or sizes[1] < 1:
            raise ValueError("group_sizes must be two positive integers")
        object.__setattr__(self, "group_sizes", sizes)

    @property
    def node_count(self) -> int:
        return self.group_sizes[0] + self.group_sizes[1]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Per-group parameter arrays in kernel order."""
        return (np.array(self.p_swap), np.array(self.p_assort),
                np.array(self.alpha), np.array(self.p_remove))

    def to_json_dict(self) -> dict:
        return {
            "p_swap": list(self.p_swap),
            "p_assort": list(self.p_assort),
            "alpha": list(self.alpha),
            "p_remove": list(self.p_remove),
            "group_sizes": list(self.group_sizes),
        }
