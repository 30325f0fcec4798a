"""Driving the evolution process and recording trajectories.

One step updates a single focal node; time advances by 1/N per step so a
sweep of N steps spans one time unit. Trajectories sample the block edge
counts on a fixed stride and derive densities, mean in-degrees and
same-group fractions from them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .graph import LabeledDigraph
from .params import ModelParams

_CSV_HEADER = "t,w00,w01,w10,w11,z0,z1,beta0,beta1"


class Move(enum.Enum):
    SWAP = _kernels.SWAP
    ADD = _kernels.ADD
    REMOVE = _kernels.REMOVE


@dataclass(frozen=True)
class MoveOutcome:
    """What a single step did: which move fired and the edges it touched.

    removed holds the sources of deleted in-edges of the focal node; added
    is the source of the new in-edge, if any. A degenerate step (nothing to
    draw, or a swap that kept the existing edge) changes nothing.
    """

    move: Move
    focal: int
    removed: tuple[int, ...] = ()
    added: Optional[int] = None

    @property
    def changed(self) -> bool:
        return bool(self.removed) or self.added is not None

    @property
    def no_op(self) -> bool:
        return not self.changed


@dataclass
class SimClock:
    """Step counter with model time t = steps / node_count."""

    node_count: int
    steps: int = 0

    def tick(self, n_steps: int = 1) -> None:
        self.steps += n_steps

    @property
    def t(self) -> float:
        return self.steps / self.node_count


def _check_params(g: LabeledDigraph, params: ModelParams) -> None:
    if params.group_sizes != g.group_sizes:
        raise ValueError(
            f"params sized for groups {params.group_sizes}, graph has {g.group_sizes}")


def step(g: LabeledDigraph, params: ModelParams, rng: np.random.Generator,
         clock: Optional[SimClock] = None) -> MoveOutcome:
    """Advance the process by one step, mutating g in place."""
    _check_params(g, params)
    ps, pa, al, pr = params.arrays()
    removed_buf = np.empty(g.node_count, dtype=np.int32)
    move, focal, n_removed, added = _kernels.step_kernel(
        g.groups, g.adj, g.in_list, g.in_deg, g.ecounts,
        ps, pa, al, pr, rng, removed_buf)
    if clock is not None:
        clock.tick()
    return MoveOutcome(move=Move(move), focal=int(focal),
                       removed=tuple(int(x) for x in removed_buf[:n_removed]),
                       added=None if added < 0 else int(added))


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled trajectory of block structure over model time.

    omega rows use the exact per-pair normalization; beta entries are NaN
    whenever a group momentarily has no in-edges at all.
    """

    times: np.ndarray            # (k,)
    counts: np.ndarray           # (k, 4) block edge counts e00,e01,e10,e11
    omega: np.ndarray            # (k, 2, 2)
    z_mean: np.ndarray           # (k, 2)
    beta: np.ndarray             # (k, 2)
    clock: SimClock = field(compare=False, default=None)

    def to_csv_text(self) -> str:
        """CSV with header t,w00,w01,w10,w11,z0,z1,beta0,beta1.

        Undefined beta values render as empty fields.
        """
        lines = [_CSV_HEADER]
        for i in range(self.times.size):
            vals = [self.times[i],
                    self.omega[i, 0, 0], self.omega[i, 0, 1],
                    self.omega[i, 1, 0], self.omega[i, 1, 1],
                    self.z_mean[i, 0], self.z_mean[i, 1]]
            fields = [repr(float(v)) for v in vals]
            for b in self.beta[i]:
                fields.append("" if math.isnan(b) else repr(float(b)))
            lines.append(",".join(fields))
        return "\n".join(lines) + "\n"

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


def _derive_series(counts: np.ndarray, n0: int, n1: int):
    e00 = counts[:, 0].astype(float)
    e01 = counts[:, 1].astype(float)
    e10 = counts[:, 2].astype(float)
    e11 = counts[:, 3].astype(float)
    omega = np.empty((counts.shape[0], 2, 2))
    omega[:, 0, 0] = e00 / (n0 * (n0 - 1))
    omega[:, 0, 1] = e01 / (n0 * n1)
    omega[:, 1, 0] = e10 / (n0 * n1)
    omega[:, 1, 1] = e11 / (n1 * (n1 - 1))
    z = np.stack([(e00 + e10) / n0, (e01 + e11) / n1], axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        beta = np.stack([np.where(e00 + e10 > 0, e00 / (e00 + e10), np.nan),
                         np.where(e01 + e11 > 0, e11 / (e01 + e11), np.nan)], axis=1)
    return omega, z, beta


def run(g: LabeledDigraph, params: ModelParams, sweeps: int, sample_every: int,
        rng: np.random.Generator) -> TrajectoryRecord:
    """Run sweeps*N steps, sampling block counts every sample_every sweeps.

    The initial state is always recorded at t=0 and the final state at
    t=sweeps (once, if sweeps is not a multiple of sample_every). Both
    groups need at least 2 nodes so densities stay defined.
    """
    _check_params(g, params)
    if sweeps < 1 or sample_every < 1:
        raise ValueError("sweeps and sample_every must be >= 1")
    n0, n1 = g.group_sizes
    if n0 < 2 or n1 < 2:
        raise ValueError("trajectories need at least 2 nodes per group")
    n = g.node_count
    n_steps = sweeps * n
    stride = sample_every * n
    rows = n_steps // stride
    out_counts = np.empty((rows, 4), dtype=np.int64)
    first = np.array([g.block_edge_counts()], dtype=np.int64)
    ps, pa, al, pr = params.arrays()
    _kernels.run_kernel(g.groups, g.adj, g.in_list, g.in_deg, g.ecounts,
                        ps, pa, al, pr, rng, n_steps, stride, out_counts)
    times = [0.0] + [float(k * sample_every) for k in range(1, rows + 1)]
    blocks = [first, out_counts]
    if n_steps % stride:
        times.append(float(sweeps))
        blocks.append(np.array([g.block_edge_counts()], dtype=np.int64))
    counts = np.concatenate(blocks, axis=0)
    omega, z, beta = _derive_series(counts, n0, n1)
    return TrajectoryRecord(times=np.array(times), counts=counts, omega=omega,
                            z_mean=z, beta=beta,
                            clock=SimClock(node_count=n, steps=n_steps))


def empirical_beta(g: LabeledDigraph) -> tuple[float, float]:
    """Realized same-group in-edge fractions (NaN for a group with no in-edges)."""
    e00, e01, e10, e11 = g.block_edge_counts()
    in0, in1 = e00 + e10, e01 + e11
    return (e00 / in0 if in0 else math.nan,
            e11 / in1 if in1 else math.nan)
