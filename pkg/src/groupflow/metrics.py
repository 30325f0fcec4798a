"""Block density matrices and the four-way community classification.

A 2x2 density matrix w holds the realized edge densities between the two
groups, w[r][s] being the density of edges from group r to group s under
one of two normalizations: per possible node pair, or per product of the
block out- and in-degree totals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import LabeledDigraph


class Normalization(enum.Enum):
    """How density matrix entries were normalized."""

    POSSIBLE_PAIRS = "possible-pairs"
    DEGREE_PRODUCT = "degree-product"


class StructureKind(enum.Enum):
    ASSORTATIVE = "A"
    CORE_PERIPHERY = "CP"
    DISASSORTATIVE = "D"
    SOURCE_BASIN = "SB"
    UNCLASSIFIED = "U"


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 block edge densities plus the normalization they came from."""

    entries: np.ndarray
    normalization: Normalization
    group_sizes: Optional[tuple[float, float]] = None

    def __post_init__(self):
        w = np.asarray(self.entries, dtype=float)
        if w.shape != (2, 2):
            raise ValueError("entries must be a 2x2 matrix")
        if np.isnan(w).any():
            raise ValueError("density entries must not be NaN")
        if (w < 0).any():
            raise ValueError("density entries must be non-negative")
        object.__setattr__(self, "entries", w)

    def __getitem__(self, key):
        return self.entries[key]


@dataclass(frozen=True)
class CommunityType:
    """Classification verdict: a kind plus the distinguished group, if any.

    role is the core group for CORE_PERIPHERY and the basin group (the one
    with both strong internal wiring and strong inflow from outside) for
    SOURCE_BASIN; it must be None for the symmetric kinds.
    """

    kind: StructureKind
    role: Optional[int] = None

    def __post_init__(self):
        needs_role = self.kind in (StructureKind.CORE_PERIPHERY, StructureKind.SOURCE_BASIN)
        if needs_role and self.role not in (0, 1):
            raise ValueError(f"{self.kind.value} requires role 0 or 1")
        if not needs_role and self.role is not None:
            raise ValueError(f"{self.kind.value} takes no role")

    @property
    def core(self) -> Optional[int]:
        return self.role if self.kind is StructureKind.CORE_PERIPHERY else None

    @property
    def basin(self) -> Optional[int]:
        return self.role if self.kind is StructureKind.SOURCE_BASIN else None

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "core": self.core, "basin": self.basin}

    @classmethod
    def from_json_dict(cls, d: dict) -> "CommunityType":
        kind = StructureKind(d["kind"])
        if kind is StructureKind.CORE_PERIPHERY:
            return cls(kind, d.get("core"))
        if kind is StructureKind.SOURCE_BASIN:
            return cls(kind, d.get("basin"))
        return cls(kind)


# ----------------------------------------------------------------------
# densities

def density_from_counts(counts, group_sizes, exact_diagonal: bool = True) -> DensityMatrix:
    """Per-pair densities from block edge counts (e00, e01, e10, e11).

    Off-diagonal denominators are N_r * N_s. Diagonal denominators are
    N_r * (N_r - 1) when exact_diagonal, else the large-N form N_r**2.
    """
    e00, e01, e10, e11 = (float(x) for x in counts)
    n0, n1 = (float(x) for x in group_sizes)
    if exact_diagonal and (n0 < 2 or n1 < 2):
        raise ValueError("per-pair density needs at least 2 nodes per group")
    if not exact_diagonal and (n0 <= 0 or n1 <= 0):
        raise ValueError("group sizes must be positive")
    d00 = n0 * (n0 - 1) if exact_diagonal else n0 * n0
    d11 = n1 * (n1 - 1) if exact_diagonal else n1 * n1
    w = np.array([[e00 / d00, e01 / (n0 * n1)],
                  [e10 / (n0 * n1), e11 / d11]])
    return DensityMatrix(w, Normalization.POSSIBLE_PAIRS, (n0, n1))


def density(g: LabeledDigraph) -> DensityMatrix:
    """Per-pair block densities of a graph; both groups need >= 2 nodes."""
    return density_from_counts(g.block_edge_counts(), g.group_sizes)


def density_degree_normalized(counts) -> DensityMatrix:
    """Densities normalized by block degree totals instead of pair counts.

    Entry (r, s) is e_rs divided by the product of group r's total
    out-degree and group s's total in-degree. Any zero total is an error:
    the corresponding entries are undefined, not zero.
    """
    e00, e01, e10, e11 = (float(x) for x in counts)
    out0, out1 = e00 + e01, e10 + e11
    in0, in1 = e00 + e10, e01 + e11
    for name, val in (("out-degree of group 0", out0), ("out-degree of group 1", out1),
                      ("in-degree of group 0", in0), ("in-degree of group 1", in1)):
        if val == 0:
            raise ValueError(f"degree-normalized density undefined: total {name} is zero")
    w = np.array([[e00 / (out0 * in0), e01 / (out0 * in1)],
                  [e10 / (out1 * in0), e11 / (out1 * in1)]])
    return DensityMatrix(w, Normalization.DEGREE_PRODUCT)


def density_degree_normalized_graph(g: LabeledDigraph) -> DensityMatrix:
    return density_degree_normalized(g.block_edge_counts())


# ----------------------------------------------------------------------
# classification

def classify_entries(w00: float, w01: float, w10: float, w11: float):
    """Low-level classifier on raw densities; returns (StructureKind, role).

    All comparisons are strict, so any tie among the deciding entries falls
    through to UNCLASSIFIED. Exactly one condition can hold: each kind pins
    down which two entries are the strict top pair, and the six possible
    top pairs are disjoint.
    """
    if math.isnan(w00) or math.isnan(w01) or math.isnan(w10) or math.isnan(w11):
        raise ValueError("cannot classify NaN densities")
    if max(w01, w10) < min(w00, w11):
        return StructureKind.ASSORTATIVE, None
    if min(w01, w10) > max(w00, w11):
        return StructureKind.DISASSORTATIVE, None
    if min(w00, w01) > max(w10, w11):
        return StructureKind.CORE_PERIPHERY, 0
    if min(w11, w10) > max(w01, w00):
        return StructureKind.CORE_PERIPHERY, 1
    if min(w00, w10) > max(w01, w11):
        return StructureKind.SOURCE_BASIN, 0
    if min(w11, w01) > max(w10, w00):
        return StructureKind.SOURCE_BASIN, 1
    return StructureKind.UNCLASSIFIED, None


def classify(w: DensityMatrix) -> CommunityType:
    """Classify a density matrix as A, CP, D, SB or U.

    Assortative: both within-group densities strictly exceed both
    between-group ones. Disassortative: the reverse. Core-periphery with
    core r: both densities of edges leaving group r strictly exceed both
    densities of edges leaving the other group. Source-basin with basin r:
    both densities of edges arriving at group r strictly exceed both
    densities arriving at the other group. Anything else (any deciding
    tie) is unclassified.
    """
    e = w.entries
    kind, role = classify_entries(e[0, 0], e[0, 1], e[1, 0], e[1, 1])
    return CommunityType(kind, role)
