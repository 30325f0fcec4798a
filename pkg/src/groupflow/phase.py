"""Phase diagrams over the two assortativity preferences.

The mean-field structure of the model depends on the preferences
(p_assort_0, p_assort_1), the swap probability, and two ratios: the
equilibrium degree ratio b = z*_0 / z*_1 and the size ratio c = N_0 / N_1.
Scans fix a reference scale (z*_1 = 10, N_1 = 1000, removal probabilities
implied by alpha_g = (1 - pr) / (z*_g pr)); predictions depend on the
scale only through b and c, so verdicts are scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metrics import CommunityType, StructureKind, classify_entries
from .meanfield import beta_equilibrium_scalar

KIND_CODES = {StructureKind.ASSORTATIVE: 0, StructureKind.CORE_PERIPHERY: 1,
              StructureKind.DISASSORTATIVE: 2, StructureKind.SOURCE_BASIN: 3,
              StructureKind.UNCLASSIFIED: 4}
KIND_BY_CODE = {v: k for k, v in KIND_CODES.items()}

_Z_SCALE = 10.0
_N_SCALE = 1000.0


def predicted_kind(pa0: float, pa1: float, b: float, c: float, p_swap: float,
                   p_remove: float = 0.5, z_scale: float = _Z_SCALE,
                   n_scale: float = _N_SCALE) -> tuple[StructureKind, Optional[int]]:
    """Mean-field verdict at one parameter point.

    z_scale and n_scale set the reference group (z*_1, N_1); the verdict is
    invariant to both, which the tests assert.
    """
    z1, n1 = z_scale, n_scale
    z0, n0 = b * z_scale, c * n_scale
    b0 = beta_equilibrium_scalar(p_swap, pa0, p_remove, n0, n1)
    b1 = beta_equilibrium_scalar(p_swap, pa1, p_remove, n1, n0)
    return classify_entries(z0 * b0 / n0, z1 * (1.0 - b1) / n0,
                            z0 * (1.0 - b0) / n1, z1 * b1 / n1)


@dataclass(frozen=True)
class PhaseGrid:
    """Classification verdicts over a (p_assort_0, p_assort_1) grid.

    kinds holds KIND_CODES entries, roles the distinguished group
    (-1 where none). Cell (i, j) sits at (pa0_values[i], pa1_values[j]).
    """

    pa0_values: np.ndarray
    pa1_values: np.ndarray
    b: float
    c: float
    p_swap: float
    p_remove: float
    kinds: np.ndarray
    roles: np.ndarray

    def community_at(self, i: int, j: int) -> CommunityType:
        kind = KIND_BY_CODE[int(self.kinds[i, j])]
        role = int(self.roles[i, j])
        return CommunityType(kind, role if role >= 0 else None)

    def label_at(self, i: int, j: int) -> str:
        """Kind letter plus role digit where one applies, e.g. 'A', 'CP0'."""
        kind = KIND_BY_CODE[int(self.kinds[i, j])]
        role = int(self.roles[i, j])
        return kind.value + (str(role) if role >= 0 else "")

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for i in range(self.pa0_values.size):
            for j in range(self.pa1_values.size):
                lab = self.label_at(i, j)
                out[lab] = out.get(lab, 0) + 1
        return out

    def to_csv_text(self) -> str:
        """CSV with header pa0,pa1,kind,core,basin; role fields empty if unset."""
        lines = ["pa0,pa1,kind,core,basin"]
        for i, x in enumerate(self.pa0_values):
            for j, y in enumerate(self.pa1_values):
                kind = KIND_BY_CODE[int(self.kinds[i, j])]
                role = int(self.roles[i, j])
                core = str(role) if (kind is StructureKind.CORE_PERIPHERY and role >= 0) else ""
                basin = str(role) if (kind is StructureKind.SOURCE_BASIN and role >= 0) else ""
                lines.append(f"{repr(float(x))},{repr(float(y))},{kind.value},{core},{basin}")
        return "\n".join(lines) + "\n"

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv_text())


def scan_grid(b: float, c: float, p_swap: float, resolution: int,
              p_remove: float = 0.5) -> PhaseGrid:
    """Classify every node of a resolution x resolution preference grid.

    Both axes run over linspace(0, 1, resolution), endpoints included.
    """
    if not (b > 0 and c > 0):
        raise ValueError("b and c must be positive")
    if not 0.0 <= p_swap <= 1.0:
        raise ValueError(f"p_swap={p_swap} outside [0, 1]")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    pa = np.linspace(0.0, 1.0, resolution)
    z1, n1 = _Z_SCALE, _N_SCALE
    z0, n0 = b * z1, c * n1
    beta0 = np.array([beta_equilibrium_scalar(p_swap, x, p_remove, n0, n1) for x in pa])
    beta1 = np.array([beta_equilibrium_scalar(p_swap, y, p_remove, n1, n0) for y in pa])
    w00 = z0 * beta0 / n0
    w10 = z0 * (1.0 - beta0) / n1
    w01 = z1 * (1.0 - beta1) / n0
    w11 = z1 * beta1 / n1
    kinds = np.empty((resolution, resolution), dtype=np.int8)
    roles = np.empty((resolution, resolution), dtype=np.int8)
    for i in range(resolution):
        for j in range(resolution):
            kind, role = classify_entries(w00[i], w01[j], w10[i], w11[j])
            kinds[i, j] = KIND_CODES[kind]
            roles[i, j] = -1 if role is None else role
    return PhaseGrid(pa0_values=pa, pa1_values=pa, b=b, c=c, p_swap=p_swap,
                     p_remove=p_remove, kinds=kinds, roles=roles)


# ----------------------------------------------------------------------
# critical swap probability

EQUATION_NAMES = ("A", "D", "CP1", "CP2")


def boundary_residuals(x: float, b: float, c: float) -> np.ndarray:
    """Residuals of the four phase-boundary equations at swap probability x.

    Zero residual marks a boundary crossing on the diagonal of the
    preference plane: order (A, D, CP1, CP2). Entries are NaN where the
    underlying rational expression is undefined.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x={x} outside (0, 1)")
    out = np.empty(4)
    y = 1.0 - x
    # all-assortative onset
    num = (1.0 - b) * (1.0 + x) * (1.0 + c - x + c * x)
    den = 2.0 * x * (1.0 + c - x + c * x + b * (1.0 - c) * (1.0 + x))
    out[0] = num / den - 1.0 if den != 0.0 else math.nan
    # all-disassortative onset
    num = b * c * x * x + 0.5 * x * y * (b + 2.0 * b * c - 1.0) \
        + 0.25 * y * y * (b * c + b - c - 1.0)
    den = x * x * (1.0 - b + b * c) + 0.5 * x * y * (c + 1.0 + b * c + b)
    out[1] = num / den if den != 0.0 else math.nan
    # first core-periphery onset
    num = (1.0 - b * c) * x * x \
        + 0.5 * x * y * (1.0 + 1.0 / (c + 1.0) - b / (c + 1.0) - b * c) \
        + 0.25 * y * y * (c + 1.0 - b * c - b)
    den = x * x * (1.0 - b * c + b) + 0.5 * x * y * (c + 1.0 - b * c * c + b - b * c)
    out[2] = num / den - 1.0 if den != 0.0 else math.nan
    # second core-periphery onset
    num = b * c * x * x + 0.5 * x * y * (2.0 * b * c + b - c) \
        + 0.25 * y * y * (b * c - c + b - 1.0)
    den = x * x * (c + b * c - b) + 0.5 * x * y * (c + 1.0 + b * c - b)
    out[3] = num / den if den != 0.0 else math.nan
    return out


@dataclass(frozen=True)
class RootRecord:
    """One bisection result: the root, its bracket and convergence data."""

    x: float
    bracket: tuple[float, float]
    iterations: int
    residual: float

    def to_json_dict(self) -> dict:
        return {"x": self.x, "bracket": list(self.bracket),
                "iterations": self.iterations, "residual": self.residual}


@dataclass(frozen=True)
class CriticalSwap:
    """Smallest root of each boundary equation and their overall minimum.

    A None entry means the equation has no root in (0, 1) for these
    ratios; psstar is None only when all four are rootless.
    """

    b: float
    c: float
    roots: dict[str, Optional[RootRecord]]

    @property
    def psstar(self) -> Optional[float]:
        found = [r.x for r in self.roots.values() if r is not None]
        return min(found) if found else None

    def to_json_dict(self) -> dict:
        return {"b": self.b, "c": self.c,
                "roots": {k: (None if r is None else r.to_json_dict())
                          for k, r in self.roots.items()},
                "psstar": self.psstar}


def _bisect_smallest(f, xs: np.ndarray, tol: float) -> Optional[RootRecord]:
    """Smallest sign-change root of f over the scan points xs.

    Brackets whose refined midpoint does not actually annihilate f (sign
    flips across a pole of the rational residual) are skipped.
    """
    vals = np.array([f(x) for x in xs])
    for idx in range(xs.size - 1):
        f1, f2 = vals[idx], vals[idx + 1]
        if math.isnan(f1) or math.isnan(f2):
            continue
        if f1 == 0.0:
            return RootRecord(float(xs[idx]), (float(xs[idx]), float(xs[idx])), 0, 0.0)
        if f1 * f2 > 0.0:
            continue
        lo, hi = float(xs[idx]), float(xs[idx + 1])
        flo = f1
        iters = 0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            iters += 1
            if fm == 0.0:
                lo = hi = mid
                break
            if flo * fm < 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        root = 0.5 * (lo + hi)
        resid = f(root)
        if abs(resid) < 1e-3:
            return RootRecord(root, (float(xs[idx]), float(xs[idx + 1])), iters, float(resid))
    return None


def critical_swap(b: float, c: float, tol: float = 1e-10,
                  scan_step: float = 1e-3) -> CriticalSwap:
    """Smallest swap probability at which any phase boundary is crossed.

    Each of the four boundary equations is scanned over (0, 1) on a
    scan_step lattice and its smallest bracketed root refined by bisection
    to width tol. For b > 1 the groups are relabeled (b -> 1/b, c -> 1/c),
    which swaps the two core-periphery equations and fixes A and D.
    """
    if not (b > 0 and c > 0):
        raise ValueError("b and c must be positive")
    if b > 1.0:
        inner = critical_swap(1.0 / b, 1.0 / c, tol=tol, scan_step=scan_step)
        roots = {"A": inner.roots["A"], "D": inner.roots["D"],
                 "CP1": inner.roots["CP2"], "CP2": inner.roots["CP1"]}
        return CriticalSwap(b=b, c=c, roots=roots)
    xs = np.arange(scan_step, 1.0, scan_step)
    roots: dict[str, Optional[RootRecord]] = {}
    for k, name in enumerate(EQUATION_NAMES):
        roots[name] = _bisect_smallest(lambda x, k=k: boundary_residuals(x, b, c)[k],
                                       xs, tol)
    return CriticalSwap(b=b, c=c, roots=roots)


# ----------------------------------------------------------------------
# boundary extraction

def extract_boundaries(grid: PhaseGrid) -> dict[tuple[str, str], list[np.ndarray]]:
    """Polylines separating differing verdicts, keyed by the label pair.

    Cell-border tracing: every edge between 4-adjacent cells with
    different labels contributes a segment of the shared cell border;
    touching segments of the same label pair are chained into polylines
    (arrays of (pa0, pa1) vertices). A uniform grid yields {}.
    """
    r0, r1 = grid.pa0_values.size, grid.pa1_values.size
    if r0 < 2 or r1 < 2:
        return {}
    dx = grid.pa0_values[1] - grid.pa0_values[0]
    dy = grid.pa1_values[1] - grid.pa1_values[0]
    labels = [[grid.label_at(i, j) for j in range(r1)] for i in range(r0)]

    def key(x: float, y: float) -> tuple[int, int]:
        return (round(2.0 * x / dx), round(2.0 * y / dy))

    segments: dict[tuple[str, str], list[tuple]] = {}
    for i in range(r0):
        for j in range(r1):
            here = labels[i][j]
            if i + 1 < r0 and labels[i + 1][j] != here:
                x = grid.pa0_values[i] + 0.5 * dx
                y = grid.pa1_values[j]
                pair = tuple(sorted((here, labels[i + 1][j])))
                segments.setdefault(pair, []).append(
                    ((x, y - 0.5 * dy), (x, y + 0.5 * dy)))
            if j + 1 < r1 and labels[i][j + 1] != here:
                x = grid.pa0_values[i]
                y = grid.pa1_values[j] + 0.5 * dy
                pair = tuple(sorted((here, labels[i][j + 1])))
                segments.setdefault(pair, []).append(
                    ((x - 0.5 * dx, y), (x + 0.5 * dx, y)))

    out: dict[tuple[str, str], list[np.ndarray]] = {}
    for pair, segs in segments.items():
        adjacency: dict[tuple[int, int], list[int]] = {}
        for s_id, (p, q) in enumerate(segs):
            adjacency.setdefault(key(*p), []).append(s_id)
            adjacency.setdefault(key(*q), []).append(s_id)
        used = [False] * len(segs)
        polylines = []
        # open chains first (endpoints of degree 1), then leftover loops
        starts = [k for k, ids in adjacency.items() if len(ids) == 1]
        for start in starts + list(adjacency.keys()):
            if all(used):
                break
            node = start
            pts = None
            while True:
                nxt = next((s for s in adjacency[node] if not used[s]), None)
                if nxt is None:
                    break
                used[nxt] = True
                p, q = segs[nxt]
                if key(*p) != node:
                    p, q = q, p
                if pts is None:
                    pts = [p]
                pts.append(q)
                node = key(*q)
            if pts is not None and len(pts) > 1:
                polylines.append(np.array(pts))
        out[pair] = polylines
    return out


def boundaries_to_json_dict(boundaries: dict[tuple[str, str], list[np.ndarray]]) -> dict:
    """JSON-ready form of extract_boundaries output."""
    pairs = []
    for pair in sorted(boundaries):
        pairs.append({"labels": list(pair),
                      "polylines": [p.tolist() for p in boundaries[pair]]})
    return {"pairs": pairs}
