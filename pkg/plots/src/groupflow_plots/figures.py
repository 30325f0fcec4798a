"""Figures rendered from groupflow output files.

Everything here reads the CSV and JSON files the groupflow CLI writes;
nothing imports the simulation package itself, so the only contract
between the two packages is the file formats. Three figure kinds are
supported: a block-density trajectory with its predicted asymptotes, a
phase-grid heatmap, and a critical-swap-probability sweep.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import matplotlib.figure
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch

FIGURE_KINDS = ("trajectory", "phase", "psstar-sweep")

# One fixed color per community kind so every phase figure reads the same
# way; U is grey so unclassified cells recede behind the real regions.
KIND_ORDER = ("A", "CP", "D", "SB", "U")
KIND_COLORS = {"A": "#4c72b0", "CP": "#dd8452", "D": "#55a868",
               "SB": "#c44e52", "U": "#8c8c8c"}

TRAJECTORY_COLUMNS = ("w00", "w01", "w10", "w11")
BLOCK_COLORS = dict(zip(TRAJECTORY_COLUMNS, ("#4c72b0", "#dd8452", "#55a868", "#c44e52")))

EQUATION_NAMES = ("A", "D", "CP1", "CP2")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: a figure kind, its input files and the output path.

    out may name a .png or .svg file; with no suffix both formats are
    written next to each other.
    """

    kind: str
    inputs: tuple[Path, ...]
    out: Path
    title: Optional[str] = None
    dpi: int = 150

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        object.__setattr__(self, "inputs", tuple(Path(p) for p in self.inputs))
        object.__setattr__(self, "out", Path(self.out))
        if self.out.suffix not in ("", ".png", ".svg"):
            raise ValueError(f"unsupported output format {self.out.suffix!r}")
        if self.dpi <= 0:
            raise ValueError("dpi must be positive")

    @property
    def csv_inputs(self) -> tuple[Path, ...]:
        return tuple(p for p in self.inputs if p.suffix == ".csv")

    @property
    def json_inputs(self) -> tuple[Path, ...]:
        return tuple(p for p in self.inputs if p.suffix == ".json")


@dataclass(frozen=True)
class RenderResult:
    """A rendered figure, the files written and what the inputs contained."""

    figure: matplotlib.figure.Figure
    written: tuple[Path, ...]
    info: dict


def _read_json(path: Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _predicted_omega(paths: tuple[Path, ...]) -> Optional[np.ndarray]:
    """Predicted density matrix from a summary or meanfield JSON file.

    Simulation summaries carry the prediction under "prediction" next to
    the measured window averages; a bare meanfield file has "omega" at top
    level. Returns None when no JSON input was given at all.
    """
    if not paths:
        return None
    for path in paths:
        data = _read_json(path)
        if "prediction" in data:
            data = data["prediction"]
        omega = data.get("omega")
        if omega is not None and np.asarray(omega, dtype=float).shape == (2, 2):
            return np.asarray(omega, dtype=float)
    raise ValueError(f"no 2x2 omega prediction found in {paths[0]}")


def trajectory_figure(spec: FigureSpec) -> tuple[matplotlib.figure.Figure, dict]:
    """Block densities against time, one curve per block.

    Several trajectory CSVs (replicas) are averaged pointwise; they must
    share the same sampling times. When a summary or meanfield JSON is
    among the inputs its predicted densities are drawn as dashed
    horizontal asymptotes in the matching colors.
    """
    csvs = spec.csv_inputs
    if not csvs:
        raise ValueError("trajectory figure needs at least one trajectory CSV")
    frames = []
    for path in csvs:
        frame = pd.read_csv(path)
        missing = [c for c in ("t",) + TRAJECTORY_COLUMNS if c not in frame.columns]
        if missing:
            raise ValueError(f"{path} lacks trajectory columns {missing}")
        if frame.empty:
            raise ValueError(f"{path} has no samples")
        frames.append(frame)
    times = frames[0]["t"].to_numpy()
    for path, frame in zip(csvs[1:], frames[1:]):
        other = frame["t"].to_numpy()
        if other.shape != times.shape or not np.array_equal(other, times):
            raise ValueError(f"{path} was sampled on a different time grid")

    predicted = _predicted_omega(spec.json_inputs)
    if predicted is None:
        warnings.warn("no prediction JSON given; drawing measured curves only",
                      stacklevel=2)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for col in TRAJECTORY_COLUMNS:
        series = np.mean([f[col].to_numpy() for f in frames], axis=0)
        ax.plot(times, series, color=BLOCK_COLORS[col], label=col)
    if predicted is not None:
        for idx, col in enumerate(TRAJECTORY_COLUMNS):
            ax.axhline(predicted[idx // 2, idx % 2], color=BLOCK_COLORS[col],
                       linestyle="--", linewidth=1.0,
                       label="predicted" if idx == 0 else "_nolegend_")
    ax.set_xlabel("time (sweeps)")
    ax.set_ylabel("block density")
    ax.set_xlim(times[0], times[-1])
    ax.legend(loc="best", fontsize="small")
    ax.set_title(spec.title or "block densities over time")
    info = {"replicas": len(frames), "samples": int(times.size),
            "asymptotes": 0 if predicted is None else 4}
    return fig, info


def _phase_grid(frame: pd.DataFrame, path: Path):
    """Pivot a phase CSV into (pa0 axis, pa1 axis, kind-code grid)."""
    for col in ("pa0", "pa1", "kind"):
        if col not in frame.columns:
            raise ValueError(f"{path} lacks phase column {col!r}")
    codes = frame["kind"].map({k: i for i, k in enumerate(KIND_ORDER)})
    if codes.isna().any():
        bad = sorted(set(frame["kind"][codes.isna()]))
        raise ValueError(f"{path} has unknown kind labels {bad}")
    table = frame.assign(code=codes).pivot(index="pa1", columns="pa0",
                                           values="code")
    if table.isna().any().any():
        raise ValueError(f"{path} does not cover a full pa0 x pa1 grid")
    return (table.columns.to_numpy(dtype=float),
            table.index.to_numpy(dtype=float),
            table.to_numpy(dtype=int))


def phase_figure(spec: FigureSpec) -> tuple[matplotlib.figure.Figure, dict]:
    """Heatmap of predicted community kind over the assortativity plane.

    Cells take the fixed per-kind colors and the legend always lists all
    five kinds, so single-phase grids still read unambiguously. Boundary
    JSON files among the inputs are drawn as black polylines on top.
    """
    csvs = spec.csv_inputs
    if len(csvs) != 1:
        raise ValueError("phase figure needs exactly one phase CSV")
    frame = pd.read_csv(csvs[0])
    pa0, pa1, grid = _phase_grid(frame, csvs[0])

    # Pad the extent by half a cell so pixels are centered on the grid
    # nodes the scan actually evaluated.
    half0 = (pa0[1] - pa0[0]) / 2 if pa0.size > 1 else 0.5
    half1 = (pa1[1] - pa1[0]) / 2 if pa1.size > 1 else 0.5

    fig, ax = plt.subplots(figsize=(6.0, 5.2))
    cmap = ListedColormap([KIND_COLORS[k] for k in KIND_ORDER])
    ax.imshow(grid, origin="lower", cmap=cmap, vmin=-0.5,
              vmax=len(KIND_ORDER) - 0.5, interpolation="nearest",
              extent=(pa0[0] - half0, pa0[-1] + half0,
                      pa1[0] - half1, pa1[-1] + half1),
              aspect="auto")

    n_polylines = 0
    for path in spec.json_inputs:
        for pair in _read_json(path).get("pairs", []):
            for polyline in pair["polylines"]:
                pts = np.asarray(polyline, dtype=float)
                ax.plot(pts[:, 0], pts[:, 1], color="black", linewidth=1.0)
                n_polylines += 1

    handles = [Patch(facecolor=KIND_COLORS[k], edgecolor="none", label=k)
               for k in KIND_ORDER]
    ax.legend(handles=handles, loc="upper left", fontsize="small",
              framealpha=0.9)
    ax.set_xlabel("assortativity preference, group 0")
    ax.set_ylabel("assortativity preference, group 1")
    ax.set_title(spec.title or "predicted community structure")
    info = {"kinds": sorted(set(frame["kind"])),
            "resolution": (int(pa0.size), int(pa1.size)),
            "boundary_polylines": n_polylines}
    return fig, info


def _sweep_points(paths: tuple[Path, ...]) -> list[dict]:
    """Critical-swap records from sweep or single-point JSON files."""
    points = []
    for path in paths:
        data = _read_json(path)
        if "points" in data:
            points.extend(data["points"])
        elif "roots" in data:
            points.append(data)
        else:
            raise ValueError(f"{path} is not a critical-swap result")
    points.sort(key=lambda p: p["b"])
    return points


def psstar_sweep_figure(spec: FigureSpec) -> tuple[matplotlib.figure.Figure, dict]:
    """Smallest boundary-equation roots against the group-size ratio.

    One thin curve per boundary equation (gaps where an equation has no
    root) plus a bold curve for their minimum, the swap probability at
    which the single-phase region ends.
    """
    if spec.csv_inputs:
        raise ValueError("psstar-sweep figure takes JSON inputs only")
    points = _sweep_points(spec.json_inputs)
    if not points:
        raise ValueError("no critical-swap points found in the inputs")
    b_values = np.array([p["b"] for p in points], dtype=float)

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for name in EQUATION_NAMES:
        roots = np.array([np.nan if p["roots"][name] is None
                          else p["roots"][name]["x"] for p in points])
        ax.plot(b_values, roots, marker=".", linewidth=1.0, alpha=0.8,
                label=name)
    psstar = np.array([np.nan if p["psstar"] is None else p["psstar"]
                       for p in points])
    ax.plot(b_values, psstar, color="black", marker="o", linewidth=2.0,
            label="smallest root")
    ax.set_xlabel("group size ratio")
    ax.set_ylabel("critical swap probability")
    ax.set_ylim(0.0, 1.0)
    ax.legend(loc="best", fontsize="small")
    ax.set_title(spec.title or "end of the single-phase region")
    cs = sorted({p["c"] for p in points})
    info = {"points": len(points), "c_values": cs,
            "with_root": int(np.sum(~np.isnan(psstar)))}
    return fig, info


_RENDERERS = {"trajectory": trajectory_figure,
              "phase": phase_figure,
              "psstar-sweep": psstar_sweep_figure}


def _save(fig: matplotlib.figure.Figure, out: Path, dpi: int) -> tuple[Path, ...]:
    targets = ([out] if out.suffix else
               [out.with_suffix(".png"), out.with_suffix(".svg")])
    out.parent.mkdir(parents=True, exist_ok=True)
    for target in targets:
        fig.savefig(target, dpi=dpi, bbox_inches="tight")
    return tuple(targets)


def render(spec: FigureSpec) -> RenderResult:
    """Build the figure for spec and write it to spec.out."""
    fig, info = _RENDERERS[spec.kind](spec)
    written = _save(fig, spec.out, spec.dpi)
    return RenderResult(figure=fig, written=written, info=info)
