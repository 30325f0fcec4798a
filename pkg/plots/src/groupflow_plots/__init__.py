"""Figures for groupflow trajectory, phase-grid and critical-swap files."""

from .figures import (
    BLOCK_COLORS,
    EQUATION_NAMES,
    FIGURE_KINDS,
    KIND_COLORS,
    KIND_ORDER,
    FigureSpec,
    RenderResult,
    phase_figure,
    psstar_sweep_figure,
    render,
    trajectory_figure,
)

__version__ = "0.1.0"

__all__ = [
    "BLOCK_COLORS",
    "EQUATION_NAMES",
    "FIGURE_KINDS",
    "KIND_COLORS",
    "KIND_ORDER",
    "FigureSpec",
    "RenderResult",
    "phase_figure",
    "psstar_sweep_figure",
    "render",
    "trajectory_figure",
    "__version__",
]
