"""Simulation and mean-field analysis of directed two-group networks."""

__version__ = "0.1.0"

from ._jit import JIT_ENABLED
from .graph import LabeledDigraph
from .params import ModelParams
from .metrics import (CommunityType, DensityMatrix, Normalization,
                      StructureKind, classify, classify_entries, density,
                      density_degree_normalized,
                      density_degree_normalized_graph, density_from_counts)
from .meanfield import (MeanFieldSolution, beta_equilibrium,
                        beta_equilibrium_scalar, beta_swapping_limit,
                        omega_predicted, recurrence_coefficients,
                        recurrence_solve, reparameterize_remove,
                        step_probabilities, z_fixed_point, z_fixed_points)
from .dynamics import (Move, MoveOutcome, SimClock, TrajectoryRecord,
                       empirical_beta, run, step)
from .phase import (CriticalSwap, PhaseGrid, boundary_residuals, critical_swap,
                    extract_boundaries, predicted_kind, scan_grid)

__all__ = [
    "JIT_ENABLED", "__version__",
    "LabeledDigraph", "ModelParams",
    "CommunityType", "DensityMatrix", "Normalization", "StructureKind",
    "classify", "classify_entries", "density", "density_degree_normalized",
    "density_degree_normalized_graph", "density_from_counts",
    "MeanFieldSolution", "beta_equilibrium", "beta_equilibrium_scalar",
    "beta_swapping_limit", "omega_predicted", "recurrence_coefficients",
    "recurrence_solve", "reparameterize_remove", "step_probabilities",
    "z_fixed_point", "z_fixed_points",
    "Move", "MoveOutcome", "SimClock", "TrajectoryRecord", "empirical_beta",
    "run", "step",
    "CriticalSwap", "PhaseGrid", "boundary_residuals", "critical_swap",
    "extract_boundaries", "predicted_kind", "scan_grid",
]
