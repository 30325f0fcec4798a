"""Mean-field equilibrium predictions for the evolution process.

Two quantities drive everything: the equilibrium in-degree z* fixed by the
add/remove balance of the change move, and the equilibrium fraction beta_r
of same-group in-edges of a group-r node. From these the predicted block
density matrix and its classification follow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .metrics import CommunityType, DensityMatrix, classify, density_from_counts
from .params import ModelParams


def z_fixed_point(alpha: float, p_remove: float = 0.5) -> float:
    """Equilibrium in-degree of the change move alone.

    Adding one edge with probability (1 - p_remove) balances removing
    alpha*z edges with probability p_remove, giving
    z* = (1 - p_remove) / (alpha * p_remove).
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside (0, 1]")
    if not 0.0 < p_remove < 1.0:
        raise ValueError(f"p_remove={p_remove} outside (0, 1)")
    return (1.0 - p_remove) / (alpha * p_remove)


def z_fixed_points(params: ModelParams) -> tuple[float, float]:
    return (z_fixed_point(params.alpha[0], params.p_remove[0]),
            z_fixed_point(params.alpha[1], params.p_remove[1]))


def beta_equilibrium_scalar(p_swap: float, p_assort: float, p_remove: float,
                            n_own: float, n_other: float) -> float:
    """Equilibrium same-group fraction of a node's in-edges.

    Balances the same-group gain and loss rates of the swap move against
    the group-blind drift of the change move:

        beta = (ps*pa + (1-ps)*(1-pr))
             / (ps*(pa + (1-pa)*n_other/n_own) + (1-ps)*(1-pr)*n/n_own)

    n_own and n_other may be real-valued (only their ratio matters).
    """
    if n_own <= 0 or n_other <= 0:
        raise ValueError("group sizes must be positive")
    n = n_own + n_other
    num = p_swap * p_assort + (1.0 - p_swap) * (1.0 - p_remove)
    den = (p_swap * (p_assort + (1.0 - p_assort) * n_other / n_own)
           + (1.0 - p_swap) * (1.0 - p_remove) * n / n_own)
    if den == 0.0:
        raise ValueError(
            f"beta undefined: zero gain+loss rate (p_swap={p_swap}, "
            f"p_assort={p_assort}, p_remove={p_remove})")
    beta = num / den
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta={beta} escaped [0, 1]; inputs are inconsistent")
    return beta


def beta_equilibrium(params: ModelParams, group: int) -> float:
    """Equilibrium same-group in-edge fraction for one group."""
    r, s = (0, 1) if group == 0 else (1, 0)
    return beta_equilibrium_scalar(params.p_swap[r], params.p_assort[r],
                                   params.p_remove[r],
                                   params.group_sizes[r], params.group_sizes[s])


def beta_swapping_limit(p_assort: float, n_own: float, n_other: float) -> float:
    """beta in the pure-swap limit p_swap = 1: pa / (pa + (1-pa)*n_other/n_own)."""
    if n_own <= 0 or n_other <= 0:
        raise ValueError("group sizes must be positive")
    den = p_assort + (1.0 - p_assort) * n_other / n_own
    if den == 0.0:
        raise ValueError("beta undefined at p_assort=0 with these sizes")
    return p_assort / den


class StepProbabilities(NamedTuple):
    """Per-step rates of the four elementary e_rr gain/loss events.

    swap_gain / swap_loss are probabilities that a single step raises /
    lowers e_rr through a swap. change_gain is the probability the add
    branch contributes a same-group edge. change_loss is the loss rate per
    unit equilibrium in-degree: the expected number of same-group edges
    removed per step is change_loss * z_r.
    """

    swap_gain: float
    swap_loss: float
    change_gain: float
    change_loss: float


def step_probabilities(params: ModelParams, beta_r: float, group: int) -> StepProbabilities:
    """Elementary same-group gain/loss rates at same-group fraction beta_r."""
    if not 0.0 <= beta_r <= 1.0:
        raise ValueError(f"beta_r={beta_r} outside [0, 1]")
    r, s = (0, 1) if group == 0 else (1, 0)
    n = params.node_count
    fr = params.group_sizes[r] / n
    fs = params.group_sizes[s] / n
    ps, pa = params.p_swap[r], params.p_assort[r]
    pr, al = params.p_remove[r], params.alpha[r]
    return StepProbabilities(
        swap_gain=fr * ps * pa * (1.0 - beta_r) * fr,
        swap_loss=fr * ps * (1.0 - pa) * beta_r * fs,
        change_gain=fr * (1.0 - ps) * (1.0 - pr) * fr,
        change_loss=fr * (1.0 - ps) * pr * beta_r * al,
    )


def recurrence_coefficients(params: ModelParams, group: int,
                            total_in: float) -> tuple[float, float]:
    """Linear recurrence e_rr(t+1) = B*e_rr(t) + C for the same-group count.

    total_in is the (constant) total number of in-edges of group r. The
    change-move loss is evaluated at the equilibrium degree, where the
    per-step expected removal alpha*z equals (1-pr)/pr.
    """
    if total_in <= 0:
        raise ValueError("total_in must be positive")
    r, s = (0, 1) if group == 0 else (1, 0)
    n = params.node_count
    fr = params.group_sizes[r] / n
    fs = params.group_sizes[s] / n
    ps, pa, pr = params.p_swap[r], params.p_assort[r], params.p_remove[r]
    b = 1.0 - fr * (ps * (pa * fr + (1.0 - pa) * fs)
                    + (1.0 - ps) * (1.0 - pr)) / total_in
    c = fr * fr * (ps * pa + (1.0 - ps) * (1.0 - pr))
    return b, c


class RecurrenceSolution(NamedTuple):
    trajectory: np.ndarray
    limit: float
    b: float
    c: float


def recurrence_solve(params: ModelParams, group: int, e0: float,
                     total_in: float, steps: int) -> RecurrenceSolution:
    """Closed-form geometric solution of the same-group count recurrence.

    trajectory[k] = B^k * e0 + C * (1 - B^k) / (1 - B) for k = 0..steps;
    the limit C / (1 - B) equals beta_r * total_in. B >= 1 is rejected.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    b, c = recurrence_coefficients(params, group, total_in)
    if b >= 1.0:
        raise ValueError(f"recurrence does not contract (B={b} >= 1)")
    powers = b ** np.arange(steps + 1)
    traj = powers * e0 + c * (1.0 - powers) / (1.0 - b)
    return RecurrenceSolution(traj, c / (1.0 - b), b, c)


def reparameterize_remove(params: ModelParams) -> ModelParams:
    """Equivalent parameters with the remove/add split reset to 1/2.

    The change move with split pr and removal probability alpha has the
    same equilibrium (same beta and z*) as a split-1/2 move with
    alpha' = alpha * pr / (1 - pr) and swap probability
    ps' = ps / (2 * (1 - ps) * (1 - pr) + ps), applied per group. Raises
    when alpha' would leave (0, 1], i.e. when the equilibrium in-degree
    sits below 1 and no valid split-1/2 process matches.
    """
    alphas, swaps = [], []
    for g in range(2):
        ps, al, pr = params.p_swap[g], params.alpha[g], params.p_remove[g]
        al2 = al * pr / (1.0 - pr)
        if al2 > 1.0:
            raise ValueError(
                f"group {g}: equivalent removal probability {al2:.6g} > 1 "
                f"(equilibrium in-degree below 1)")
        swaps.append(ps / (2.0 * (1.0 - ps) * (1.0 - pr) + ps))
        alphas.append(al2)
    return ModelParams(p_swap=tuple(swaps), p_assort=params.p_assort,
                       alpha=tuple(alphas), group_sizes=params.group_sizes,
                       p_remove=(0.5, 0.5))


@dataclass(frozen=True)
class MeanFieldSolution:
    """Predicted equilibrium: beta, z*, block densities and their kind.

    omega uses the large-N normalization N_r**2 on the diagonal (the form
    the phase analysis is carried out in); omega_exact uses
    N_r*(N_r - 1) and is None when a group has fewer than 2 nodes.
    """

    params: ModelParams
    beta: tuple[float, float]
    z_star: tuple[float, float]
    omega: DensityMatrix
    omega_exact: Optional[DensityMatrix]
    community: CommunityType

    @property
    def degree_ratio(self) -> float:
        """b = z*_0 / z*_1."""
        return self.z_star[0] / self.z_star[1]

    @property
    def size_ratio(self) -> float:
        """c = N_0 / N_1."""
        return self.params.group_sizes[0] / self.params.group_sizes[1]

    def to_json_dict(self) -> dict:
        return {
            "beta": list(self.beta),
            "z": list(self.z_star),
            "omega": self.omega.entries.tolist(),
            "type": self.community.to_json_dict(),
        }


def omega_predicted(params: ModelParams) -> MeanFieldSolution:
    """Mean-field density matrix and classification for given parameters."""
    n0, n1 = params.group_sizes
    beta = (beta_equilibrium(params, 0), beta_equilibrium(params, 1))
    z = z_fixed_points(params)
    counts = (n0 * z[0] * beta[0], n1 * z[1] * (1.0 - beta[1]),
              n0 * z[0] * (1.0 - beta[0]), n1 * z[1] * beta[1])
    omega = density_from_counts(counts, (n0, n1), exact_diagonal=False)
    omega_exact = None
    if n0 >= 2 and n1 >= 2:
        omega_exact = density_from_counts(counts, (n0, n1), exact_diagonal=True)
    return MeanFieldSolution(params=params, beta=beta, z_star=z, omega=omega,
                             omega_exact=omega_exact, community=classify(omega))
