"""Hot inner loops of the network evolution process.

Functions here operate on the raw arrays of a LabeledDigraph and are
compiled with numba unless disabled via GROUPFLOW_DISABLE_JIT (see _jit).
All randomness flows through a numpy.random.Generator supplied by the
caller; numba reproduces NumPy's Generator streams exactly, so the
compiled and plain-Python paths yield identical trajectories for a given
seed.
"""

import numpy as np

from ._jit import njit

# Move codes returned by step_kernel.
SWAP = 0
ADD = 1
REMOVE = 2


@njit(cache=True)
def sample_non_in_source(adj, i, deg, rng):
    """Uniform node j with no edge j -> i and j != i; -1 if none exists.

    Rejection sampling while the candidate set is large, falling back to an
    index scan of the complement once more than half of all possible
    sources are occupied.
    """
    n = adj.shape[0]
    avail = n - 1 - deg
    if avail <= 0:
        return -1
    if 2 * deg > n:
        target = int(rng.integers(0, avail))
        seen = 0
        for j in range(n):
            if j == i or adj[j, i] != 0:
                continue
            if seen == target:
                return j
            seen += 1
        return -1
    while True:
        j = int(rng.integers(0, n))
        if j != i and adj[j, i] == 0:
            return j


@njit(cache=True)
def sample_in_source(in_list, in_deg, i, rng):
    """Uniform existing in-neighbor of i; -1 if i has no in-edges."""
    deg = in_deg[i]
    if deg == 0:
        return -1
    return int(in_list[i, int(rng.integers(0, deg))])


@njit(cache=True)
def step_kernel(groups, adj, in_list, in_deg, ecounts,
                p_swap, p_assort, alpha, p_remove, rng, removed_buf):
    """One update of the evolution process.

    A focal node i is drawn uniformly. With probability p_swap[g(i)] it
    plays a swap move: one existing in-edge and one candidate non-edge are
    drawn; if their sources belong to different groups, the same-group one
    is kept with probability p_assort[g(i)], otherwise a fair coin decides.
    Otherwise i plays a change move: with probability p_remove[g(i)] each
    in-edge is deleted independently with probability alpha[g(i)], else a
    single uniform non-edge is added.

    Returns (move, focal, n_removed, added_source). Sources of removed
    edges are written to removed_buf[:n_removed]; added_source is -1 when
    no edge was added. Degenerate situations (no in-edge or no candidate to
    draw) leave the graph unchanged and report n_removed == 0,
    added_source == -1.
    """
    n = groups.shape[0]
    i = int(rng.integers(0, n))
    gi = groups[i]
    if rng.random() < p_swap[gi]:
        deg = int(in_deg[i])
        if deg == 0:
            return SWAP, i, 0, -1
        idx = int(rng.integers(0, deg))
        k = int(in_list[i, idx])
        j = sample_non_in_source(adj, i, deg, rng)
        if j < 0:
            return SWAP, i, 0, -1
        if groups[k] == groups[j]:
            keep_candidate = rng.random() < 0.5
        else:
            # exactly one of k, j shares the focal node's group
            prefer_same = rng.random() < p_assort[gi]
            keep_candidate = prefer_same == (groups[j] == gi)
        if not keep_candidate:
            return SWAP, i, 0, -1
        in_list[i, idx] = in_list[i, deg - 1]
        in_list[i, deg - 1] = j
        adj[k, i] = 0
        adj[j, i] = 1
        ecounts[groups[k], gi] -= 1
        ecounts[groups[j], gi] += 1
        removed_buf[0] = k
        return SWAP, i, 1, j
    if rng.random() < p_remove[gi]:
        a = alpha[gi]
        removed = 0
        idx = int(in_deg[i]) - 1
        while idx >= 0:
            if rng.random() < a:
                k = int(in_list[i, idx])
                last = int(in_deg[i]) - 1
                in_list[i, idx] = in_list[i, last]
                in_deg[i] = last
                adj[k, i] = 0
                ecounts[groups[k], gi] -= 1
                removed_buf[removed] = k
                removed += 1
            idx -= 1
        return REMOVE, i, removed, -1
    j = sample_non_in_source(adj, i, int(in_deg[i]), rng)
    if j < 0:
        return ADD, i, 0, -1
    in_list[i, int(in_deg[i])] = j
    in_deg[i] += 1
    adj[j, i] = 1
    ecounts[groups[j], gi] += 1
    return ADD, i, 0, j


@njit(cache=True)
def run_kernel(groups, adj, in_list, in_deg, ecounts,
               p_swap, p_assort, alpha, p_remove, rng,
               n_steps, sample_stride, out_counts):
    """Drive step_kernel n_steps times, recording block edge counts.

    A row (e00, e01, e10, e11) is written to out_counts after every
    sample_stride steps. Returns the number of rows written.
    """
    n = groups.shape[0]
    removed_buf = np.empty(n, dtype=np.int32)
    row = 0
    for s in range(1, n_steps + 1):
        step_kernel(groups, adj, in_list, in_deg, ecounts,
                    p_swap, p_assort, alpha, p_remove, rng, removed_buf)
        if s % sample_stride == 0:
            out_counts[row, 0] = ecounts[0, 0]
            out_counts[row, 1] = ecounts[0, 1]
            out_counts[row, 2] = ecounts[1, 0]
            out_counts[row, 3] = ecounts[1, 1]
            row += 1
    return row
