"""Directed graphs over two fixed node groups.

State lives in flat NumPy arrays shared with the compiled kernels: a dense
adjacency matrix gives O(1) membership tests, per-node in-neighbor arrays
give O(1) uniform sampling of existing in-edges, and a 2x2 table of block
edge counts is maintained incrementally.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


class LabeledDigraph:
    """Simple directed graph whose nodes carry an immutable 0/1 group label.

    adj[src, dst] == 1 encodes an edge src -> dst. Self edges and parallel
    edges are rejected. Node ids are 0-based and dense; labels are fixed at
    construction.
    """

    def __init__(self, groups):
        groups = np.ascontiguousarray(groups, dtype=np.int64)
        if groups.ndim != 1:
            raise ValueError("groups must be a 1-d sequence of 0/1 labels")
        n = groups.size
        if n < 2:
            raise ValueError("need at least 2 nodes")
        if not np.all((groups == 0) | (groups == 1)):
            raise ValueError("group labels must be 0 or 1")
        n0 = int(np.sum(groups == 0))
        if n0 == 0 or n0 == n:
            raise ValueError("each group needs at least one node")
        self.groups = groups
        self.adj = np.zeros((n, n), dtype=np.uint8)
        self.in_list = np.zeros((n, n - 1), dtype=np.int32)
        self.in_deg = np.zeros(n, dtype=np.int64)
        self.ecounts = np.zeros((2, 2), dtype=np.int64)

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def erdos_renyi(cls, n0: int, n1: int, q: float, rng: np.random.Generator) -> "LabeledDigraph":
        """Random graph: every ordered pair gets an edge with probability q.

        Exactly n0 nodes receive label 0, assigned uniformly at random.
        For N = n0 + n1 > 4, q must lie inside (2/N, 1 - 2/N) so the
        expected in-degree stays away from the empty and saturated
        extremes; for N <= 4 that interval is empty and any q in (0, 1)
        is accepted.
        """
        if n0 < 1 or n1 < 1:
            raise ValueError("both groups need at least one node")
        n = n0 + n1
        if n > 4:
            lo, hi = 2.0 / n, 1.0 - 2.0 / n
            if not lo < q < hi:
                raise ValueError(
                    f"q={q} outside ({lo:.6g}, {hi:.6g}) for N={n}")
        elif not 0.0 < q < 1.0:
            raise ValueError(f"q={q} outside (0, 1)")
        groups = np.ones(n, dtype=np.int64)
        groups[rng.permutation(n)[:n0]] = 0
        g = cls(groups)
        mask = rng.random((n, n)) < q
        np.fill_diagonal(mask, False)
        g.adj = mask.astype(np.uint8)
        for i in range(n):
            nbrs = np.flatnonzero(mask[:, i])
            g.in_deg[i] = nbrs.size
            g.in_list[i, :nbrs.size] = nbrs
        src_groups = groups[:, None] * 2 + groups[None, :]
        for r in range(2):
            for s in range(2):
                g.ecounts[r, s] = int(np.sum(mask & (src_groups == 2 * r + s)))
        return g

    @classmethod
    def from_snapshot_text(cls, text: str) -> "LabeledDigraph":
        """Rebuild a graph from the edge-list snapshot format."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("#"):
            raise ValueError("snapshot must start with a '# nodes=... groups=...' header")
        header = lines[0][1:].strip()
        fields = dict(part.split("=", 1) for part in header.split())
        n = int(fields["nodes"])
        groups = np.array([int(x) for x in fields["groups"].split(",")], dtype=np.int64)
        if groups.size != n:
            raise ValueError(f"header says {n} nodes but lists {groups.size} labels")
        g = cls(groups)
        for ln in lines[1:]:
            src, dst = ln.split()
            g.add_edge(int(src), int(dst))
        return g

    @classmethod
    def read_snapshot(cls, path) -> "LabeledDigraph":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_snapshot_text(fh.read())

    # ------------------------------------------------------------------
    # basic queries

    @property
    def node_count(self) -> int:
        return self.groups.size

    @property
    def group_sizes(self) -> tuple[int, int]:
        n0 = int(np.sum(self.groups == 0))
        return n0, self.groups.size - n0

    @property
    def edge_count(self) -> int:
        return int(self.ecounts.sum())

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.groups.size:
            raise IndexError(f"node id {i} out of range [0, {self.groups.size})")

    def has_edge(self, src: int, dst: int) -> bool:
        self._check_node(src)
        self._check_node(dst)
        return bool(self.adj[src, dst])

    def in_degree(self, i: int) -> int:
        self._check_node(i)
        return int(self.in_deg[i])

    def in_neighbors(self, i: int) -> np.ndarray:
        """Sources of the in-edges of i, in internal (unsorted) order."""
        self._check_node(i)
        return self.in_list[i, : self.in_deg[i]].copy()

    # ------------------------------------------------------------------
    # mutation

    def add_edge(self, src: int, dst: int) -> None:
        self._check_node(src)
        self._check_node(dst)
        if src == dst:
            raise ValueError("self edges are not allowed")
        if self.adj[src, dst]:
            raise ValueError(f"edge {src} -> {dst} already present")
        self.adj[src, dst] = 1
        self.in_list[dst, self.in_deg[dst]] = src
        self.in_deg[dst] += 1
        self.ecounts[self.groups[src], self.groups[dst]] += 1

    def remove_edge(self, src: int, dst: int) -> None:
        self._check_node(src)
        self._check_node(dst)
        if not self.adj[src, dst]:
            raise ValueError(f"edge {src} -> {dst} not present")
        self.adj[src, dst] = 0
        row = self.in_list[dst]
        deg = int(self.in_deg[dst])
        idx = int(np.flatnonzero(row[:deg] == src)[0])
        row[idx] = row[deg - 1]
        self.in_deg[dst] = deg - 1
        self.ecounts[self.groups[src], self.groups[dst]] -= 1

    # ------------------------------------------------------------------
    # sampling

    def sample_in_edge(self, i: int, rng: np.random.Generator):
        """Uniform source of an existing in-edge of i; None if it has none."""
        self._check_node(i)
        j = _kernels.sample_in_source(self.in_list, self.in_deg, i, rng)
        return None if j < 0 else int(j)

    def sample_non_in_edge(self, i: int, rng: np.random.Generator):
        """Uniform source j != i with no edge j -> i; None if i is saturated."""
        self._check_node(i)
        j = _kernels.sample_non_in_source(self.adj, i, int(self.in_deg[i]), rng)
        return None if j < 0 else int(j)

    # ------------------------------------------------------------------
    # aggregates

    def block_edge_counts(self) -> tuple[int, int, int, int]:
        """Edge counts (e00, e01, e10, e11); e_rs counts edges r -> s."""
        e = self.ecounts
        return int(e[0, 0]), int(e[0, 1]), int(e[1, 0]), int(e[1, 1])

    # ------------------------------------------------------------------
    # snapshots & copies

    def to_snapshot_text(self) -> str:
        """Edge-list snapshot: header line, then one 'source target' per line.

        Deterministic: targets ascending, sources ascending within target.
        """
        labels = ",".join(str(int(x)) for x in self.groups)
        lines = [f"# nodes={self.groups.size} groups={labels}"]
        for dst in range(self.groups.size):
            for src in np.flatnonzero(self.adj[:, dst]):
                lines.append(f"{src} {dst}")
        return "\n".join(lines) + "\n"

    def write_snapshot(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_snapshot_text())

    def copy(self) -> "LabeledDigraph":
        g = LabeledDigraph(self.groups.copy())
        g.adj = self.adj.copy()
        g.in_list = self.in_list.copy()
        g.in_deg = self.in_deg.copy()
        g.ecounts = self.ecounts.copy()
        return g

    def validate(self) -> None:
        """Check internal consistency; raises AssertionError on violation.

        Meant for tests and debugging, not hot paths.
        """
        n = self.groups.size
        assert not self.adj.diagonal().any(), "self edge present"
        for i in range(n):
            nbrs = self.in_list[i, : self.in_deg[i]]
            assert len(set(nbrs.tolist())) == self.in_deg[i], f"duplicate in-list entry at node {i}"
            assert set(nbrs.tolist()) == set(np.flatnonzero(self.adj[:, i]).tolist()), \
                f"in-list out of sync with adjacency at node {i}"
        for r in range(2):
            for s in range(2):
                brute = int(np.sum(self.adj[np.ix_(self.groups == r, self.groups == s)]))
                assert brute == self.ecounts[r, s], f"block count ({r},{s}) out of sync"
