import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groupflow import (CommunityType, DensityMatrix, LabeledDigraph,
                       Normalization, StructureKind, classify, classify_entries,
                       density, density_degree_normalized, density_from_counts)


class TestDensity:
    def test_empty_graph(self):
        w = density(LabeledDigraph([0, 0, 1, 1]))
        assert np.all(w.entries == 0.0)
        assert w.normalization is Normalization.POSSIBLE_PAIRS

    def test_complete_cross_block(self):
        g = LabeledDigraph([0, 0, 1, 1])
        for src in (0, 1):
            for dst in (2, 3):
                g.add_edge(src, dst)
        assert np.array_equal(density(g).entries, [[0.0, 1.0], [0.0, 0.0]])

    def test_matches_brute_force(self):
        g = LabeledDigraph.erdos_renyi(14, 9, 0.3, np.random.default_rng(2))
        n0, n1 = g.group_sizes
        e = [[0, 0], [0, 0]]
        for src in range(23):
            for dst in range(23):
                if g.adj[src, dst]:
                    e[g.groups[src]][g.groups[dst]] += 1
        w = density(g)
        assert w[0, 0] == e[0][0] / (n0 * (n0 - 1))
        assert w[0, 1] == e[0][1] / (n0 * n1)
        assert w[1, 0] == e[1][0] / (n0 * n1)
        assert w[1, 1] == e[1][1] / (n1 * (n1 - 1))

    def test_tiny_group_rejected(self):
        with pytest.raises(ValueError):
            density(LabeledDigraph([0, 1, 1]))

    def test_approx_diagonal_normalization(self):
        exact = density_from_counts((10, 0, 0, 0), (5, 5), exact_diagonal=True)
        approx = density_from_counts((10, 0, 0, 0), (5, 5), exact_diagonal=False)
        assert exact[0, 0] == 10 / 20
        assert approx[0, 0] == 10 / 25

    def test_negative_and_nan_entries_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix([[0.1, -0.2], [0.1, 0.1]], Normalization.POSSIBLE_PAIRS)
        with pytest.raises(ValueError):
            DensityMatrix([[0.1, math.nan], [0.1, 0.1]], Normalization.POSSIBLE_PAIRS)


class TestDegreeNormalized:
    def test_uniform_counts(self):
        w = density_degree_normalized((1, 1, 1, 1))
        assert np.allclose(w.entries, 0.25)
        assert w.normalization is Normalization.DEGREE_PRODUCT

    def test_known_flat_case(self):
        # (e00,e01,e10,e11) = (4,2,2,1): all four entries come out to 1/9
        w = density_degree_normalized((4, 2, 2, 1))
        assert np.allclose(w.entries, 1 / 9, atol=1e-15)

    def test_zero_block_total_rejected(self):
        with pytest.raises(ValueError):
            density_degree_normalized((0, 0, 3, 2))

    def test_graph_wrapper(self):
        from groupflow import density_degree_normalized_graph
        g = LabeledDigraph([0, 0, 1, 1])
        g.add_edge(0, 1)
        g.add_edge(2, 3)
        g.add_edge(0, 2)
        g.add_edge(2, 1)
        assert density_degree_normalized_graph(g).entries.shape == (2, 2)


A = StructureKind.ASSORTATIVE
CP = StructureKind.CORE_PERIPHERY
D = StructureKind.DISASSORTATIVE
SB = StructureKind.SOURCE_BASIN
U = StructureKind.UNCLASSIFIED


def verdict(entries):
    return classify(DensityMatrix(entries, Normalization.POSSIBLE_PAIRS))


class TestClassify:
    def test_canonical_examples(self):
        assert verdict([[0.3, 0.1], [0.1, 0.3]]) == CommunityType(A)
        assert verdict([[0.1, 0.3], [0.3, 0.1]]) == CommunityType(D)
        assert verdict([[0.3, 0.3], [0.1, 0.1]]) == CommunityType(CP, 0)
        assert verdict([[0.1, 0.1], [0.3, 0.3]]) == CommunityType(CP, 1)
        assert verdict([[0.3, 0.1], [0.3, 0.1]]) == CommunityType(SB, 0)
        assert verdict([[0.1, 0.3], [0.1, 0.3]]) == CommunityType(SB, 1)

    def test_ties_are_unclassified(self):
        assert verdict([[0.3, 0.3], [0.3, 0.1]]).kind is U
        assert verdict([[0.2, 0.2], [0.2, 0.2]]).kind is U
        assert verdict([[0.3, 0.1], [0.1, 0.1]]).kind is U

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            classify_entries(0.1, math.nan, 0.2, 0.3)

    def test_all_24_strict_orderings_classified(self):
        """Each strict ordering of distinct entries fires exactly one rule.

        The kind is pinned by which pair of entries is the strict top two:
        {w00,w11} -> A, {w01,w10} -> D, {w00,w01} -> CP core 0,
        {w10,w11} -> CP core 1, {w00,w10} -> SB basin 0, {w01,w11} -> SB
        basin 1. Four orderings realize each pair.
        """
        top_pair_to_verdict = {
            frozenset([0, 3]): CommunityType(A),
            frozenset([1, 2]): CommunityType(D),
            frozenset([0, 1]): CommunityType(CP, 0),
            frozenset([2, 3]): CommunityType(CP, 1),
            frozenset([0, 2]): CommunityType(SB, 0),
            frozenset([1, 3]): CommunityType(SB, 1),
        }
        seen = {}
        for perm in itertools.permutations((0.1, 0.2, 0.3, 0.4)):
            got = verdict([[perm[0], perm[1]], [perm[2], perm[3]]])
            ranked = sorted(range(4), key=lambda k: perm[k], reverse=True)
            expect = top_pair_to_verdict[frozenset(ranked[:2])]
            assert got == expect, f"{perm}: {got} != {expect}"
            seen[got] = seen.get(got, 0) + 1
        assert sum(seen.values()) == 24
        assert all(count == 4 for count in seen.values())

    @given(st.lists(st.floats(0.001, 1.0), min_size=4, max_size=4))
    def test_relabel_equivariance(self, vals):
        w00, w01, w10, w11 = vals
        kind, role = classify_entries(w00, w01, w10, w11)
        # swap the group labels: entry (r, s) -> (1-r, 1-s)
        kind2, role2 = classify_entries(w11, w10, w01, w00)
        assert kind2 is kind
        if role is None:
            assert role2 is None
        else:
            assert role2 == 1 - role

    def test_small_count_scan_degree_normalized_never_cp_sb(self):
        for cts in itertools.product(range(1, 7), repeat=4):
            kind = classify(density_degree_normalized(cts)).kind
            assert kind in (A, D, U), f"{cts} -> {kind}"

    @given(st.integers(1, 10**6), st.integers(1, 10**6),
           st.integers(1, 10**6), st.integers(1, 10**6))
    def test_degree_normalized_excludes_cp_sb(self, e00, e01, e10, e11):
        kind = classify(density_degree_normalized((e00, e01, e10, e11))).kind
        assert kind in (A, D, U)

    @given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 500),
           st.integers(0, 500), st.integers(2, 50), st.integers(2, 50))
    def test_sb_basin_has_higher_mean_in_degree(self, e00, e01, e10, e11, n0, n1):
        w = density_from_counts((e00, e01, e10, e11), (n0, n1), exact_diagonal=False)
        got = classify(w)
        if got.kind is SB:
            z = ((e00 + e10) / n0, (e01 + e11) / n1)
            basin = got.basin
            assert z[basin] > z[1 - basin]


class TestCommunityType:
    def test_json_round_trip(self):
        for ct in (CommunityType(A), CommunityType(CP, 1), CommunityType(SB, 0),
                   CommunityType(D), CommunityType(U)):
            assert CommunityType.from_json_dict(ct.to_json_dict()) == ct

    def test_json_shape(self):
        assert CommunityType(SB, 1).to_json_dict() == {"kind": "SB", "core": None,
                                                       "basin": 1}
        assert CommunityType(A).to_json_dict() == {"kind": "A", "core": None,
                                                   "basin": None}

    def test_role_validation(self):
        with pytest.raises(ValueError):
            CommunityType(A, 0)
        with pytest.raises(ValueError):
            CommunityType(CP)
        with pytest.raises(ValueError):
            CommunityType(SB, 2)
