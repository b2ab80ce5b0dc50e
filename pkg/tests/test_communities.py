from __future__ import annotations

import random

import pytest

from metrograph import (
    AnalysisError,
    UndefinedModularityError,
    louvain,
    modularity,
)
from conftest import grid_view, two_k4_view, unit_view
from oracles import iter_set_partitions

K4_SPLIT = {n: 0 if n < 4 else 1 for n in range(8)}
K4_SPLIT_Q = 2 * (6 / 13 - (13 / 26) ** 2)  # 0.423076923...


class TestModularity:
    def test_k3_single_community_zero(self):
        view = unit_view([(0, 1), (1, 2), (0, 2)])
        assert modularity(view, {0: 0, 1: 0, 2: 0}) == pytest.approx(0.0, abs=1e-12)

    def test_k3_singletons(self):
        view = unit_view([(0, 1), (1, 2), (0, 2)])
        q = modularity(view, {0: 0, 1: 1, 2: 2})
        assert q == pytest.approx(-1 / 3, abs=1e-12)

    def test_two_k4_planted_split(self):
        q = modularity(two_k4_view(), K4_SPLIT)
        assert q == pytest.approx(0.42308, abs=1e-5)
        assert q == pytest.approx(K4_SPLIT_Q, abs=1e-12)

    def test_edgeless_graph_undefined(self):
        view = unit_view([], nodes=[0, 1])
        with pytest.raises(UndefinedModularityError):
            modularity(view, {0: 0, 1: 0})

    def test_partition_must_cover_all_nodes(self):
        view = unit_view([(0, 1)])
        with pytest.raises(AnalysisError):
            modularity(view, {0: 0})

    def test_self_loop_convention(self):
        # nodes {0,1}, edge 0-1 w=1, loop at 0 w=1: 2m=4, k0=3, k1=1
        view = unit_view([(0, 1)], loops={0: 1.0})
        q = modularity(view, {0: 0, 1: 1})
        assert q == pytest.approx(2 / 4 - (3 / 4) ** 2 - (1 / 4) ** 2, abs=1e-12)

    def test_resolution_scales_null_term(self):
        view = two_k4_view()
        q_low = modularity(view, K4_SPLIT, gamma=0.01)
        assert q_low == pytest.approx(12 / 13 - 0.01 * 2 * (13 / 26) ** 2, abs=1e-12)


class TestPlantedPartitionOracle:
    def test_exhaustive_enumeration_confirms_split_is_optimal(self):
        view = two_k4_view()
        best_q = -2.0
        best = None
        for parts in iter_set_partitions(list(range(8))):
            partition = {}
            for ci, group in enumerate(parts):
                for n in group:
                    partition[n] = ci
            q = modularity(view, partition)
            if q > best_q:
                best_q, best = q, parts
        assert best_q == pytest.approx(K4_SPLIT_Q, abs=1e-12)
        assert sorted(sorted(g) for g in best) == [[0, 1, 2, 3], [4, 5, 6, 7]]


class TestLouvain:
    def test_recovers_planted_partition_any_seed(self):
        view = two_k4_view()
        for seed in range(5):
            got = louvain(view, gamma=1.0, seed=seed)
            assert got.modularity == pytest.approx(K4_SPLIT_Q, abs=1e-5)
            left = {n for n, c in got.communities.items() if c == got.communities[0]}
            assert left in ({0, 1, 2, 3}, {4, 5, 6, 7})
            assert got.community_count == 2

    def test_returned_q_matches_modularity_function(self):
        view = two_k4_view()
        got = louvain(view, gamma=1.0, seed=0)
        assert got.modularity == pytest.approx(
            modularity(view, got.communities, 1.0), abs=1e-9)

    def test_low_resolution_collapses_to_one_community(self):
        got = louvain(two_k4_view(), gamma=0.01, seed=0)
        assert got.community_count == 1

    def test_edgeless_errors(self):
        with pytest.raises(UndefinedModularityError):
            louvain(unit_view([], nodes=[0, 1]), gamma=1.0, seed=0)

    def test_gamma_must_be_positive(self):
        with pytest.raises(AnalysisError):
            louvain(two_k4_view(), gamma=0.0, seed=0)

    def test_beats_trivial_partitions(self):
        rng = random.Random(3)
        for seed in range(4):
            n = rng.randint(5, 14)
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
            chosen = rng.sample(pairs, rng.randint(n - 1, min(len(pairs), 2 * n)))
            view = unit_view(chosen, nodes=range(n))
            got = louvain(view, gamma=1.0, seed=seed)
            q_singletons = modularity(view, {u: u for u in view.node_ids})
            q_single = modularity(view, {u: 0 for u in view.node_ids})
            assert got.modularity >= q_singletons - 1e-12
            assert got.modularity >= q_single - 1e-12

    def test_trajectory_non_decreasing(self):
        rng = random.Random(9)
        for seed in range(4):
            n = 16
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
            view = unit_view(rng.sample(pairs, 2 * n), nodes=range(n))
            got = louvain(view, gamma=1.0, seed=seed)
            for a, b in zip(got.q_trajectory, got.q_trajectory[1:]):
                assert b >= a - 1e-12

    def test_resolution_direction_on_grid(self):
        view = grid_view(12)
        counts = [louvain(view, gamma=g, seed=0).community_count
                  for g in (0.01, 0.1, 1.0)]
        assert counts[0] <= counts[1] <= counts[2]

    def test_community_ids_dense_from_zero(self):
        got = louvain(two_k4_view(), gamma=1.0, seed=0)
        assert set(got.communities.values()) == set(range(got.community_count))

    def test_permuted_ids_yield_same_partition_up_to_relabel(self):
        view = two_k4_view()
        base = louvain(view, gamma=1.0, seed=0,
                       order=list(range(8)))
        perm = {n: (n * 3 + 1) % 8 for n in range(8)}  # bijection on 0..7
        permuted_view = unit_view(
            [(perm[a], perm[b], w) for (a, b), w in view.weights.items()],
            nodes=[perm[n] for n in view.node_ids])
        permuted = louvain(permuted_view, gamma=1.0, seed=0,
                           order=[perm[n] for n in range(8)])
        # same blocks after mapping back through the permutation
        def blocks(assignment, unmap=None):
            groups = {}
            for n, c in assignment.communities.items():
                groups.setdefault(c, set()).add(unmap[n] if unmap else n)
            return sorted(sorted(g) for g in groups.values())
        inverse = {v: k for k, v in perm.items()}
        assert blocks(base) == blocks(permuted, unmap=inverse)

    def test_deterministic_for_fixed_seed(self):
        view = grid_view(6)
        a = louvain(view, gamma=0.5, seed=42)
        b = louvain(view, gamma=0.5, seed=42)
        assert a.communities == b.communities
        assert a.modularity == b.modularity

    def test_order_must_be_permutation(self):
        with pytest.raises(AnalysisError):
            louvain(two_k4_view(), gamma=1.0, seed=0, order=[0, 1])
