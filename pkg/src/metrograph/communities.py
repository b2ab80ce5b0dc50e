"""Modularity and Louvain community detection with a resolution parameter.

Runs on the collapsed undirected weighted view. Self-loops contribute to
both the adjacency and the degrees (a loop of weight w adds 2w to its
node's degree and to the total 2m), matching the usual multigraph
convention. Detection is fully deterministic for a fixed seed: node visit
order is a seeded shuffle and equal-gain moves go to the lowest community id.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import AnalysisError, UndefinedModularityError
from .model import UndirectedView

_MAX_PASSES_PER_LEVEL = 128  # safety net; strict positive gains terminate anyway


@dataclass(frozen=True)
class CommunityAssignment:
    """Total node -> community map with the score and parameters used.

    Community ids are dense integers from 0, ordered by first appearance
    when scanning node ids in ascending order. ``q_trajectory`` records
    modularity after each aggregation level.
    """

    communities: dict[int, int]
    gamma: float
    modularity: float
    weight_attr: str
    q_trajectory: tuple[float, ...]
    seed: int | None = None

    @property
    def community_count(self) -> int:
        return len(set(self.communities.values())) if self.communities else 0


def _totals(view: UndirectedView):
    two_m = 2.0 * (sum(view.weights.values()) + sum(view.loops.values()))
    degree = {u: 0.0 for u in view.node_ids}
    for (a, b), w in view.weights.items():
        degree[a] += w
        degree[b] += w
    for u, w in view.loops.items():
        degree[u] += 2.0 * w
    return two_m, degree


def modularity(view: UndirectedView, partition: Mapping[int, int],
               gamma: float = 1.0) -> float:
    """Q = (1/2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j)."""
    two_m, degree = _totals(view)
    if two_m <= 0.0:
        raise UndefinedModularityError("modularity undefined on an edgeless graph")
    for u in view.node_ids:
        if u not in partition:
            raise AnalysisError(f"partition does not cover node {u}")
    intra = 0.0
    for (a, b), w in view.weights.items():
        if partition[a] == partition[b]:
            intra += 2.0 * w
    for u, w in view.loops.items():
        intra += 2.0 * w
    comm_degree: dict[int, float] = {}
    for u in view.node_ids:
        c = partition[u]
        comm_degree[c] = comm_degree.get(c, 0.0) + degree[u]
    null = sum((k / two_m) ** 2 for k in comm_degree.values())
    return intra / two_m - gamma * null


def _relabel_dense(partition: dict[int, int]) -> dict[int, int]:
    mapping: dict[int, int] = {}
    out: dict[int, int] = {}
    for u in sorted(partition):
        c = partition[u]
        if c not in mapping:
            mapping[c] = len(mapping)
        out[u] = mapping[c]
    return out


def louvain(view: UndirectedView, gamma: float = 1.0, seed: int = 0,
            order: Sequence[int] | None = None) -> CommunityAssignment:
    """Greedy modularity optimization: local moves to the neighboring
    community with the largest positive gain (ties to the lowest community
    id), then graph aggregation, repeated until no move improves Q.

    ``order`` overrides the first-level visit order (a permutation of the
    node ids); deeper levels always use the seeded shuffle.
    """
    if not gamma > 0.0:
        raise AnalysisError(f"resolution gamma must be > 0, got {gamma}")
    two_m, _ = _totals(view)
    if two_m <= 0.0:
        raise UndefinedModularityError("modularity undefined on an edgeless graph")
    rng = random.Random(seed)

    # working multigraph: adjacency (no loops) + loop weights, int node ids
    nodes = list(view.node_ids)
    adj: dict[int, dict[int, float]] = {u: {} for u in nodes}
    for (a, b), w in view.weights.items():
        adj[a][b] = adj[a].get(b, 0.0) + w
        adj[b][a] = adj[b].get(a, 0.0) + w
    loops: dict[int, float] = {u: view.loops.get(u, 0.0) for u in nodes}

    if order is not None:
        if sorted(order) != sorted(nodes):
            raise AnalysisError("order must be a permutation of the node ids")
        first_order: list = list(order)
    else:
        first_order = sorted(nodes)
        rng.shuffle(first_order)

    # membership of original nodes through all levels
    member = {u: u for u in view.node_ids}
    trajectory: list[float] = []
    level = 0
    while True:
        degree = {u: 2.0 * loops[u] for u in nodes}
        for u in nodes:
            for v, w in adj[u].items():
                degree[u] += w
        comm = {u: u for u in nodes}
        comm_degree = dict(degree)
        visit = first_order if level == 0 else _shuffled(nodes, rng)

        any_move = False
        for _ in range(_MAX_PASSES_PER_LEVEL):
            moved = False
            for u in visit:
                c_old = comm[u]
                comm_degree[c_old] -= degree[u]
                links: dict[int, float] = {}
                for v, w in adj[u].items():
                    cv = comm[v]
                    links[cv] = links.get(cv, 0.0) + w
                stay_gain = links.get(c_old, 0.0) - gamma * comm_degree[c_old] * degree[u] / two_m
                best_c = c_old
                best_gain = stay_gain
                for c in sorted(links):
                    if c == c_old:
                        continue
                    gain = links[c] - gamma * comm_degree[c] * degree[u] / two_m
                    if gain > best_gain or (gain == best_gain and c < best_c):
                        best_c = c
                        best_gain = gain
                if best_gain <= stay_gain:  # move only on strictly positive gain
                    best_c = c_old
                comm[u] = best_c
                comm_degree[best_c] += degree[u]
                if best_c != c_old:
                    moved = True
                    any_move = True
            if not moved:
                break

        dense = _relabel_dense(comm)
        member = {orig: dense[comm[cur]] for orig, cur in member.items()}
        trajectory.append(modularity(view, member, gamma))
        if not any_move:
            break

        # aggregate: communities become nodes, intra weight becomes a loop
        new_nodes = sorted(set(dense.values()))
        if len(new_nodes) == len(nodes):  # no shrink: converged
            break
        new_adj: dict[int, dict[int, float]] = {c: {} for c in new_nodes}
        new_loops: dict[int, float] = {c: 0.0 for c in new_nodes}
        for u in nodes:
            cu = dense[comm[u]]
            new_loops[cu] += loops[u]
            for v, w in adj[u].items():
                cv = dense[comm[v]]
                if cu == cv:
                    if u < v:
                        new_loops[cu] += w
                else:
                    new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
        nodes = new_nodes
        adj = new_adj
        loops = new_loops
        level += 1

    final = _relabel_dense(member)
    q = trajectory[-1]
    return CommunityAssignment(communities=final, gamma=gamma, modularity=q,
                               weight_attr=view.weight_attr,
                               q_trajectory=tuple(trajectory), seed=seed)


def _shuffled(items: list, rng: random.Random) -> list:
    out = sorted(items)
    rng.shuffle(out)
    return out
