"""Single-source shortest paths with pluggable edge objectives.

Dijkstra over the directed multigraph. Among equal-cost paths the result is
the lexicographically smallest node-id sequence, found by a smallest-first
walk over the tight-edge subgraph (edges on some optimal path).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import EmptyLayerError, GraphError, MissingWeightError, NegativeWeightError
from .model import GeoPoint, LayerId, MultilayerGraph, NetEdge, haversine_m

_NEAREST_TIE_EPS_M = 1e-12


@dataclass(frozen=True)
class Objective:
    """Edge cost selector: which numeric edge attribute to minimize."""

    attribute: str

    @classmethod
    def distance(cls) -> "Objective":
        return cls("length_m")

    @classmethod
    def time(cls) -> "Objective":
        return cls("travel_time_s")

    @classmethod
    def custom(cls, attribute: str) -> "Objective":
        return cls(attribute)

    def cost(self, edge: NetEdge) -> float:
        value = getattr(edge, self.attribute, None)
        if value is None:
            raise MissingWeightError(
                f"edge {edge.id()} has no {self.attribute}; annotate the graph first")
        return float(value)


@dataclass(frozen=True)
class RouteResult:
    node_ids: tuple[int, ...]
    edges: tuple[NetEdge, ...]
    cost: float
    total_length_m: float
    total_travel_time_s: float | None


@dataclass(frozen=True)
class NoPath:
    """Destination unreachable; carries how many nodes the search settled."""

    src: int
    dst: int
    reached_count: int


def _dijkstra(adj: dict[int, list[tuple[int, float]]], source: int) -> dict[int, float]:
    dist = {source: 0.0}
    heap: list[tuple[float, int]] = [(0.0, source)]
    settled: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in settled:
            continue
        settled.add(u)
        for v, w in adj[u]:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _adjacency(g: MultilayerGraph, objective: Objective):
    """Min-cost parallel-edge adjacency (forward and reverse) plus the
    chosen concrete edge per (u, v); cost ties pick the smallest key."""
    fwd: dict[int, list[tuple[int, float]]] = {i: [] for i in g.node_ids()}
    rev: dict[int, list[tuple[int, float]]] = {i: [] for i in g.node_ids()}
    best_edge: dict[tuple[int, int], tuple[float, NetEdge]] = {}
    for e in g.edges():
        c = objective.cost(e)
        if c < 0.0:
            raise NegativeWeightError(
                f"edge {e.id()} has negative {objective.attribute} {c}")
        cur = best_edge.get((e.u, e.v))
        if cur is None or (c, e.key) < (cur[0], cur[1].key):
            best_edge[(e.u, e.v)] = (c, e)
    for (u, v), (c, _e) in best_edge.items():
        fwd[u].append((v, c))
        rev[v].append((u, c))
    return fwd, rev, best_edge


def shortest_path(g: MultilayerGraph, src: int, dst: int,
                  objective: Objective) -> RouteResult | NoPath:
    """Cost-minimal directed path from src to dst under the objective.

    Returns NoPath when dst is unreachable. Raises NegativeWeightError
    before searching if any edge carries a negative cost.
    """
    if not g.has_node(src):
        raise GraphError(f"unknown node id {src}")
    if not g.has_node(dst):
        raise GraphError(f"unknown node id {dst}")
    fwd, rev, best_edge = _adjacency(g, objective)

    if src == dst:
        return RouteResult((src,), (), 0.0, 0.0, 0.0)

    dist = _dijkstra(fwd, src)
    if dst not in dist:
        return NoPath(src, dst, reached_count=len(dist))
    total = dist[dst]
    back = _dijkstra(rev, dst)

    # Tight edges (u, v): dist[u] + w + back[v] == total. Any src->dst walk
    # through them costs exactly `total`; smallest-first DFS finds the
    # lexicographically smallest simple one.
    path = _lexicographic_walk(fwd, dist, back, total, src, dst)
    edges = tuple(best_edge[(a, b)][1] for a, b in zip(path, path[1:]))
    length = sum(e.length_m for e in edges)
    times = [e.travel_time_s for e in edges]
    total_time = sum(times) if all(t is not None for t in times) else None
    return RouteResult(tuple(path), edges, total, length, total_time)


def _lexicographic_walk(fwd, dist, back, total, src, dst) -> list[int]:
    path = [src]
    on_path = {src}
    # iterative DFS: stack of (node, iterator over sorted tight successors)
    def tight_successors(u):
        du = dist.get(u)
        if du is None:
            return []
        out = []
        for v, w in fwd[u]:
            bv = back.get(v)
            if bv is not None and du + w + bv == total:
                out.append(v)
        out.sort()
        return out

    stack = [iter(tight_successors(src))]
    while stack:
        u = path[-1]
        if u == dst:
            return path
        advanced = False
        for v in stack[-1]:
            if v not in on_path:
                path.append(v)
                on_path.add(v)
                stack.append(iter(tight_successors(v)))
                advanced = True
                break
        if not advanced:
            stack.pop()
            on_path.discard(path.pop())
    raise GraphError("internal: tight-edge walk found no path")  # pragma: no cover


def nearest_node(g: MultilayerGraph, p: GeoPoint, layer: LayerId) -> int:
    """Node of the layer closest to p; ties within 1e-12 m go to the
    smallest node id."""
    ids = g.layer_node_ids(layer)
    if not ids:
        raise EmptyLayerError(f"layer {layer.value} has no nodes")
    dmin = min(haversine_m(p, g.node(i).point) for i in ids)
    return min(i for i in ids if haversine_m(p, g.node(i).point) <= dmin + _NEAREST_TIE_EPS_M)


@dataclass(frozen=True)
class RouteComparison:
    by_distance: RouteResult
    by_time: RouteResult
    overlap_fraction: float


def compare_routes(g: MultilayerGraph, src: int, dst: int) -> RouteComparison | NoPath:
    """Shortest-distance vs shortest-time route and their length overlap.

    Overlap is shared edge length over the longer route's length; a shared
    edge is the same (u, v, key) appearing in both routes.
    """
    by_distance = shortest_path(g, src, dst, Objective.distance())
    if isinstance(by_distance, NoPath):
        return by_distance
    by_time = shortest_path(g, src, dst, Objective.time())
    if isinstance(by_time, NoPath):  # pragma: no cover - same reachability
        return by_time
    shared = {e.id() for e in by_distance.edges} & {e.id() for e in by_time.edges}
    shared_len = sum(e.length_m for e in by_distance.edges if e.id() in shared)
    denom = max(by_distance.total_length_m, by_time.total_length_m)
    overlap = 1.0 if denom == 0.0 else shared_len / denom
    return RouteComparison(by_distance, by_time, overlap)
