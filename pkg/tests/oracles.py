"""Independent reference implementations the real code is checked against.

Everything here is deliberately naive (exhaustive enumeration, fixpoint
relaxation, direct formula evaluation) and shares no code with the package
internals beyond the public data types.
"""

from __future__ import annotations

import heapq
import itertools
import math


# -- shortest paths ---------------------------------------------------------

def enumerate_min_cost(adj: dict[int, list[tuple[int, float]]], src: int,
                       dst: int) -> float | None:
    """Minimum cost over all simple src->dst paths by exhaustive DFS.

    Prunes branches whose partial cost already reaches the best known
    total (sound for non-negative weights).
    """
    best: list[float | None] = [None]

    def walk(u: int, cost: float, on_path: set[int]):
        if best[0] is not None and cost >= best[0]:
            return
        if u == dst:
            best[0] = cost
            return
        for v, w in adj.get(u, ()):
            if v not in on_path:
                on_path.add(v)
                walk(v, cost + w, on_path)
                on_path.discard(v)

    walk(src, 0.0, {src})
    return best[0]


def relax_to_fixpoint(adj: dict[int, list[tuple[int, float]]], src: int,
                      nodes: list[int]) -> dict[int, float]:
    """Label-correcting shortest paths: relax every edge until nothing moves."""
    dist = {u: math.inf for u in nodes}
    dist[src] = 0.0
    while True:
        changed = False
        for u in nodes:
            du = dist[u]
            if du == math.inf:
                continue
            for v, w in adj.get(u, ()):
                if du + w < dist[v]:
                    dist[v] = du + w
                    changed = True
        if not changed:
            return dist


def enumerate_lex_smallest_path(adj: dict[int, list[tuple[int, float]]],
                                src: int, dst: int) -> list[int] | None:
    """Lexicographically smallest node sequence among ALL min-cost simple
    paths, by full enumeration (no pruning on sequence)."""
    best_cost = enumerate_min_cost(adj, src, dst)
    if best_cost is None:
        return None
    best_path: list[int] | None = None

    def walk(u: int, cost: float, path: list[int]):
        nonlocal best_path
        if cost > best_cost:
            return
        if u == dst:
            if cost == best_cost and (best_path is None or path < best_path):
                best_path = list(path)
            return
        for v, w in sorted(adj.get(u, ())):
            if v not in path:
                path.append(v)
                walk(v, cost + w, path)
                path.pop()

    walk(src, 0.0, [src])
    return best_path


# -- centrality -------------------------------------------------------------

def dict_dijkstra(adj: dict[int, list[tuple[int, float]]], src: int) -> dict[int, float]:
    dist = {src: 0.0}
    heap = [(0.0, src)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in adj.get(u, ()):
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def undirected_adj(nodes, weights) -> dict[int, list[tuple[int, float]]]:
    adj = {u: [] for u in nodes}
    for (a, b), w in weights.items():
        adj[a].append((b, w))
        adj[b].append((a, w))
    return adj


def count_shortest_paths(adj, nodes, src) -> tuple[dict[int, float], dict[int, float]]:
    """Distances plus the number of distinct shortest paths from src,
    computed by dynamic programming over distance order."""
    dist = dict_dijkstra(adj, src)
    sigma = {u: 0.0 for u in nodes}
    sigma[src] = 1.0
    for u in sorted((u for u in nodes if u in dist), key=lambda u: dist[u]):
        if u == src:
            continue
        for v, w in adj.get(u, ()):
            if v in dist and dist[v] + w == dist[u]:
                sigma[u] += sigma[v]
    return dist, sigma


def naive_betweenness(nodes, weights) -> dict[int, float]:
    """Direct sigma-counting over unordered pairs: for every (s, t) and
    interior v, add sigma_sv * sigma_vt / sigma_st when v sits on a
    shortest path."""
    adj = undirected_adj(nodes, weights)
    all_dist = {}
    all_sigma = {}
    for s in nodes:
        all_dist[s], all_sigma[s] = count_shortest_paths(adj, nodes, s)
    bc = {u: 0.0 for u in nodes}
    for s, t in itertools.combinations(nodes, 2):
        d_st = all_dist[s].get(t)
        if d_st is None:
            continue
        sigma_st = all_sigma[s][t]
        for v in nodes:
            if v == s or v == t:
                continue
            d_sv = all_dist[s].get(v)
            d_vt = all_dist[v].get(t)
            if d_sv is None or d_vt is None:
                continue
            if d_sv + d_vt == d_st:
                bc[v] += all_sigma[s][v] * all_sigma[v][t] / sigma_st
    return bc


def formula_closeness(nodes, weights) -> dict[int, float]:
    """Component-corrected closeness straight from the definition."""
    adj = undirected_adj(nodes, weights)
    n = len(nodes)
    out = {}
    for x in nodes:
        dist = dict_dijkstra(adj, x)
        r = len(dist)
        total = sum(dist.values())
        if r <= 1 or total <= 0.0 or n < 2:
            out[x] = 0.0
        else:
            out[x] = ((r - 1) / (n - 1)) * ((r - 1) / total)
    return out


# -- partitions -------------------------------------------------------------

def iter_set_partitions(items: list):
    """All set partitions, as lists of lists (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in iter_set_partitions(rest):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        yield [[first]] + partition


# -- linking ----------------------------------------------------------------

def brute_force_links(pois, stops, radius_m, dist_fn):
    """Nearest stop per POI within radius, lowest index on ties."""
    links = []
    for i, p in enumerate(pois):
        best = None
        for j, s in enumerate(stops):
            d = dist_fn(p, s)
            if best is None or d < best[1]:
                best = (j, d)
        if best is not None and best[1] <= radius_m:
            links.append((i, best[0], best[1]))
    return links
