"""Node and edge centrality: closeness, betweenness (Brandes), degree, and
the line-graph projection that turns node centrality into edge heatmaps.

Closeness and betweenness operate on the collapsed undirected weighted view
and require strictly positive weights. Disconnected graphs use the
component-corrected closeness (r-1)/(N-1) * (r-1)/sum(d) so values stay
comparable across components; isolated nodes score 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import AnalysisError, NegativeWeightError
from .model import (
    GeoPoint,
    MultilayerGraph,
    UndirectedView,
    great_circle_midpoint,
    undirected_min_view,
)


@dataclass(frozen=True)
class NodeCentralityMap:
    metric: str
    normalized: bool
    values: dict[int, float]


@dataclass(frozen=True)
class EdgeCentralityMap:
    """Centrality per collapsed undirected edge, keyed (u, v) with u < v.

    ``provenance`` records how edges got their values: "inversion" for the
    line-graph projection, "endpoint_mean" for averaged node values.
    Midpoints are carried so area filters can select edges without the graph.
    """

    metric: str
    provenance: str
    normalized: bool
    values: dict[tuple[int, int], float]
    midpoints: dict[tuple[int, int], GeoPoint]


def _check_positive_weights(view: UndirectedView) -> None:
    for pair, w in view.weights.items():
        if not w > 0.0 or not math.isfinite(w):
            raise NegativeWeightError(
                f"edge {pair} has non-positive weight {w}; centrality needs weights > 0")


def _csr(view: UndirectedView):
    ids = list(view.node_ids)
    index = {nid: i for i, nid in enumerate(ids)}
    n = len(ids)
    deg = np.zeros(n + 1, np.int64)
    for (a, b) in view.weights:
        deg[index[a] + 1] += 1
        deg[index[b] + 1] += 1
    indptr = np.cumsum(deg)
    indices = np.empty(indptr[-1], np.int64)
    weights = np.empty(indptr[-1], np.float64)
    cursor = indptr[:-1].copy()
    for (a, b), w in sorted(view.weights.items()):
        ia, ib = index[a], index[b]
        indices[cursor[ia]] = ib
        weights[cursor[ia]] = w
        cursor[ia] += 1
        indices[cursor[ib]] = ia
        weights[cursor[ib]] = w
        cursor[ib] += 1
    return ids, indptr, indices, weights


def closeness(view: UndirectedView) -> NodeCentralityMap:
    """Component-corrected closeness on the undirected weighted view."""
    _check_positive_weights(view)
    n = len(view.node_ids)
    values: dict[int, float] = {}
    if n == 0:
        return NodeCentralityMap("closeness", False, values)
    ids, indptr, indices, weights = _csr(view)
    sums, reach = _kernels.closeness_sums_csr(indptr, indices, weights)
    for i, nid in enumerate(ids):
        r = int(reach[i])
        if r <= 1 or sums[i] <= 0.0:
            values[nid] = 0.0  # isolated node convention
        else:
            values[nid] = float(((r - 1) / (n - 1)) * ((r - 1) / sums[i]))
    return NodeCentralityMap("closeness", False, values)


def betweenness(view: UndirectedView, normalized: bool = False) -> NodeCentralityMap:
    """Brandes betweenness over unordered pairs (s != v != t)."""
    _check_positive_weights(view)
    n = len(view.node_ids)
    if n == 0:
        return NodeCentralityMap("betweenness", normalized, {})
    ids, indptr, indices, weights = _csr(view)
    bc = _kernels.betweenness_csr(indptr, indices, weights)
    scale = 1.0
    if normalized and n >= 3:
        scale = 2.0 / ((n - 1) * (n - 2))
    values = {nid: float(bc[i]) * scale for i, nid in enumerate(ids)}
    return NodeCentralityMap("betweenness", normalized, values)


def degree_centrality(g: MultilayerGraph) -> NodeCentralityMap:
    """Distinct-neighbor degree (all layers, interlayer edges included,
    self-loops excluded) scaled by 1/(N-1)."""
    n = g.node_count
    if n < 2:
        raise AnalysisError(f"degree centrality needs >= 2 nodes, got {n}")
    values: dict[int, float] = {}
    for nid in g.node_ids():
        neigh = {e.v for e in g.out_edges(nid)} | {e.u for e in g.in_edges(nid)}
        neigh.discard(nid)
        values[nid] = len(neigh) / (n - 1)
    return NodeCentralityMap("degree", True, values)


@dataclass(frozen=True)
class LineGraph:
    """Line graph of a simple undirected graph: one node per original edge,
    adjacent iff the edges share an endpoint, weighted by the mean of the
    two incident edge weights."""

    view: UndirectedView
    pair_for_node: tuple[tuple[int, int], ...]  # line-node index -> original edge


def line_graph(view: UndirectedView) -> LineGraph:
    pairs = sorted(view.weights)
    node_of = {pair: i for i, pair in enumerate(pairs)}
    incident: dict[int, list[tuple[int, int]]] = {}
    for pair in pairs:
        incident.setdefault(pair[0], []).append(pair)
        incident.setdefault(pair[1], []).append(pair)
    lweights: dict[tuple[int, int], float] = {}
    for shared_node, edges in incident.items():
        for e1, e2 in combinations(edges, 2):
            a, b = node_of[e1], node_of[e2]
            key = (a, b) if a < b else (b, a)
            lweights[key] = (view.weights[e1] + view.weights[e2]) / 2.0
    lview = UndirectedView(weight_attr=view.weight_attr,
                           node_ids=tuple(range(len(pairs))),
                           weights=lweights, loops={})
    return LineGraph(lview, tuple(pairs))


_NODE_METRICS = {"closeness": closeness, "betweenness": betweenness}


def edge_centrality(g: MultilayerGraph, metric: str, weight_attr: str = "length_m",
                    layers=None, method: str = "inversion",
                    normalized: bool = False) -> EdgeCentralityMap:
    """Project node centrality onto edges.

    "inversion" computes the metric on the line graph and maps each
    line-node's value back to its originating edge; "endpoint_mean" averages
    the two endpoint node values instead.
    """
    if metric not in _NODE_METRICS:
        raise ValueError(f"unsupported edge metric {metric!r}")
    if method not in ("inversion", "endpoint_mean"):
        raise ValueError(f"unsupported method {method!r}")
    view = undirected_min_view(g, weight_attr, layers=layers)
    values: dict[tuple[int, int], float] = {}
    if method == "inversion":
        lg = line_graph(view)
        if metric == "betweenness":
            node_map = betweenness(lg.view, normalized=normalized)
        else:
            node_map = closeness(lg.view)
        for i, pair in enumerate(lg.pair_for_node):
            values[pair] = node_map.values[i]
    else:
        if metric == "betweenness":
            node_map = betweenness(view, normalized=normalized)
        else:
            node_map = closeness(view)
        for pair in view.weights:
            values[pair] = (node_map.values[pair[0]] + node_map.values[pair[1]]) / 2.0
    midpoints = {
        pair: great_circle_midpoint(g.node(pair[0]).point, g.node(pair[1]).point)
        for pair in values
    }
    return EdgeCentralityMap(metric=metric, provenance=method,
                             normalized=normalized if metric == "betweenness" else False,
                             values=values, midpoints=midpoints)


def high_centrality_nodes(m: NodeCentralityMap, factor: float = 1.5) -> set[int]:
    """Nodes whose value strictly exceeds factor times the map mean."""
    if not m.values:
        raise AnalysisError("high_centrality_nodes: empty centrality map")
    threshold = factor * (sum(m.values.values()) / len(m.values))
    return {nid for nid, v in m.values.items() if v > threshold}
