"""Multilayer transport graph model and geodesic geometry.

The graph is a directed multigraph with self-loops. Every node and edge
carries a layer tag; all analyses run against this one substrate, usually
through the collapsed undirected view produced by :func:`undirected_min_view`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator

from .errors import GraphError, MissingWeightError

EARTH_RADIUS_M = 6_371_000.0  # mean Earth radius
M_PER_DEG_LAT = EARTH_RADIUS_M * math.pi / 180.0


class LayerId(str, Enum):
    DRIVE = "drive"
    WALK = "walk"
    BIKE = "bike"
    TRANSIT = "transit"
    POI = "poi"


class NodeKind(str, Enum):
    INTERSECTION = "intersection"
    STOP = "stop"
    POI = "poi"


class EdgeKind(str, Enum):
    STREET = "street"
    TRANSIT_ROUTE = "transit_route"
    INTERLAYER = "interlayer"
    WALK_TRANSFER = "walk_transfer"


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 position in decimal degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"non-finite coordinate ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on a sphere of mean Earth radius."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def great_circle_midpoint(a: GeoPoint, b: GeoPoint) -> GeoPoint:
    """Midpoint of the great-circle segment between two points."""
    phi1, lam1 = math.radians(a.lat), math.radians(a.lon)
    phi2, lam2 = math.radians(b.lat), math.radians(b.lon)
    x = math.cos(phi1) * math.cos(lam1) + math.cos(phi2) * math.cos(lam2)
    y = math.cos(phi1) * math.sin(lam1) + math.cos(phi2) * math.sin(lam2)
    z = math.sin(phi1) + math.sin(phi2)
    norm = math.sqrt(x * x + y * y + z * z)
    if norm == 0.0:  # antipodal: midpoint ill-defined, pick first endpoint
        return a
    lat = math.degrees(math.asin(max(-1.0, min(1.0, z / norm))))
    lon = math.degrees(math.atan2(y, x))
    return GeoPoint(lat, lon)


@dataclass
class NetNode:
    id: int
    point: GeoPoint
    layer: LayerId
    kind: NodeKind = NodeKind.INTERSECTION
    tags: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is NodeKind.STOP and self.layer is not LayerId.TRANSIT:
            raise ValueError(f"node {self.id}: stop nodes must be on the transit layer")
        if self.kind is NodeKind.POI and self.layer is not LayerId.POI:
            raise ValueError(f"node {self.id}: poi nodes must be on the poi layer")


@dataclass
class NetEdge:
    """Directed edge; ``key`` disambiguates parallel edges between u and v."""

    u: int
    v: int
    key: int
    layer: LayerId
    kind: EdgeKind
    length_m: float
    speed_mps: float | None = None
    travel_time_s: float | None = None
    tags: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.length_m) and self.length_m >= 0.0):
            raise ValueError(f"edge {self.id()}: length_m must be finite and >= 0")
        if self.speed_mps is not None and not self.speed_mps > 0.0:
            raise ValueError(f"edge {self.id()}: speed_mps must be > 0")
        if self.travel_time_s is not None and not self.travel_time_s >= 0.0:
            raise ValueError(f"edge {self.id()}: travel_time_s must be >= 0")
        if (self.kind is EdgeKind.STREET and self.speed_mps is not None
                and self.travel_time_s is not None):
            expect = self.length_m / self.speed_mps
            if abs(self.travel_time_s - expect) > 1e-9 * max(1.0, abs(expect)):
                raise ValueError(
                    f"edge {self.id()}: travel_time_s inconsistent with length/speed")

    def id(self) -> tuple[int, int, int]:
        return (self.u, self.v, self.key)


class MultilayerGraph:
    """Directed multigraph with per-layer indices and a freeze step.

    Construction is single-writer; after :meth:`freeze` the graph is
    immutable and safe to share across concurrent read-only analyses.
    """

    def __init__(self):
        self._nodes: dict[int, NetNode] = {}
        self._out: dict[int, list[NetEdge]] = {}
        self._in: dict[int, list[NetEdge]] = {}
        self._next_key: dict[tuple[int, int], int] = {}
        self._layer_nodes: dict[LayerId, int] = {l: 0 for l in LayerId}
        self._layer_edges: dict[LayerId, int] = {l: 0 for l in LayerId}
        self._edge_count = 0
        self._frozen = False
        # set by induced_subgraph_by_radius; buffer nodes sit outside the
        # core radius and exist only to mitigate the boundary effect
        self.core_center: GeoPoint | None = None
        self.core_radius_m: float | None = None
        self.buffer_ids: frozenset[int] = frozenset()

    # -- mutation ---------------------------------------------------------

    def _check_writable(self):
        if self._frozen:
            raise GraphError("graph is frozen")

    def add_node(self, node: NetNode) -> NetNode:
        self._check_writable()
        if node.id in self._nodes:
            raise GraphError(f"duplicate node id {node.id}")
        self._nodes[node.id] = node
        self._out[node.id] = []
        self._in[node.id] = []
        self._layer_nodes[node.layer] += 1
        return node

    def add_edge(self, u: int, v: int, *, layer: LayerId, kind: EdgeKind,
                 length_m: float, speed_mps: float | None = None,
                 travel_time_s: float | None = None,
                 tags: dict[str, str] | None = None,
                 key: int | None = None) -> NetEdge:
        self._check_writable()
        if u not in self._nodes:
            raise GraphError(f"edge endpoint {u} not in graph")
        if v not in self._nodes:
            raise GraphError(f"edge endpoint {v} not in graph")
        if kind is EdgeKind.INTERLAYER and self._nodes[u].layer is self._nodes[v].layer:
            raise GraphError(f"interlayer edge {u}->{v} joins same-layer nodes")
        if key is None:
            key = self._next_key.get((u, v), 0)
        edge = NetEdge(u, v, key, layer, kind, length_m,
                       speed_mps=speed_mps, travel_time_s=travel_time_s,
                       tags=tags if tags is not None else {})
        self._next_key[(u, v)] = max(self._next_key.get((u, v), 0), key + 1)
        self._out[u].append(edge)
        self._in[v].append(edge)
        self._layer_edges[layer] += 1
        self._edge_count += 1
        return edge

    def freeze(self) -> "MultilayerGraph":
        self.validate()
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- access -----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def node(self, node_id: int) -> NetNode:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise GraphError(f"unknown node id {node_id}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._nodes

    def nodes(self) -> Iterator[NetNode]:
        return iter(self._nodes.values())

    def node_ids(self) -> list[int]:
        return sorted(self._nodes)

    def out_edges(self, node_id: int) -> list[NetEdge]:
        return self._out[node_id]

    def in_edges(self, node_id: int) -> list[NetEdge]:
        return self._in[node_id]

    def edges(self) -> Iterator[NetEdge]:
        for u in self._out:
            yield from self._out[u]

    def layer_node_count(self, layer: LayerId) -> int:
        return self._layer_nodes[layer]

    def layer_edge_count(self, layer: LayerId) -> int:
        return self._layer_edges[layer]

    def layer_node_ids(self, layer: LayerId) -> list[int]:
        return sorted(n.id for n in self._nodes.values() if n.layer is layer)

    def next_id(self) -> int:
        return max(self._nodes, default=-1) + 1

    def core_node_ids(self) -> list[int]:
        """Sorted node ids excluding the buffer zone."""
        return sorted(i for i in self._nodes if i not in self.buffer_ids)

    # -- integrity --------------------------------------------------------

    def validate(self) -> None:
        """Assert structural invariants; raises GraphError on violation."""
        layer_n = {l: 0 for l in LayerId}
        for n in self._nodes.values():
            layer_n[n.layer] += 1
        if layer_n != self._layer_nodes:
            raise GraphError("per-layer node index out of sync with node table")
        layer_e = {l: 0 for l in LayerId}
        n_out = 0
        for u, edges in self._out.items():
            for e in edges:
                n_out += 1
                layer_e[e.layer] += 1
                if e.u != u:
                    raise GraphError(f"edge {e.id()} filed under wrong source {u}")
                if e.v not in self._nodes:
                    raise GraphError(f"edge {e.id()} points at missing node {e.v}")
                if not any(x is e for x in self._in[e.v]):
                    raise GraphError(f"edge {e.id()} missing from in-adjacency")
        n_in = sum(len(v) for v in self._in.values())
        if n_out != self._edge_count or n_in != self._edge_count:
            raise GraphError("adjacency views disagree on edge count")
        if sum(layer_e.values()) != self._edge_count or layer_e != self._layer_edges:
            raise GraphError("per-layer edge index out of sync with adjacency")


def induced_subgraph_by_radius(g: MultilayerGraph, center: GeoPoint,
                               radius_m: float, buffer_m: float = 0.0) -> MultilayerGraph:
    """Keep nodes within ``radius_m + buffer_m`` of center (inclusive).

    Edges survive when both endpoints do. Nodes beyond the core radius but
    inside the buffer are flagged in ``buffer_ids`` so centrality results
    can be reported for core nodes only. An empty result is a valid empty
    graph, not an error.
    """
    if not radius_m > 0.0:
        raise ValueError("radius_m must be > 0")
    if buffer_m < 0.0:
        raise ValueError("buffer_m must be >= 0")
    out = MultilayerGraph()
    limit = radius_m + buffer_m
    buffer_ids = set()
    for node in g.nodes():
        d = haversine_m(center, node.point)
        if d <= limit:
            out.add_node(replace(node, tags=dict(node.tags)))
            if d > radius_m:
                buffer_ids.add(node.id)
    for edge in g.edges():
        if edge.u in out._nodes and edge.v in out._nodes:
            out.add_edge(edge.u, edge.v, layer=edge.layer, kind=edge.kind,
                         length_m=edge.length_m, speed_mps=edge.speed_mps,
                         travel_time_s=edge.travel_time_s,
                         tags=dict(edge.tags), key=edge.key)
    out.core_center = center
    out.core_radius_m = radius_m
    out.buffer_ids = frozenset(buffer_ids)
    return out


@dataclass(frozen=True)
class UndirectedView:
    """Simple undirected weighted graph collapsed from a MultilayerGraph.

    One edge per unordered node pair, weighted by the minimum over all
    parallel and reverse directed edges. Self-loops are kept separately:
    centrality ignores them, modularity counts their weight.
    """

    weight_attr: str
    node_ids: tuple[int, ...]
    weights: dict[tuple[int, int], float]  # key (u, v) with u < v
    loops: dict[int, float]

    def neighbors(self, u: int) -> list[tuple[int, float]]:
        return self._adj().get(u, [])

    def _adj(self) -> dict[int, list[tuple[int, float]]]:
        adj = getattr(self, "_adj_cache", None)
        if adj is None:
            adj = {u: [] for u in self.node_ids}
            for (a, b), w in self.weights.items():
                adj[a].append((b, w))
                adj[b].append((a, w))
            for u in adj:
                adj[u].sort()
            object.__setattr__(self, "_adj_cache", adj)
        return adj

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    @property
    def edge_count(self) -> int:
        return len(self.weights)


def undirected_min_view(g: MultilayerGraph, weight_attr: str = "length_m",
                        layers: Iterable[LayerId] | None = None) -> UndirectedView:
    """Collapse the directed multigraph to a simple undirected weighted graph.

    ``layers`` restricts the node set; edges survive only when both
    endpoints are selected. Raises MissingWeightError naming the first edge
    that lacks the requested weight.
    """
    if weight_attr not in ("length_m", "travel_time_s"):
        raise ValueError(f"unsupported weight attribute {weight_attr!r}")
    selected = set(LayerId) if layers is None else set(layers)
    keep = {n.id for n in g.nodes() if n.layer in selected}
    weights: dict[tuple[int, int], float] = {}
    loops: dict[int, float] = {}
    for e in g.edges():
        if e.u not in keep or e.v not in keep:
            continue
        w = getattr(e, weight_attr)
        if w is None:
            raise MissingWeightError(
                f"edge {e.id()} has no {weight_attr}; annotate the graph first")
        if e.u == e.v:
            cur = loops.get(e.u)
            loops[e.u] = w if cur is None else min(cur, w)
            continue
        pair = (e.u, e.v) if e.u < e.v else (e.v, e.u)
        cur = weights.get(pair)
        weights[pair] = w if cur is None else min(cur, w)
    return UndirectedView(weight_attr=weight_attr,
                          node_ids=tuple(sorted(keep)),
                          weights=weights, loops=loops)
