"""The integrated POI-transit multilayer network: nearest-stop linking,
intra-transit edges along route polylines, walk-priority layer merging,
timetable-derived bus graphs, stop transfer edges, the summary report, and
the area walkability score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AnalysisError, ConfigError, GraphError, UndefinedWalkabilityError
from .centrality import EdgeCentralityMap, degree_centrality, high_centrality_nodes
from .ingest import PoiRecord, RoutePolyline, StopRecord, WALK_SPEED_MPS
from .model import (
    EdgeKind,
    GeoPoint,
    LayerId,
    M_PER_DEG_LAT,
    MultilayerGraph,
    NetEdge,
    NetNode,
    NodeKind,
    haversine_m,
)

DEFAULT_LINK_RADIUS_M = 500.0
DEFAULT_TRANSFER_THRESHOLD_M = 200.0
MIN_BUS_TRAVEL_TIME_S = 30.0


# ---------------------------------------------------------------------------
# spatial grid
# ---------------------------------------------------------------------------

class GridIndex:
    """Uniform-cell spatial hash over lat/lon points.

    Cells are sized so that any two points within ``cell_m`` meters fall in
    adjacent cells at the latitudes present in the data; queries widen the
    longitude span when they sit at higher latitude than the indexed points.
    """

    def __init__(self, points: Sequence[GeoPoint], cell_m: float):
        if not cell_m > 0.0:
            raise ConfigError(f"grid cell size must be > 0, got {cell_m}")
        self.cell_m = cell_m
        self.lat_cell_deg = cell_m / M_PER_DEG_LAT
        cos_min = min((math.cos(math.radians(p.lat)) for p in points), default=1.0)
        self._cos_ref = max(cos_min, 1e-9)
        self.lon_cell_deg = cell_m / (M_PER_DEG_LAT * self._cos_ref)
        self._cells: dict[tuple[int, int], list[int]] = {}
        self._points = list(points)
        for i, p in enumerate(self._points):
            self._cells.setdefault(self._cell(p), []).append(i)
        if self._cells:
            self._ci_lo = min(c[0] for c in self._cells)
            self._ci_hi = max(c[0] for c in self._cells)
            self._cj_lo = min(c[1] for c in self._cells)
            self._cj_hi = max(c[1] for c in self._cells)

    def _cell(self, p: GeoPoint) -> tuple[int, int]:
        return (math.floor(p.lat / self.lat_cell_deg),
                math.floor(p.lon / self.lon_cell_deg))

    def candidates(self, p: GeoPoint, radius_m: float) -> Iterable[int]:
        """Indices of all stored points possibly within radius_m of p."""
        if not self._cells:
            return
        ci, cj = self._cell(p)
        rows = math.ceil(radius_m / self.cell_m)
        # worst-case latitude any match can sit at, for the lon span
        lat_reach = min(90.0, abs(p.lat) + radius_m / M_PER_DEG_LAT)
        cos_reach = max(math.cos(math.radians(lat_reach)), 1e-9)
        span_deg = radius_m / (M_PER_DEG_LAT * cos_reach)
        cols = math.ceil(span_deg / self.lon_cell_deg)
        # clamp to occupied cells so degenerate spans stay cheap
        for i in range(max(ci - rows, self._ci_lo), min(ci + rows, self._ci_hi) + 1):
            for j in range(max(cj - cols, self._cj_lo), min(cj + cols, self._cj_hi) + 1):
                yield from self._cells.get((i, j), ())

    def nearest_within(self, p: GeoPoint, radius_m: float) -> tuple[int, float] | None:
        """Closest stored point within radius_m (inclusive); ties go to the
        lowest index. None when nothing is in range."""
        best_i = -1
        best_d = math.inf
        for i in sorted(set(self.candidates(p, radius_m))):
            d = haversine_m(p, self._points[i])
            if d < best_d:
                best_i, best_d = i, d
        if best_i < 0 or best_d > radius_m:
            return None
        return best_i, best_d


# ---------------------------------------------------------------------------
# layer composition
# ---------------------------------------------------------------------------

def add_poi_nodes(g: MultilayerGraph, pois: Sequence[PoiRecord]) -> list[int]:
    """Append POI nodes (ids allocated after the current max); returns the
    node ids in input order."""
    ids = []
    next_id = g.next_id()
    for poi in pois:
        node = NetNode(next_id, poi.point, LayerId.POI, NodeKind.POI,
                       tags={"category": poi.category, "name": poi.name})
        g.add_node(node)
        ids.append(next_id)
        next_id += 1
    return ids


def add_stop_nodes(g: MultilayerGraph, stops: Sequence[StopRecord]) -> dict[str, int]:
    """Append transit stop nodes; returns stop id -> node id."""
    mapping: dict[str, int] = {}
    next_id = g.next_id()
    for stop in stops:
        if stop.stop_id in mapping:
            raise GraphError(f"duplicate stop id {stop.stop_id!r}")
        node = NetNode(next_id, stop.point, LayerId.TRANSIT, NodeKind.STOP,
                       tags={"stop_id": stop.stop_id, "name": stop.name})
        g.add_node(node)
        mapping[stop.stop_id] = next_id
        next_id += 1
    return mapping


# ---------------------------------------------------------------------------
# POI -> stop linking
# ---------------------------------------------------------------------------

def nearest_stop_links(pois: Sequence[GeoPoint], stops: Sequence[GeoPoint],
                       radius_m: float = DEFAULT_LINK_RADIUS_M,
                       ) -> list[tuple[int, int, float]]:
    """(poi index, stop index, meters) for each POI whose nearest stop lies
    within radius_m (inclusive); POIs with no stop in range get no link."""
    if not radius_m > 0.0:
        raise ConfigError(f"link radius must be > 0, got {radius_m}")
    links: list[tuple[int, int, float]] = []
    if not stops:
        return links
    grid = GridIndex(stops, cell_m=radius_m)
    for i, p in enumerate(pois):
        hit = grid.nearest_within(p, radius_m)
        if hit is not None:
            links.append((i, hit[0], hit[1]))
    return links


def link_pois_to_stops(g: MultilayerGraph, radius_m: float = DEFAULT_LINK_RADIUS_M,
                       ) -> list[NetEdge]:
    """Add one interlayer edge from each POI node to its nearest stop node
    within radius_m. Returns the added edges (POIs out of range stay
    isolated; no stops at all is not an error)."""
    poi_ids = g.layer_node_ids(LayerId.POI)
    stop_ids = [n.id for n in sorted(g.nodes(), key=lambda n: n.id)
                if n.kind is NodeKind.STOP]
    links = nearest_stop_links([g.node(i).point for i in poi_ids],
                               [g.node(i).point for i in stop_ids], radius_m)
    edges = []
    for pi, si, d in links:
        edges.append(g.add_edge(poi_ids[pi], stop_ids[si], layer=LayerId.TRANSIT,
                                kind=EdgeKind.INTERLAYER, length_m=d))
    return edges


# ---------------------------------------------------------------------------
# intra-transit edges from route polylines
# ---------------------------------------------------------------------------

def _local_xy(origin: GeoPoint, p: GeoPoint) -> tuple[float, float]:
    # equirectangular projection, adequate at snap-tolerance scales
    cos0 = math.cos(math.radians(origin.lat))
    return ((p.lon - origin.lon) * M_PER_DEG_LAT * cos0,
            (p.lat - origin.lat) * M_PER_DEG_LAT)


def _project_on_polyline(line: Sequence[GeoPoint], p: GeoPoint,
                         cum: Sequence[float]) -> tuple[float, float]:
    """(distance to line in meters, arc-length parameter of the projection)."""
    best_d = math.inf
    best_t = 0.0
    for k in range(len(line) - 1):
        a, b = line[k], line[k + 1]
        ax, ay = 0.0, 0.0
        bx, by = _local_xy(a, b)
        px, py = _local_xy(a, p)
        seg2 = bx * bx + by * by
        frac = 0.0 if seg2 == 0.0 else max(0.0, min(1.0, (px * bx + py * by) / seg2))
        dx, dy = px - frac * bx, py - frac * by
        d = math.hypot(dx, dy)
        if d < best_d:
            best_d = d
            best_t = cum[k] + frac * (cum[k + 1] - cum[k])
    return best_d, best_t


@dataclass(frozen=True)
class TransitEdgeResult:
    """Consecutive-stop pairs per route, deduplicated across routes."""

    pairs: tuple[tuple[int, int, float], ...]  # (stop index, stop index, arc meters)
    routes_without_edges: int


def transit_route_edges(stops: Sequence[StopRecord], routes: Sequence[RoutePolyline],
                        snap_tolerance_m: float = 50.0) -> TransitEdgeResult:
    """Snap stops onto each route polyline (within tolerance), order them by
    arc length, and join consecutive ones. Pairs seen on several routes are
    kept once with the first arc-length gap encountered."""
    if not snap_tolerance_m > 0.0:
        raise ConfigError(f"snap tolerance must be > 0, got {snap_tolerance_m}")
    seen: set[tuple[int, int]] = set()
    pairs: list[tuple[int, int, float]] = []
    skipped = 0
    for route in routes:
        cum = [0.0]
        for a, b in zip(route.points, route.points[1:]):
            cum.append(cum[-1] + haversine_m(a, b))
        # cheap prefilter: only stops inside the route's padded bounding box
        pad_lat = snap_tolerance_m / M_PER_DEG_LAT
        cos_lat = max(1e-9, min(math.cos(math.radians(p.lat)) for p in route.points))
        pad_lon = snap_tolerance_m / (M_PER_DEG_LAT * cos_lat)
        lat_lo = min(p.lat for p in route.points) - pad_lat
        lat_hi = max(p.lat for p in route.points) + pad_lat
        lon_lo = min(p.lon for p in route.points) - pad_lon
        lon_hi = max(p.lon for p in route.points) + pad_lon
        snapped: list[tuple[float, int]] = []
        for i, stop in enumerate(stops):
            p = stop.point
            if not (lat_lo <= p.lat <= lat_hi and lon_lo <= p.lon <= lon_hi):
                continue
            d, t = _project_on_polyline(route.points, p, cum)
            if d <= snap_tolerance_m:
                snapped.append((t, i))
        if len(snapped) < 2:
            skipped += 1
            continue
        snapped.sort()
        for (t1, i1), (t2, i2) in zip(snapped, snapped[1:]):
            key = (i1, i2) if i1 < i2 else (i2, i1)
            if i1 == i2 or key in seen:
                continue
            seen.add(key)
            pairs.append((i1, i2, t2 - t1))
    return TransitEdgeResult(tuple(pairs), skipped)


def add_transit_route_edges(g: MultilayerGraph, stop_node_ids: Sequence[int],
                            stops: Sequence[StopRecord],
                            routes: Sequence[RoutePolyline],
                            snap_tolerance_m: float = 50.0) -> list[NetEdge]:
    result = transit_route_edges(stops, routes, snap_tolerance_m)
    edges = []
    for i1, i2, arc in result.pairs:
        edges.append(g.add_edge(stop_node_ids[i1], stop_node_ids[i2],
                                layer=LayerId.TRANSIT, kind=EdgeKind.TRANSIT_ROUTE,
                                length_m=arc))
    return edges


# ---------------------------------------------------------------------------
# layer merging and bus graphs
# ---------------------------------------------------------------------------

def merge_walk_priority(drive: MultilayerGraph, walk: MultilayerGraph) -> MultilayerGraph:
    """Union of the two street layers keyed by node id and (u, v, key);
    where an edge exists in both, the merged edge carries the walking
    travel time (walkers walk when they can)."""
    for layer_g, name in ((drive, "drive"), (walk, "walk")):
        for e in layer_g.edges():
            if e.travel_time_s is None:
                raise AnalysisError(
                    f"{name} edge {e.id()} lacks travel_time_s; annotate before merging")
    merged = MultilayerGraph()
    for node in walk.nodes():
        merged.add_node(NetNode(node.id, node.point, node.layer, node.kind,
                                dict(node.tags)))
    for node in drive.nodes():
        if not merged.has_node(node.id):
            merged.add_node(NetNode(node.id, node.point, node.layer, node.kind,
                                    dict(node.tags)))
    walk_keys = {e.id() for e in walk.edges()}
    for e in walk.edges():
        merged.add_edge(e.u, e.v, layer=e.layer, kind=e.kind, length_m=e.length_m,
                        speed_mps=e.speed_mps, travel_time_s=e.travel_time_s,
                        tags=dict(e.tags), key=e.key)
    for e in drive.edges():
        if e.id() in walk_keys:
            continue  # conflict: walking edge already carries the time
        merged.add_edge(e.u, e.v, layer=e.layer, kind=e.kind, length_m=e.length_m,
                        speed_mps=e.speed_mps, travel_time_s=e.travel_time_s,
                        tags=dict(e.tags), key=e.key)
    return merged


@dataclass(frozen=True)
class StopTimetable:
    """Arrival minutes along one route, in route order."""

    route_id: str
    arrivals: tuple[tuple[str, int], ...]  # (stop id, arrival minute)


def bus_time_graph(timetables: Sequence[StopTimetable],
                   stops: Sequence[StopRecord]) -> MultilayerGraph:
    """Directed transit graph with edge times from arrival deltas, floored
    at 30 seconds. Only stops referenced by a timetable become nodes."""
    by_id = {s.stop_id: s for s in stops}
    g = MultilayerGraph()
    node_ids: dict[str, int] = {}

    def ensure(stop_id: str, route_id: str) -> int:
        if stop_id not in by_id:
            raise AnalysisError(f"route {route_id}: unknown stop id {stop_id!r}")
        if stop_id not in node_ids:
            stop = by_id[stop_id]
            nid = g.next_id()
            g.add_node(NetNode(nid, stop.point, LayerId.TRANSIT, NodeKind.STOP,
                               tags={"stop_id": stop.stop_id, "name": stop.name}))
            node_ids[stop_id] = nid
        return node_ids[stop_id]

    for table in timetables:
        for pos, ((sid_a, t_a), (sid_b, t_b)) in enumerate(
                zip(table.arrivals, table.arrivals[1:])):
            if t_b < t_a:
                raise AnalysisError(
                    f"route {table.route_id}: arrival times decrease at position {pos + 1}")
            u = ensure(sid_a, table.route_id)
            v = ensure(sid_b, table.route_id)
            dt = max(float((t_b - t_a) * 60), MIN_BUS_TRAVEL_TIME_S)
            g.add_edge(u, v, layer=LayerId.TRANSIT, kind=EdgeKind.TRANSIT_ROUTE,
                       length_m=haversine_m(g.node(u).point, g.node(v).point),
                       travel_time_s=dt, tags={"route_id": table.route_id})
        if len(table.arrivals) == 1:
            ensure(table.arrivals[0][0], table.route_id)
    return g


def merge_nearby_stops(g: MultilayerGraph,
                       threshold_m: float = DEFAULT_TRANSFER_THRESHOLD_M,
                       walk_speed_mps: float = WALK_SPEED_MPS) -> list[NetEdge]:
    """Join every stop pair closer than threshold_m (strict) with a
    bidirectional walk_transfer edge weighted distance/walk_speed."""
    if not threshold_m > 0.0:
        raise ConfigError(f"transfer threshold must be > 0, got {threshold_m}")
    if not walk_speed_mps > 0.0:
        raise ConfigError(f"walk speed must be > 0, got {walk_speed_mps}")
    stop_ids = [n.id for n in sorted(g.nodes(), key=lambda n: n.id)
                if n.kind is NodeKind.STOP]
    points = [g.node(i).point for i in stop_ids]
    grid = GridIndex(points, cell_m=threshold_m)
    added: list[NetEdge] = []
    for i, p in enumerate(points):
        for j in sorted(set(grid.candidates(p, threshold_m))):
            if j <= i:
                continue
            d = haversine_m(p, points[j])
            if d < threshold_m:
                t = d / walk_speed_mps
                u, v = stop_ids[i], stop_ids[j]
                added.append(g.add_edge(u, v, layer=LayerId.TRANSIT,
                                        kind=EdgeKind.WALK_TRANSFER,
                                        length_m=d, travel_time_s=t))
                added.append(g.add_edge(v, u, layer=LayerId.TRANSIT,
                                        kind=EdgeKind.WALK_TRANSFER,
                                        length_m=d, travel_time_s=t))
    return added


# ---------------------------------------------------------------------------
# area filters
# ---------------------------------------------------------------------------

class AreaFilter:
    """Bounding box or polygon membership test for points and edge midpoints."""

    def __init__(self, *, bbox: tuple[GeoPoint, GeoPoint] | None = None,
                 polygon: Sequence[GeoPoint] | None = None):
        if (bbox is None) == (polygon is None):
            raise ConfigError("AreaFilter needs exactly one of bbox or polygon")
        self._bbox = None
        self._ring = None
        if bbox is not None:
            a, b = bbox
            self._lat_lo, self._lat_hi = sorted((a.lat, b.lat))
            self._lon_lo, self._lon_hi = sorted((a.lon, b.lon))
            if self._lat_lo == self._lat_hi or self._lon_lo == self._lon_hi:
                raise ConfigError("bounding box is degenerate")
            self._bbox = (a, b)
        else:
            ring = list(polygon)
            if len(ring) >= 2 and ring[0] == ring[-1]:
                ring = ring[:-1]
            if len(ring) < 3:
                raise ConfigError("polygon needs at least 3 distinct points")
            area2 = 0.0
            for i in range(len(ring)):
                a, b = ring[i], ring[(i + 1) % len(ring)]
                area2 += a.lon * b.lat - b.lon * a.lat
            if area2 == 0.0:
                raise ConfigError("polygon is degenerate (zero area)")
            self._ring = ring

    @classmethod
    def from_bbox(cls, a: GeoPoint, b: GeoPoint) -> "AreaFilter":
        return cls(bbox=(a, b))

    @classmethod
    def from_polygon(cls, ring: Sequence[GeoPoint]) -> "AreaFilter":
        return cls(polygon=ring)

    def contains(self, p: GeoPoint) -> bool:
        if self._bbox is not None:
            return (self._lat_lo <= p.lat <= self._lat_hi
                    and self._lon_lo <= p.lon <= self._lon_hi)
        # even-odd ray cast in the lon/lat plane
        inside = False
        ring = self._ring
        for i in range(len(ring)):
            a, b = ring[i], ring[(i + 1) % len(ring)]
            if (a.lat > p.lat) != (b.lat > p.lat):
                x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat)
                if p.lon < x:
                    inside = not inside
        return inside


# ---------------------------------------------------------------------------
# summary report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AccessibilityReport:
    total_nodes: int
    poi_count: int
    stop_count: int
    total_edges: int
    interlayer_edge_count: int
    intra_transit_edge_count: int
    average_degree_centrality: float
    maximum_degree_centrality: float
    connected_poi_count: int
    isolated_poi_count: int
    connected_percentage: float  # rounded to 0.1 pp, as reported
    average_link_distance_m: float | None
    high_centrality_count: int
    high_centrality_in_area: int | None

    def to_json_dict(self) -> dict:
        return {
            "total_nodes": self.total_nodes,
            "poi_count": self.poi_count,
            "stop_count": self.stop_count,
            "total_edges": self.total_edges,
            "inter_layer_edges": self.interlayer_edge_count,
            "intra_transit_edges": self.intra_transit_edge_count,
            "average_degree_centrality": self.average_degree_centrality,
            "maximum_degree_centrality": self.maximum_degree_centrality,
            "pois_connected": self.connected_poi_count,
            "pois_isolated": self.isolated_poi_count,
            "percentage_of_pois_connected_to_transit": self.connected_percentage,
            "average_distance_of_inter_layer_connections_meters": self.average_link_distance_m,
            "high_centrality_nodes": self.high_centrality_count,
            "high_centrality_nodes_in_downtown": self.high_centrality_in_area,
        }


def assemble_report(*, poi_count: int, stop_count: int, interlayer_edge_count: int,
                    intra_transit_edge_count: int, other_node_count: int = 0,
                    other_edge_count: int = 0,
                    average_degree_centrality: float = 0.0,
                    maximum_degree_centrality: float = 0.0,
                    average_link_distance_m: float | None = None,
                    high_centrality_count: int = 0,
                    high_centrality_in_area: int | None = None) -> AccessibilityReport:
    """Derive the full report from raw counts, asserting the internal
    identities (connected + isolated = POIs, edges sum to the total,
    one interlayer edge per connected POI)."""
    if poi_count <= 0:
        raise AnalysisError("connected percentage undefined without POIs")
    if interlayer_edge_count > poi_count:
        raise AnalysisError(
            f"interlayer edges ({interlayer_edge_count}) exceed POI count "
            f"({poi_count}); nearest-only linking violated")
    connected = interlayer_edge_count
    isolated = poi_count - connected
    total_nodes = poi_count + stop_count + other_node_count
    total_edges = interlayer_edge_count + intra_transit_edge_count + other_edge_count
    percentage = round(100.0 * connected / poi_count, 1)
    assert connected + isolated == poi_count
    assert abs(percentage - 100.0 * connected / poi_count) <= 0.05 + 1e-12
    return AccessibilityReport(
        total_nodes=total_nodes, poi_count=poi_count, stop_count=stop_count,
        total_edges=total_edges, interlayer_edge_count=interlayer_edge_count,
        intra_transit_edge_count=intra_transit_edge_count,
        average_degree_centrality=average_degree_centrality,
        maximum_degree_centrality=maximum_degree_centrality,
        connected_poi_count=connected, isolated_poi_count=isolated,
        connected_percentage=percentage,
        average_link_distance_m=average_link_distance_m,
        high_centrality_count=high_centrality_count,
        high_centrality_in_area=high_centrality_in_area)


def network_stats(g: MultilayerGraph,
                  high_centrality_area: AreaFilter | None = None) -> AccessibilityReport:
    """Compute the summary report over an integrated POI/transit graph."""
    poi_ids = set(g.layer_node_ids(LayerId.POI))
    stop_ids = {n.id for n in g.nodes() if n.kind is NodeKind.STOP}
    if not poi_ids:
        raise AnalysisError("connected percentage undefined without POIs")
    if not stop_ids and g.layer_node_count(LayerId.TRANSIT) == 0:
        raise AnalysisError("graph has no transit layer")

    interlayer = [e for e in g.edges() if e.kind is EdgeKind.INTERLAYER]
    intra = [e for e in g.edges() if e.kind is EdgeKind.TRANSIT_ROUTE]
    other_edges = g.edge_count - len(interlayer) - len(intra)
    connected_pois = {e.u for e in interlayer} | {e.v for e in interlayer}
    connected_pois &= poi_ids

    deg = degree_centrality(g)
    avg_deg = sum(deg.values.values()) / len(deg.values)
    max_deg = max(deg.values.values())
    high = high_centrality_nodes(deg, 1.5)
    in_area = None
    if high_centrality_area is not None:
        in_area = sum(1 for nid in high if high_centrality_area.contains(g.node(nid).point))

    avg_link = None
    if interlayer:
        avg_link = sum(e.length_m for e in interlayer) / len(interlayer)

    report = assemble_report(
        poi_count=len(poi_ids), stop_count=len(stop_ids),
        interlayer_edge_count=len(interlayer),
        intra_transit_edge_count=len(intra),
        other_node_count=g.node_count - len(poi_ids) - len(stop_ids),
        other_edge_count=other_edges,
        average_degree_centrality=avg_deg, maximum_degree_centrality=max_deg,
        average_link_distance_m=avg_link, high_centrality_count=len(high),
        high_centrality_in_area=in_area)
    if report.connected_poi_count != len(connected_pois):
        raise AnalysisError(
            f"interlayer edge count {len(interlayer)} != connected POI count "
            f"{len(connected_pois)}; nearest-only linking violated")
    return report


# ---------------------------------------------------------------------------
# walkability
# ---------------------------------------------------------------------------

def walkability_score(edge_closeness: EdgeCentralityMap,
                      edge_betweenness: EdgeCentralityMap,
                      area: AreaFilter) -> float:
    """Sum of edge closeness over sum of edge betweenness for edges whose
    midpoint lies inside the area.

    Returns +inf when the betweenness sum is zero but closeness is not
    (an unimpeded area); raises UndefinedWalkabilityError when the area has
    no edges or both sums vanish.
    """
    if set(edge_closeness.values) != set(edge_betweenness.values):
        raise AnalysisError("closeness and betweenness maps cover different edges")
    if not edge_betweenness.normalized:
        raise ConfigError("walkability needs normalized edge betweenness")
    c_sum = 0.0
    b_sum = 0.0
    n_edges = 0
    for pair in sorted(edge_closeness.values):
        if area.contains(edge_closeness.midpoints[pair]):
            c_sum += edge_closeness.values[pair]
            b_sum += edge_betweenness.values[pair]
            n_edges += 1
    if n_edges == 0:
        raise UndefinedWalkabilityError("area contains no edges")
    if b_sum == 0.0:
        if c_sum > 0.0:
            return math.inf
        raise UndefinedWalkabilityError("both centrality sums are zero in the area")
    return c_sum / b_sum
