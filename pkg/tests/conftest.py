from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from metrograph import (
    EdgeKind,
    GeoPoint,
    LayerId,
    MultilayerGraph,
    NetNode,
    NodeKind,
    UndirectedView,
)

BASE_LAT, BASE_LON = 32.88, -117.234  # arbitrary urban-ish anchor
DEG_PER_M_LAT = 1.0 / 111_194.92664455873


def offset_point(north_m: float = 0.0, east_m: float = 0.0,
                 base: GeoPoint | None = None) -> GeoPoint:
    """Point displaced from the anchor by roughly the given meters."""
    import math

    base = base or GeoPoint(BASE_LAT, BASE_LON)
    lat = base.lat + north_m * DEG_PER_M_LAT
    lon = base.lon + east_m * DEG_PER_M_LAT / math.cos(math.radians(base.lat))
    return GeoPoint(lat, lon)


def build_graph(nodes, edges) -> MultilayerGraph:
    """nodes: (id, GeoPoint, layer[, kind]); edges: dicts for add_edge."""
    g = MultilayerGraph()
    for spec in nodes:
        nid, point, layer = spec[:3]
        kind = spec[3] if len(spec) > 3 else NodeKind.INTERSECTION
        g.add_node(NetNode(nid, point, layer, kind))
    for e in edges:
        g.add_edge(**e)
    return g


def street(u, v, length, *, layer=LayerId.WALK, speed=None, time=None, key=None,
           tags=None):
    return dict(u=u, v=v, layer=layer, kind=EdgeKind.STREET, length_m=length,
                speed_mps=speed, travel_time_s=time, key=key,
                tags=tags if tags is not None else {})


@pytest.fixture
def p3() -> MultilayerGraph:
    """Path A(1)-B(2)-C(3), bidirectional, unit lengths, walk layer."""
    pts = {i: offset_point(east_m=100.0 * i) for i in (1, 2, 3)}
    return build_graph(
        [(i, pts[i], LayerId.WALK) for i in (1, 2, 3)],
        [street(1, 2, 1.0), street(2, 1, 1.0), street(2, 3, 1.0), street(3, 2, 1.0)],
    )


def unit_view(pairs, nodes=None, loops=None) -> UndirectedView:
    """UndirectedView straight from an edge list (default unit weights)."""
    weights = {}
    for p in pairs:
        if len(p) == 3:
            a, b, w = p
        else:
            (a, b), w = p, 1.0
        weights[(min(a, b), max(a, b))] = float(w)
    node_ids = set(nodes or [])
    for a, b in weights:
        node_ids.update((a, b))
    if loops:
        node_ids.update(loops)
    return UndirectedView(weight_attr="length_m", node_ids=tuple(sorted(node_ids)),
                          weights=weights, loops=dict(loops or {}))


def two_k4_view() -> UndirectedView:
    """Two K4 cliques {0..3} and {4..7} joined by the bridge 3-4."""
    edges = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    edges += [(a + 4, b + 4) for a in range(4) for b in range(a + 1, 4)]
    edges.append((3, 4))
    return unit_view(edges)


def grid_view(side: int) -> UndirectedView:
    """side x side unit-weight grid graph, nodes numbered row-major."""
    edges = []
    for r in range(side):
        for c in range(side):
            u = r * side + c
            if c + 1 < side:
                edges.append((u, u + 1))
            if r + 1 < side:
                edges.append((u, u + side))
    return unit_view(edges)


def random_undirected(rng: random.Random, n_max: int = 50,
                      weight_pool=(1.0, 2.0, 3.0, 4.0, 5.0)) -> UndirectedView:
    """Random simple undirected graph with exact (integer-valued) weights."""
    n = rng.randint(2, n_max)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    m = rng.randint(1, min(len(pairs), 3 * n))
    chosen = rng.sample(pairs, m)
    return unit_view([(a, b, rng.choice(weight_pool)) for a, b in chosen],
                     nodes=range(n))


def write_geojson(path: Path, features: list[dict]) -> Path:
    path.write_text(json.dumps({"type": "FeatureCollection", "features": features}))
    return path


P3_OSM = """<?xml version="1.0" encoding="UTF-8"?>
<osm>
 <node id="1" lat="32.8800" lon="-117.2340"/>
 <node id="2" lat="32.8809" lon="-117.2340"/>
 <node id="3" lat="32.8818" lon="-117.2340"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><nd ref="3"/>
  <tag k="highway" v="footway"/></way>
</osm>
"""


def corpus_files(tmp_path: Path) -> dict[str, Path]:
    """Small self-consistent input corpus: streets, POIs, stops, a route
    polyline along the stops, and a timetable."""
    import math

    def east(m):
        return BASE_LON + m * DEG_PER_M_LAT / math.cos(math.radians(BASE_LAT))

    def north(m):
        return BASE_LAT + m * DEG_PER_M_LAT

    files = {"osm": tmp_path / "streets.osm.xml",
             "pois": tmp_path / "pois.geojson",
             "stops": tmp_path / "stops.geojson",
             "routes": tmp_path / "routes.geojson",
             "timetables": tmp_path / "timetables.json"}
    files["osm"].write_text(P3_OSM)
    files["pois"].write_text(json.dumps({"type": "FeatureCollection", "features": [
        point_feature(north(10), east(10), amenity="cafe", name="one"),
        point_feature(north(40), east(30), shop="books", name="two"),
        point_feature(north(5000), east(5000), amenity="park", name="far"),
    ]}))
    files["stops"].write_text(json.dumps({"type": "FeatureCollection", "features": [
        point_feature(north(0), east(60), stop_id="A", name="alpha"),
        point_feature(north(150), east(60), stop_id="B", name="beta"),
        point_feature(north(600), east(60), stop_id="C", name="gamma"),
    ]}))
    files["routes"].write_text(json.dumps({"type": "FeatureCollection", "features": [
        line_feature([(north(-50), east(60)), (north(700), east(60))], route_id="R1"),
    ]}))
    files["timetables"].write_text(json.dumps([
        {"route_id": "R1", "stops": [
            {"stop_id": "A", "arrival_min": 600},
            {"stop_id": "B", "arrival_min": 600},
            {"stop_id": "C", "arrival_min": 603},
        ]},
    ]))
    return files


@pytest.fixture
def corpus(tmp_path: Path) -> dict[str, Path]:
    return corpus_files(tmp_path)


def point_feature(lat: float, lon: float, **props) -> dict:
    return {"type": "Feature",
            "geometry": {"type": "Point", "coordinates": [lon, lat]},
            "properties": props}


def line_feature(coords: list[tuple[float, float]], **props) -> dict:
    # coords given as (lat, lon) pairs for readability; GeoJSON wants lon,lat
    return {"type": "Feature",
            "geometry": {"type": "LineString",
                         "coordinates": [[lon, lat] for lat, lon in coords]},
            "properties": props}
