"""Deterministic serialization of analysis results.

Analysis outputs (GeoJSON, report JSON, CSV) carry floats at 9 significant
digits; features are emitted in sorted key order so a rerun produces
byte-identical files. Writes are temp-file-then-rename.
"""

from __future__ import annotations

import json
import math
import os
from pathlib import Path

from .centrality import EdgeCentralityMap, NodeCentralityMap
from .communities import CommunityAssignment
from .errors import ParseError
from .model import (
    EdgeKind,
    GeoPoint,
    LayerId,
    MultilayerGraph,
    NetNode,
    NodeKind,
)
from .routing import RouteComparison, RouteResult


def round9(x: float) -> float:
    """Collapse a float to 9 significant digits (exports only)."""
    if not math.isfinite(x):
        return x
    return float(f"{x:.9g}")


def _clean(value):
    if isinstance(value, float):
        return round9(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def write_text_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_json(path: str | Path, obj) -> None:
    cleaned = _clean(obj)
    write_text_atomic(path, json.dumps(cleaned, sort_keys=True,
                                       separators=(",", ": "), indent=1) + "\n")


def _coords(p: GeoPoint) -> list[float]:
    return [round9(p.lon), round9(p.lat)]


def _feature(geometry: dict, properties: dict) -> dict:
    return {"type": "Feature", "geometry": geometry, "properties": properties}


def feature_collection(features: list[dict]) -> dict:
    return {"type": "FeatureCollection", "features": features}


_collection = feature_collection


# ---------------------------------------------------------------------------
# heatmaps, communities, routes, links
# ---------------------------------------------------------------------------

def edge_heatmap_geojson(g: MultilayerGraph, m: EdgeCentralityMap) -> dict:
    features = []
    for pair in sorted(m.values):
        u, v = pair
        geom = {"type": "LineString",
                "coordinates": [_coords(g.node(u).point), _coords(g.node(v).point)]}
        features.append(_feature(geom, {
            "u": u, "v": v, "value": round9(m.values[pair]),
            "metric": m.metric, "provenance": m.provenance,
            "normalized": m.normalized,
        }))
    return _collection(features)


def node_centrality_csv(g: MultilayerGraph, m: NodeCentralityMap) -> str:
    lines = ["node_id,lat,lon,value"]
    for nid in sorted(m.values):
        p = g.node(nid).point
        lines.append(f"{nid},{round9(p.lat)!r},{round9(p.lon)!r},{round9(m.values[nid])!r}")
    return "\n".join(lines) + "\n"


def communities_geojson(g: MultilayerGraph, assignment: CommunityAssignment) -> dict:
    features = []
    for nid in sorted(assignment.communities):
        geom = {"type": "Point", "coordinates": _coords(g.node(nid).point)}
        features.append(_feature(geom, {
            "node_id": nid, "community": assignment.communities[nid],
        }))
    return _collection(features)


def route_geojson(g: MultilayerGraph, route: RouteResult, objective: str,
                  extra: dict | None = None) -> dict:
    coords = [_coords(g.node(nid).point) for nid in route.node_ids]
    geom = {"type": "LineString", "coordinates": coords}
    props = {
        "objective": objective,
        "cost": round9(route.cost),
        "total_length_m": round9(route.total_length_m),
        "total_travel_time_s": None if route.total_travel_time_s is None
        else round9(route.total_travel_time_s),
        "node_ids": list(route.node_ids),
    }
    if extra:
        props.update(extra)
    return _feature(geom, props)


def comparison_geojson(g: MultilayerGraph, cmp: RouteComparison) -> dict:
    overlap = round9(cmp.overlap_fraction)
    return _collection([
        route_geojson(g, cmp.by_distance, "distance", {"overlap_fraction": overlap}),
        route_geojson(g, cmp.by_time, "time", {"overlap_fraction": overlap}),
    ])


def links_geojson(g: MultilayerGraph) -> dict:
    features = []
    for e in sorted(g.edges(), key=lambda e: (e.u, e.v, e.key)):
        if e.kind is not EdgeKind.INTERLAYER:
            continue
        geom = {"type": "LineString",
                "coordinates": [_coords(g.node(e.u).point), _coords(g.node(e.v).point)]}
        features.append(_feature(geom, {
            "poi": e.u, "stop": e.v, "length_m": round9(e.length_m),
        }))
    return _collection(features)


# ---------------------------------------------------------------------------
# whole-graph GeoJSON round trip
# ---------------------------------------------------------------------------

def graph_geojson(g: MultilayerGraph) -> dict:
    """Layer-tagged GeoJSON of the whole graph: nodes as Points, edges as
    LineStrings with their attributes. Parses back via parse_graph_geojson.

    Unlike analysis outputs this is a serialization format, so edge
    attributes keep full float precision and round-trip exactly.
    """
    features = []
    for nid in g.node_ids():
        n = g.node(nid)
        features.append(_feature(
            {"type": "Point", "coordinates": [n.point.lon, n.point.lat]},
            {"feature": "node", "id": n.id, "layer": n.layer.value,
             "kind": n.kind.value, "tags": {k: n.tags[k] for k in sorted(n.tags)}}))
    for e in sorted(g.edges(), key=lambda e: (e.u, e.v, e.key)):
        features.append(_feature(
            {"type": "LineString",
             "coordinates": [[g.node(e.u).point.lon, g.node(e.u).point.lat],
                             [g.node(e.v).point.lon, g.node(e.v).point.lat]]},
            {"feature": "edge", "u": e.u, "v": e.v, "key": e.key,
             "layer": e.layer.value, "kind": e.kind.value,
             "length_m": e.length_m,
             "speed_mps": e.speed_mps,
             "travel_time_s": e.travel_time_s,
             "tags": {k: e.tags[k] for k in sorted(e.tags)}}))
    return _collection(features)


def parse_graph_geojson(document: bytes) -> MultilayerGraph:
    try:
        data = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid graph GeoJSON: {exc}") from None
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise ParseError("invalid graph GeoJSON: expected a FeatureCollection")
    g = MultilayerGraph()
    try:
        for feature in data["features"]:
            props = feature["properties"]
            if props["feature"] == "node":
                lon, lat = feature["geometry"]["coordinates"]
                g.add_node(NetNode(int(props["id"]), GeoPoint(float(lat), float(lon)),
                                   LayerId(props["layer"]), NodeKind(props["kind"]),
                                   dict(props.get("tags", {}))))
        for feature in data["features"]:
            props = feature["properties"]
            if props["feature"] == "edge":
                speed = props.get("speed_mps")
                time = props.get("travel_time_s")
                g.add_edge(int(props["u"]), int(props["v"]), key=int(props["key"]),
                           layer=LayerId(props["layer"]), kind=EdgeKind(props["kind"]),
                           length_m=float(props["length_m"]),
                           speed_mps=None if speed is None else float(speed),
                           travel_time_s=None if time is None else float(time),
                           tags=dict(props.get("tags", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed graph GeoJSON: {exc}") from None
    return g
