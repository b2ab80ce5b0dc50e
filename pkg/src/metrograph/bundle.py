"""Versioned on-disk container for MultilayerGraph.

JSON with full-precision floats (Python repr round-trips IEEE doubles
exactly), nodes and edges in sorted order so identical graphs serialize to
identical bytes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import BundleVersionError, ParseError
from .model import (
    EdgeKind,
    GeoPoint,
    LayerId,
    MultilayerGraph,
    NetNode,
    NodeKind,
)

FORMAT_NAME = "metrograph-bundle"
FORMAT_VERSION = 1


def bundle_dict(g: MultilayerGraph) -> dict:
    nodes = []
    for nid in g.node_ids():
        n = g.node(nid)
        nodes.append([n.id, n.point.lat, n.point.lon, n.layer.value, n.kind.value,
                      {k: n.tags[k] for k in sorted(n.tags)}])
    edges = []
    for e in sorted(g.edges(), key=lambda e: (e.u, e.v, e.key)):
        edges.append([e.u, e.v, e.key, e.layer.value, e.kind.value, e.length_m,
                      e.speed_mps, e.travel_time_s,
                      {k: e.tags[k] for k in sorted(e.tags)}])
    core = None
    if g.core_center is not None:
        core = {"center": [g.core_center.lat, g.core_center.lon],
                "radius_m": g.core_radius_m}
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "counts": {"nodes": g.node_count, "edges": g.edge_count},
        "layer_nodes": {l.value: g.layer_node_count(l) for l in LayerId},
        "layer_edges": {l.value: g.layer_edge_count(l) for l in LayerId},
        "core": core,
        "buffer_node_ids": sorted(g.buffer_ids),
        "nodes": nodes,
        "edges": edges,
    }


def save_bundle(g: MultilayerGraph, path: str | Path) -> None:
    path = Path(path)
    text = json.dumps(bundle_dict(g), sort_keys=True, separators=(",", ":"))
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text + "\n", encoding="utf-8")
    os.replace(tmp, path)


def load_bundle(path: str | Path) -> MultilayerGraph:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: invalid bundle JSON: {exc}") from None
    if not isinstance(data, dict) or data.get("format") != FORMAT_NAME:
        raise ParseError(f"{path}: not a {FORMAT_NAME} file")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleVersionError(
            f"{path}: bundle format version {version!r}, expected {FORMAT_VERSION}")
    g = MultilayerGraph()
    try:
        for nid, lat, lon, layer, kind, tags in data["nodes"]:
            g.add_node(NetNode(int(nid), GeoPoint(float(lat), float(lon)),
                               LayerId(layer), NodeKind(kind), dict(tags)))
        for u, v, key, layer, kind, length, speed, time, tags in data["edges"]:
            g.add_edge(int(u), int(v), key=int(key), layer=LayerId(layer),
                       kind=EdgeKind(kind), length_m=float(length),
                       speed_mps=None if speed is None else float(speed),
                       travel_time_s=None if time is None else float(time),
                       tags=dict(tags))
        counts = data.get("counts", {})
        if (counts.get("nodes") != g.node_count
                or counts.get("edges") != g.edge_count):
            raise ParseError(f"{path}: header counts disagree with tables")
        core = data.get("core")
        if core is not None:
            g.core_center = GeoPoint(float(core["center"][0]), float(core["center"][1]))
            g.core_radius_m = float(core["radius_m"])
        g.buffer_ids = frozenset(int(i) for i in data.get("buffer_node_ids", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed bundle: {exc}") from None
    return g
