"""Command-line front end.

Subcommands: build, centrality, communities, route, link, stats,
walkability, merge, bus-graph. All outputs land in --out-dir with fixed
names and are byte-identical across reruns for the same inputs and seed.

Exit codes: 0 success, 1 analysis error, 2 input/config error,
3 bundle format-version error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import bundle as bundle_io
from . import exports
from .centrality import betweenness, closeness, degree_centrality, edge_centrality
from .communities import louvain
from .errors import (
    AnalysisError,
    BundleVersionError,
    ConfigError,
    InputError,
    MetrographError,
)
from .ingest import (
    DEFAULT_SPEEDS,
    PROFILES,
    assign_speeds_and_times,
    parse_osm_xml,
    parse_pois_geojson,
    parse_routes_geojson,
    parse_stops_geojson,
    parse_timetables_json,
)
from .model import (
    GeoPoint,
    LayerId,
    MultilayerGraph,
    induced_subgraph_by_radius,
    undirected_min_view,
)
from .multilayer import (
    AreaFilter,
    add_poi_nodes,
    add_stop_nodes,
    add_transit_route_edges,
    bus_time_graph,
    link_pois_to_stops,
    merge_nearby_stops,
    merge_walk_priority,
    network_stats,
    walkability_score,
)
from .routing import NoPath, Objective, compare_routes, nearest_node, shortest_path

LOCK_NAME = ".metrograph.lock"
_WEIGHT_ATTRS = {"length": "length_m", "time": "travel_time_s"}


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _parse_point(text: str) -> GeoPoint:
    try:
        lat_s, lon_s = text.split(",")
        return GeoPoint(float(lat_s), float(lon_s))
    except ValueError as exc:
        raise ConfigError(f"expected 'lat,lon', got {text!r}: {exc}") from None


def _parse_area(args) -> AreaFilter | None:
    if getattr(args, "area", None):
        try:
            lat1, lon1, lat2, lon2 = (float(x) for x in args.area.split(","))
            return AreaFilter.from_bbox(GeoPoint(lat1, lon1), GeoPoint(lat2, lon2))
        except ValueError as exc:
            raise ConfigError(
                f"expected --area 'lat1,lon1,lat2,lon2', got {args.area!r}: {exc}"
            ) from None
    if getattr(args, "area_polygon", None):
        ring = [_parse_point(p) for p in args.area_polygon.split()]
        return AreaFilter.from_polygon(ring)
    return None


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"input file not found: {path}")
    return p


class _OutDir:
    """Output directory with an advisory lock for the command's duration."""

    def __init__(self, path: str):
        self.dir = Path(path)
        self.lock = self.dir / LOCK_NAME

    def __enter__(self) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self.lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise InputError(
                f"output directory {self.dir} is locked by another invocation "
                f"(remove {self.lock} if stale)") from None
        os.close(fd)
        return self.dir

    def __exit__(self, *exc):
        try:
            os.unlink(self.lock)
        except FileNotFoundError:  # pragma: no cover
            pass
        return False


def _load_bundle_arg(args) -> MultilayerGraph:
    return bundle_io.load_bundle(_require_file(args.bundle))


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if value is not None and not value > 0.0:
            raise ConfigError(f"--{name.replace('_', '-')} must be > 0, got {value}")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    profile = PROFILES[args.profile]
    speeds = DEFAULT_SPEEDS[args.profile]
    osm_path = _require_file(args.osm_xml)
    poi_doc = _require_file(args.pois).read_bytes() if args.pois else None
    stop_doc = _require_file(args.stops).read_bytes() if args.stops else None
    route_doc = _require_file(args.routes).read_bytes() if args.routes else None
    _check_positive(radius_m=args.radius_m, snap_tolerance_m=args.snap_tolerance_m)
    if args.buffer_m < 0:
        raise ConfigError(f"--buffer-m must be >= 0, got {args.buffer_m}")
    center = _parse_point(args.center) if args.center else None
    if (center is None) != (args.radius_m is None):
        raise ConfigError("--center and --radius-m go together")

    g = parse_osm_xml(osm_path.read_bytes(), profile)
    assign_speeds_and_times(g, speeds)

    stops = []
    stop_node_ids: dict[str, int] = {}
    if poi_doc is not None:
        parsed = parse_pois_geojson(poi_doc)
        if parsed.skipped:
            _warn(f"{args.pois}: skipped {parsed.skipped} non-Point feature(s)")
        add_poi_nodes(g, parsed.records)
    if stop_doc is not None:
        parsed = parse_stops_geojson(stop_doc)
        if parsed.skipped:
            _warn(f"{args.stops}: skipped {parsed.skipped} non-Point feature(s)")
        stops = list(parsed.records)
        stop_node_ids = add_stop_nodes(g, stops)
    if route_doc is not None:
        if not stops:
            raise ConfigError("--routes needs --stops to snap against")
        parsed = parse_routes_geojson(route_doc)
        if parsed.skipped:
            _warn(f"{args.routes}: skipped {parsed.skipped} unsupported feature(s)")
        ordered_ids = [stop_node_ids[s.stop_id] for s in stops]
        add_transit_route_edges(g, ordered_ids, stops, parsed.records,
                                args.snap_tolerance_m)

    if center is not None:
        g = induced_subgraph_by_radius(g, center, args.radius_m, args.buffer_m)
        if g.node_count == 0:
            _warn("radius window excludes every node; writing an empty bundle")

    g.freeze()
    with _OutDir(args.out_dir) as out:
        bundle_io.save_bundle(g, out / "graph.json")
    for layer in LayerId:
        n, m = g.layer_node_count(layer), g.layer_edge_count(layer)
        if n or m:
            print(f"layer {layer.value}: {n} nodes, {m} edges")
    print(f"total: {g.node_count} nodes, {g.edge_count} edges")
    return 0


def cmd_centrality(args) -> int:
    g = _load_bundle_arg(args)
    weight_attr = _WEIGHT_ATTRS[args.weight]
    core = set(g.core_node_ids()) if args.core_only else None
    with _OutDir(args.out_dir) as out:
        if args.invert:
            if args.metric == "degree":
                raise ConfigError("degree centrality has no edge projection")
            method = args.edge_method.replace("-", "_")
            m = edge_centrality(g, args.metric, weight_attr, method=method,
                                normalized=args.normalize)
            if core is not None:  # keep edges fully inside the core window
                m = replace(m,
                            values={p: v for p, v in m.values.items()
                                    if p[0] in core and p[1] in core},
                            midpoints={p: v for p, v in m.midpoints.items()
                                       if p[0] in core and p[1] in core})
            exports.write_json(out / "centrality_edges.geojson",
                               exports.edge_heatmap_geojson(g, m))
        else:
            if args.metric == "degree":
                nm = degree_centrality(g)
            else:
                view = undirected_min_view(g, weight_attr)
                nm = (betweenness(view, normalized=args.normalize)
                      if args.metric == "betweenness" else closeness(view))
            if core is not None:
                nm = replace(nm, values={n: v for n, v in nm.values.items()
                                         if n in core})
            exports.write_text_atomic(out / "centrality_nodes.csv",
                                      exports.node_centrality_csv(g, nm))
    return 0


def cmd_communities(args) -> int:
    g = _load_bundle_arg(args)
    gammas = args.gamma if args.gamma else [0.01, 0.1, 1.0]
    _check_positive(gamma=min(gammas))
    layers = [LayerId(l) for l in args.layer] if args.layer else None
    view = undirected_min_view(g, _WEIGHT_ATTRS[args.weight], layers=layers)
    sweep = [(gamma, louvain(view, gamma=gamma, seed=args.seed)) for gamma in gammas]
    with _OutDir(args.out_dir) as out:
        for gamma, assignment in sweep:
            name = f"communities_gamma_{gamma:g}.geojson"
            exports.write_json(out / name, exports.communities_geojson(g, assignment))
            print(f"gamma {gamma:g}: {assignment.community_count} communities, "
                  f"Q={assignment.modularity:.6f}")
    return 0


def cmd_route(args) -> int:
    g = _load_bundle_arg(args)
    layer = LayerId(args.layer)
    src = nearest_node(g, _parse_point(args.src), layer)
    dst = nearest_node(g, _parse_point(args.dst), layer)
    with _OutDir(args.out_dir) as out:
        if args.objective == "compare":
            result = compare_routes(g, src, dst)
            if isinstance(result, NoPath):
                raise AnalysisError(
                    f"no path from {src} to {dst}; search reached "
                    f"{result.reached_count} node(s)")
            doc = exports.comparison_geojson(g, result)
        else:
            objective = (Objective.distance() if args.objective == "distance"
                         else Objective.time())
            route = shortest_path(g, src, dst, objective)
            if isinstance(route, NoPath):
                raise AnalysisError(
                    f"no path from {src} to {dst}; search reached "
                    f"{route.reached_count} node(s)")
            doc = exports.feature_collection(
                [exports.route_geojson(g, route, args.objective)])
        exports.write_json(out / "route.geojson", doc)
    return 0


def cmd_link(args) -> int:
    g = _load_bundle_arg(args)
    _check_positive(link_radius_m=args.link_radius_m)
    edges = link_pois_to_stops(g, args.link_radius_m)
    g.freeze()
    with _OutDir(args.out_dir) as out:
        bundle_io.save_bundle(g, out / "graph_linked.json")
        exports.write_json(out / "links.geojson", exports.links_geojson(g))
    print(f"linked {len(edges)} POIs to stops within {args.link_radius_m:g} m")
    return 0


def cmd_stats(args) -> int:
    g = _load_bundle_arg(args)
    area = _parse_area(args)
    report = network_stats(g, area)
    with _OutDir(args.out_dir) as out:
        exports.write_json(out / "stats.json", report.to_json_dict())
    print(f"{report.connected_poi_count}/{report.poi_count} POIs connected "
          f"({report.connected_percentage}%)")
    return 0


def cmd_walkability(args) -> int:
    g = _load_bundle_arg(args)
    area = _parse_area(args)
    if area is None:
        raise ConfigError("walkability needs --area or --area-polygon")
    weight_attr = _WEIGHT_ATTRS[args.weight]
    c_map = edge_centrality(g, "closeness", weight_attr, method="inversion")
    b_map = edge_centrality(g, "betweenness", weight_attr, method="inversion",
                            normalized=True)
    score = walkability_score(c_map, b_map, area)
    payload = {
        "walkability_score": "Infinity" if math.isinf(score) else score,
        "edges_in_area": sum(1 for p in c_map.values
                             if area.contains(c_map.midpoints[p])),
        "metric_weight": args.weight,
    }
    with _OutDir(args.out_dir) as out:
        exports.write_json(out / "walkability.json", payload)
    print(f"walkability: {payload['walkability_score']}")
    return 0


def cmd_merge(args) -> int:
    drive = bundle_io.load_bundle(_require_file(args.drive))
    walk = bundle_io.load_bundle(_require_file(args.walk))
    merged = merge_walk_priority(drive, walk)
    merged.freeze()
    with _OutDir(args.out_dir) as out:
        bundle_io.save_bundle(merged, out / "graph_merged.json")
    print(f"merged: {merged.node_count} nodes, {merged.edge_count} edges")
    return 0


def cmd_bus_graph(args) -> int:
    stops_doc = _require_file(args.stops).read_bytes()
    tt_doc = _require_file(args.timetables).read_bytes()
    _check_positive(transfer_threshold_m=args.transfer_threshold_m,
                    walk_speed_mps=args.walk_speed_mps)
    parsed = parse_stops_geojson(stops_doc)
    if parsed.skipped:
        _warn(f"{args.stops}: skipped {parsed.skipped} non-Point feature(s)")
    tables = parse_timetables_json(tt_doc)
    g = bus_time_graph(tables, parsed.records)
    transfers = merge_nearby_stops(g, args.transfer_threshold_m, args.walk_speed_mps)
    g.freeze()
    with _OutDir(args.out_dir) as out:
        bundle_io.save_bundle(g, out / "graph_transit.json")
    print(f"bus graph: {g.node_count} stops, {g.edge_count} edges "
          f"({len(transfers) // 2} transfer pairs)")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metrograph",
        description="Multilayer urban transport graph toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("build", help="parse inputs into a graph bundle")
    common(p)
    p.add_argument("--osm-xml", required=True)
    p.add_argument("--profile", choices=sorted(PROFILES), default="walk")
    p.add_argument("--pois")
    p.add_argument("--stops")
    p.add_argument("--routes")
    p.add_argument("--center", help="window center as 'lat,lon'")
    p.add_argument("--radius-m", type=float)
    p.add_argument("--buffer-m", type=float, default=0.0)
    p.add_argument("--snap-tolerance-m", type=float, default=50.0)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("centrality", help="node tables or edge heatmaps")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--metric", choices=["closeness", "betweenness", "degree"],
                   required=True)
    p.add_argument("--weight", choices=sorted(_WEIGHT_ATTRS), default="length")
    p.add_argument("--invert", action="store_true",
                   help="project onto edges and emit a GeoJSON heatmap")
    p.add_argument("--edge-method", choices=["inversion", "endpoint-mean"],
                   default="inversion")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--core-only", action="store_true",
                   help="drop buffer-zone nodes from the output "
                        "(edge-effect mitigation)")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("communities", help="Louvain sweep over resolutions")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--gamma", type=float, action="append",
                   help="repeatable; defaults to 0.01 0.1 1")
    p.add_argument("--weight", choices=sorted(_WEIGHT_ATTRS), default="time")
    p.add_argument("--layer", action="append",
                   choices=[l.value for l in LayerId])
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("route", help="shortest path between two coordinates")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--src", required=True, help="'lat,lon'")
    p.add_argument("--dst", required=True, help="'lat,lon'")
    p.add_argument("--layer", choices=[l.value for l in LayerId], default="walk")
    p.add_argument("--objective", choices=["distance", "time", "compare"],
                   default="compare")
    p.set_defaults(func=cmd_route)

    p = sub.add_parser("link", help="join POIs to their nearest stop")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--link-radius-m", type=float, default=500.0)
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("stats", help="multilayer summary report")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--area", help="bbox 'lat1,lon1,lat2,lon2'")
    p.add_argument("--area-polygon", help="ring: 'lat,lon lat,lon ...'")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("walkability", help="area walkability score")
    common(p)
    p.add_argument("--bundle", required=True)
    p.add_argument("--area", help="bbox 'lat1,lon1,lat2,lon2'")
    p.add_argument("--area-polygon", help="ring: 'lat,lon lat,lon ...'")
    p.add_argument("--weight", choices=sorted(_WEIGHT_ATTRS), default="length")
    p.set_defaults(func=cmd_walkability)

    p = sub.add_parser("merge", help="walk-priority union of two layers")
    common(p)
    p.add_argument("--drive", required=True, help="drive-layer bundle")
    p.add_argument("--walk", required=True, help="walk-layer bundle")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("bus-graph", help="transit graph from timetables")
    common(p)
    p.add_argument("--stops", required=True)
    p.add_argument("--timetables", required=True)
    p.add_argument("--transfer-threshold-m", type=float, default=200.0)
    p.add_argument("--walk-speed-mps", type=float, default=1.4)
    p.set_defaults(func=cmd_bus_graph)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BundleVersionError as exc:
        print(f"error: bundle-version: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return 2
    except MetrographError as exc:
        print(f"error: analysis: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
