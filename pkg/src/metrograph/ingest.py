"""File ingestion: OSM-XML street layers, GeoJSON POI/stop/route files,
timetable JSON, and speed/travel-time annotation.

All parsers are pure functions over byte buffers and either return a value
or raise :class:`ParseError`; they never leak raw exceptions on arbitrary
input. Inputs must already be WGS84 (GeoJSON coordinates in lon, lat order).
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .errors import ConfigError, ParseError
from .model import (
    EdgeKind,
    GeoPoint,
    LayerId,
    MultilayerGraph,
    NetNode,
    NodeKind,
    haversine_m,
)

# ---------------------------------------------------------------------------
# profiles and speed tables
# ---------------------------------------------------------------------------

_DRIVE_CLASSES = (
    "motorway", "trunk", "primary", "secondary", "tertiary",
    "motorway_link", "trunk_link", "primary_link", "secondary_link",
    "tertiary_link", "unclassified", "residential", "service",
)


@dataclass(frozen=True)
class HighwayProfile:
    """Which OSM ways a travel mode may use; only drive respects oneway."""

    profile_id: str
    highway_whitelist: frozenset[str]
    respect_oneway: bool
    layer: LayerId

    def __post_init__(self):
        if not self.highway_whitelist:
            raise ConfigError(f"profile {self.profile_id}: empty highway whitelist")


DRIVE_PROFILE = HighwayProfile(
    "drive", frozenset(_DRIVE_CLASSES), respect_oneway=True, layer=LayerId.DRIVE)

WALK_PROFILE = HighwayProfile(
    "walk",
    frozenset((
        "footway", "path", "pedestrian", "steps", "living_street", "track",
    ) + tuple(c for c in _DRIVE_CLASSES if c not in ("motorway", "motorway_link"))),
    respect_oneway=False, layer=LayerId.WALK)

BIKE_PROFILE = HighwayProfile(
    "bike",
    frozenset(("cycleway", "path", "residential", "tertiary", "secondary",
               "service", "track", "unclassified")),
    respect_oneway=False, layer=LayerId.BIKE)

PROFILES = {p.profile_id: p for p in (DRIVE_PROFILE, WALK_PROFILE, BIKE_PROFILE)}


@dataclass(frozen=True)
class SpeedTable:
    """Speed in m/s per highway tag, with a fallback default."""

    speeds: dict[str, float]
    default_mps: float

    def __post_init__(self):
        if not self.default_mps > 0.0:
            raise ConfigError(f"default speed {self.default_mps} must be > 0")
        for tag, s in self.speeds.items():
            if not s > 0.0:
                raise ConfigError(f"speed for highway={tag} must be > 0, got {s}")

    def speed_for(self, highway: str | None) -> float:
        if highway is None:
            return self.default_mps
        return self.speeds.get(highway, self.default_mps)


def _with_links(base: dict[str, float]) -> dict[str, float]:
    out = dict(base)
    for tag in ("motorway", "trunk", "primary", "secondary", "tertiary"):
        out[tag + "_link"] = base[tag]
    return out


# Drive speeds are a documented fixed table (km/h in comments); walking is
# uniform 1.4 m/s, cycling uniform 4.2 m/s.
DEFAULT_DRIVE_SPEEDS = SpeedTable(_with_links({
    "motorway": 29.1,     # 105 km/h
    "trunk": 25.0,        # 90
    "primary": 18.1,      # 65
    "secondary": 15.3,    # 55
    "tertiary": 13.9,     # 50
    "residential": 11.1,  # 40
    "service": 6.9,       # 25
}), default_mps=13.9)

WALK_SPEED_MPS = 1.4
DEFAULT_WALK_SPEEDS = SpeedTable({}, default_mps=WALK_SPEED_MPS)
DEFAULT_BIKE_SPEEDS = SpeedTable({}, default_mps=4.2)

DEFAULT_SPEEDS = {
    "drive": DEFAULT_DRIVE_SPEEDS,
    "walk": DEFAULT_WALK_SPEEDS,
    "bike": DEFAULT_BIKE_SPEEDS,
}


# ---------------------------------------------------------------------------
# OSM XML
# ---------------------------------------------------------------------------

def _byte_offset(document: bytes, line: int, column: int) -> int:
    lines = document.split(b"\n")
    if line - 1 >= len(lines):
        return len(document)
    return sum(len(l) + 1 for l in lines[: line - 1]) + column


_ONEWAY_TRUE = frozenset(("yes", "true", "1"))


def parse_osm_xml(document: bytes, profile: HighwayProfile) -> MultilayerGraph:
    """Build one street layer from an OSM XML document.

    Ways whose ``highway`` tag is in the profile whitelist become edge
    chains between consecutive referenced nodes; the drive profile honours
    ``oneway=yes``, all other ways are emitted in both directions. Nodes
    not referenced by any retained way are dropped. Only node/way/nd/tag
    elements are interpreted; relations are ignored.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(document, line, column)
        raise ParseError(f"malformed XML at byte {offset}: {exc}", offset=offset) from None
    except ValueError as exc:  # e.g. encoding declaration on str input
        raise ParseError(f"malformed XML: {exc}") from None

    points: dict[int, GeoPoint] = {}
    for el in root.iter("node"):
        try:
            nid = int(el.attrib["id"])
            point = GeoPoint(float(el.attrib["lat"]), float(el.attrib["lon"]))
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad OSM node element: {exc}") from None
        points[nid] = point

    g = MultilayerGraph()
    referenced: set[int] = set()

    def ensure_node(nid: int):
        if nid not in referenced:
            referenced.add(nid)
            g.add_node(NetNode(nid, points[nid], profile.layer, NodeKind.INTERSECTION))

    for way in root.iter("way"):
        way_id = way.attrib.get("id", "?")
        tags = {t.attrib.get("k", ""): t.attrib.get("v", "") for t in way.iter("tag")}
        highway = tags.get("highway")
        if highway is None or highway not in profile.highway_whitelist:
            continue
        refs = []
        for nd in way.iter("nd"):
            try:
                ref = int(nd.attrib["ref"])
            except (KeyError, ValueError) as exc:
                raise ParseError(f"way {way_id}: bad nd element: {exc}") from None
            if ref not in points:
                raise ParseError(f"way {way_id} references undeclared node {ref}")
            refs.append(ref)
        if len(refs) < 2:
            continue
        oneway = profile.respect_oneway and tags.get("oneway", "no") in _ONEWAY_TRUE
        edge_tags = {"highway": highway}
        for a, b in zip(refs, refs[1:]):
            ensure_node(a)
            ensure_node(b)
            length = haversine_m(points[a], points[b])
            g.add_edge(a, b, layer=profile.layer, kind=EdgeKind.STREET,
                       length_m=length, tags=dict(edge_tags))
            if not oneway:
                g.add_edge(b, a, layer=profile.layer, kind=EdgeKind.STREET,
                           length_m=length, tags=dict(edge_tags))
    return g


# ---------------------------------------------------------------------------
# GeoJSON
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoiRecord:
    point: GeoPoint
    category: str
    name: str


@dataclass(frozen=True)
class StopRecord:
    point: GeoPoint
    stop_id: str
    name: str


@dataclass(frozen=True)
class RoutePolyline:
    route_id: str
    points: tuple[GeoPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError(f"route {self.route_id}: polyline needs >= 2 points")


@dataclass(frozen=True)
class ParsedFeatures:
    """Parser output: accepted records plus a count of skipped geometries."""

    records: tuple
    skipped: int


_POI_CATEGORY_KEYS = ("amenity", "shop", "leisure", "tourism")


def _load_feature_collection(document: bytes) -> list:
    try:
        data = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid GeoJSON: {exc}") from None
    if not isinstance(data, dict) or data.get("type") != "FeatureCollection":
        raise ParseError("invalid GeoJSON: expected a FeatureCollection")
    features = data.get("features")
    if not isinstance(features, list):
        raise ParseError("invalid GeoJSON: FeatureCollection without feature list")
    return features


def _coord_point(coords, index: int) -> GeoPoint:
    if (not isinstance(coords, (list, tuple)) or len(coords) < 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool)
                       for c in coords[:2])):
        raise ParseError(f"feature {index}: malformed coordinates {coords!r}",
                         feature_index=index)
    lon, lat = float(coords[0]), float(coords[1])
    try:
        return GeoPoint(lat, lon)
    except ValueError as exc:
        raise ParseError(f"feature {index}: {exc}", feature_index=index) from None


def _feature_parts(feature, index: int) -> tuple[dict, dict]:
    if not isinstance(feature, dict):
        raise ParseError(f"feature {index}: not an object", feature_index=index)
    geom = feature.get("geometry")
    if not isinstance(geom, dict):
        raise ParseError(f"feature {index}: missing geometry", feature_index=index)
    props = feature.get("properties")
    return geom, props if isinstance(props, dict) else {}


def parse_pois_geojson(document: bytes) -> ParsedFeatures:
    """One PoiRecord per Point feature; other geometries are counted and skipped."""
    records: list[PoiRecord] = []
    skipped = 0
    for i, feature in enumerate(_load_feature_collection(document)):
        geom, props = _feature_parts(feature, i)
        if geom.get("type") != "Point":
            skipped += 1
            continue
        point = _coord_point(geom.get("coordinates"), i)
        category = "unknown"
        for k in _POI_CATEGORY_KEYS:
            val = props.get(k)
            if isinstance(val, str) and val:
                category = val
                break
        name = str(props.get("name", ""))
        records.append(PoiRecord(point, category, name))
    return ParsedFeatures(tuple(records), skipped)


def parse_stops_geojson(document: bytes) -> ParsedFeatures:
    records: list[StopRecord] = []
    seen: set[str] = set()
    skipped = 0
    for i, feature in enumerate(_load_feature_collection(document)):
        geom, props = _feature_parts(feature, i)
        if geom.get("type") != "Point":
            skipped += 1
            continue
        point = _coord_point(geom.get("coordinates"), i)
        raw = props.get("stop_id", props.get("id", i))
        stop_id = str(raw)
        if stop_id in seen:
            raise ParseError(f"feature {i}: duplicate stop id {stop_id!r}",
                             feature_index=i)
        seen.add(stop_id)
        records.append(StopRecord(point, stop_id, str(props.get("name", ""))))
    return ParsedFeatures(tuple(records), skipped)


def parse_routes_geojson(document: bytes) -> ParsedFeatures:
    """LineStrings become one polyline each; MultiLineStrings split into
    parts that share the route id with the part index appended."""
    records: list[RoutePolyline] = []
    skipped = 0
    for i, feature in enumerate(_load_feature_collection(document)):
        geom, props = _feature_parts(feature, i)
        route_id = str(props.get("route_id", props.get("id", i)))
        gtype = geom.get("type")
        if gtype == "LineString":
            parts = [geom.get("coordinates")]
            ids = [route_id]
        elif gtype == "MultiLineString":
            coords = geom.get("coordinates")
            if not isinstance(coords, list):
                raise ParseError(f"feature {i}: malformed MultiLineString",
                                 feature_index=i)
            parts = coords
            ids = [f"{route_id}#{p}" for p in range(len(coords))]
        else:
            skipped += 1
            continue
        for part_id, part in zip(ids, parts):
            if not isinstance(part, list) or len(part) < 2:
                raise ParseError(
                    f"feature {i}: route {part_id} has fewer than 2 coordinates",
                    feature_index=i)
            pts = tuple(_coord_point(c, i) for c in part)
            records.append(RoutePolyline(part_id, pts))
    return ParsedFeatures(tuple(records), skipped)


# ---------------------------------------------------------------------------
# timetables
# ---------------------------------------------------------------------------

def parse_timetables_json(document: bytes) -> tuple:
    """Read bus timetables: a JSON array of
    ``{"route_id": str, "stops": [{"stop_id": str, "arrival_min": int}, ...]}``.

    Arrival times are whole minutes; list order is position along the route.
    """
    from .multilayer import StopTimetable

    try:
        data = json.loads(document)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid timetable JSON: {exc}") from None
    if not isinstance(data, list):
        raise ParseError("invalid timetable JSON: expected a list of routes")
    tables = []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or "route_id" not in entry:
            raise ParseError(f"timetable entry {i}: missing route_id")
        stops = entry.get("stops")
        if not isinstance(stops, list):
            raise ParseError(f"timetable entry {i}: missing stop list")
        seq = []
        for j, s in enumerate(stops):
            if (not isinstance(s, dict) or "stop_id" not in s
                    or not isinstance(s.get("arrival_min"), int)
                    or isinstance(s.get("arrival_min"), bool)):
                raise ParseError(
                    f"timetable entry {i} stop {j}: need stop_id and integer arrival_min")
            seq.append((str(s["stop_id"]), int(s["arrival_min"])))
        tables.append(StopTimetable(str(entry["route_id"]), tuple(seq)))
    return tuple(tables)


# ---------------------------------------------------------------------------
# speed / time annotation
# ---------------------------------------------------------------------------

def assign_speeds_and_times(g: MultilayerGraph, table: SpeedTable) -> MultilayerGraph:
    """Set speed_mps and travel_time_s on every street edge; idempotent.

    Speeds come from the table by highway tag, falling back to the table
    default. Transit edges keep their observed times untouched. SpeedTable
    rejects non-positive speeds at construction, so no street edge can be
    half-annotated.
    """
    for e in g.edges():
        if e.kind is not EdgeKind.STREET:
            continue
        speed = table.speed_for(e.tags.get("highway"))
        e.speed_mps = speed
        e.travel_time_s = e.length_m / speed
    return g
