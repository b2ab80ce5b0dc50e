from __future__ import annotations

import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from metrograph import (
    BIKE_PROFILE,
    ConfigError,
    DEFAULT_DRIVE_SPEEDS,
    DRIVE_PROFILE,
    MultilayerGraph,
    ParseError,
    SpeedTable,
    WALK_PROFILE,
    assign_speeds_and_times,
    parse_osm_xml,
    parse_pois_geojson,
    parse_routes_geojson,
    parse_stops_geojson,
    parse_timetables_json,
)
from metrograph.exports import graph_geojson, parse_graph_geojson
from conftest import point_feature, line_feature


def osm_doc(body: str) -> bytes:
    return f'<?xml version="1.0" encoding="UTF-8"?>\n<osm>\n{body}\n</osm>'.encode()

TWO_NODE_WAY = """
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <way id="10">
  <nd ref="1"/><nd ref="2"/>
  <tag k="highway" v="residential"/>{extra}
 </way>"""


def fc(features) -> bytes:
    return json.dumps({"type": "FeatureCollection", "features": features}).encode()


class TestOsmParser:
    def test_bidirectional_by_default(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        assert g.node_count == 2 and g.edge_count == 2
        assert {(e.u, e.v) for e in g.edges()} == {(1, 2), (2, 1)}

    def test_oneway_yes_single_direction(self):
        doc = osm_doc(TWO_NODE_WAY.format(extra='<tag k="oneway" v="yes"/>'))
        g = parse_osm_xml(doc, DRIVE_PROFILE)
        assert g.edge_count == 1
        assert [(e.u, e.v) for e in g.edges()] == [(1, 2)]

    def test_walk_profile_ignores_oneway(self):
        doc = osm_doc(TWO_NODE_WAY.format(extra='<tag k="oneway" v="yes"/>'))
        assert parse_osm_xml(doc, WALK_PROFILE).edge_count == 2

    def test_whitelist_filters_ways_and_drops_unreferenced_nodes(self):
        doc = osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><tag k="highway" v="footway"/></way>""")
        g = parse_osm_xml(doc, DRIVE_PROFILE)
        assert g.node_count == 0 and g.edge_count == 0

    def test_way_chain_emits_consecutive_segments(self):
        doc = osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <node id="3" lat="32.882" lon="-117.234"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><nd ref="3"/>
  <tag k="highway" v="residential"/></way>""")
        g = parse_osm_xml(doc, DRIVE_PROFILE)
        assert {(e.u, e.v) for e in g.edges()} == {(1, 2), (2, 1), (2, 3), (3, 2)}
        for e in g.edges():
            assert e.length_m == pytest.approx(111.19, abs=0.1)
            assert e.tags["highway"] == "residential"

    def test_edge_lengths_are_haversine(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        for e in g.edges():
            assert e.length_m == pytest.approx(111.1949, abs=1e-2)

    def test_undeclared_node_reference(self):
        doc = osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <way id="10"><nd ref="1"/><nd ref="99"/><tag k="highway" v="residential"/></way>""")
        with pytest.raises(ParseError, match="way 10.*node 99"):
            parse_osm_xml(doc, DRIVE_PROFILE)

    def test_malformed_xml_reports_byte_offset(self):
        doc = b"<osm><node id='1' lat='0' lon='0'/><way></osm>"
        with pytest.raises(ParseError, match="byte") as err:
            parse_osm_xml(doc, DRIVE_PROFILE)
        assert err.value.offset is not None
        assert 0 <= err.value.offset <= len(doc)

    def test_empty_document_ok(self):
        g = parse_osm_xml(b"<osm></osm>", WALK_PROFILE)
        assert g.node_count == 0

    def test_out_of_range_node_coordinates(self):
        doc = osm_doc('<node id="1" lat="95.0" lon="0"/>')
        with pytest.raises(ParseError):
            parse_osm_xml(doc, WALK_PROFILE)

    def test_profile_whitelists(self):
        assert "motorway" in DRIVE_PROFILE.highway_whitelist
        assert "motorway" not in WALK_PROFILE.highway_whitelist
        assert "trunk" in WALK_PROFILE.highway_whitelist
        assert "cycleway" in BIKE_PROFILE.highway_whitelist
        assert DRIVE_PROFILE.respect_oneway
        assert not WALK_PROFILE.respect_oneway

    def test_retained_edges_tagged_from_whitelist(self):
        doc = osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <node id="3" lat="32.882" lon="-117.234"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><tag k="highway" v="residential"/></way>
 <way id="11"><nd ref="2"/><nd ref="3"/><tag k="highway" v="footway"/></way>""")
        for profile in (DRIVE_PROFILE, WALK_PROFILE, BIKE_PROFILE):
            g = parse_osm_xml(doc, profile)
            for e in g.edges():
                assert e.tags["highway"] in profile.highway_whitelist

    @given(st.binary(max_size=400))
    @settings(max_examples=150, suppress_health_check=[HealthCheck.too_slow])
    def test_never_raises_anything_but_parse_error(self, blob):
        try:
            g = parse_osm_xml(blob, WALK_PROFILE)
            assert isinstance(g, MultilayerGraph)
        except ParseError:
            pass


class TestPoiParser:
    def test_point_with_amenity(self):
        parsed = parse_pois_geojson(fc([point_feature(32.9, -117.2, amenity="cafe")]))
        assert len(parsed.records) == 1 and parsed.skipped == 0
        poi = parsed.records[0]
        assert poi.category == "cafe"
        assert (poi.point.lat, poi.point.lon) == (32.9, -117.2)

    def test_non_point_geometry_skipped_with_count(self):
        doc = fc([point_feature(32.9, -117.2, amenity="cafe"),
                  line_feature([(32.9, -117.2), (32.91, -117.2)])])
        parsed = parse_pois_geojson(doc)
        assert len(parsed.records) == 1 and parsed.skipped == 1

    def test_empty_collection(self):
        parsed = parse_pois_geojson(fc([]))
        assert parsed.records == () and parsed.skipped == 0

    def test_category_priority_order(self):
        doc = fc([point_feature(1, 2, shop="bakery", tourism="museum")])
        assert parse_pois_geojson(doc).records[0].category == "bakery"

    def test_category_unknown_when_untagged(self):
        assert parse_pois_geojson(fc([point_feature(1, 2)])).records[0].category == "unknown"

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_pois_geojson(b"{not json")

    def test_not_a_feature_collection(self):
        with pytest.raises(ParseError):
            parse_pois_geojson(b'{"type": "Feature"}')

    def test_out_of_range_coordinates_name_feature(self):
        doc = fc([point_feature(1, 2), point_feature(95.0, 0.0)])
        with pytest.raises(ParseError, match="feature 1") as err:
            parse_pois_geojson(doc)
        assert err.value.feature_index == 1

    @given(st.binary(max_size=300))
    @settings(max_examples=100, suppress_health_check=[HealthCheck.too_slow])
    def test_fuzz_structured_errors_only(self, blob):
        try:
            parse_pois_geojson(blob)
        except ParseError:
            pass


class TestStopAndRouteParsers:
    def test_stops_basic(self):
        doc = fc([point_feature(32.9, -117.2, stop_id="S1", name="Main St")])
        stop = parse_stops_geojson(doc).records[0]
        assert stop.stop_id == "S1" and stop.name == "Main St"

    def test_duplicate_stop_ids_rejected(self):
        doc = fc([point_feature(1, 2, stop_id="S1"), point_feature(3, 4, stop_id="S1")])
        with pytest.raises(ParseError, match="duplicate stop id"):
            parse_stops_geojson(doc)

    def test_linestring_route(self):
        doc = fc([line_feature([(32.90, -117.20), (32.91, -117.20),
                                (32.92, -117.21), (32.93, -117.21)], route_id="R1")])
        parsed = parse_routes_geojson(doc)
        assert len(parsed.records) == 1
        route = parsed.records[0]
        assert route.route_id == "R1" and len(route.points) == 4

    def test_multilinestring_splits_with_part_suffix(self):
        doc = fc([{
            "type": "Feature",
            "geometry": {"type": "MultiLineString", "coordinates": [
                [[-117.2, 32.90], [-117.2, 32.91]],
                [[-117.3, 32.90], [-117.3, 32.91], [-117.3, 32.92]],
            ]},
            "properties": {"route_id": "R7"},
        }])
        parsed = parse_routes_geojson(doc)
        assert [r.route_id for r in parsed.records] == ["R7#0", "R7#1"]
        assert [len(r.points) for r in parsed.records] == [2, 3]

    def test_single_coordinate_linestring_rejected(self):
        doc = fc([{"type": "Feature",
                   "geometry": {"type": "LineString", "coordinates": [[-117.2, 32.9]]},
                   "properties": {"route_id": "R1"}}])
        with pytest.raises(ParseError, match="fewer than 2"):
            parse_routes_geojson(doc)

    def test_point_features_skipped_for_routes(self):
        doc = fc([point_feature(1, 2), line_feature([(1, 2), (3, 4)])])
        parsed = parse_routes_geojson(doc)
        assert len(parsed.records) == 1 and parsed.skipped == 1


class TestTimetableParser:
    def test_roundtrip(self):
        doc = json.dumps([{"route_id": "30", "stops": [
            {"stop_id": "A", "arrival_min": 600},
            {"stop_id": "B", "arrival_min": 603},
        ]}]).encode()
        tables = parse_timetables_json(doc)
        assert tables[0].route_id == "30"
        assert tables[0].arrivals == (("A", 600), ("B", 603))

    def test_requires_integer_minutes(self):
        doc = json.dumps([{"route_id": "30", "stops": [
            {"stop_id": "A", "arrival_min": 600.5}]}]).encode()
        with pytest.raises(ParseError):
            parse_timetables_json(doc)


class TestSpeedAssignment:
    def test_walk_footway_140m(self):
        g = parse_osm_xml(osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><tag k="highway" v="footway"/></way>"""),
                          WALK_PROFILE)
        for e in g.edges():
            e.length_m = 140.0  # pin the distance for exact arithmetic
        assign_speeds_and_times(g, SpeedTable({}, default_mps=1.4))
        for e in g.edges():
            assert e.speed_mps == 1.4
            assert e.travel_time_s == pytest.approx(100.0, rel=1e-12)

    def test_drive_default_residential_250m(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        for e in g.edges():
            e.length_m = 250.0
        assign_speeds_and_times(g, SpeedTable({}, default_mps=13.9))
        for e in g.edges():
            assert e.travel_time_s == pytest.approx(250.0 / 13.9, rel=1e-12)
            assert round(e.travel_time_s, 2) == 17.99

    def test_table_lookup_beats_default(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        assign_speeds_and_times(g, DEFAULT_DRIVE_SPEEDS)
        for e in g.edges():
            assert e.speed_mps == 11.1  # residential entry, not the 13.9 default

    def test_zero_length_zero_time(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        for e in g.edges():
            e.length_m = 0.0
        assign_speeds_and_times(g, DEFAULT_DRIVE_SPEEDS)
        assert all(e.travel_time_s == 0.0 for e in g.edges())

    def test_idempotent(self):
        g = parse_osm_xml(osm_doc(TWO_NODE_WAY.format(extra="")), DRIVE_PROFILE)
        assign_speeds_and_times(g, DEFAULT_DRIVE_SPEEDS)
        first = [(e.speed_mps, e.travel_time_s) for e in g.edges()]
        assign_speeds_and_times(g, DEFAULT_DRIVE_SPEEDS)
        assert [(e.speed_mps, e.travel_time_s) for e in g.edges()] == first

    def test_non_positive_speed_rejected_at_table_construction(self):
        with pytest.raises(ConfigError):
            SpeedTable({"residential": 0.0}, default_mps=13.9)
        with pytest.raises(ConfigError):
            SpeedTable({}, default_mps=-1.0)

    def test_link_classes_inherit_base_speeds(self):
        assert DEFAULT_DRIVE_SPEEDS.speed_for("motorway_link") == \
            DEFAULT_DRIVE_SPEEDS.speed_for("motorway")


class TestGraphGeoJsonRoundTrip:
    def test_counts_and_edge_attrs_survive(self):
        g = parse_osm_xml(osm_doc("""
 <node id="1" lat="32.880" lon="-117.234"/>
 <node id="2" lat="32.881" lon="-117.234"/>
 <node id="3" lat="32.882" lon="-117.235"/>
 <way id="10"><nd ref="1"/><nd ref="2"/><nd ref="3"/>
  <tag k="highway" v="residential"/></way>"""), DRIVE_PROFILE)
        assign_speeds_and_times(g, DEFAULT_DRIVE_SPEEDS)
        doc = json.dumps(graph_geojson(g)).encode()
        back = parse_graph_geojson(doc)
        assert back.node_count == g.node_count
        assert back.edge_count == g.edge_count
        originals = {e.id(): e for e in g.edges()}
        for e in back.edges():
            o = originals[e.id()]
            assert e.length_m == pytest.approx(o.length_m, rel=1e-9)
            assert e.speed_mps == pytest.approx(o.speed_mps, rel=1e-9)
            assert e.travel_time_s == pytest.approx(o.travel_time_s, rel=1e-9)
            assert (e.layer, e.kind, e.tags) == (o.layer, o.kind, o.tags)
