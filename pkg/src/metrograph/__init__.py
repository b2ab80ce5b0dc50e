"""metrograph: multilayer urban transport graphs.

Builds drive/walk/bike/transit/POI graph layers from OSM-XML and GeoJSON
files and analyzes them: objective-pluggable shortest paths, node and edge
centrality heatmaps, resolution-parameterized Louvain communities,
POI-to-transit accessibility statistics, and an area walkability score.
"""

from .centrality import (
    EdgeCentralityMap,
    NodeCentralityMap,
    betweenness,
    closeness,
    degree_centrality,
    edge_centrality,
    high_centrality_nodes,
    line_graph,
)
from .communities import CommunityAssignment, louvain, modularity
from .errors import (
    AnalysisError,
    BundleVersionError,
    ConfigError,
    EmptyLayerError,
    GraphError,
    InputError,
    MetrographError,
    MissingWeightError,
    NegativeWeightError,
    ParseError,
    UndefinedModularityError,
    UndefinedWalkabilityError,
)
from .ingest import (
    BIKE_PROFILE,
    DEFAULT_BIKE_SPEEDS,
    DEFAULT_DRIVE_SPEEDS,
    DEFAULT_WALK_SPEEDS,
    DRIVE_PROFILE,
    HighwayProfile,
    PoiRecord,
    RoutePolyline,
    SpeedTable,
    StopRecord,
    WALK_PROFILE,
    assign_speeds_and_times,
    parse_osm_xml,
    parse_pois_geojson,
    parse_routes_geojson,
    parse_stops_geojson,
    parse_timetables_json,
)
from .model import (
    EARTH_RADIUS_M,
    EdgeKind,
    GeoPoint,
    LayerId,
    MultilayerGraph,
    NetEdge,
    NetNode,
    NodeKind,
    UndirectedView,
    great_circle_midpoint,
    haversine_m,
    induced_subgraph_by_radius,
    undirected_min_view,
)
from .multilayer import (
    AccessibilityReport,
    AreaFilter,
    StopTimetable,
    add_poi_nodes,
    add_stop_nodes,
    add_transit_route_edges,
    assemble_report,
    bus_time_graph,
    link_pois_to_stops,
    merge_nearby_stops,
    merge_walk_priority,
    nearest_stop_links,
    network_stats,
    transit_route_edges,
    walkability_score,
)
from .routing import (
    NoPath,
    Objective,
    RouteComparison,
    RouteResult,
    compare_routes,
    nearest_node,
    shortest_path,
)

__version__ = "0.1.0"
