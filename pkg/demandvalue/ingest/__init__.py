"""Trip-record ingestion: CSV adapters, hourly binning and panel building."""

from demandvalue.ingest.binning import (
    TAIL_SOURCE,
    bin_demand,
    build_panel,
    build_zone_panels,
    panel_summary,
    split_windows,
    top_k_with_tail,
)
from demandvalue.ingest.loader import (
    SCHEMAS,
    LoadedTrips,
    LoadReport,
    SchemaAdapter,
    TripRecord,
    get_schema,
    load_trips,
)

__all__ = [
    "SCHEMAS",
    "TAIL_SOURCE",
    "LoadReport",
    "LoadedTrips",
    "SchemaAdapter",
    "TripRecord",
    "bin_demand",
    "build_panel",
    "build_zone_panels",
    "get_schema",
    "load_trips",
    "panel_summary",
    "split_windows",
    "top_k_with_tail",
]
