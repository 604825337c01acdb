"""
Trip-record CSV loading.

Schema adapters map a dataset's column names and timestamp format onto the
canonical ``start_time, source_id, zone_id`` frame. Rows with unusable fields
are dropped and counted per reason in a :class:`LoadReport`.
"""

from collections.abc import Iterator
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import pandas as pd

from demandvalue.errors import ConfigError, DataError
from demandvalue.infra.logging import get_logger

logger = get_logger(__name__)

CANONICAL_COLUMNS = ("start_time", "source_id", "zone_id")
SOURCE_COLUMNS = ("company", "driver")
DROP_REASONS = ("bad_timestamp", "missing_source", "missing_zone")


@dataclass(frozen=True)
class SchemaAdapter:
    """Column mapping for one trip-record dataset."""

    name: str
    timestamp_column: str
    timestamp_format: str
    zone_column: str
    source_columns: dict[str, str]

    def columns(self, source_column: str) -> dict[str, str]:
        """Raw column name -> canonical column name."""
        if source_column not in self.source_columns:
            raise ConfigError(
                f"Schema {self.name} has no {source_column} identifier",
                {"available": sorted(self.source_columns)},
            )
        return {
            self.timestamp_column: "start_time",
            self.source_columns[source_column]: "source_id",
            self.zone_column: "zone_id",
        }


SCHEMAS: dict[str, SchemaAdapter] = {
    "generic": SchemaAdapter(
        name="generic",
        timestamp_column="start_time",
        timestamp_format="ISO8601",
        zone_column="zone_id",
        source_columns={"company": "source_id", "driver": "source_id"},
    ),
    "chicago": SchemaAdapter(
        name="chicago",
        timestamp_column="Trip Start Timestamp",
        timestamp_format="%m/%d/%Y %I:%M:%S %p",
        zone_column="Pickup Community Area",
        source_columns={"company": "Company", "driver": "Taxi ID"},
    ),
    "nyc": SchemaAdapter(
        name="nyc",
        timestamp_column="pickup_datetime",
        timestamp_format="%Y-%m-%d %H:%M:%S",
        zone_column="PULocationID",
        source_columns={"company": "dispatching_base_num"},
    ),
}


def get_schema(name: str) -> SchemaAdapter:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown schema: {name}", {"available": sorted(SCHEMAS)}
        ) from None


@dataclass(frozen=True)
class TripRecord:
    """One ride: when it started, who reported it, where it was picked up."""

    start_time: datetime
    source_id: str
    zone_id: str


@dataclass
class LoadReport:
    """Accepted and dropped row counts for one file."""

    path: str
    schema: str
    rows_read: int = 0
    accepted: int = 0
    outside_window: int = 0
    dropped: dict[str, int] = field(default_factory=lambda: dict.fromkeys(DROP_REASONS, 0))

    @property
    def total_dropped(self) -> int:
        return sum(self.dropped.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "schema": self.schema,
            "rows_read": self.rows_read,
            "accepted": self.accepted,
            "outside_window": self.outside_window,
            "dropped": dict(self.dropped),
            "total_dropped": self.total_dropped,
        }


@dataclass
class LoadedTrips:
    """Accepted trips as a canonical frame plus the load report."""

    frame: pd.DataFrame
    report: LoadReport

    def __len__(self) -> int:
        return len(self.frame)

    def __iter__(self) -> Iterator[TripRecord]:
        for row in self.frame.itertuples(index=False):
            yield TripRecord(
                start_time=row.start_time.to_pydatetime(),
                source_id=row.source_id,
                zone_id=row.zone_id,
            )


def _blank(values: pd.Series) -> pd.Series:
    return values.isna() | (values.str.len() == 0)


def load_trips(
    path: str | Path,
    schema: str,
    date_range: tuple[datetime, datetime],
    source_column: str = "company",
    chunksize: int = 500_000,
) -> LoadedTrips:
    """
    Load trip records whose start time lies in ``[start, end)``.

    Args:
        path: CSV file (UTF-8, header row)
        schema: Adapter name (generic, chicago, nyc)
        date_range: Half-open window of accepted start times
        source_column: ``company`` or ``driver`` identifier column
        chunksize: Rows per parsing chunk

    Returns:
        LoadedTrips with the canonical frame and its load report

    Raises:
        ConfigError: Unknown schema or source column
        DataError: Missing/unreadable file or missing columns
    """
    adapter = get_schema(schema)
    columns = adapter.columns(source_column)
    start, end = (pd.Timestamp(bound) for bound in date_range)
    if start >= end:
        raise ConfigError(
            "Empty date range", {"from": str(start), "to": str(end)}
        )

    path = Path(path)
    if not path.is_file():
        raise DataError(f"Trip file not found: {path}")

    report = LoadReport(path=path.name, schema=schema)
    accepted: list[pd.DataFrame] = []

    try:
        reader = pd.read_csv(
            path,
            dtype=str,
            usecols=list(columns),
            chunksize=chunksize,
            encoding="utf-8",
        )
        for chunk in reader:
            accepted.append(_accept_chunk(chunk, columns, adapter, start, end, report))
    except ValueError as e:
        raise DataError(
            f"Cannot read {path.name} with schema {schema}: {e}",
            {"expected_columns": list(columns)},
        ) from e
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"Cannot read {path.name}: {e}") from e

    if accepted:
        frame = pd.concat(accepted, ignore_index=True)
    else:
        frame = pd.DataFrame(
            {
                "start_time": pd.Series(dtype="datetime64[ns]"),
                "source_id": pd.Series(dtype=str),
                "zone_id": pd.Series(dtype=str),
            }
        )
    report.accepted = len(frame)

    logger.info(
        f"Loaded {report.accepted} trips from {path.name} "
        f"({report.total_dropped} dropped, {report.outside_window} outside window)"
    )
    return LoadedTrips(frame=frame, report=report)


def _accept_chunk(
    chunk: pd.DataFrame,
    columns: dict[str, str],
    adapter: SchemaAdapter,
    start: pd.Timestamp,
    end: pd.Timestamp,
    report: LoadReport,
) -> pd.DataFrame:
    chunk = chunk.rename(columns=columns)[list(CANONICAL_COLUMNS)]
    report.rows_read += len(chunk)

    source = chunk["source_id"].str.strip()
    zone = chunk["zone_id"].str.strip()
    timestamps = pd.to_datetime(
        chunk["start_time"].str.strip(),
        format=adapter.timestamp_format,
        errors="coerce",
        utc=True,
    ).dt.tz_convert(None)

    # Each dropped row is charged to the first failing field
    bad_timestamp = timestamps.isna()
    missing_source = ~bad_timestamp & _blank(source)
    missing_zone = ~bad_timestamp & ~missing_source & _blank(zone)
    report.dropped["bad_timestamp"] += int(bad_timestamp.sum())
    report.dropped["missing_source"] += int(missing_source.sum())
    report.dropped["missing_zone"] += int(missing_zone.sum())

    valid = ~(bad_timestamp | missing_source | missing_zone)
    in_window = valid & (timestamps >= start) & (timestamps < end)
    report.outside_window += int((valid & ~in_window).sum())

    return pd.DataFrame(
        {
            "start_time": timestamps[in_window],
            "source_id": source[in_window],
            "zone_id": zone[in_window],
        }
    )
