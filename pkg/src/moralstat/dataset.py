"""Ingest and validate the moral-statistics table and the 1830 France base map.

Owns all variable-direction metadata (which variables are population-per-event
counts, percentages, or rank indexes) and the canonical region assignment of
each departement code. Corsica is its own single-member region level X, so the
region factor always has six levels.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .errors import DataError

CORE_VARIABLES = ("Crime_pers", "Crime_prop", "Literacy", "Donations",
                  "Infants", "Suicides")

REGION_LEVELS = ("C", "E", "N", "S", "W", "X")

REGION_NAMES = {
    "C": "Central", "E": "East", "N": "North",
    "S": "South", "W": "West", "X": "Other",
}

# Canonical region assignment per departement code (Corsica stored as 200).
REGION_BY_CODE = {
    "C": (3, 15, 18, 19, 23, 28, 36, 37, 41, 42, 43, 45, 58, 63, 72, 87, 89),
    "E": (1, 4, 5, 10, 21, 25, 26, 38, 39, 52, 54, 67, 68, 69, 70, 71, 88),
    "N": (2, 8, 14, 27, 50, 51, 55, 57, 59, 60, 61, 62, 75, 76, 77, 78, 80),
    "S": (7, 9, 11, 12, 13, 30, 31, 32, 34, 46, 48, 65, 66, 81, 82, 83, 84),
    "W": (16, 17, 22, 24, 29, 33, 35, 40, 44, 47, 49, 53, 56, 64, 79, 85, 86),
    "X": (200,),
}

CODE_TO_REGION = {code: region
                  for region, codes in REGION_BY_CODE.items()
                  for code in codes}

# Measurement form and direction of the seven named variables. Donations is a
# magnitude (count of charitable bequests); it is grouped with the
# population-based quantitative variables since it is neither a percent nor a
# rank. Wealth is a rank index where rank 1 marks the wealthiest departement.
_KNOWN_KINDS = {
    "Crime_pers": ("pop_per_event", True),
    "Crime_prop": ("pop_per_event", True),
    "Literacy": ("percent", True),
    "Donations": ("pop_per_event", True),
    "Infants": ("pop_per_event", True),
    "Suicides": ("pop_per_event", True),
    "Wealth": ("rank_index", False),
}


@dataclass(frozen=True)
class VariableMeta:
    """Name, measurement form, and direction of one variable."""

    name: str
    kind: str  # pop_per_event | percent | rank_index
    more_is_better: bool


@dataclass(frozen=True)
class DepartementRecord:
    """One departement: code, display name, region level, variable values."""

    code: int
    name: str
    region: str
    values: Mapping[str, float]


@dataclass(frozen=True)
class MoralDataset:
    """Validated departement table plus per-variable metadata."""

    records: tuple[DepartementRecord, ...]
    variables: tuple[VariableMeta, ...]

    def __post_init__(self) -> None:
        declared = [v.name for v in self.variables]
        for rec in self.records:
            for name in declared:
                if name not in rec.values:
                    raise DataError(
                        f"record {rec.code} missing value for {name!r}")

    @property
    def n(self) -> int:
        return len(self.records)

    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def meta(self, variable: str) -> VariableMeta:
        for v in self.variables:
            if v.name == variable:
                return v
        raise DataError(f"unknown variable {variable!r}")

    def codes(self) -> np.ndarray:
        return np.array([r.code for r in self.records], dtype=int)

    def regions(self) -> tuple[str, ...]:
        return tuple(r.region for r in self.records)

    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.records)

    def column(self, variable: str) -> np.ndarray:
        self.meta(variable)
        return np.array([r.values[variable] for r in self.records],
                        dtype=float)

    def matrix(self, variables: Iterable[str]) -> np.ndarray:
        cols = [self.column(v) for v in variables]
        return np.column_stack(cols)

    def record_by_code(self, code: int) -> DepartementRecord:
        for r in self.records:
            if r.code == code:
                return r
        raise DataError(f"no record with code {code}")

    def ordered(self) -> "MoralDataset":
        """Copy with records sorted by departement code.

        Statistical pipelines consume the ordered view so results do not
        depend on source-file row order.
        """
        recs = tuple(sorted(self.records, key=lambda r: r.code))
        return MoralDataset(records=recs, variables=self.variables)


@dataclass(frozen=True)
class MapFeature:
    code: int
    name: str
    rings: tuple[np.ndarray, ...]  # each (m, 2), closed: first row = last row


@dataclass(frozen=True)
class BaseMap:
    """Polygon rings keyed by departement code, planar units, no projection."""

    features: tuple[MapFeature, ...]

    @property
    def n(self) -> int:
        return len(self.features)

    def codes(self) -> tuple[int, ...]:
        return tuple(f.code for f in self.features)

    def feature_by_code(self, code: int) -> MapFeature:
        for f in self.features:
            if f.code == code:
                return f
        raise DataError(f"no map feature with code {code}")

    def bounds(self) -> tuple[float, float, float, float]:
        pts = np.vstack([r for f in self.features for r in f.rings])
        return (float(pts[:, 0].min()), float(pts[:, 1].min()),
                float(pts[:, 0].max()), float(pts[:, 1].max()))

    def ordered(self) -> "BaseMap":
        return BaseMap(tuple(sorted(self.features, key=lambda f: f.code)))


def _open_text(source: str | Path | TextIO) -> TextIO:
    if hasattr(source, "read"):
        return source  # type: ignore[return-value]
    return open(source, "r", encoding="utf-8", newline="")


def _parse_float(cell: str, row: int, col: str) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise DataError(
            f"non-numeric cell at data row {row}, column {col!r}: {cell!r}")
    if not np.isfinite(v):
        raise DataError(
            f"non-finite cell at data row {row}, column {col!r}: {cell!r}")
    return v


def load_dataset(source: str | Path | TextIO,
                 column_map: Mapping[str, str] | None = None) -> MoralDataset:
    """Parse a comma-separated table into a validated MoralDataset.

    The header must provide dept, Region, and the six core variables
    (canonical names, or renamed through column_map which maps canonical
    name -> actual header). A Department column, when present, supplies
    display names. All other columns are carried as opaque numeric
    variables. Row positions in error messages are 1-based data rows.
    """
    colmap = dict(column_map or {})

    def actual(name: str) -> str:
        return colmap.get(name, name)

    fh = _open_text(source)
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty stream: no header row")
    rows = [row for row in reader if row]
    if not rows:
        raise DataError("empty dataset: no data rows")

    required = ["dept", "Region"] + list(CORE_VARIABLES)
    col_index: dict[str, int] = {}
    for canonical in required:
        name = actual(canonical)
        if name not in header:
            raise DataError(f"missing column {name!r} (for {canonical!r})")
        col_index[canonical] = header.index(name)
    name_col = header.index(actual("Department")) \
        if actual("Department") in header else None

    reserved = {col_index[c] for c in required}
    if name_col is not None:
        reserved.add(name_col)
    extra_cols = [(header[i], i) for i in range(len(header))
                  if i not in reserved]
    # canonical ordering: six core variables first, then extras in file order
    var_order = list(CORE_VARIABLES) + [name for name, _ in extra_cols]

    records = []
    seen: dict[int, int] = {}
    for rix, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise DataError(
                f"data row {rix} has {len(row)} cells, expected {len(header)}")
        code_cell = row[col_index["dept"]]
        try:
            code = int(code_cell)
        except ValueError:
            raise DataError(
                f"non-numeric cell at data row {rix}, column 'dept': "
                f"{code_cell!r}")
        if code in seen:
            raise DataError(
                f"duplicate code {code} at data row {rix} "
                f"(first seen at row {seen[code]})")
        seen[code] = rix
        region = row[col_index["Region"]].strip()
        if region not in REGION_LEVELS:
            raise DataError(
                f"unknown region code {region!r} at data row {rix} "
                f"(expected one of {', '.join(REGION_LEVELS)})")
        expected = CODE_TO_REGION.get(code)
        if expected is not None and region != expected:
            raise DataError(
                f"region mismatch at data row {rix}: dept {code} is "
                f"{expected!r} ({REGION_NAMES[expected]}), got {region!r}")
        values = {}
        for canonical in CORE_VARIABLES:
            values[canonical] = _parse_float(
                row[col_index[canonical]], rix, actual(canonical))
        for name, i in extra_cols:
            values[name] = _parse_float(row[i], rix, name)
        display = row[name_col] if name_col is not None else str(code)
        records.append(DepartementRecord(
            code=code, name=display, region=region, values=values))

    variables = []
    for name in var_order:
        kind, more = _KNOWN_KINDS.get(name, ("rank_index", False))
        variables.append(VariableMeta(name=name, kind=kind,
                                      more_is_better=more))
    return MoralDataset(records=tuple(records), variables=tuple(variables))


def serialize_dataset(ds: MoralDataset, target: str | Path | TextIO) -> None:
    """Write a dataset back to CSV so load_dataset round-trips it."""
    own = not hasattr(target, "write")
    fh = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(fh)
        names = list(ds.variable_names())
        writer.writerow(["dept", "Region", "Department"] + names)
        for rec in ds.records:
            cells = [str(rec.code), rec.region, rec.name]
            for name in names:
                v = rec.values[name]
                cells.append(str(int(v)) if v == int(v) else repr(v))
            writer.writerow(cells)
    finally:
        if own:
            fh.close()


def direction_transform(ds: MoralDataset, variable: str,
                        target: str = "more_is_better") -> np.ndarray:
    """Return a variable vector in the requested direction.

    more_is_better returns stored values unchanged (the quantitative
    variables are already oriented that way). crime_rate converts a
    population-per-event variable to events per unit population by
    elementwise reciprocal.
    """
    meta = ds.meta(variable)
    values = ds.column(variable)
    if target == "more_is_better":
        return values
    if target == "crime_rate":
        if meta.kind == "percent":
            raise DataError(
                f"reciprocal requested for percent variable {variable!r}")
        if meta.kind == "rank_index":
            raise DataError(
                f"reciprocal requested for rank variable {variable!r}")
        if np.any(values == 0):
            raise DataError(
                f"reciprocal requested for a zero value in {variable!r}")
        return 1.0 / values
    raise DataError(f"unknown direction target {target!r}")


def region_table() -> dict[str, tuple[int, ...]]:
    """Canonical region -> departement codes partition (86 codes total)."""
    return {region: tuple(codes) for region, codes in REGION_BY_CODE.items()}


def _close_ring(ring: list, feature_ix: int) -> np.ndarray:
    arr = np.asarray(ring, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 4:
        raise DataError(
            f"feature {feature_ix}: ring must be >= 4 coordinate pairs")
    if not np.array_equal(arr[0], arr[-1]):
        raise DataError(f"feature {feature_ix}: unclosed ring")
    return arr


def load_basemap(source: str | Path | TextIO) -> BaseMap:
    """Parse a GeoJSON FeatureCollection of departement polygons.

    Features need an integer "dept" property and Polygon or MultiPolygon
    geometry; coordinates are planar and used as-is. Every ring must be
    closed. Feature order follows the file.
    """
    fh = _open_text(source)
    try:
        doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid GeoJSON: {exc}")
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise DataError("GeoJSON root must be a FeatureCollection")
    features = []
    seen: set[int] = set()
    for ix, feat in enumerate(doc.get("features", [])):
        props = feat.get("properties") or {}
        if "dept" not in props:
            raise DataError(f"feature {ix} missing 'dept' property")
        try:
            code = int(props["dept"])
        except (TypeError, ValueError):
            raise DataError(f"feature {ix}: non-integer 'dept' property")
        if code in seen:
            raise DataError(f"feature {ix}: duplicate code {code}")
        seen.add(code)
        geom = feat.get("geometry") or {}
        gtype = geom.get("type")
        if gtype == "Polygon":
            parts = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            parts = geom["coordinates"]
        else:
            raise DataError(
                f"feature {ix}: geometry type {gtype!r} is not polygonal")
        rings = tuple(_close_ring(ring, ix)
                      for part in parts for ring in part)
        name = str(props.get("name", code))
        features.append(MapFeature(code=code, name=name, rings=rings))
    if not features:
        raise DataError("empty basemap: no features")
    return BaseMap(features=tuple(features))


def fixture_path(name: str) -> Path:
    """Path of a vendored data fixture (guerry.csv, france1830.geojson,
    arbuthnot.csv)."""
    return Path(__file__).parent / "data" / name


def load_canonical() -> tuple[MoralDataset, BaseMap]:
    """Load the vendored dataset and base map."""
    return (load_dataset(fixture_path("guerry.csv")),
            load_basemap(fixture_path("france1830.geojson")))
