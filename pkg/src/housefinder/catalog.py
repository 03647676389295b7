"""Domain records for places, apartments, schools, and block groups, plus
CSV ingestion, the housing-cost derivation, the affordability pre-filter,
and catalog summary statistics.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from importlib import resources
from typing import IO, Iterable, Mapping, Optional, Sequence, Union

from .geo import GeoPoint, haversine_distance, point_in_polygon


class CatalogError(ValueError):
    """Base class for ingestion and catalog consistency failures."""


class SchemaError(CatalogError):
    """CSV header does not match the expected schema."""


class RowError(CatalogError):
    """A data row could not be parsed; message names the row."""


class EmptyStatisticsError(CatalogError):
    """Statistics requested over zero priced apartments."""


class PlaceCategory(str, Enum):
    APARTMENT = "apartment"
    TRANSIT_STOP = "transit_stop"
    SCHOOL = "school"
    MARKET = "market"
    FAITH_CENTER = "faith_center"
    ESL = "esl"
    DAYCARE = "daycare"
    HEALTH = "health"
    HOSPITAL = "hospital"
    DDS_OFFICE = "dds_office"
    DFCS_OFFICE = "dfcs_office"
    SSN_OFFICE = "ssn_office"


@dataclass(frozen=True, kw_only=True)
class Place:
    """A point feature: one row of the places file."""

    id: str
    name: str
    category: PlaceCategory
    location: GeoPoint
    address: str = ""
    phone: Optional[str] = None
    zipcode: Optional[str] = None
    website: Optional[str] = None
    faith_tradition: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("place name must be non-empty")
        if self.zipcode is not None and not (
            len(self.zipcode) == 5 and self.zipcode.isdigit()
        ):
            raise ValueError(f"zipcode must be 5 digits, got {self.zipcode!r}")


@dataclass(frozen=True, kw_only=True)
class Apartment(Place):
    monthly_cost: Optional[float] = None
    anchor_distance: Optional[float] = None
    travel_minutes: Optional[float] = None

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.monthly_cost is not None and not (
            math.isfinite(self.monthly_cost) and self.monthly_cost > 0
        ):
            raise ValueError(f"monthly_cost must be positive, got {self.monthly_cost}")


@dataclass(frozen=True, kw_only=True)
class School(Place):
    is_public: bool = True
    free_reduced_lunch_pct: Optional[float] = None
    rating: Optional[float] = None

    def __post_init__(self) -> None:
        super().__post_init__()
        pct = self.free_reduced_lunch_pct
        if pct is not None and not (0.0 <= pct <= 100.0):
            raise ValueError(f"free_reduced_lunch_pct {pct} outside [0, 100]")


def estimate_monthly_cost(pct_income_on_housing: float, median_annual_income: float) -> float:
    """Monthly housing cost: share of income spent on housing times median
    annual income, divided by 12."""
    if not (0.0 < pct_income_on_housing <= 1.0):
        raise ValueError(
            f"pct_income_on_housing must be in (0, 1], got {pct_income_on_housing}"
        )
    if not (math.isfinite(median_annual_income) and median_annual_income >= 0.0):
        raise ValueError(f"median_annual_income must be >= 0, got {median_annual_income}")
    return pct_income_on_housing * median_annual_income / 12.0


@dataclass(frozen=True, kw_only=True)
class BlockGroup:
    """Polygonal area with income, housing-cost share, and area indices."""

    id: str
    boundary: tuple[GeoPoint, ...]
    pct_income_on_housing: float
    median_annual_income: float
    jobs_index: float
    retail_index: float
    crime_index: Optional[float] = None
    est_monthly_cost: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if len({(v.lat, v.lon) for v in self.boundary}) < 3:
            raise ValueError(f"block group {self.id}: ring needs >= 3 distinct vertices")
        expected = estimate_monthly_cost(self.pct_income_on_housing, self.median_annual_income)
        tol = 1e-9 * max(1.0, self.median_annual_income)
        if abs(self.est_monthly_cost - expected) > tol:
            raise ValueError(
                f"block group {self.id}: est_monthly_cost {self.est_monthly_cost} "
                f"inconsistent with fields (expected {expected})"
            )

    @classmethod
    def build(
        cls,
        *,
        id: str,
        boundary: Sequence[GeoPoint],
        pct_income_on_housing: float,
        median_annual_income: float,
        jobs_index: float,
        retail_index: float,
        crime_index: Optional[float] = None,
    ) -> "BlockGroup":
        return cls(
            id=id,
            boundary=tuple(boundary),
            pct_income_on_housing=pct_income_on_housing,
            median_annual_income=median_annual_income,
            jobs_index=jobs_index,
            retail_index=retail_index,
            crime_index=crime_index,
            est_monthly_cost=estimate_monthly_cost(pct_income_on_housing, median_annual_income),
        )


@dataclass(frozen=True)
class Catalog:
    """Immutable snapshot of all places and block groups plus the anchor
    point (the resettlement agency office distances are measured to)."""

    places: tuple[Place, ...]
    block_groups: tuple[BlockGroup, ...]
    anchor: GeoPoint

    def __post_init__(self) -> None:
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "block_groups", tuple(self.block_groups))
        seen: set[str] = set()
        for p in self.places:
            if p.id in seen:
                raise CatalogError(f"duplicate place id {p.id!r}")
            seen.add(p.id)
        bg_seen: set[str] = set()
        for bg in self.block_groups:
            if bg.id in bg_seen:
                raise CatalogError(f"duplicate block group id {bg.id!r}")
            bg_seen.add(bg.id)
        # anchor_distance is derived state: recompute so the invariant holds.
        fixed = []
        for p in self.places:
            if isinstance(p, Apartment):
                p = replace(p, anchor_distance=haversine_distance(p.location, self.anchor))
            fixed.append(p)
        object.__setattr__(self, "places", tuple(fixed))

    @cached_property
    def _block_groups_by_id(self) -> tuple[BlockGroup, ...]:
        return tuple(sorted(self.block_groups, key=lambda bg: bg.id))

    @property
    def apartments(self) -> tuple[Apartment, ...]:
        return tuple(p for p in self.places if isinstance(p, Apartment))

    def places_in_category(self, category: PlaceCategory) -> tuple[Place, ...]:
        return tuple(p for p in self.places if p.category is category)


def block_group_containing(catalog: Catalog, p: GeoPoint) -> Optional[BlockGroup]:
    """First block group (ascending id) whose boundary contains p."""
    for bg in catalog._block_groups_by_id:
        if point_in_polygon(p, bg.boundary):
            return bg
    return None


# --------------------------------------------------------------------------
# Category alias table
# --------------------------------------------------------------------------

_FAITH_TRADITIONS = {"church", "mosque", "synagogue", "temple"}


def load_alias_table(content: Union[str, bytes, IO]) -> dict[str, PlaceCategory]:
    """Parse a two-column "raw,category" CSV into a lookup table.

    Raw strings are matched case-insensitively.
    """
    reader = csv.reader(_as_text_lines(content))
    rows = list(reader)
    if not rows or [c.strip() for c in rows[0]] != ["raw", "category"]:
        raise SchemaError('alias table must start with header "raw,category"')
    table: dict[str, PlaceCategory] = {}
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise RowError(f"alias table line {i}: expected 2 columns, got {len(row)}")
        raw, cat = row[0].strip().lower(), row[1].strip()
        try:
            table[raw] = PlaceCategory(cat)
        except ValueError:
            raise RowError(f"alias table line {i}: unknown category {cat!r}") from None
    return table


def default_alias_table() -> dict[str, PlaceCategory]:
    data = resources.files("housefinder.data").joinpath("category_aliases.csv").read_text()
    return load_alias_table(data)


# --------------------------------------------------------------------------
# CSV ingestion
# --------------------------------------------------------------------------

PLACES_REQUIRED_COLUMNS = [
    "Place Name",
    "Place Type",
    "latitude",
    "longitude",
    "Place Address",
    "Phone",
    "Zipcode",
]
# Optional trailing columns, recognized by name in any order after the
# required seven. travel_minutes is passed through verbatim when present.
PLACES_OPTIONAL_COLUMNS = [
    "Website",
    "Monthly Cost",
    "travel_minutes",
    "Is Public",
    "Free Reduced Lunch Pct",
    "Rating",
]

BLOCKGROUPS_COLUMNS = [
    "GeoID",
    "Boundary",
    "PctIncomeHousing",
    "MedianIncome",
    "JobsIndex",
    "RetailIndex",
    "CrimeIndex",
]


def _as_text_lines(content: Union[str, bytes, IO]) -> list[str]:
    if isinstance(content, bytes):
        text = content.decode("utf-8")
    elif isinstance(content, str):
        text = content
    else:
        raw = content.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    return text.splitlines()

def place_id(name: str, lat: float, lon: float) -> str:
    """Deterministic place identity so repeated ingestion and merges of the
    same listing are idempotent."""
    key = f"{name}\x1f{lat!r}\x1f{lon!r}".encode("utf-8")
    return hashlib.md5(key).hexdigest()[:16]


def _opt(text: str) -> Optional[str]:
    text = text.strip()
    return text or None


def _opt_float(text: str, field: str, row: int) -> Optional[float]:
    text = text.strip()
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        raise RowError(f"row {row}: unparseable {field} {text!r}") from None


def parse_places_csv(
    content: Union[str, bytes, IO],
    aliases: Optional[Mapping[str, PlaceCategory]] = None,
) -> list[Place]:
    """Parse a places file (Place Name,Place Type,latitude,longitude,
    Place Address,Phone,Zipcode plus optional trailing columns)."""
    if aliases is None:
        aliases = default_alias_table()
    reader = csv.reader(_as_text_lines(content))
    rows = list(reader)
    if not rows:
        raise SchemaError("line 1: missing places header")
    header = [c.strip() for c in rows[0]]
    if header[: len(PLACES_REQUIRED_COLUMNS)] != PLACES_REQUIRED_COLUMNS:
        raise SchemaError(
            f"line 1: expected header to start with {','.join(PLACES_REQUIRED_COLUMNS)}"
        )
    extras = header[len(PLACES_REQUIRED_COLUMNS) :]
    unknown = [c for c in extras if c not in PLACES_OPTIONAL_COLUMNS]
    if unknown:
        raise SchemaError(f"line 1: unknown column(s) {', '.join(unknown)}")
    col = {name: idx for idx, name in enumerate(header)}

    places: list[Place] = []
    for i, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) < len(PLACES_REQUIRED_COLUMNS):
            raise RowError(f"row {i}: expected {len(header)} fields, got {len(row)}")
        name = row[col["Place Name"]].strip()
        if not name:
            raise RowError(f"row {i}: empty place name")
        raw_type = row[col["Place Type"]].strip()
        category = aliases.get(raw_type.lower())
        if category is None:
            raise RowError(f"row {i}: unknown place type {raw_type!r}")
        try:
            lat = float(row[col["latitude"]])
            lon = float(row[col["longitude"]])
            location = GeoPoint(lat, lon)
        except ValueError as exc:
            raise RowError(f"row {i}: bad coordinates ({exc})") from None

        faith = None
        if category is PlaceCategory.FAITH_CENTER and raw_type.lower() != "faith_center":
            faith = raw_type.lower()

        def cell(column: str) -> str:
            idx = col.get(column)
            return row[idx] if idx is not None and idx < len(row) else ""

        common = dict(
            id=place_id(name, location.lat, location.lon),
            name=name,
            category=category,
            location=location,
            address=row[col["Place Address"]].strip(),
            phone=_opt(row[col["Phone"]]),
            zipcode=_opt(row[col["Zipcode"]]),
            website=_opt(cell("Website")),
            faith_tradition=faith,
        )
        try:
            if category is PlaceCategory.APARTMENT:
                places.append(
                    Apartment(
                        **common,
                        monthly_cost=_opt_float(cell("Monthly Cost"), "Monthly Cost", i),
                        travel_minutes=_opt_float(cell("travel_minutes"), "travel_minutes", i),
                    )
                )
            elif category is PlaceCategory.SCHOOL:
                is_public_raw = cell("Is Public").strip().lower()
                places.append(
                    School(
                        **common,
                        is_public=is_public_raw not in ("false", "0", "no", "private"),
                        free_reduced_lunch_pct=_opt_float(
                            cell("Free Reduced Lunch Pct"), "Free Reduced Lunch Pct", i
                        ),
                        rating=_opt_float(cell("Rating"), "Rating", i),
                    )
                )
            else:
                places.append(Place(**common))
        except ValueError as exc:
            if isinstance(exc, RowError):
                raise
            raise RowError(f"row {i}: {exc}") from None
    return places


def _parse_ring(text: str, row: int) -> tuple[GeoPoint, ...]:
    verts = []
    for pair in text.split(";"):
        pair = pair.strip()
        if not pair:
            continue
        parts = pair.split()
        if len(parts) != 2:
            raise RowError(f"row {row}: bad boundary vertex {pair!r}")
        try:
            verts.append(GeoPoint(float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise RowError(f"row {row}: bad boundary vertex ({exc})") from None
    if len({(v.lat, v.lon) for v in verts}) < 3:
        raise RowError(f"row {row}: boundary ring needs >= 3 distinct vertices")
    return tuple(verts)


def parse_blockgroups_csv(content: Union[str, bytes, IO]) -> list[BlockGroup]:
    """Parse a block-groups file; est_monthly_cost is derived on the way in."""
    reader = csv.reader(_as_text_lines(content))
    rows = list(reader)
    if not rows:
        raise SchemaError("line 1: missing block-groups header")
    if [c.strip() for c in rows[0]] != BLOCKGROUPS_COLUMNS:
        raise SchemaError(f"line 1: expected header {','.join(BLOCKGROUPS_COLUMNS)}")
    groups: list[BlockGroup] = []
    for i, row in enumerate(rows[1:], start=1):
        if not row:
            continue
        if len(row) != len(BLOCKGROUPS_COLUMNS):
            raise RowError(f"row {i}: expected {len(BLOCKGROUPS_COLUMNS)} fields, got {len(row)}")
        geoid, boundary, pct_s, income_s, jobs_s, retail_s, crime_s = (c.strip() for c in row)
        ring = _parse_ring(boundary, i)
        try:
            pct = float(pct_s)
            income = float(income_s)
            jobs = float(jobs_s)
            retail = float(retail_s)
        except ValueError:
            raise RowError(f"row {i}: unparseable numeric field") from None
        crime = _opt_float(crime_s, "CrimeIndex", i)
        try:
            groups.append(
                BlockGroup.build(
                    id=geoid,
                    boundary=ring,
                    pct_income_on_housing=pct,
                    median_annual_income=income,
                    jobs_index=jobs,
                    retail_index=retail,
                    crime_index=crime,
                )
            )
        except ValueError as exc:
            raise RowError(f"row {i}: {exc}") from None
    return groups


# --------------------------------------------------------------------------
# Serialization (round-trip partners of the parsers)
# --------------------------------------------------------------------------

def _fmt(v: Optional[float]) -> str:
    return "" if v is None else repr(v)


def serialize_places_csv(places: Sequence[Place]) -> str:
    """Inverse of parse_places_csv up to float formatting and alias spelling.

    Place Type is written as the canonical category name, except faith
    centers, which keep their tradition so it survives a round trip.
    """
    optional = [
        c
        for c in PLACES_OPTIONAL_COLUMNS
        if any(_place_optional(p, c) is not None for p in places)
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLACES_REQUIRED_COLUMNS + optional)
    for p in places:
        raw_type = p.category.value
        if p.category is PlaceCategory.FAITH_CENTER and p.faith_tradition:
            raw_type = p.faith_tradition
        row = [
            p.name,
            raw_type,
            repr(p.location.lat),
            repr(p.location.lon),
            p.address,
            p.phone or "",
            p.zipcode or "",
        ]
        for c in optional:
            v = _place_optional(p, c)
            row.append("" if v is None else v)
        writer.writerow(row)
    return buf.getvalue()


def _place_optional(p: Place, column: str) -> Optional[str]:
    if column == "Website":
        return p.website
    if column == "Monthly Cost":
        return _fmt(p.monthly_cost) if isinstance(p, Apartment) else None
    if column == "travel_minutes":
        return _fmt(p.travel_minutes) if isinstance(p, Apartment) else None
    if column == "Is Public":
        return ("true" if p.is_public else "false") if isinstance(p, School) else None
    if column == "Free Reduced Lunch Pct":
        return _fmt(p.free_reduced_lunch_pct) if isinstance(p, School) else None
    if column == "Rating":
        return _fmt(p.rating) if isinstance(p, School) else None
    raise KeyError(column)


def serialize_blockgroups_csv(groups: Sequence[BlockGroup]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BLOCKGROUPS_COLUMNS)
    for bg in groups:
        ring = ";".join(f"{v.lat!r} {v.lon!r}" for v in bg.boundary)
        writer.writerow(
            [
                bg.id,
                ring,
                repr(bg.pct_income_on_housing),
                repr(bg.median_annual_income),
                repr(bg.jobs_index),
                repr(bg.retail_index),
                _fmt(bg.crime_index),
            ]
        )
    return buf.getvalue()


# --------------------------------------------------------------------------
# Derived views
# --------------------------------------------------------------------------

def filter_affordable(
    groups: Sequence[BlockGroup], ceiling: float = 3000.0
) -> list[BlockGroup]:
    """Keep block groups whose estimated cost does not exceed the ceiling.

    "Above" the ceiling means strictly greater: a group at exactly the
    ceiling is retained. Input order is preserved.
    """
    if not ceiling > 0:
        raise ValueError(f"ceiling must be positive, got {ceiling}")
    return [bg for bg in groups if bg.est_monthly_cost <= ceiling]


@dataclass(frozen=True)
class CatalogStats:
    count: int
    median_cost: float
    stddev_cost: float
    unpriced: int


def catalog_stats(apartments: Sequence[Apartment]) -> CatalogStats:
    """Median (midpoint for even counts) and population standard deviation
    of apartment monthly costs; unpriced apartments are counted separately."""
    priced = sorted(a.monthly_cost for a in apartments if a.monthly_cost is not None)
    if not priced:
        raise EmptyStatisticsError("no apartments with a monthly cost")
    n = len(priced)
    if n % 2:
        median = priced[n // 2]
    else:
        median = (priced[n // 2 - 1] + priced[n // 2]) / 2.0
    mean = sum(priced) / n
    stddev = math.sqrt(sum((x - mean) ** 2 for x in priced) / n)
    return CatalogStats(
        count=n,
        median_cost=median,
        stddev_cost=stddev,
        unpriced=len(apartments) - n,
    )
