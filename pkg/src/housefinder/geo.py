"""Coordinate primitives: points, bounding boxes, raster grids, great-circle
distance, and point-in-polygon tests.

Everything here is a frozen dataclass or a pure function, safe to share
across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

# Mean Earth radius, spherical model.
EARTH_RADIUS_M = 6_371_000.0

# Canonical mile used for transit/school proximity radii.
METERS_PER_MILE = 1_609.34

# Guard against float noise when a degree span divides a cell size almost
# exactly: spans within this of an integer count do not gain an extra cell.
_CEIL_EPS = 1e-9


@dataclass(frozen=True)
class GeoPoint:
    """Latitude/longitude pair in degrees, validated on construction."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lat", float(self.lat))
        object.__setattr__(self, "lon", float(self.lon))
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"coordinates must be finite: ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned lat/lon box. Antimeridian-spanning boxes are unsupported."""

    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self) -> None:
        for v in (self.min_lat, self.max_lat, self.min_lon, self.max_lon):
            if not math.isfinite(v):
                raise ValueError("bounding box edges must be finite")
        if self.min_lat > self.max_lat:
            raise ValueError(f"min_lat {self.min_lat} > max_lat {self.max_lat}")
        if self.min_lon > self.max_lon:
            raise ValueError(f"min_lon {self.min_lon} > max_lon {self.max_lon}")

    def contains(self, p: GeoPoint) -> bool:
        return (
            self.min_lat <= p.lat <= self.max_lat
            and self.min_lon <= p.lon <= self.max_lon
        )


def _cell_count(span_deg: float, cell_size: float) -> int:
    return max(1, math.ceil(span_deg / cell_size - _CEIL_EPS))


@dataclass(frozen=True)
class GridSpec:
    """Discretization of a bounding box into rows x cols cells of cell_size
    degrees. Cell (0, 0) is the north-west corner; storage is row-major."""

    bbox: BoundingBox
    cell_size: float
    rows: int
    cols: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.cell_size) and self.cell_size > 0):
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        expect_rows = _cell_count(self.bbox.max_lat - self.bbox.min_lat, self.cell_size)
        expect_cols = _cell_count(self.bbox.max_lon - self.bbox.min_lon, self.cell_size)
        if self.rows != expect_rows or self.cols != expect_cols:
            raise ValueError(
                f"grid shape {self.rows}x{self.cols} inconsistent with bbox and "
                f"cell_size (expected {expect_rows}x{expect_cols})"
            )


def grid_from_bbox(bbox: BoundingBox, cell_size: float) -> GridSpec:
    """Build the GridSpec covering bbox with square (in degrees) cells."""
    if not (math.isfinite(cell_size) and cell_size > 0):
        raise ValueError(f"cell_size must be positive, got {cell_size}")
    rows = _cell_count(bbox.max_lat - bbox.min_lat, cell_size)
    cols = _cell_count(bbox.max_lon - bbox.min_lon, cell_size)
    return GridSpec(bbox=bbox, cell_size=cell_size, rows=rows, cols=cols)


def cell_center(spec: GridSpec, row: int, col: int) -> GeoPoint:
    """Center of cell (row, col); row 0 sits at the north edge."""
    if not (0 <= row < spec.rows):
        raise IndexError(f"row {row} outside [0, {spec.rows})")
    if not (0 <= col < spec.cols):
        raise IndexError(f"col {col} outside [0, {spec.cols})")
    lat = spec.bbox.max_lat - (row + 0.5) * spec.cell_size
    lon = spec.bbox.min_lon + (col + 0.5) * spec.cell_size
    return GeoPoint(lat, lon)


@dataclass(frozen=True)
class RasterGrid:
    """Row-major grid of scores in [0, 1]; None marks cells without data."""

    spec: GridSpec
    values: tuple[Optional[float], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        expected = self.spec.rows * self.spec.cols
        if len(self.values) != expected:
            raise ValueError(f"expected {expected} cells, got {len(self.values)}")
        for v in self.values:
            if v is None:
                continue
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"cell value {v} outside [0, 1]")

    def at(self, row: int, col: int) -> Optional[float]:
        if not (0 <= row < self.spec.rows and 0 <= col < self.spec.cols):
            raise IndexError(f"cell ({row}, {col}) out of range")
        return self.values[row * self.spec.cols + col]


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on a sphere of radius 6,371,000 m.

    Arguments are evaluated in a canonical order so d(a, b) == d(b, a)
    bit-for-bit regardless of libm quirks.
    """
    if (b.lat, b.lon) < (a.lat, a.lon):
        a, b = b, a
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlmb = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    h = min(1.0, max(0.0, h))
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(h), math.sqrt(1.0 - h))


def _on_segment(px: float, py: float, x1: float, y1: float, x2: float, y2: float) -> bool:
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    if cross != 0.0:
        return False
    return min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2)


def point_in_polygon(p: GeoPoint, ring: Sequence[GeoPoint]) -> bool:
    """Even-odd containment test in planar lat/lon space.

    The ring may be explicitly closed (first vertex repeated last) or left
    open. Points exactly on an edge or vertex count as inside.
    """
    verts = [(v.lon, v.lat) for v in ring]
    if len(verts) >= 2 and verts[0] == verts[-1]:
        verts = verts[:-1]
    if len(set(verts)) < 3:
        raise ValueError("polygon ring needs at least 3 distinct vertices")

    x, y = p.lon, p.lat
    inside = False
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        if _on_segment(x, y, x1, y1, x2, y2):
            return True
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside
