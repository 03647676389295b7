"""Per-category nearest-neighbor and radius queries over catalog places.

The index buckets places into a fixed-size lat/lon grid per category. A query
selects candidate buckets through a search window and then decides membership
with the exact great-circle distance, so the window only ever prunes.

Safe pruning bound
------------------
Every point within great-circle distance r of a query q = (lat, lon) lies in
the window

    lat +/- c            where c = r / EARTH_RADIUS (in degrees),
    lon +/- asin(sin(c) / cos(lat))   (in degrees)

because a great circle of angular radius c around q is bounded in latitude by
c itself, and its longitude extent widens by the asin term (longitude degrees
shrink with cos(lat), so the raw c would undercount near the poles). When the
window reaches a pole, or sin(c) >= cos(lat), the longitude span degenerates
to the full circle. The window is additionally inflated by a small epsilon so
float rounding can only admit extra candidate buckets, never drop one.
"""

from __future__ import annotations

import math
from typing import Optional

from .catalog import Catalog, PlaceCategory
from .geo import EARTH_RADIUS_M, GeoPoint, haversine_distance

# Bucket edge in degrees; ~2.2 km north-south.
_BUCKET_DEG = 0.02

# Window inflation absorbing float rounding in the bound computation.
_WINDOW_EPS_DEG = 1e-9

# Any radius beyond half the circumference covers the whole sphere.
_MAX_DISTANCE_M = math.pi * EARTH_RADIUS_M


class PlaceIndex:
    """Immutable spatial snapshot of a catalog. Build once, query from any
    number of threads; rebuild when the catalog changes."""

    def __init__(self, catalog: Catalog) -> None:
        self._buckets: dict[PlaceCategory, dict[tuple[int, int], list[tuple[float, float, str]]]] = {}
        self._counts: dict[PlaceCategory, int] = {}
        for place in catalog.places:
            per_cat = self._buckets.setdefault(place.category, {})
            key = (
                math.floor(place.location.lat / _BUCKET_DEG),
                math.floor(place.location.lon / _BUCKET_DEG),
            )
            per_cat.setdefault(key, []).append(
                (place.location.lat, place.location.lon, place.id)
            )
            self._counts[place.category] = self._counts.get(place.category, 0) + 1

    def count(self, category: PlaceCategory) -> int:
        return self._counts.get(category, 0)

    def _window(self, p: GeoPoint, radius: float) -> tuple[float, float, float, float]:
        c = min(radius / EARTH_RADIUS_M, math.pi)
        dlat = math.degrees(c) + _WINDOW_EPS_DEG
        lat_lo, lat_hi = p.lat - dlat, p.lat + dlat
        cos_lat = math.cos(math.radians(p.lat))
        sin_c = math.sin(min(c, math.pi / 2.0))
        if lat_hi >= 90.0 or lat_lo <= -90.0 or c >= math.pi / 2.0 or sin_c >= cos_lat:
            lon_lo, lon_hi = -180.0, 180.0
        else:
            dlon = math.degrees(math.asin(sin_c / cos_lat)) + _WINDOW_EPS_DEG
            lon_lo, lon_hi = max(-180.0, p.lon - dlon), min(180.0, p.lon + dlon)
        return lat_lo, lat_hi, lon_lo, lon_hi

    def _candidates(
        self, p: GeoPoint, radius: float, category: PlaceCategory
    ) -> list[tuple[float, float, str]]:
        per_cat = self._buckets.get(category)
        if not per_cat:
            return []
        lat_lo, lat_hi, lon_lo, lon_hi = self._window(p, radius)
        i_lo, i_hi = math.floor(lat_lo / _BUCKET_DEG), math.floor(lat_hi / _BUCKET_DEG)
        j_lo, j_hi = math.floor(lon_lo / _BUCKET_DEG), math.floor(lon_hi / _BUCKET_DEG)
        # Scan the whole category when the window covers most buckets anyway.
        if (i_hi - i_lo + 1) * (j_hi - j_lo + 1) >= len(per_cat) * 4:
            return [e for bucket in per_cat.values() for e in bucket]
        out: list[tuple[float, float, str]] = []
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                bucket = per_cat.get((i, j))
                if bucket:
                    out.extend(bucket)
        return out

    def within_radius(
        self, p: GeoPoint, radius: float, category: PlaceCategory
    ) -> list[tuple[str, float]]:
        """All category places with distance <= radius, sorted by distance
        then place id."""
        if not (math.isfinite(radius) and radius >= 0.0):
            raise ValueError(f"radius must be >= 0, got {radius}")
        hits = []
        for lat, lon, pid in self._candidates(p, radius, category):
            d = haversine_distance(p, GeoPoint(lat, lon))
            if d <= radius:
                hits.append((pid, d))
        hits.sort(key=lambda t: (t[1], t[0]))
        return hits

    def nearest(
        self, p: GeoPoint, category: PlaceCategory
    ) -> Optional[tuple[str, float]]:
        """Closest category place (ties broken by ascending id), or None."""
        if self.count(category) == 0:
            return None
        radius = _BUCKET_DEG * 111_000.0  # one bucket edge in meters, roughly
        while True:
            hits = self.within_radius(p, radius, category)
            if hits:
                return hits[0]
            if radius >= _MAX_DISTANCE_M:
                # Unreachable for a non-empty category: the window now spans
                # the sphere, so every entry was a candidate.
                return None
            radius = min(radius * 8.0, _MAX_DISTANCE_M)


def build_index(catalog: Catalog) -> PlaceIndex:
    return PlaceIndex(catalog)
