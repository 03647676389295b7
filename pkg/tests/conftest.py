"""Shared fixtures: a small hand-written golden catalog and a larger seeded
metro-style catalog with complete data for every apartment."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from housefinder.catalog import (
    Apartment,
    BlockGroup,
    Catalog,
    Place,
    PlaceCategory,
    School,
)
from housefinder.geo import BoundingBox, GeoPoint

FIXTURES = Path(__file__).parent / "fixtures"

# Square study area tiled by the metro block groups: 4 lat bands x 2 lon halves.
METRO_BBOX = BoundingBox(33.70, 33.80, -84.40, -84.30)
METRO_ANCHOR = GeoPoint(33.75, -84.35)


def _square(lat0: float, lat1: float, lon0: float, lon1: float) -> tuple[GeoPoint, ...]:
    return (
        GeoPoint(lat0, lon0),
        GeoPoint(lat0, lon1),
        GeoPoint(lat1, lon1),
        GeoPoint(lat1, lon0),
    )


def make_metro_catalog(seed: int = 7, n_apartments: int = 50) -> Catalog:
    """Deterministic catalog over METRO_BBOX.

    Every block group carries all four area attributes and every apartment
    has a distinct price and a location inside some block group, so weighted
    scores have no missing criteria anywhere in the study area.
    """
    rng = random.Random(seed)
    groups = []
    k = 0
    for i in range(4):  # lat bands of 0.025 degrees
        for j in range(2):  # lon halves of 0.05 degrees
            lat0 = 33.70 + 0.025 * i
            lon0 = -84.40 + 0.05 * j
            groups.append(
                BlockGroup.build(
                    id=f"bg{k:02d}",
                    boundary=_square(lat0, lat0 + 0.025, lon0, lon0 + 0.05),
                    pct_income_on_housing=0.20 + 0.03 * k,
                    median_annual_income=30000.0 + 7000.0 * ((k * 3) % 8),
                    jobs_index=float(10 + ((k * 5) % 8) * 7),
                    retail_index=float(4 + ((k * 3) % 8) * 9),
                    crime_index=float(1 + ((k * 7) % 8) * 2),
                )
            )
            k += 1

    def point_inside() -> GeoPoint:
        return GeoPoint(
            rng.uniform(33.701, 33.799),
            rng.uniform(-84.399, -84.301),
        )

    places: list[Place] = []
    for n, cat in (
        (12, PlaceCategory.TRANSIT_STOP),
        (5, PlaceCategory.MARKET),
        (3, PlaceCategory.FAITH_CENTER),
        (2, PlaceCategory.ESL),
        (2, PlaceCategory.HEALTH),
    ):
        for i in range(n):
            loc = point_inside()
            places.append(
                Place(
                    id=f"{cat.value}-{i:03d}",
                    name=f"{cat.value.replace('_', ' ').title()} {i:03d}",
                    category=cat,
                    location=loc,
                    address=f"{i} {cat.value} way",
                )
            )
    for i in range(6):
        loc = point_inside()
        places.append(
            School(
                id=f"school-{i:03d}",
                name=f"School {i:03d}",
                category=PlaceCategory.SCHOOL,
                location=loc,
                address=f"{i} school st",
                is_public=i % 2 == 0,
                free_reduced_lunch_pct=float(20 + 10 * i),
            )
        )
    costs = [800.0 + 37.0 * i for i in range(n_apartments)]
    rng.shuffle(costs)
    for i in range(n_apartments):
        loc = point_inside()
        places.append(
            Apartment(
                id=f"apt-{i:03d}",
                name=f"Apartment {i:03d}",
                category=PlaceCategory.APARTMENT,
                location=loc,
                address=f"{i} apartment blvd",
                monthly_cost=costs[i],
            )
        )
    return Catalog(places=tuple(places), block_groups=tuple(groups), anchor=METRO_ANCHOR)


@pytest.fixture(scope="session")
def metro_catalog() -> Catalog:
    return make_metro_catalog()
