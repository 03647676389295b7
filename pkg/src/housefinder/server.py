"""HTTP service exposing catalog layers, scoring, ranking, and submissions.

Responses are serialized through one deterministic JSON encoder (fixed key
order, repr-based float formatting) so identical inputs produce byte-identical
bodies. The catalog snapshot is swapped atomically on merge; every handler
reads the snapshot reference exactly once.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from fastapi import Body, FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware

from .catalog import (
    Apartment,
    BlockGroup,
    Catalog,
    CatalogStats,
    EmptyStatisticsError,
    Place,
    PlaceCategory,
    School,
    catalog_stats,
    default_alias_table,
    filter_affordable,
    load_alias_table,
    parse_blockgroups_csv,
    parse_places_csv,
    serialize_places_csv,
)
from .geo import BoundingBox, GeoPoint, GridSpec, grid_from_bbox
from .scoring import (
    CriterionId,
    PercentileTable,
    ProximityConfig,
    WeightVector,
    build_percentile_tables,
    rank_apartments,
    score_raster,
)
from .spatial import PlaceIndex, build_index
from .submissions import (
    Submission,
    SubmissionError,
    SubmissionStore,
    TableGeocoder,
    merge_pending,
    save_submission,
)

DATA_LAYERS = {
    "affordability": CriterionId.AFFORDABILITY,
    "crime": CriterionId.CRIME,
    "jobs": CriterionId.JOBS,
    "retail": CriterionId.RETAIL,
}


@dataclass(frozen=True)
class ServiceConfig:
    data_root: Path
    port: int = 8000
    anchor: GeoPoint = field(default_factory=lambda: GeoPoint(33.7748, -84.2963))
    raster_cell_size: float = 0.005
    affordability_ceiling: float = 3000.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "data_root", Path(self.data_root))
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port {self.port} outside [1, 65535]")
        if not self.raster_cell_size > 0:
            raise ValueError(f"raster_cell_size must be positive, got {self.raster_cell_size}")
        if not self.affordability_ceiling > 0:
            raise ValueError(
                f"affordability_ceiling must be positive, got {self.affordability_ceiling}"
            )


@dataclass(frozen=True)
class _Snapshot:
    """Everything a request handler needs, rebuilt as one unit on merge."""

    catalog: Catalog
    index: PlaceIndex
    tables: PercentileTable
    bbox: Optional[BoundingBox]


def _study_bbox(catalog: Catalog) -> Optional[BoundingBox]:
    lats: list[float] = []
    lons: list[float] = []
    for bg in catalog.block_groups:
        for v in bg.boundary:
            lats.append(v.lat)
            lons.append(v.lon)
    for p in catalog.places:
        lats.append(p.location.lat)
        lons.append(p.location.lon)
    if not lats:
        return None
    return BoundingBox(min(lats), max(lats), min(lons), max(lons))


def _snapshot(catalog: Catalog) -> _Snapshot:
    return _Snapshot(
        catalog=catalog,
        index=build_index(catalog),
        tables=build_percentile_tables(catalog.block_groups),
        bbox=_study_bbox(catalog),
    )


def load_catalog(config: ServiceConfig) -> Catalog:
    """Read places/blockgroups/aliases from the data root; every file is
    optional so an empty directory serves an empty catalog."""
    root = config.data_root
    aliases = default_alias_table()
    alias_path = root / "aliases.csv"
    if alias_path.exists():
        aliases = load_alias_table(alias_path.read_text(encoding="utf-8"))
    places: list[Place] = []
    places_path = root / "places.csv"
    if places_path.exists():
        places = parse_places_csv(places_path.read_text(encoding="utf-8"), aliases)
    groups: list[BlockGroup] = []
    bg_path = root / "blockgroups.csv"
    if bg_path.exists():
        groups = filter_affordable(
            parse_blockgroups_csv(bg_path.read_text(encoding="utf-8")),
            config.affordability_ceiling,
        )
    return Catalog(places=tuple(places), block_groups=tuple(groups), anchor=config.anchor)


def _json(payload: Any, status_code: int = 200) -> Response:
    body = json.dumps(payload, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
    return Response(content=body, status_code=status_code, media_type="application/json")


def _error(status_code: int, field_name: Optional[str], message: str) -> Response:
    payload: dict[str, Any] = {"error": message}
    if field_name is not None:
        payload["field"] = field_name
    return _json(payload, status_code=status_code)


def _place_properties(p: Place) -> dict[str, Any]:
    props: dict[str, Any] = {
        "id": p.id,
        "name": p.name,
        "category": p.category.value,
        "address": p.address,
    }
    for key in ("phone", "zipcode", "website", "faith_tradition"):
        value = getattr(p, key)
        if value is not None:
            props[key] = value
    if isinstance(p, Apartment):
        for key in ("monthly_cost", "anchor_distance", "travel_minutes"):
            value = getattr(p, key)
            if value is not None:
                props[key] = value
    if isinstance(p, School):
        props["is_public"] = p.is_public
        for key in ("free_reduced_lunch_pct", "rating"):
            value = getattr(p, key)
            if value is not None:
                props[key] = value
    return props


def _point_feature(p: Place) -> dict[str, Any]:
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [p.location.lon, p.location.lat]},
        "properties": _place_properties(p),
    }


def _polygon_feature(bg: BlockGroup, value: float, percentile: float) -> dict[str, Any]:
    ring = [[v.lon, v.lat] for v in bg.boundary]
    if ring[0] != ring[-1]:
        ring.append(ring[0])
    return {
        "type": "Feature",
        "geometry": {"type": "Polygon", "coordinates": [ring]},
        "properties": {"id": bg.id, "value": value, "percentile": percentile},
    }


def _breakdown_payload(bd) -> dict[str, Any]:
    criteria = {
        c.value: {
            "score": contrib.score,
            "effective_weight": contrib.effective_weight,
        }
        for c, contrib in bd.criteria.items()
    }
    return {
        "composite": bd.composite,
        "completeness": bd.completeness,
        "criteria": criteria,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="housefinder", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    state_lock = threading.Lock()  # serializes submissions + merges
    app.state.config = config
    app.state.snapshot = _snapshot(load_catalog(config))
    app.state.store = SubmissionStore(config.data_root / "submissions")
    geocode_path = config.data_root / "geocodes.csv"
    if geocode_path.exists():
        app.state.geocoder = TableGeocoder.from_csv(geocode_path.read_text(encoding="utf-8"))
    else:
        app.state.geocoder = TableGeocoder({})

    @app.get("/api/health")
    def health() -> Response:
        snap: _Snapshot = app.state.snapshot
        return _json(
            {
                "status": "ok",
                "catalog_loaded": True,
                "place_count": len(snap.catalog.places),
            }
        )

    @app.get("/api/places")
    def places(category: str) -> Response:
        snap: _Snapshot = app.state.snapshot
        try:
            cat = PlaceCategory(category)
        except ValueError:
            return _error(400, "category", f"unknown category {category!r}")
        features = [_point_feature(p) for p in snap.catalog.places_in_category(cat)]
        return _json({"type": "FeatureCollection", "features": features})

    @app.get("/api/layers/{name}")
    def layer(name: str) -> Response:
        snap: _Snapshot = app.state.snapshot
        criterion = DATA_LAYERS.get(name)
        if criterion is None:
            return _error(404, "layer", f"unknown layer {name!r}")
        table = snap.tables.get(criterion, {})
        raw_value = {
            CriterionId.AFFORDABILITY: lambda bg: bg.est_monthly_cost,
            CriterionId.JOBS: lambda bg: bg.jobs_index,
            CriterionId.RETAIL: lambda bg: bg.retail_index,
            CriterionId.CRIME: lambda bg: bg.crime_index,
        }[criterion]
        features = []
        for bg in sorted(snap.catalog.block_groups, key=lambda g: g.id):
            pct = table.get(bg.id)
            if pct is None:
                continue  # no data for this layer (e.g. missing crime index)
            features.append(_polygon_feature(bg, raw_value(bg), pct))
        return _json({"type": "FeatureCollection", "features": features})

    @app.post("/api/score")
    def score(payload: dict = Body(...)) -> Response:
        snap: _Snapshot = app.state.snapshot
        raw_weights = payload.get("weights")
        if not isinstance(raw_weights, dict) or not raw_weights:
            return _error(422, "weights", "weights must be a non-empty object")
        for key, value in raw_weights.items():
            if key not in {c.value for c in CriterionId}:
                return _error(422, f"weights.{key}", f"unknown criterion {key!r}")
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                return _error(422, f"weights.{key}", "weight must be a number")
            if not math.isfinite(float(value)) or float(value) < 0:
                return _error(422, f"weights.{key}", "weight must be finite and >= 0")
        if not any(float(v) > 0 for v in raw_weights.values()):
            return _error(422, "weights", "at least one weight must be positive")
        weights = WeightVector.from_mapping(raw_weights)

        cell_size = payload.get("cell_size", app.state.config.raster_cell_size)
        if not isinstance(cell_size, (int, float)) or isinstance(cell_size, bool) or not (
            math.isfinite(float(cell_size)) and float(cell_size) > 0
        ):
            return _error(422, "cell_size", "cell_size must be a positive number")

        if snap.bbox is None:
            return _error(409, None, "catalog has no spatial extent to score")

        spec = grid_from_bbox(snap.bbox, float(cell_size))
        cfg = ProximityConfig()
        raster = score_raster(spec, weights, snap.catalog, snap.index, snap.tables, cfg)
        ranked = rank_apartments(
            snap.catalog.apartments, weights, snap.catalog, snap.index, snap.tables, cfg
        )
        names = {p.id: p.name for p in snap.catalog.places}
        ranking = [
            {
                "id": r.apartment_id,
                "name": names[r.apartment_id],
                "rank": r.rank,
                "composite": r.composite,
                "completeness": r.breakdown.completeness,
                "breakdown": _breakdown_payload(r.breakdown),
            }
            for r in ranked
        ]
        body = {
            "raster": {
                "bbox": {
                    "min_lat": spec.bbox.min_lat,
                    "max_lat": spec.bbox.max_lat,
                    "min_lon": spec.bbox.min_lon,
                    "max_lon": spec.bbox.max_lon,
                },
                "rows": spec.rows,
                "cols": spec.cols,
                "cell_size": spec.cell_size,
                "values": list(raster.values),
            },
            "ranking": ranking,
        }
        return _json(body)

    @app.post("/api/apartments")
    def submit_apartment(payload: dict = Body(...)) -> Response:
        for field_name in ("name", "address"):
            value = payload.get(field_name)
            if not isinstance(value, str) or not value.strip():
                return _error(422, field_name, f"{field_name} is mandatory")
        rent = payload.get("rent")
        if rent is not None and (not isinstance(rent, (int, float)) or isinstance(rent, bool)):
            return _error(422, "rent", "rent must be a number")
        try:
            submission = Submission(
                name=payload["name"],
                address=payload["address"],
                phone=payload.get("phone"),
                website=payload.get("website"),
                monthly_rent=float(rent) if rent is not None else None,
            )
        except SubmissionError as exc:
            field_name = "rent" if "rent" in str(exc) else "submission"
            return _error(422, field_name, str(exc))
        with state_lock:
            filename = save_submission(app.state.store, submission)
        return _json({"filename": filename}, status_code=201)

    @app.post("/api/admin/merge")
    def admin_merge() -> Response:
        with state_lock:
            snap: _Snapshot = app.state.snapshot
            catalog, report = merge_pending(app.state.store, snap.catalog, app.state.geocoder)
            app.state.snapshot = _snapshot(catalog)
            # Persist so merged listings survive a restart.
            places_path = app.state.config.data_root / "places.csv"
            places_path.write_text(serialize_places_csv(catalog.places), encoding="utf-8")
        return _json(
            {
                "added": [[f, pid] for f, pid in report.added],
                "duplicates": [[f, pid] for f, pid in report.duplicates],
                "rejected": [[f, reason] for f, reason in report.rejected],
            }
        )

    @app.get("/api/stats")
    def stats() -> Response:
        snap: _Snapshot = app.state.snapshot
        try:
            s: CatalogStats = catalog_stats(snap.catalog.apartments)
        except EmptyStatisticsError:
            return Response(status_code=204)
        return _json(
            {
                "count": s.count,
                "median_cost": s.median_cost,
                "stddev_cost": s.stddev_cost,
                "unpriced": s.unpriced,
            }
        )

    return app
