"""Acceptance gate: one test per release criterion, each timed against its
budget and reporting a PASS line. Run with `pytest tests/test_acceptance.py -v -s`.
"""

import math
import random
import re
import time
from contextlib import contextmanager
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from fastapi.testclient import TestClient

from housefinder.catalog import (
    Apartment,
    Catalog,
    Place,
    PlaceCategory,
    parse_blockgroups_csv,
    filter_affordable,
)
from housefinder.geo import (
    EARTH_RADIUS_M,
    GeoPoint,
    grid_from_bbox,
    haversine_distance,
)
from housefinder.scoring import (
    CRITERION_ORDER,
    CriterionId,
    ProximityConfig,
    WeightVector,
    build_percentile_tables,
    composite_score,
    criterion_score,
    percentile_scores,
    proximity_score,
    rank_apartments,
    score_raster,
)
from housefinder.spatial import build_index
from housefinder.submissions import (
    Submission,
    SubmissionStore,
    TableGeocoder,
    canonical_bytes,
    merge_pending,
    save_submission,
    submission_filename,
)
from housefinder.server import ServiceConfig, create_app

from conftest import METRO_BBOX, make_metro_catalog
from test_api import BLOCKGROUPS_CSV, GEOCODES_CSV, PLACES_CSV
from test_submissions import reference_md5


@contextmanager
def budget(name: str, seconds: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok and elapsed < seconds else "FAIL"
        print(f"{status} {name} ({elapsed:.2f}s, budget {seconds:.0f}s)")
        if ok:
            assert elapsed < seconds, f"{name} exceeded budget: {elapsed:.2f}s"


def test_criterion_1_affordability_formula_and_filter():
    with budget("criterion 1: affordability formula and pre-filter", 1.0):
        pcts = [0.25, 0.5, 0.75, 0.3, 0.45, 0.6, 0.85, 0.2]
        rows = []
        for i in range(49):
            pct = pcts[i % 8]
            income = 20000.0 + 2500.0 * i
            ring = f"{33.0 + i * 0.01} -84.0;{33.0 + i * 0.01} -83.9;{33.005 + i * 0.01} -83.9"
            rows.append(f"bg{i:02d},{ring},{pct},{income},1.0,1.0,")
        # Boundary row: exactly 3000.00 per month, which must be retained.
        rows.append("bg49,33.9 -84.0;33.9 -83.9;33.95 -83.9,0.25,144000.0,1.0,1.0,")
        csv_text = (
            "GeoID,Boundary,PctIncomeHousing,MedianIncome,JobsIndex,RetailIndex,CrimeIndex\n"
            + "\n".join(rows)
            + "\n"
        )
        groups = parse_blockgroups_csv(csv_text)
        assert len(groups) == 50

        expected = {}
        for i in range(49):
            expected[f"bg{i:02d}"] = pcts[i % 8] * (20000.0 + 2500.0 * i) / 12.0
        expected["bg49"] = 0.25 * 144000.0 / 12.0
        for bg in groups:
            want = expected[bg.id]
            assert abs(bg.est_monthly_cost - want) <= 1e-9 * max(1.0, abs(want))

        kept = filter_affordable(groups)
        want_kept = [bg.id for bg in groups if bg.est_monthly_cost <= 3000.0]
        assert [bg.id for bg in kept] == want_kept
        assert "bg49" in want_kept  # boundary 3000.00 retained
        assert len(want_kept) < 50  # some rows really are above the ceiling


def test_criterion_2_percentile_oracle():
    with budget("criterion 2: percentile normalization vs brute-force oracle", 5.0):
        rng = random.Random(12)
        for _ in range(1000):
            n = rng.randint(1, 200)
            values = [(f"k{i}", float(rng.randint(-30, 30))) for i in range(n)]
            got = percentile_scores(values)
            for key, v in values:
                below = sum(1 for _, u in values if u < v)
                equal = sum(1 for _, u in values if u == v)
                assert got[key] == (below + 0.5 * equal) / n
                assert 0.0 < got[key] < 1.0


def test_criterion_3_spatial_index_oracle():
    with budget("criterion 3: spatial index vs linear-scan oracle", 30.0):
        rng = random.Random(31)
        places = [
            Place(
                id=f"p{i:05d}",
                name=f"p{i:05d}",
                category=PlaceCategory.TRANSIT_STOP,
                location=GeoPoint(rng.uniform(33.0, 35.0), rng.uniform(-85.0, -83.0)),
                address="",
            )
            for i in range(10_000)
        ]
        catalog = Catalog(places=tuple(places), block_groups=(), anchor=GeoPoint(34, -84))
        index = build_index(catalog)
        lats = np.array([p.location.lat for p in places])
        lons = np.array([p.location.lon for p in places])
        ids = [p.id for p in places]

        def oracle_distances(q: GeoPoint) -> np.ndarray:
            p1 = np.radians(q.lat)
            p2 = np.radians(lats)
            a = (
                np.sin(np.radians(lats - q.lat) / 2) ** 2
                + np.cos(p1) * np.cos(p2) * np.sin(np.radians(lons - q.lon) / 2) ** 2
            )
            return 2 * EARTH_RADIUS_M * np.arcsin(np.minimum(1.0, np.sqrt(a)))

        for _ in range(1000):
            q = GeoPoint(rng.uniform(33.0, 35.0), rng.uniform(-85.0, -83.0))
            d = oracle_distances(q)

            got = index.nearest(q, PlaceCategory.TRANSIT_STOP)
            dmin = d.min()
            want_id = min(ids[i] for i in np.flatnonzero(d == dmin))
            assert got is not None and got[0] == want_id
            assert math.isclose(got[1], float(dmin), rel_tol=1e-9, abs_tol=1e-9)

            radius = rng.choice([800.0, 1609.34, 8000.0])
            got_r = index.within_radius(q, radius, PlaceCategory.TRANSIT_STOP)
            want_r = sorted(
                ((ids[i], float(d[i])) for i in np.flatnonzero(d <= radius)),
                key=lambda t: (t[1], t[0]),
            )
            assert [g[0] for g in got_r] == [w[0] for w in want_r]
            for g, w in zip(got_r, want_r):
                assert math.isclose(g[1], w[1], rel_tol=1e-9, abs_tol=1e-9)


@pytest.fixture(scope="module")
def metro_scene():
    catalog = make_metro_catalog()
    return catalog, build_index(catalog), build_percentile_tables(catalog.block_groups)


def test_criterion_4_ranking_invariances(metro_scene):
    with budget("criterion 4: ranking invariances", 5.0):
        catalog, index, tables = metro_scene
        cfg = ProximityConfig()
        apartments = list(catalog.apartments)
        assert len(apartments) == 50

        # (a) weight scaling changes nothing, including composite values
        base = {
            "affordability": 3.0,
            "jobs": 2.0,
            "retail": 1.0,
            "crime": 1.0,
            "prox_transit": 3.0,
            "prox_schools": 2.0,
            "prox_markets": 1.0,
            "prox_anchor": 1.0,
        }
        reference = rank_apartments(
            apartments, WeightVector.from_mapping(base), catalog, index, tables, cfg
        )
        for c in (0.1, 3.0, 10.0):
            scaled = WeightVector.from_mapping({k: v * c for k, v in base.items()})
            assert rank_apartments(apartments, scaled, catalog, index, tables, cfg) == reference

        # (b) every one-hot vector reproduces that criterion's own ordering
        priced = [(a.id, -a.monthly_cost) for a in apartments]
        own_afford = percentile_scores(priced)
        for criterion in CRITERION_ORDER:
            one_hot = WeightVector({criterion: 1.0})
            ranked = rank_apartments(apartments, one_hot, catalog, index, tables, cfg)
            scores = {}
            for a in apartments:
                if criterion is CriterionId.AFFORDABILITY:
                    scores[a.id] = own_afford[a.id]
                else:
                    scores[a.id] = criterion_score(a.location, criterion, catalog, index, tables, cfg)
            assert all(s is not None for s in scores.values())
            names = {a.id: a.name for a in apartments}
            want = sorted(apartments, key=lambda a: (-scores[a.id], names[a.id], a.id))
            assert [r.apartment_id for r in ranked] == [a.id for a in want]

        # (c) tie-break determinism with duplicated apartments
        twin_a = Apartment(
            id="twin-b", name="Twin", category=PlaceCategory.APARTMENT,
            location=GeoPoint(33.75, -84.35), address="", monthly_cost=999.0,
        )
        twin_b = Apartment(
            id="twin-a", name="Twin", category=PlaceCategory.APARTMENT,
            location=GeoPoint(33.75, -84.35), address="", monthly_cost=999.0,
        )
        with_twins = apartments + [twin_a, twin_b]
        w = WeightVector.from_mapping(base)
        r1 = rank_apartments(with_twins, w, catalog, index, tables, cfg)
        r2 = rank_apartments(with_twins, w, catalog, index, tables, cfg)
        assert r1 == r2
        twins = [r for r in r1 if r.apartment_id.startswith("twin-")]
        assert [t.apartment_id for t in twins] == ["twin-a", "twin-b"]
        assert twins[0].rank + 1 == twins[1].rank


def test_criterion_5_raster_contract(metro_scene):
    with budget("criterion 5: raster contract", 10.0):
        catalog, index, tables = metro_scene
        cfg = ProximityConfig()
        spec = grid_from_bbox(METRO_BBOX, 0.005)
        assert (spec.rows, spec.cols) == (20, 20)
        w = WeightVector.from_mapping(
            {"affordability": 3, "crime": 1, "prox_transit": 3, "prox_markets": 1}
        )
        from housefinder.geo import cell_center

        grid = score_raster(spec, w, catalog, index, tables, cfg)
        for v in grid.values:
            assert v is None or 0.0 <= v <= 1.0
        for row in range(spec.rows):
            for col in range(spec.cols):
                want = composite_score(
                    cell_center(spec, row, col), w, catalog, index, tables, cfg
                ).composite
                assert grid.at(row, col) == want
        again = score_raster(spec, w, catalog, index, tables, cfg)
        parallel = score_raster(spec, w, catalog, index, tables, cfg, workers=6)
        assert grid.values == again.values == parallel.values


def test_criterion_6_proximity_semantics():
    with budget("criterion 6: proximity decay semantics", 1.0):
        d_max = 1609.34  # one mile
        # A straight line of probes walking away from a single stop.
        stop = GeoPoint(33.75, -84.35)
        catalog = Catalog(
            places=(
                Place(
                    id="stop", name="stop", category=PlaceCategory.TRANSIT_STOP,
                    location=stop, address="",
                ),
            ),
            block_groups=(),
            anchor=stop,
        )
        index = build_index(catalog)
        cfg = ProximityConfig()
        tables = build_percentile_tables(())

        def transit_score(p: GeoPoint) -> float:
            s = criterion_score(p, CriterionId.PROX_TRANSIT, catalog, index, tables, cfg)
            assert s is not None
            return s

        assert transit_score(stop) == 1.0
        deg_per_meter = 1.0 / (EARTH_RADIUS_M * math.pi / 180.0)
        previous = 1.0
        for meters in range(100, 1600, 100):
            p = GeoPoint(33.75 + meters * deg_per_meter, -84.35)
            s = transit_score(p)
            assert 0.0 < s < previous  # strictly decreasing inside the mile
            previous = s
        for meters in (1609.34, 1700.0, 5000.0):
            p = GeoPoint(33.75 + meters * deg_per_meter, -84.35)
            d = haversine_distance(stop, p)
            if d >= d_max:
                assert transit_score(p) == 0.0
        assert proximity_score(d_max, d_max) == 0.0
        assert proximity_score(d_max * 2, d_max) == 0.0


def test_criterion_7_submission_protocol(tmp_path):
    with budget("criterion 7: submission protocol", 5.0):
        grammar = re.compile(r"^[0-9]{8}T[0-9]{6}Z-[0-9a-f]{32}\.csv$")
        rng = random.Random(71)
        t0 = datetime(2016, 9, 25, 12, 0, 0, tzinfo=timezone.utc)
        for i in range(1000):
            s = Submission(
                name=f"Apt {rng.randint(0, 10**9)}",
                address=f"{i} Road",
                phone=str(rng.randint(10**6, 10**7)) if i % 3 == 0 else None,
                website=f"https://x{i}.example" if i % 5 == 0 else None,
                monthly_rent=float(rng.randint(500, 2000)) if i % 2 == 0 else None,
            )
            assert grammar.match(submission_filename(s, t0 + timedelta(seconds=i)))

        import hashlib

        assert hashlib.md5(b"").hexdigest() == reference_md5(b"")
        sample = Submission(name="Sample", address="1 Road", monthly_rent=750.0)
        assert reference_md5(canonical_bytes(sample)) in submission_filename(sample, t0)

        store = SubmissionStore(tmp_path / "subs")
        twin = Submission(name="Twin", address="1 main st")
        f1 = save_submission(store, twin, t0)
        f2 = save_submission(store, twin, t0)
        assert f1 == f2 and len(store.pending_files()) == 1

        save_submission(store, Submission(name="Lost", address="nowhere"), t0 + timedelta(seconds=1))
        geocoder = TableGeocoder({"1 main st": GeoPoint(33.8, -84.3)})
        empty = Catalog(places=(), block_groups=(), anchor=GeoPoint(33.75, -84.35))
        merged, report = merge_pending(store, empty, geocoder)
        assert len(report.added) == 1
        assert len(report.rejected) == 1 and "geocode" in report.rejected[0][1]
        assert (store.rejected / report.rejected[0][0]).exists()
        merged2, report2 = merge_pending(store, merged, geocoder)
        assert merged2.places == merged.places
        assert report2.added == () and report2.rejected == ()


def test_criterion_8_api_contract(tmp_path):
    with budget("criterion 8: API contract", 10.0):
        (tmp_path / "places.csv").write_text(PLACES_CSV)
        (tmp_path / "blockgroups.csv").write_text(BLOCKGROUPS_CSV)
        (tmp_path / "geocodes.csv").write_text(GEOCODES_CSV)
        client = TestClient(create_app(ServiceConfig(data_root=tmp_path)))

        # /api/places: categories, faith tradition, unknown category
        faith = client.get("/api/places", params={"category": "faith_center"}).json()
        assert faith["features"][0]["properties"]["faith_tradition"] == "synagogue"
        assert client.get("/api/places", params={"category": "banana"}).status_code == 400

        # /api/layers/jobs: Hazen thirds over the 3 retained groups
        jobs = client.get("/api/layers/jobs").json()
        assert [f["properties"]["percentile"] for f in jobs["features"]] == [1 / 6, 1 / 2, 5 / 6]

        # /api/score: scale invariance is byte-identical
        base = {"affordability": 2, "prox_transit": 3, "jobs": 1}
        r1 = client.post("/api/score", json={"weights": base, "cell_size": 0.025})
        r2 = client.post(
            "/api/score",
            json={"weights": {k: v * 10 for k, v in base.items()}, "cell_size": 0.025},
        )
        assert r1.status_code == 200
        assert r1.content == r2.content

        # /api/apartments: mandatory address
        missing = client.post("/api/apartments", json={"name": "X"})
        assert missing.status_code == 422 and missing.json()["field"] == "address"
        ok = client.post("/api/apartments", json={"name": "X", "address": "77 new st"})
        assert ok.status_code == 201

        # /api/stats on the [500, 1500] fixture
        stats = client.get("/api/stats").json()
        assert (stats["count"], stats["median_cost"], stats["stddev_cost"]) == (2, 1000.0, 500.0)
