#!/usr/bin/env python3
"""Score a data directory offline and print the top-ranked apartments.

Usage: python scripts/rank_demo.py --data-dir data [--top 10]
       python scripts/rank_demo.py --data-dir data --weights affordability=3,prox_transit=3
"""

from __future__ import annotations

import argparse

from housefinder.geo import GeoPoint
from housefinder.scoring import (
    DEFAULT_WEIGHT_PRESET,
    ProximityConfig,
    WeightVector,
    build_percentile_tables,
    rank_apartments,
)
from housefinder.server import ServiceConfig, load_catalog
from housefinder.spatial import build_index


def parse_weights(text: str) -> WeightVector:
    pairs = [p.split("=") for p in text.split(",") if p]
    return WeightVector.from_mapping({k.strip(): float(v) for k, v in pairs})


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--data-dir", default="data")
    parser.add_argument("--top", type=int, default=10)
    parser.add_argument("--weights", default=None,
                        help="comma-separated criterion=weight pairs")
    parser.add_argument("--anchor-lat", type=float, default=33.7748)
    parser.add_argument("--anchor-lon", type=float, default=-84.2963)
    args = parser.parse_args()

    config = ServiceConfig(
        data_root=args.data_dir, anchor=GeoPoint(args.anchor_lat, args.anchor_lon)
    )
    catalog = load_catalog(config)
    index = build_index(catalog)
    tables = build_percentile_tables(catalog.block_groups)
    weights = parse_weights(args.weights) if args.weights else DEFAULT_WEIGHT_PRESET

    ranked = rank_apartments(
        catalog.apartments, weights, catalog, index, tables, ProximityConfig()
    )
    names = {p.id: p.name for p in catalog.places}
    print(f"{'rank':>4}  {'score':>7}  {'complete':>8}  name")
    for r in ranked[: args.top]:
        score = "--" if r.composite is None else f"{r.composite:.4f}"
        print(f"{r.rank:>4}  {score:>7}  {r.breakdown.completeness:>8.2f}  {names[r.apartment_id]}")


if __name__ == "__main__":
    main()
