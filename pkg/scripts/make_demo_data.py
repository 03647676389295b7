#!/usr/bin/env python3
"""Generate a self-contained demo data directory (places, block groups,
geocoder table) that the service can serve immediately.

Usage: python scripts/make_demo_data.py --out data [--seed 7] [--apartments 40]
"""

from __future__ import annotations

import argparse
import csv
import random
from pathlib import Path

LAT0, LAT1 = 33.70, 33.80
LON0, LON1 = -84.40, -84.30


def ring(lat0: float, lat1: float, lon0: float, lon1: float) -> str:
    lat0, lat1, lon0, lon1 = (round(v, 6) for v in (lat0, lat1, lon0, lon1))
    return f"{lat0} {lon0};{lat0} {lon1};{lat1} {lon1};{lat1} {lon0}"


def write_blockgroups(path: Path) -> None:
    rows = []
    k = 0
    for i in range(4):
        for j in range(2):
            lat0 = LAT0 + 0.025 * i
            lon0 = LON0 + 0.05 * j
            rows.append(
                [
                    f"bg{k:02d}",
                    ring(lat0, lat0 + 0.025, lon0, lon0 + 0.05),
                    f"{0.2 + 0.03 * k:.2f}",
                    f"{30000 + 7000 * ((k * 3) % 8)}",
                    f"{10 + ((k * 5) % 8) * 7}",
                    f"{4 + ((k * 3) % 8) * 9}",
                    f"{1 + ((k * 7) % 8) * 2}" if k != 3 else "",
                ]
            )
            k += 1
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["GeoID", "Boundary", "PctIncomeHousing", "MedianIncome",
             "JobsIndex", "RetailIndex", "CrimeIndex"]
        )
        writer.writerows(rows)


def write_places(path: Path, geocodes: Path, seed: int, n_apartments: int) -> None:
    rng = random.Random(seed)

    def point() -> tuple[float, float]:
        return round(rng.uniform(LAT0 + 0.002, LAT1 - 0.002), 6), round(
            rng.uniform(LON0 + 0.002, LON1 - 0.002), 6
        )

    rows = []
    addresses = []
    for i in range(14):
        lat, lon = point()
        rows.append([f"Stop {i:02d}", "transit stop", lat, lon, f"{i} Transit Way", "", "30300"])
    for i in range(6):
        lat, lon = point()
        rows.append(
            [f"School {i:02d}", "school", lat, lon, f"{i} School St", "", "30301",
             "", "", "true" if i % 2 == 0 else "false", f"{20 + 10 * i}", f"{5 + i % 5}"]
        )
    for i, name in enumerate(["Zamzam Foods", "Global Market", "Corner Grocery", "Intl Foods", "Fresh Point"]):
        lat, lon = point()
        rows.append([name, "Grocery/supermarket", lat, lon, f"{i} Market Rd", "", "30302"])
    for name, kind in [("First Church", "church"), ("Al-Farooq", "mosque"), ("Temple Beth", "synagogue")]:
        lat, lon = point()
        rows.append([name, kind, lat, lon, "1 Faith Ln", "", "30303"])
    for i in range(2):
        lat, lon = point()
        rows.append([f"ESL Center {i}", "ESL", lat, lon, f"{i} Class Ave", "", "30304"])
    for i in range(n_apartments):
        lat, lon = point()
        address = f"{100 + i} Peachtree St"
        cost = rng.randrange(550, 2900, 25)
        rows.append(
            [f"Residences {i:02d}", "Real estate", lat, lon, address,
             f"(404) 555-{1000 + i:04d}", "30305", f"https://res{i:02d}.example", cost]
        )
        addresses.append((address, lat, lon))

    header = ["Place Name", "Place Type", "latitude", "longitude", "Place Address",
              "Phone", "Zipcode", "Website", "Monthly Cost", "Is Public",
              "Free Reduced Lunch Pct", "Rating"]
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row + [""] * (len(header) - len(row)))

    with geocodes.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["address", "lat", "lon"])
        # A few spare geocodable addresses for trying the submission form.
        for i in range(20):
            lat, lon = point()
            writer.writerow([f"{i} New Listing Rd", lat, lon])
        for address, lat, lon in addresses:
            writer.writerow([address, lat, lon])


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--apartments", type=int, default=40)
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_blockgroups(out / "blockgroups.csv")
    write_places(out / "places.csv", out / "geocodes.csv", args.seed, args.apartments)
    print(f"wrote demo data to {out}/")


if __name__ == "__main__":
    main()
