"""CLI entry point: `python -m housefinder --data-dir <dir>`.

Every flag has an environment-variable equivalent (HOUSEFINDER_*); flags win.
"""

from __future__ import annotations

import argparse
import os

import uvicorn

from .geo import GeoPoint
from .server import ServiceConfig, create_app


def _env(name: str, default: str) -> str:
    return os.environ.get(f"HOUSEFINDER_{name}", default)


def build_config(argv: list[str] | None = None) -> tuple[ServiceConfig, str]:
    parser = argparse.ArgumentParser(prog="housefinder")
    parser.add_argument("--data-dir", default=_env("DATA_DIR", "data"))
    parser.add_argument("--port", type=int, default=int(_env("PORT", "8000")))
    parser.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    parser.add_argument("--anchor-lat", type=float, default=float(_env("ANCHOR_LAT", "33.7748")))
    parser.add_argument("--anchor-lon", type=float, default=float(_env("ANCHOR_LON", "-84.2963")))
    parser.add_argument("--cell-size", type=float, default=float(_env("CELL_SIZE", "0.005")))
    parser.add_argument("--ceiling", type=float, default=float(_env("CEILING", "3000")))
    args = parser.parse_args(argv)
    config = ServiceConfig(
        data_root=args.data_dir,
        port=args.port,
        anchor=GeoPoint(args.anchor_lat, args.anchor_lon),
        raster_cell_size=args.cell_size,
        affordability_ceiling=args.ceiling,
    )
    return config, args.host


def main(argv: list[str] | None = None) -> None:
    config, host = build_config(argv)
    uvicorn.run(create_app(config), host=host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
