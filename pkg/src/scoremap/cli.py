"""Command-line entry points.

    scoremap generate --spec spec.json [--out score.json] [--midi out.mid] [--csv out.csv]
    scoremap map --spec config.json --out tile.bin [--png map.png] [--palette viridis] [--cache DIR]
    scoremap serve [--port N] [--cache DIR] [--ui DIR]

Port and cache directory fall back to the SCOREMAP_PORT and
SCOREMAP_CACHE environment variables.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .generators import GeneratorSpec, generate, generate_ifs_from_dict
from .mapping import TileCache, compute_map, config_from_dict, render_image, tile_to_bytes
from .scoreio import write_csv, write_json, write_midi


def _load_json(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _cmd_generate(args: argparse.Namespace) -> int:
    if args.ifs:
        score = generate_ifs_from_dict(_load_json(args.ifs))
        source = "explicit ifs"
    else:
        d = _load_json(args.spec)
        spec = GeneratorSpec(kind=d["kind"], params=dict(d.get("params", {})), seed=int(d.get("seed", 0)))
        score = generate(spec)
        source = spec.kind
    if args.out:
        Path(args.out).write_text(write_json(score))
    else:
        print(write_json(score))
    if args.midi:
        Path(args.midi).write_bytes(write_midi(score, args.ticks_per_quarter, args.tempo_bpm))
    if args.csv:
        Path(args.csv).write_text(write_csv(score))
    print(f"generated {len(score.notes)} notes from {source}", file=sys.stderr)
    return 0


def _cmd_map(args: argparse.Namespace) -> int:
    config = config_from_dict(_load_json(args.spec))
    cache = TileCache(args.cache) if args.cache else None
    tile = cache.get(config) if cache else None
    if tile is None:
        tile = compute_map(config)
        if cache:
            cache.put(tile)
    Path(args.out).write_bytes(tile_to_bytes(tile))
    if args.png:
        Path(args.png).write_bytes(render_image(tile, args.palette))
    print(
        f"map {tile.config_hash[:12]}: {config.width}x{config.height}, "
        f"values [{tile.value_min:g}, {tile.value_max:g}], {tile.compute_seconds:.2f}s",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    ui = str(Path(args.ui).resolve()) if args.ui else None
    if ui:
        print(f"serving UI from {ui}", file=sys.stderr)
    app = create_app(cache_dir=args.cache, ui_dir=ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="scoremap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a score from a generator spec")
    source = p_gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="generator spec JSON file")
    source.add_argument("--ifs", help="explicit-IFS JSON file (maps/depth/p0)")
    p_gen.add_argument("--out", help="write score JSON here (default: stdout)")
    p_gen.add_argument("--midi", help="also write a Standard MIDI File")
    p_gen.add_argument("--csv", help="also write CSV")
    p_gen.add_argument("--tempo-bpm", type=float, default=120.0)
    p_gen.add_argument("--ticks-per-quarter", type=int, default=480)
    p_gen.set_defaults(fn=_cmd_generate)

    p_map = sub.add_parser("map", help="compute a parametric map tile")
    p_map.add_argument("--spec", required=True, help="map config JSON file")
    p_map.add_argument("--out", required=True, help="tile output path")
    p_map.add_argument("--png", help="also render an image")
    p_map.add_argument("--palette", default="viridis", choices=("gray", "viridis"))
    p_map.add_argument("--cache", default=os.environ.get("SCOREMAP_CACHE"), help="tile cache directory")
    p_map.set_defaults(fn=_cmd_map)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=int(os.environ.get("SCOREMAP_PORT", "8000")))
    p_srv.add_argument("--cache", default=os.environ.get("SCOREMAP_CACHE", ".scoremap-cache"))
    p_srv.add_argument("--ui", help="static UI directory to mount at /")
    p_srv.set_defaults(fn=_cmd_serve)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
