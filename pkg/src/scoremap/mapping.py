"""Feature-colored maps over generator parameter spaces.

A MapConfig fixes some of a generator's parameters and spreads the rest
along an N-dimensional Hilbert curve; each pixel of the resulting tile
is one full generator evaluation: pixel -> unit-square position ->
Hilbert cell -> parameter vector -> score -> feature value.  Computing
a tile is therefore linear in its pixel count, while looking up the
parameters behind a pixel costs only the Hilbert arithmetic,
logarithmic in the number of addressable parameter cells.

Tiles store raw feature values; color normalization happens at render
time so tiles can be re-colored without recomputation.  A disk cache
keyed by a hash of the canonical config JSON (including the engine
version) makes repeated exploration cheap.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import ENGINE_VERSION
from .errors import BudgetError, SpecError
from .generators import GeneratorSpec, descriptors, generate
from .hilbert import window_to_params
from .score import FEATURES, extract_feature

PIXEL_BUDGET = 1 << 22

Window = tuple[float, float, float, float]  # (u0, v0, u1, v1)

# Instrumentation: generator evaluations performed by compute_map.
_evals = 0


def reset_eval_count() -> None:
    global _evals
    _evals = 0


def eval_count() -> int:
    return _evals


@dataclass(frozen=True)
class MapConfig:
    """One view into a generator's parameter space.

    ``mapped`` lists the explored parameters in axis order; every other
    parameter of the kind must appear in ``fixed``.  ``window`` is the
    zoom rectangle within the unit square; m2/mN are the 2-D and N-D
    Hilbert orders (m2 defaults to the pixel resolution, mN to 8 bits
    per parameter).
    """

    kind: str
    mapped: tuple[str, ...]
    fixed: dict[str, float] = field(default_factory=dict)
    window: Window = (0.0, 0.0, 1.0, 1.0)
    width: int = 64
    height: int = 64
    feature: str = "note_count"
    m2: int | None = None  # resolved to the pixel resolution when omitted
    mN: int = 8

    def __post_init__(self):
        if self.m2 is None:
            m2 = max(1, int(np.ceil(np.log2(max(self.width, self.height)))))
            object.__setattr__(self, "m2", m2)

    def resolved_m2(self) -> int:
        return self.m2


def validate_config(config: MapConfig) -> None:
    table = descriptors(config.kind)
    names = {d.name for d in table}
    mapped = list(config.mapped)
    if not mapped:
        raise SpecError("map config: need at least one mapped parameter")
    if len(set(mapped)) != len(mapped):
        raise SpecError("map config: duplicate mapped parameter")
    overlap = set(mapped) & set(config.fixed)
    if overlap:
        raise SpecError(f"map config: parameters both mapped and fixed: {sorted(overlap)}")
    missing = names - set(mapped) - set(config.fixed)
    unknown = (set(mapped) | set(config.fixed)) - names
    if missing:
        raise SpecError(f"map config: parameters neither mapped nor fixed: {sorted(missing)}")
    if unknown:
        raise SpecError(f"map config: unknown parameters: {sorted(unknown)}")
    u0, v0, u1, v1 = config.window
    if not (0.0 <= u0 < u1 <= 1.0 and 0.0 <= v0 < v1 <= 1.0):
        raise SpecError(f"map config: bad window {config.window}")
    if config.width < 1 or config.height < 1:
        raise SpecError("map config: width and height must be >= 1")
    if config.width * config.height > PIXEL_BUDGET:
        raise BudgetError(f"map config: {config.width}x{config.height} exceeds pixel budget {PIXEL_BUDGET}")
    if config.feature not in FEATURES:
        raise SpecError(f"map config: unknown feature {config.feature!r}")
    m2 = config.resolved_m2()
    if m2 < 1 or m2 * 2 > 62:
        raise SpecError(f"map config: m2={m2} out of range")
    if config.mN < 1 or config.mN * len(mapped) > 62:
        raise SpecError(f"map config: mN={config.mN} too large for {len(mapped)} mapped parameters")


@dataclass(frozen=True)
class MapTile:
    config: MapConfig
    config_hash: str
    values: np.ndarray  # (height, width) float64, row-major
    value_min: float
    value_max: float
    compute_seconds: float


def config_to_dict(config: MapConfig) -> dict:
    return {
        "kind": config.kind,
        "mapped": list(config.mapped),
        "fixed": dict(sorted(config.fixed.items())),
        "window": list(config.window),
        "width": config.width,
        "height": config.height,
        "feature": config.feature,
        "m2": config.resolved_m2(),
        "mN": config.mN,
    }


def config_from_dict(d: dict) -> MapConfig:
    return MapConfig(
        kind=d["kind"],
        mapped=tuple(d["mapped"]),
        fixed={k: float(v) for k, v in d.get("fixed", {}).items()},
        window=tuple(d.get("window", (0.0, 0.0, 1.0, 1.0))),
        width=int(d.get("width", 64)),
        height=int(d.get("height", 64)),
        feature=d.get("feature", "note_count"),
        m2=d.get("m2"),
        mN=int(d.get("mN", 8)),
    )


def config_hash(config: MapConfig) -> str:
    """Stable key for caching: engine version + canonical config JSON."""
    payload = {"engine": ENGINE_VERSION, "config": config_to_dict(config)}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _pixel_uv(config: MapConfig, px: float, py: float) -> tuple[float, float]:
    u0, v0, u1, v1 = config.window
    u = u0 + (px + 0.5) * (u1 - u0) / config.width
    v = v0 + (py + 0.5) * (v1 - v0) / config.height
    return u, v


def _mapped_descriptors(config: MapConfig):
    by_name = {d.name: d for d in descriptors(config.kind)}
    return [by_name[name] for name in config.mapped]


def _pixel_spec(config: MapConfig, descs, px: int, py: int) -> GeneratorSpec:
    u, v = _pixel_uv(config, px, py)
    values = window_to_params(u, v, descs, config.resolved_m2(), config.mN)
    params = dict(config.fixed)
    params.update({name: val for name, val in zip(config.mapped, values)})
    return GeneratorSpec(kind=config.kind, params=params)


def lookup(config: MapConfig, px: int, py: int) -> GeneratorSpec:
    """The exact GeneratorSpec evaluated for pixel (px, py).

    Same path as compute_map, minus the generation: cost is the Hilbert
    arithmetic only.
    """
    validate_config(config)
    if not (0 <= px < config.width and 0 <= py < config.height):
        raise ValueError(f"pixel ({px}, {py}) outside {config.width}x{config.height} map")
    return _pixel_spec(config, _mapped_descriptors(config), px, py)


def compute_map(config: MapConfig) -> MapTile:
    """Evaluate the feature at every pixel of the window.

    One generator evaluation per pixel, sequential and independent; a
    pixel whose generation fails (cross-parameter validation, budget)
    records a sentinel value of (min over successes) - 1 instead of
    killing the map.
    """
    global _evals
    validate_config(config)
    start = time.perf_counter()
    descs = _mapped_descriptors(config)
    values = np.empty((config.height, config.width), dtype=np.float64)
    failed = np.zeros((config.height, config.width), dtype=bool)
    for py in range(config.height):
        for px in range(config.width):
            spec = _pixel_spec(config, descs, px, py)
            _evals += 1
            try:
                values[py, px] = extract_feature(generate(spec), config.feature)
            except (SpecError, BudgetError):
                failed[py, px] = True
    ok = ~failed
    if ok.any():
        vmin = float(values[ok].min())
        vmax = float(values[ok].max())
        values[failed] = vmin - 1.0
        if failed.any():
            vmin -= 1.0
    else:
        values[:] = 0.0
        vmin = vmax = 0.0
    return MapTile(
        config=config,
        config_hash=config_hash(config),
        values=values,
        value_min=vmin,
        value_max=vmax,
        compute_seconds=time.perf_counter() - start,
    )


def zoom(config: MapConfig, sub_rect: tuple[float, float, float, float]) -> MapConfig:
    """Config for the window spanned by a pixel-coordinate rectangle."""
    validate_config(config)
    x0, y0, x1, y1 = sub_rect
    if not (0 <= x0 < x1 <= config.width and 0 <= y0 < y1 <= config.height):
        raise ValueError(f"degenerate or out-of-bounds zoom rectangle {sub_rect}")
    u0, v0, u1, v1 = config.window
    du, dv = u1 - u0, v1 - v0
    new_window = (
        u0 + x0 / config.width * du,
        v0 + y0 / config.height * dv,
        u0 + x1 / config.width * du,
        v0 + y1 / config.height * dv,
    )
    return replace(config, window=new_window)


# --- rendering ----------------------------------------------------------------

# Anchors of a viridis-like colormap, linearly interpolated.
_VIRIDIS = np.array(
    [
        (68, 1, 84), (71, 44, 122), (59, 81, 139), (44, 113, 142),
        (33, 144, 141), (39, 173, 129), (92, 200, 99), (170, 220, 50),
        (253, 231, 37),
    ],
    dtype=np.float64,
)

PALETTES = ("gray", "viridis")


def _normalized(tile: MapTile) -> np.ndarray:
    if tile.value_max > tile.value_min:
        return (tile.values - tile.value_min) / (tile.value_max - tile.value_min)
    return np.full_like(tile.values, 0.5)


def render_image(tile: MapTile, palette: str = "gray") -> bytes:
    """Render a tile to image bytes: binary PGM for gray, PNG otherwise."""
    t = np.clip(_normalized(tile), 0.0, 1.0)
    if palette == "gray":
        levels = (t * 255.0 + 0.5).astype(np.uint8)
        header = f"P5\n{tile.config.width} {tile.config.height}\n255\n".encode("ascii")
        return header + levels.tobytes()
    if palette == "viridis":
        from io import BytesIO

        from PIL import Image

        pos = t * (len(_VIRIDIS) - 1)
        lo = np.floor(pos).astype(int)
        hi = np.minimum(lo + 1, len(_VIRIDIS) - 1)
        frac = (pos - lo)[..., None]
        rgb = (_VIRIDIS[lo] * (1.0 - frac) + _VIRIDIS[hi] * frac + 0.5).astype(np.uint8)
        buf = BytesIO()
        Image.fromarray(rgb, mode="RGB").save(buf, format="PNG")
        return buf.getvalue()
    raise ValueError(f"unknown palette {palette!r}; expected one of {PALETTES}")


# --- tile file format and disk cache -------------------------------------------
#
# One line of JSON header (config, hash, min/max, compute_seconds)
# followed by the raw little-endian float64 value array, row-major.


def tile_to_bytes(tile: MapTile) -> bytes:
    header = {
        "config": config_to_dict(tile.config),
        "hash": tile.config_hash,
        "value_min": tile.value_min,
        "value_max": tile.value_max,
        "compute_seconds": tile.compute_seconds,
    }
    return json.dumps(header, sort_keys=True).encode("utf-8") + b"\n" + tile.values.astype("<f8").tobytes()


def tile_from_bytes(blob: bytes) -> MapTile:
    """Parse the tile file format; raises ValueError on any corruption."""
    try:
        newline = blob.index(b"\n")
        header = json.loads(blob[:newline])
        config = config_from_dict(header["config"])
        if header["hash"] != config_hash(config):
            raise ValueError("tile hash does not match its config")
        raw = blob[newline + 1:]
        expected = config.width * config.height * 8
        if len(raw) != expected:
            raise ValueError(f"value array holds {len(raw)} bytes, expected {expected}")
        values = np.frombuffer(raw, dtype="<f8").reshape(config.height, config.width).copy()
        return MapTile(
            config=config,
            config_hash=header["hash"],
            values=values,
            value_min=float(header["value_min"]),
            value_max=float(header["value_max"]),
            compute_seconds=float(header["compute_seconds"]),
        )
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"corrupt tile: {exc}") from None


class TileCache:
    """Tiles on disk, one file per config hash.

    Writes go through a temp file and an atomic rename, so readers
    never see a partial tile; corrupted or stale entries are evicted
    and reported as misses.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, config: MapConfig) -> Path:
        return self.root / f"{config_hash(config)}.tile"

    def put(self, tile: MapTile) -> Path:
        path = self.root / f"{tile.config_hash}.tile"
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_bytes(tile_to_bytes(tile))
        os.replace(tmp, path)
        return path

    def get(self, config: MapConfig) -> MapTile | None:
        """Stored tile for this config, or None on miss.  I/O errors
        other than absence propagate; corruption evicts the entry."""
        path = self.path_for(config)
        try:
            blob = path.read_bytes()
        except FileNotFoundError:
            return None
        try:
            tile = tile_from_bytes(blob)
            if tile.config_hash != config_hash(config):
                raise ValueError("tile does not belong to this config")
            return tile
        except ValueError:
            path.unlink(missing_ok=True)
            return None
