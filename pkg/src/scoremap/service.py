"""HTTP facade over generation, maps, lookup, and search sessions.

Stateless except for the on-disk tile cache and the session store.
Map computation is asynchronous (tiles are the slow path): POST
/api/map returns an id to poll, everything else answers inline.
Identical /api/score requests produce byte-identical responses, since
scores travel in their canonical JSON form.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import BudgetError, SpecError
from .generators import KINDS, GeneratorSpec, default_spec, descriptors, generate
from .mapping import (
    MapConfig,
    MapTile,
    TileCache,
    compute_map,
    config_from_dict,
    config_hash,
    config_to_dict,
    lookup,
    render_image,
    tile_to_bytes,
    validate_config,
)
from .scoreio import write_json, write_midi
from .search import (
    SearchSession,
    SearchStateError,
    new_session,
    propose,
    record_choice,
    session_from_dict,
    session_to_dict,
)


class SpecBody(BaseModel):
    kind: str
    params: dict[str, float] = Field(default_factory=dict)
    seed: int = 0

    def to_spec(self) -> GeneratorSpec:
        return GeneratorSpec(kind=self.kind, params=dict(self.params), seed=self.seed)


class MidiBody(SpecBody):
    tempo_bpm: float = 120.0
    ticks_per_quarter: int = 480


class MapBody(BaseModel):
    kind: str
    mapped: list[str]
    fixed: dict[str, float] = Field(default_factory=dict)
    window: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)
    width: int = 64
    height: int = 64
    feature: str = "note_count"
    m2: int | None = None
    mN: int = 8

    def to_config(self) -> MapConfig:
        return config_from_dict(self.model_dump())


class SessionCreate(BaseModel):
    kind: str | None = None
    spec: SpecBody | None = None
    k: int = 3


class ChoiceBody(BaseModel):
    index: int


class NotFound(Exception):
    pass


class _MapJobs:
    """Async tile computations, keyed by config hash and backed by the cache."""

    def __init__(self, cache: TileCache):
        self.cache = cache
        self.lock = threading.Lock()
        self.status: dict[str, str] = {}  # running | done | error
        self.configs: dict[str, MapConfig] = {}
        self.errors: dict[str, str] = {}

    def submit(self, config: MapConfig) -> tuple[str, str]:
        map_id = config_hash(config)
        with self.lock:
            self.configs[map_id] = config
            state = self.status.get(map_id)
            if state in ("running", "done"):
                return map_id, state
            if self.cache.get(config) is not None:
                self.status[map_id] = "done"
                return map_id, "done"
            self.status[map_id] = "running"
        threading.Thread(target=self._run, args=(map_id, config), daemon=True).start()
        return map_id, "running"

    def _run(self, map_id: str, config: MapConfig) -> None:
        try:
            tile = compute_map(config)
            self.cache.put(tile)
            with self.lock:
                self.status[map_id] = "done"
        except Exception as exc:  # surface through polling, not a dead thread
            with self.lock:
                self.status[map_id] = "error"
                self.errors[map_id] = str(exc)

    def get_config(self, map_id: str) -> MapConfig:
        with self.lock:
            if map_id in self.configs:
                return self.configs[map_id]
        # Not seen this process: recover from a cached tile file.
        path = self.cache.root / f"{map_id}.tile"
        if path.exists():
            header = json.loads(path.read_bytes().split(b"\n", 1)[0])
            config = config_from_dict(header["config"])
            with self.lock:
                self.configs[map_id] = config
                self.status.setdefault(map_id, "done")
            return config
        raise NotFound(f"unknown map id {map_id}")

    def get_tile(self, map_id: str) -> MapTile:
        config = self.get_config(map_id)
        tile = self.cache.get(config)
        if tile is None:
            raise NotFound(f"map {map_id} has no computed tile")
        return tile

    def describe(self, map_id: str) -> dict:
        config = self.get_config(map_id)
        with self.lock:
            state = self.status.get(map_id, "unknown")
            err = self.errors.get(map_id)
        out = {"id": map_id, "status": state, "config": config_to_dict(config)}
        if err:
            out["error"] = err
        if state == "done":
            tile = self.cache.get(config)
            if tile is not None:
                out.update(
                    value_min=tile.value_min,
                    value_max=tile.value_max,
                    compute_seconds=tile.compute_seconds,
                )
            else:  # cache evicted behind our back
                out["status"] = "error"
        return out


class _SessionStore:
    """In-memory sessions with JSON snapshots; operations serialized per id."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self.lock = threading.Lock()
        self.sessions: dict[str, SearchSession] = {}
        self.ks: dict[str, int] = {}
        self.locks: dict[str, threading.Lock] = {}

    def _snapshot(self, session: SearchSession) -> None:
        path = self.root / f"{session.id}.json"
        blob = json.dumps({"k": self.ks[session.id], "session": session_to_dict(session)}, sort_keys=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(blob)
        tmp.replace(path)

    def create(self, spec: GeneratorSpec, k: int) -> SearchSession:
        session = new_session(spec)
        with self.lock:
            self.sessions[session.id] = session
            self.ks[session.id] = k
            self.locks[session.id] = threading.Lock()
        self._snapshot(session)
        return session

    def acquire(self, session_id: str) -> tuple[SearchSession, int, threading.Lock]:
        with self.lock:
            if session_id not in self.sessions:
                path = self.root / f"{session_id}.json"
                if not path.exists():
                    raise NotFound(f"unknown session id {session_id}")
                data = json.loads(path.read_text())
                self.sessions[session_id] = session_from_dict(data["session"])
                self.ks[session_id] = int(data.get("k", 3))
                self.locks[session_id] = threading.Lock()
            return self.sessions[session_id], self.ks[session_id], self.locks[session_id]


def create_app(cache_dir: str | Path = ".scoremap-cache", ui_dir: str | Path | None = None) -> FastAPI:
    cache_dir = Path(cache_dir)
    app = FastAPI(title="scoremap", version="0.1.0")
    jobs = _MapJobs(TileCache(cache_dir / "tiles"))
    sessions = _SessionStore(cache_dir / "sessions")

    @app.exception_handler(SpecError)
    @app.exception_handler(BudgetError)
    @app.exception_handler(ValueError)
    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: Exception):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(NotFound)
    async def _not_found(request: Request, exc: NotFound):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(SearchStateError)
    async def _conflict(request: Request, exc: SearchStateError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(Exception)
    async def _server_error(request: Request, exc: Exception):
        return JSONResponse(status_code=500, content={"error": f"{type(exc).__name__}: {exc}"})

    def _score_response(spec: GeneratorSpec) -> Response:
        return Response(content=write_json(generate(spec)), media_type="application/json")

    @app.get("/api/generators")
    def list_generators():
        return [
            {
                "kind": kind,
                "params": [
                    {"name": d.name, "min": d.min, "max": d.max, "default": d.default}
                    for d in descriptors(kind)
                ],
            }
            for kind in KINDS
        ]

    @app.post("/api/score")
    def score(body: SpecBody):
        return _score_response(body.to_spec())

    @app.post("/api/score/midi")
    def score_midi(body: MidiBody):
        midi = write_midi(generate(body.to_spec()), body.ticks_per_quarter, body.tempo_bpm)
        return Response(content=midi, media_type="audio/midi")

    @app.post("/api/map")
    def submit_map(body: MapBody):
        config = body.to_config()
        validate_config(config)
        map_id, status = jobs.submit(config)
        return {"id": map_id, "status": status}

    @app.get("/api/map/{map_id}")
    def map_status(map_id: str):
        return jobs.describe(map_id)

    @app.get("/api/map/{map_id}/png")
    def map_png(map_id: str, palette: str = "viridis"):
        tile = jobs.get_tile(map_id)
        media = "image/png" if palette != "gray" else "image/x-portable-graymap"
        return Response(content=render_image(tile, palette), media_type=media)

    @app.get("/api/map/{map_id}/values")
    def map_values(map_id: str):
        return Response(content=tile_to_bytes(jobs.get_tile(map_id)), media_type="application/octet-stream")

    @app.get("/api/map/{map_id}/lookup")
    def map_lookup(map_id: str, px: int, py: int):
        config = jobs.get_config(map_id)
        spec = lookup(config, px, py)
        return {"kind": spec.kind, "seed": spec.seed, "params": spec.params}

    @app.post("/api/session")
    def create_session(body: SessionCreate):
        if body.spec is not None:
            spec = body.spec.to_spec()
        elif body.kind is not None:
            spec = default_spec(body.kind)
        else:
            raise SpecError("session: provide kind or spec")
        if body.k < 2:
            raise SpecError("session: k must be >= 2")
        session = sessions.create(spec, body.k)
        return session_to_dict(session)

    @app.get("/api/session/{session_id}")
    def get_session(session_id: str):
        session, _, lock = sessions.acquire(session_id)
        with lock:
            return session_to_dict(session)

    @app.post("/api/session/{session_id}/propose")
    def session_propose(session_id: str, param: str, k: int | None = None):
        session, default_k, lock = sessions.acquire(session_id)
        with lock:
            candidates = propose(session, param, k or default_k)
            sessions._snapshot(session)
            return {
                "session": session_to_dict(session),
                "candidates": [
                    {"kind": s.kind, "seed": s.seed, "params": s.params} for s in candidates
                ],
                "scores": [json.loads(write_json(generate(s))) for s in candidates],
            }

    @app.post("/api/session/{session_id}/choice")
    def session_choice(session_id: str, body: ChoiceBody):
        session, _, lock = sessions.acquire(session_id)
        with lock:
            record_choice(session, body.index)
            sessions._snapshot(session)
            return session_to_dict(session)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        ui_path = Path(ui_dir).resolve()
        if not ui_path.is_dir():
            raise ValueError(f"UI directory not found: {ui_path}")
        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app
