import json
import time

import pytest
from fastapi.testclient import TestClient

from scoremap.generators import descriptors
from scoremap.mapping import tile_from_bytes
from scoremap.service import create_app

from test_scoreio import note_pairs, parse_smf


@pytest.fixture
def client(tmp_path):
    return TestClient(create_app(cache_dir=tmp_path), raise_server_exceptions=False)


def default_params(kind):
    return {d.name: d.default for d in descriptors(kind)}


def orbit_map_body(**kw):
    body = {
        "kind": "julia_orbit",
        "mapped": ["c_re", "c_im"],
        "fixed": {k: v for k, v in default_params("julia_orbit").items() if k not in ("c_re", "c_im")},
        "width": 8,
        "height": 8,
        "feature": "note_count",
    }
    body.update(kw)
    return body


def wait_for_map(client, map_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        state = client.get(f"/api/map/{map_id}").json()
        if state["status"] in ("done", "error"):
            return state
        time.sleep(0.02)
    raise TimeoutError("map never finished")


class TestGenerators:
    def test_four_kinds(self, client):
        kinds = [g["kind"] for g in client.get("/api/generators").json()]
        assert kinds == ["julia_orbit", "julia_plot", "ifs", "lsystem"]

    def test_descriptor_fields(self, client):
        table = client.get("/api/generators").json()[0]["params"]
        assert table[0]["name"] == "c_re"
        assert set(table[0]) == {"name", "min", "max", "default"}


class TestScore:
    def test_valid_spec(self, client):
        r = client.post("/api/score", json={"kind": "lsystem", "params": default_params("lsystem")})
        assert r.status_code == 200
        assert len(r.json()["notes"]) >= 1

    def test_deterministic_bytes(self, client):
        body = {"kind": "ifs", "params": default_params("ifs")}
        assert client.post("/api/score", json=body).content == client.post("/api/score", json=body).content

    def test_out_of_range_400(self, client):
        params = dict(default_params("julia_orbit"), c_re=5.0)
        r = client.post("/api/score", json={"kind": "julia_orbit", "params": params})
        assert r.status_code == 400
        assert "error" in r.json()

    def test_malformed_body_400(self, client):
        assert client.post("/api/score", json={"params": {}}).status_code == 400

    def test_midi_endpoint(self, client):
        body = {"kind": "julia_orbit", "params": default_params("julia_orbit"),
                "tempo_bpm": 120.0, "ticks_per_quarter": 480}
        r = client.post("/api/score/midi", json=body)
        assert r.status_code == 200
        assert r.headers["content-type"] == "audio/midi"
        parsed = parse_smf(r.content)
        assert len(note_pairs(parsed["tracks"][0])) == 64


class TestMaps:
    def test_full_map_flow(self, client):
        r = client.post("/api/map", json=orbit_map_body())
        assert r.status_code == 200
        map_id = r.json()["id"]
        state = wait_for_map(client, map_id)
        assert state["status"] == "done"
        assert state["value_min"] <= state["value_max"]

        png = client.get(f"/api/map/{map_id}/png")
        assert png.status_code == 200
        assert png.content[:4] == b"\x89PNG"

        raw = client.get(f"/api/map/{map_id}/values")
        tile = tile_from_bytes(raw.content)
        assert tile.values.shape == (8, 8)

        # End-to-end consistency: lookup -> score -> feature equals the
        # tile value at that pixel.
        lk = client.get(f"/api/map/{map_id}/lookup", params={"px": 5, "py": 2}).json()
        score = client.post("/api/score", json=lk).json()
        assert float(len(score["notes"])) == tile.values[2, 5]

    def test_resubmit_hits_cache(self, client):
        body = orbit_map_body(width=4, height=4)
        first = client.post("/api/map", json=body).json()
        wait_for_map(client, first["id"])
        second = client.post("/api/map", json=body).json()
        assert second["id"] == first["id"]
        assert second["status"] == "done"

    def test_invalid_config_400(self, client):
        assert client.post("/api/map", json=orbit_map_body(mapped=["c_re", "zzz"])).status_code == 400

    def test_unknown_id_404(self, client):
        assert client.get("/api/map/beef").status_code == 404
        assert client.get("/api/map/beef/png").status_code == 404

    def test_lookup_out_of_bounds_400(self, client):
        map_id = client.post("/api/map", json=orbit_map_body()).json()["id"]
        wait_for_map(client, map_id)
        r = client.get(f"/api/map/{map_id}/lookup", params={"px": 80, "py": 0})
        assert r.status_code == 400


class TestSessions:
    def test_create_with_kind(self, client):
        r = client.post("/api/session", json={"kind": "julia_orbit", "k": 3})
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "active"
        assert body["spec"]["kind"] == "julia_orbit"

    def test_create_needs_kind_or_spec(self, client):
        assert client.post("/api/session", json={"k": 2}).status_code == 400

    def test_choice_without_proposal_409(self, client):
        sid = client.post("/api/session", json={"kind": "ifs"}).json()["id"]
        assert client.post(f"/api/session/{sid}/choice", json={"index": 0}).status_code == 409

    def test_unknown_session_404(self, client):
        assert client.get("/api/session/void").status_code == 404
        assert client.post("/api/session/void/choice", json={"index": 0}).status_code == 404

    def test_propose_choose_loop(self, client):
        sid = client.post("/api/session", json={"kind": "julia_orbit", "k": 3}).json()["id"]
        r = client.post(f"/api/session/{sid}/propose", params={"param": "pitch_scale"})
        assert r.status_code == 200
        body = r.json()
        assert len(body["candidates"]) == 3
        assert len(body["scores"]) == 3
        assert body["candidates"][0]["params"]["pitch_scale"] == 12.0  # incumbent first
        r = client.post(f"/api/session/{sid}/choice", json={"index": 1})
        updated = r.json()
        assert updated["spec"]["params"]["pitch_scale"] == body["candidates"][1]["params"]["pitch_scale"]
        lo, hi = updated["brackets"]["pitch_scale"]
        assert hi - lo == pytest.approx(24.0)  # half of [0, 48]

    def test_session_survives_restart(self, client, tmp_path):
        sid = client.post("/api/session", json={"kind": "lsystem", "k": 2}).json()["id"]
        client.post(f"/api/session/{sid}/propose", params={"param": "pitch_step"})
        client.post(f"/api/session/{sid}/choice", json={"index": 1})
        # New app instance over the same cache dir: snapshot reload.
        fresh = TestClient(create_app(cache_dir=tmp_path), raise_server_exceptions=False)
        r = fresh.get(f"/api/session/{sid}")
        assert r.status_code == 200
        assert len(r.json()["history"]) == 1
