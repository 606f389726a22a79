import json

from scoremap.cli import main
from scoremap.generators import descriptors
from scoremap.mapping import tile_from_bytes
from scoremap.scoreio import read_json

from test_scoreio import parse_smf


def default_params(kind):
    return {d.name: d.default for d in descriptors(kind)}


class TestGenerateCommand:
    def test_writes_score_midi_csv(self, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"kind": "lsystem", "params": default_params("lsystem")}))
        out = tmp_path / "score.json"
        midi = tmp_path / "score.mid"
        csv = tmp_path / "score.csv"
        rc = main(["generate", "--spec", str(spec_path), "--out", str(out),
                   "--midi", str(midi), "--csv", str(csv)])
        assert rc == 0
        score = read_json(out.read_text())
        assert len(score.notes) >= 1
        assert parse_smf(midi.read_bytes())["format"] == 0
        assert csv.read_text().startswith("time,duration,pitch,loudness,instrument")


class TestGenerateIfsCommand:
    def test_explicit_ifs_file(self, tmp_path):
        ifs_path = tmp_path / "ifs.json"
        ifs_path.write_text(json.dumps({
            "maps": [
                {"linear": [0.0] * 16, "translate": [0.0, 60.0, 100.0, 0.0]},
                {"linear": [0.0] * 16, "translate": [1.0, 64.0, 100.0, 1.0]},
            ],
            "depth": 4,
            "p0": [0.0, 0.0, 0.0, 0.0],
        }))
        out = tmp_path / "score.json"
        rc = main(["generate", "--ifs", str(ifs_path), "--out", str(out)])
        assert rc == 0
        score = read_json(out.read_text())
        assert len(score.notes) == 2  # constant maps collapse to their points


class TestMapCommand:
    def test_writes_tile_and_png(self, tmp_path):
        cfg = {
            "kind": "julia_orbit",
            "mapped": ["c_re", "c_im"],
            "fixed": {k: v for k, v in default_params("julia_orbit").items()
                      if k not in ("c_re", "c_im")},
            "width": 6,
            "height": 6,
            "feature": "note_count",
        }
        spec_path = tmp_path / "map.json"
        spec_path.write_text(json.dumps(cfg))
        out = tmp_path / "tile.bin"
        png = tmp_path / "map.png"
        rc = main(["map", "--spec", str(spec_path), "--out", str(out), "--png", str(png),
                   "--cache", str(tmp_path / "cache")])
        assert rc == 0
        tile = tile_from_bytes(out.read_bytes())
        assert tile.values.shape == (6, 6)
        assert png.read_bytes()[:4] == b"\x89PNG"
        # Second run hits the cache and produces identical bytes.
        out2 = tmp_path / "tile2.bin"
        main(["map", "--spec", str(spec_path), "--out", str(out2),
              "--cache", str(tmp_path / "cache")])
        assert out2.read_bytes() == out.read_bytes()

    def test_gray_palette_pgm(self, tmp_path):
        cfg = {
            "kind": "lsystem",
            "mapped": ["pitch_step", "time_step"],
            "fixed": {k: v for k, v in default_params("lsystem").items()
                      if k not in ("pitch_step", "time_step")},
            "width": 4,
            "height": 4,
        }
        spec_path = tmp_path / "map.json"
        spec_path.write_text(json.dumps(cfg))
        img = tmp_path / "map.pgm"
        rc = main(["map", "--spec", str(spec_path), "--out", str(tmp_path / "t.bin"),
                   "--png", str(img), "--palette", "gray"])
        assert rc == 0
        assert img.read_bytes().startswith(b"P5")
