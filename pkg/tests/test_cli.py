import json

import numpy as np
import pytest

from rank1tdse import antialias
from rank1tdse.cli import main
from rank1tdse.lattice import Rank1Lattice
from rank1tdse.transform import load_snapshot


def write_lattice(tmp_path, d=2, n=64, z=(1, 19)):
    path = tmp_path / "lat.json"
    path.write_text(json.dumps({"d": d, "n": n, "z": list(z)}))
    return str(path)


def test_lattice_info(tmp_path, capsys):
    lat = write_lattice(tmp_path)
    assert main(["lattice", "info", "--lattice", lat]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert (doc["d"], doc["n"], doc["z"]) == (2, 64, [1, 19])
    assert doc["preview_points"][1] == [1, 19]


def test_lattice_gen_to_file(tmp_path, capsys):
    out = tmp_path / "gen.json"
    assert main(["lattice", "gen", "--d", "2", "--n", "32", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["d"] == 2 and doc["n"] == 32 and doc["z"][0] == 1


def test_lattice_requires_source(capsys):
    with pytest.raises(SystemExit):
        main(["lattice", "info"])


def test_large_preset_guard(capsys):
    with pytest.raises(SystemExit, match="--large"):
        main(["aaset", "build", "--preset", "paper-d6"])


def test_aaset_build_writes_cache(tmp_path, capsys):
    lat = write_lattice(tmp_path)
    cache = tmp_path / "cache"
    assert main(["aaset", "build", "--lattice", lat, "--cache-dir", str(cache)]) == 0
    out = capsys.readouterr().out
    assert "max_norm2" in out
    files = list(cache.glob("aaset_*.bin"))
    assert len(files) == 1
    loaded = antialias.load_cache(files[0], Rank1Lattice(2, 64, (1, 19)))
    assert loaded.freq.shape == (64, 2)


def test_solve_writes_snapshot(tmp_path, capsys):
    lat = write_lattice(tmp_path)
    out = tmp_path / "state.bin"
    rc = main(["solve", "--lattice", lat, "--potential", "smooth_v1",
               "--scheme", "strang", "--steps", "50", "--time", "0.5",
               "--cache-dir", str(tmp_path / "c"), "--out", str(out)])
    assert rc == 0
    aa = antialias.build(Rank1Lattice(2, 64, (1, 19)))
    st = load_snapshot(out, aa)
    assert st.time == 0.5
    assert abs(np.linalg.norm(st.coeffs) - 1.0) < 1e-12


def test_converge_with_config_and_overrides(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "lattice": {"d": 2, "n": 64, "z": [1, 19]},
        "potential": "smooth_v1",
        "scheme": "strang",
        "final_time": 0.25,
        "reference_steps": 512,
        "cache_dir": str(tmp_path / "c"),
    }))
    out = tmp_path / "run.csv"
    rc = main(["converge", "--config", str(cfg), "--scheme", "s9odr6a",
               "--sweep", "4,8,16,32", "--out", str(out)])
    assert rc == 0
    text = out.read_text()
    assert '"scheme": "s9odr6a"' in text  # override took effect
    assert text.count("\n") == 8  # 3 header comments + column row + 4 data rows


def test_converge_json_format(tmp_path, capsys):
    cfg = tmp_path / "mini.json"
    cfg.write_text(json.dumps({"lattice": {"d": 2, "n": 64, "z": [1, 19]}}))
    out = tmp_path / "run.json"
    rc = main(["converge", "--config", str(cfg), "--potential", "smooth_v1",
               "--scheme", "s9odr6a", "--time", "0.25", "--reference-steps", "512",
               "--sweep", "4,8,16", "--cache-dir", str(tmp_path / "c"),
               "--out", str(out), "--format", "json"])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert len(doc["rows"]) == 3


def test_diagnose_circulant(tmp_path, capsys):
    lat = write_lattice(tmp_path, d=2, n=5, z=(1, 3))
    rc = main(["diagnose", "circulant", "--lattice", lat,
               "--cache-dir", str(tmp_path / "c")])
    assert rc == 0
    assert "max deviation" in capsys.readouterr().out


def test_diagnose_commutator(tmp_path, capsys):
    lat = write_lattice(tmp_path)
    rc = main(["diagnose", "commutator", "--lattice", lat, "--p", "1",
               "--n-values", "16", "32", "--cache-dir", str(tmp_path / "c")])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert [e["n"] for e in doc["entries"]] == [16, 32]
    assert doc["verdict"] == "bounded"


def test_diagnose_commutator_contrast(tmp_path, capsys):
    lat = write_lattice(tmp_path)
    rc = main(["diagnose", "commutator", "--lattice", lat, "--p", "2", "--contrast",
               "--n-values", "16", "64", "--cache-dir", str(tmp_path / "c")])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "growing"


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
