import json
import shutil

import numpy as np
import pytest

from caddie import cli, fixtures, skills, synthgen
from caddie.builder import load_booklet


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Small CSV + bundled hole, ingested and solved once."""
    ws = tmp_path_factory.mktemp("cli")
    records = synthgen.make_baseline_traces(3000)
    skills.write_csv(records, ws / "traces.csv")
    shutil.copy(fixtures.path(fixtures.PAR4_HOLE), ws / "par4.txt")
    rc = cli.main(["ingest", str(ws / "traces.csv"), "--out",
                   str(ws / "profiles"), "--realizations", "12"])
    assert rc == 0
    rc = cli.main(["solve", str(ws / "par4.txt"),
                   str(ws / "profiles" / "baseline.json"),
                   "--out", str(ws / "booklet.json"),
                   "--directions", "24", "--distance-step", "400",
                   "--realizations", "10", "--seed", "5"])
    assert rc == 0
    return ws


class TestIngest:
    def test_profile_written_and_valid(self, workspace):
        profile = skills.load_profile(workspace / "profiles" / "baseline.json")
        assert set(profile.surfaces) == set(skills.SURFACES)
        assert profile.realizations == 12

    def test_idempotent_bytes(self, workspace, tmp_path):
        rc = cli.main(["ingest", str(workspace / "traces.csv"), "--out",
                       str(tmp_path), "--realizations", "12"])
        assert rc == 0
        a = (workspace / "profiles" / "baseline.json").read_bytes()
        b = (tmp_path / "baseline.json").read_bytes()
        assert a == b

    def test_empty_csv_is_user_error(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text(",".join(skills.CSV_HEADER) + "\n")
        assert cli.main(["ingest", str(path), "--out", str(tmp_path)]) == 1
        assert "error" in capsys.readouterr().err

    def test_unknown_player_is_user_error(self, workspace):
        rc = cli.main(["ingest", str(workspace / "traces.csv"), "--out",
                       str(workspace / "nope"), "--player", "ghost"])
        assert rc == 1


class TestSolve:
    def test_booklet_contents(self, workspace):
        doc = load_booklet(workspace / "booklet.json")
        assert doc["player"] == "baseline"
        assert doc["par"] == 4
        assert doc["solver"]["residual"] < 1e-4
        surfaces = {row["surface"] for row in doc["rows"]}
        assert "green" in surfaces and "fairway" in surfaces
        green_rows = [r for r in doc["rows"] if r["surface"] == "green"]
        assert all(r["action"] is None for r in green_rows)

    def test_rerun_byte_identical(self, workspace, tmp_path):
        out = tmp_path / "again.json"
        rc = cli.main(["solve", str(workspace / "par4.txt"),
                       str(workspace / "profiles" / "baseline.json"),
                       "--out", str(out),
                       "--directions", "24", "--distance-step", "400",
                       "--realizations", "10", "--seed", "5"])
        assert rc == 0
        assert out.read_bytes() == (workspace / "booklet.json").read_bytes()

    def test_unreadable_hole_is_user_error(self, workspace, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a hole\n")
        rc = cli.main(["solve", str(bad),
                       str(workspace / "profiles" / "baseline.json"),
                       "--out", str(tmp_path / "x.json")])
        assert rc == 1

    def test_config_file_merging(self, workspace, tmp_path):
        conf = tmp_path / "conf.json"
        conf.write_text(json.dumps({"directions": 24, "distance_step": 400.0,
                                    "realizations": 10, "seed": 5}))
        out = tmp_path / "via_config.json"
        rc = cli.main(["solve", str(workspace / "par4.txt"),
                       str(workspace / "profiles" / "baseline.json"),
                       "--config", str(conf), "--out", str(out)])
        assert rc == 0
        assert out.read_bytes() == (workspace / "booklet.json").read_bytes()

    def test_unknown_config_key_rejected(self, workspace, tmp_path):
        conf = tmp_path / "conf.json"
        conf.write_text(json.dumps({"dirs": 24}))
        rc = cli.main(["solve", str(workspace / "par4.txt"),
                       str(workspace / "profiles" / "baseline.json"),
                       "--config", str(conf),
                       "--out", str(tmp_path / "x.json")])
        assert rc == 1


class TestSimulate:
    def test_metrics_csv(self, workspace, tmp_path, capsys):
        out = tmp_path / "m.csv"
        rc = cli.main(["simulate", str(workspace / "par4.txt"),
                       str(workspace / "profiles" / "baseline.json"),
                       str(workspace / "booklet.json"),
                       "-n", "400", "--seed", "9", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("first,last,score")
        assert len(lines) == 2

    def test_zero_holes_is_user_error(self, workspace, capsys):
        rc = cli.main(["simulate", str(workspace / "par4.txt"),
                       str(workspace / "profiles" / "baseline.json"),
                       str(workspace / "booklet.json"), "-n", "0"])
        assert rc == 1

    def test_two_seeds_statistically_compatible(self, workspace, tmp_path):
        outs = []
        for seed in ("21", "22"):
            out = tmp_path / f"m{seed}.csv"
            rc = cli.main(["simulate", str(workspace / "par4.txt"),
                           str(workspace / "profiles" / "baseline.json"),
                           str(workspace / "booklet.json"),
                           "-n", "4000", "--seed", seed, "--out", str(out)])
            assert rc == 0
            outs.append(out.read_text().strip().split("\n")[1].split(","))
        score_a, score_b = float(outs[0][2]), float(outs[1][2])
        se = 0.8 / np.sqrt(4000)  # generous per-hole std bound
        assert abs(score_a - score_b) < 3 * np.sqrt(2) * se + 0.01
