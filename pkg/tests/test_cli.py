"""Command-line driver tests (run in-process via main)."""

import json

import numpy as np
import pytest

import gausstopo as gt
from gausstopo import cli, topo
from gausstopo.engine import GaussGraph


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_rows(path):
    lines = [line for line in path.read_text().splitlines() if line]
    assert lines[0].startswith("# generated ")
    return lines[1], lines[2:]


class TestBuild:
    def test_cluster_round_trip(self, tmp_path, capsys):
        out = tmp_path / "state.json"
        code, stdout, _ = run(capsys, "build", "--rows", "4", "--cols", "4",
                              "--log-s", "1.0", "--kind", "cluster",
                              "--out", str(out))
        assert code == 0
        assert "modes: 16" in stdout
        loaded = GaussGraph.from_json(out.read_text())
        reference = gt.cluster_graph(gt.LatticeSpec(4, 4, "torus", 1.0))
        assert np.array_equal(loaded.v_part, reference.v_part)
        assert np.array_equal(loaded.u_part, reference.u_part)

    def test_pipeline_parity_error(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "build", "--rows", "5", "--cols", "6",
                              "--kind", "surface-pipeline",
                              "--out", str(tmp_path / "x.json"))
        assert code == cli.EXIT_VALIDATION
        assert "even" in stderr

    def test_map_writes_index(self, tmp_path, capsys):
        out = tmp_path / "sc.json"
        code, stdout, _ = run(capsys, "map", "--rows", "6", "--cols", "6",
                              "--log-s", "0.5", "--out", str(out))
        assert code == 0
        assert "modes: 18" in stdout
        index = json.loads((tmp_path / "sc.json.map.json").read_text())
        assert len(index["kept"]) == 18


class TestDiagnostics:
    def test_tee_matches_library(self, capsys, surface_state):
        code, stdout, _ = run(capsys, "tee", "--rows", "12", "--cols", "12",
                              "--log-s", "1.0")
        assert code == 0
        record = json.loads(stdout)
        spec, cov = surface_state(12, 12, 1.0)
        expected = topo.tee_kp(cov, topo.kp_regions(spec))
        assert record["tee"] == pytest.approx(expected, abs=1e-10)

    def test_tmi_with_lower(self, capsys):
        code, stdout, _ = run(capsys, "tmi", "--rows", "12", "--cols", "12",
                              "--log-s", "1.0", "--kappa", "10", "--lower")
        assert code == 0
        record = json.loads(stdout)
        assert record["tmi_lower"] <= record["tmi"] + 1e-9

    def test_upper_bound(self, capsys):
        code, stdout, _ = run(capsys, "upper-bound", "--log-s", "0.0")
        assert code == 0
        record = json.loads(stdout)
        assert record["tee_upper"] == pytest.approx(topo.tee_upper_bound(1.0))

    def test_ill_conditioned_exits_numerical(self, capsys):
        code, _, stderr = run(capsys, "tee", "--rows", "12", "--cols", "12",
                              "--log-s", "8.0")
        assert code == cli.EXIT_NUMERICAL
        assert "numerical" in stderr


class TestSpectrum:
    def test_gap_csv(self, tmp_path, capsys):
        out = tmp_path / "gap.csv"
        code, _, _ = run(capsys, "spectrum", "--n", "3", "--m", "3",
                         "--log-s", "0", "--out", str(out))
        assert code == 0
        header, rows = read_rows(out)
        assert header.split(",") == ["n", "m", "log_s", "gap",
                                     "gap_asymptotic", "ratio"]
        gap_val = float(rows[0].split(",")[3])
        assert gap_val == pytest.approx(1 / 3, abs=1e-12)


class TestBounds:
    def test_no_violations(self, capsys):
        code, stdout, _ = run(capsys, "bounds", "--rows", "12", "--cols", "12",
                              "--log-s", "1.0")
        assert code == 0
        assert json.loads(stdout)["n_violations"] == 0

    def test_violation_exit_code(self, capsys, monkeypatch):
        monkeypatch.setattr(cli.corr, "verify_bound",
                            lambda *a, **k: {"n_pairs": 1, "n_violations": 1,
                                             "max_violation": 0.1, "max_ratio": 2.0})
        code, _, _ = run(capsys, "bounds", "--rows", "12", "--cols", "12",
                         "--log-s", "1.0")
        assert code == cli.EXIT_THRESHOLD


class TestCorrelationsCmd:
    def test_csv_and_fit(self, tmp_path, capsys):
        out = tmp_path / "corr.csv"
        code, stdout, _ = run(capsys, "correlations", "--rows", "20",
                              "--cols", "20", "--log-s", "1.0",
                              "--fit", "--out", str(out))
        assert code == 0
        header, rows = read_rows(out)
        assert header == "separation,correlation,bound_value"
        assert len(rows) >= 8
        record = json.loads(stdout)
        assert record["xi_a"] <= record["xi_b"]


SWEEP_ARGS = ("sweep", "--rows", "8", "--cols", "8", "--log-s-min", "0",
              "--log-s-max", "1", "--steps", "2", "--metrics",
              "tee_kp,tee_upper")


class TestSweep:
    def test_deterministic(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GAUSSTOPO_THREADS", "2")
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, *SWEEP_ARGS, "--out", str(a))[0] == 0
        assert run(capsys, *SWEEP_ARGS, "--out", str(b))[0] == 0
        assert read_rows(a) == read_rows(b)
        header, rows = read_rows(a)
        assert header.split(",") == list(cli.SWEEP_COLUMNS)
        assert len(rows) == 2

    def test_resume_skips_existing(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        run(capsys, *SWEEP_ARGS, "--out", str(out))
        lines = out.read_text().splitlines()
        # drop the last point and plant a sentinel value in the first one
        first = lines[2].split(",")
        first[1] = "999"
        out.write_text("\n".join(lines[:2] + [",".join(first)]) + "\n")
        code, _, _ = run(capsys, *SWEEP_ARGS, "--out", str(out))
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 2
        assert rows[0].split(",")[1] == "999"  # kept, not recomputed
        assert rows[1].split(",")[0] == "1"

    def test_degenerate_single_point(self, tmp_path, capsys):
        out = tmp_path / "one.csv"
        code, _, _ = run(capsys, "sweep", "--rows", "12", "--cols", "12",
                         "--log-s-min", "1", "--log-s-max", "1", "--steps", "1",
                         "--metrics", "tee_kp", "--out", str(out))
        assert code == 0
        _, rows = read_rows(out)
        assert len(rows) == 1
        tee_sweep = float(rows[0].split(",")[1])
        code, stdout, _ = run(capsys, "tee", "--rows", "12", "--cols", "12",
                              "--log-s", "1.0")
        assert tee_sweep == pytest.approx(json.loads(stdout)["tee"], abs=1e-10)

    def test_json_report_stream(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        jout = tmp_path / "s.jsonl"
        code, _, _ = run(capsys, *SWEEP_ARGS, "--out", str(out),
                         "--json-out", str(jout))
        assert code == 0
        records = [json.loads(line) for line in jout.read_text().splitlines()]
        assert len(records) == 2
        assert {"log_s", "tee_kp", "tee_upper", "geometry"} <= set(records[0])

    def test_invalid_thread_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GAUSSTOPO_THREADS", "many")
        code, _, _ = run(capsys, *SWEEP_ARGS, "--out", str(tmp_path / "x.csv"))
        assert code == cli.EXIT_VALIDATION

    def test_invalid_range(self, tmp_path, capsys):
        code, _, _ = run(capsys, "sweep", "--rows", "8", "--cols", "8",
                         "--log-s-min", "2", "--log-s-max", "1", "--steps", "2",
                         "--out", str(tmp_path / "x.csv"))
        assert code == cli.EXIT_VALIDATION
