import csv
import json
import subprocess
import sys

import pytest

from cvqpv.cli import build_parser, effective_config, parse_and_dispatch
from cvqpv.harness import ROUNDS_CSV_HEADER, SWEEP_CSV_HEADER


def run_cli(args):
    return parse_and_dispatch(args)


class TestRunCommand:
    def test_honest_run_writes_outputs(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = run_cli(
            ["run", "--n", "200", "--trials", "20", "--seed", "42", "--out", str(out)]
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["schema_version"] == 1
        assert report["scenario"] == "honest"
        assert report["acceptance_rate"] >= 0.95
        with open(out / "rounds.csv", newline="") as handle:
            header = next(csv.reader(handle))
        assert ",".join(header) == "trial,round,theta,r,r_perp,response,term,strategy"
        assert tuple(header) == ROUNDS_CSV_HEADER

    def test_heterodyne_attack_run(self, tmp_path):
        out = tmp_path / "out"
        code = run_cli(
            [
                "run",
                "--attack",
                "heterodyne",
                "--n",
                "1000",
                "--trials",
                "100",
                "--seed",
                "42",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["acceptance_rate"] <= 0.01
        assert report["predictions"]["score_mean"] == pytest.approx(2.0, abs=0.01)

    def test_zero_transmittance_names_parameter(self, tmp_path, capsys):
        code = run_cli(["run", "--t", "0", "--out", str(tmp_path / "o")])
        captured = capsys.readouterr()
        assert code == 1
        assert "t must lie in (0, 1]" in captured.err

    def test_unknown_flag_is_validation_error(self, capsys):
        code = run_cli(["run", "--no-such-flag", "3"])
        assert code == 1
        assert "error" in capsys.readouterr().err.lower()

    def test_reports_are_reproducible(self, tmp_path):
        outs = [tmp_path / "a", tmp_path / "b"]
        for out in outs:
            assert (
                run_cli(
                    ["run", "--n", "100", "--trials", "5", "--seed", "7", "--out", str(out)]
                )
                == 0
            )
        assert (outs[0] / "rounds.csv").read_bytes() == (outs[1] / "rounds.csv").read_bytes()
        assert (outs[0] / "report.json").read_bytes() == (outs[1] / "report.json").read_bytes()


class TestAnalyzeCommand:
    def test_ideal_channel_json(self, capsys):
        assert run_cli(["analyze", "--t", "1", "--u", "0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["region"] == "Secure"
        assert payload["entropy_gap_bits"] == pytest.approx(0.2787, abs=5e-4)
        assert payload["honest_mse"] == pytest.approx(0.5)
        assert payload["attacker_mse_floor"] == pytest.approx(0.7358, abs=5e-4)
        assert payload["gamma"]["n"] == 1000

    def test_insecure_channel_json(self, capsys):
        assert run_cli(["analyze", "--t", "0.5", "--u", "0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["region"] == "Insecure"


class TestSweepCommand:
    def test_small_grid(self, tmp_path, capsys):
        out = tmp_path / "s"
        code = run_cli(
            [
                "sweep",
                "--t-grid",
                "0.5,1.0",
                "--u-grid",
                "0.0",
                "--n",
                "150",
                "--trials",
                "10",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        with open(out / "sweep.csv", newline="") as handle:
            rows = list(csv.reader(handle))
        assert tuple(rows[0]) == SWEEP_CSV_HEADER
        assert len(rows) == 3
        regions = {(row[0], row[1]): row[2] for row in rows[1:]}
        assert regions[("0.5", "0")] == "Insecure"
        assert regions[("1", "0")] == "Secure"

    def test_bad_grid_rejected(self, capsys):
        assert run_cli(["sweep", "--t-grid", "abc"]) == 1


class TestConfigHandling:
    def test_config_file_with_flag_overrides(self, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps({"sigma": 50.0, "trials": 7, "seed": 5}))
        parser = build_parser()
        args = parser.parse_args(["run", "--config", str(cfg_path), "--trials", "9"])
        cfg = effective_config(args)
        assert cfg["sigma"] == 50.0
        assert cfg["trials"] == 9  # flag wins
        assert cfg["seed"] == 5

    def test_dump_config_round_trips(self, tmp_path):
        dump = tmp_path / "effective.json"
        assert run_cli(["analyze", "--sigma", "37.5", "--u", "0.1", "--dump-config", str(dump)]) == 0
        parser = build_parser()
        args = parser.parse_args(["analyze", "--config", str(dump)])
        cfg = effective_config(args)
        reference = effective_config(parser.parse_args(["analyze", "--sigma", "37.5", "--u", "0.1"]))
        assert cfg == reference

    def test_malformed_json_is_validation_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run_cli(["run", "--config", str(bad)]) == 1
        assert "malformed JSON" in capsys.readouterr().err

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"sgima": 10}))
        assert run_cli(["run", "--config", str(bad)]) == 1
        assert "sgima" in capsys.readouterr().err

    def test_missing_config_file_is_io_error(self, tmp_path):
        assert run_cli(["run", "--config", str(tmp_path / "nope.json")]) == 2

    def test_env_seed_fallback(self, monkeypatch):
        monkeypatch.setenv("CVQPV_SEED", "314")
        parser = build_parser()
        cfg = effective_config(parser.parse_args(["analyze"]))
        assert cfg["seed"] == 314

    def test_flag_seed_beats_env(self, monkeypatch):
        monkeypatch.setenv("CVQPV_SEED", "314")
        parser = build_parser()
        cfg = effective_config(parser.parse_args(["analyze", "--seed", "9"]))
        assert cfg["seed"] == 9


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        result = subprocess.run(
            [sys.executable, "-m", "cvqpv.cli", "analyze", "--t", "0.7", "--u", "0.0"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert json.loads(result.stdout)["region"] == "Secure"
