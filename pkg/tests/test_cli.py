"""CLI tests: angle parsing, exit codes, file outputs, determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from pdsq import read_dataset
from pdsq.cli import (EXIT_ANALYSIS, EXIT_IO, EXIT_OK, EXIT_USAGE,
                      main, parse_angle, _parse_dims)


def _simulate(tmp_path, name="d.pdsq", extra=()):
    path = tmp_path / name
    argv = ["simulate", "--noise", "gaussian", "--sigma", "deg:12.6",
            "--n", "2000", "--seed", "3", "--out", str(path), *extra]
    assert main(argv) == EXIT_OK
    return path


class TestParseAngle:
    def test_degrees(self):
        assert parse_angle("deg:12.6") == pytest.approx(math.radians(12.6))

    def test_radians(self):
        assert parse_angle("rad:0.25") == 0.25

    def test_case_and_whitespace(self):
        assert parse_angle("  DEG:90 ") == pytest.approx(math.pi / 2)

    def test_negative_allowed(self):
        assert parse_angle("rad:-0.5") == -0.5

    @pytest.mark.parametrize("bad", ["0.5", "12.6deg", "deg:", "deg:abc",
                                     "rad:inf", "grad:100", ""])
    def test_rejected(self, bad):
        with pytest.raises(ValueError):
            parse_angle(bad)


class TestParseDims:
    def test_range(self):
        assert _parse_dims("2-10") == tuple(range(2, 11))

    def test_list(self):
        assert _parse_dims("2,4,6") == (2, 4, 6)

    def test_single(self):
        assert _parse_dims("3") == (3,)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            _parse_dims(" , ")


class TestExitCodes:
    def test_unknown_command_is_usage(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_bare_angle_is_usage(self, tmp_path, capsys):
        code = main(["simulate", "--theta", "0.5",
                     "--out", str(tmp_path / "x.pdsq")])
        assert code == EXIT_USAGE
        assert "deg: or rad:" in capsys.readouterr().err

    def test_missing_required_argument_is_usage(self, capsys):
        assert main(["simulate", "--n", "10"]) == EXIT_USAGE

    def test_missing_file_is_io(self, tmp_path, capsys):
        code = main(["analyze", str(tmp_path / "absent.pdsq"), "--cf"])
        assert code == EXIT_IO
        assert "i/o error" in capsys.readouterr().err

    def test_corrupt_csv_is_io(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("1.0\nnot-a-number\n")
        assert main(["analyze", str(bad), "--cf"]) == EXIT_IO
        err = capsys.readouterr().err
        assert "bad.csv:2" in err

    def test_witness_without_model_is_analysis(self, tmp_path, capsys):
        plain = tmp_path / "plain.csv"
        plain.write_text("0.1\n-0.2\n0.3\n")
        assert main(["analyze", str(plain), "--witness"]) == EXIT_ANALYSIS
        assert "state model" in capsys.readouterr().err

    def test_no_analysis_selected_is_analysis(self, tmp_path, capsys):
        path = _simulate(tmp_path)
        assert main(["analyze", str(path)]) == EXIT_ANALYSIS
        assert "at least one" in capsys.readouterr().err

    def test_gaussian_without_sigma_is_analysis(self, tmp_path, capsys):
        code = main(["simulate", "--noise", "gaussian",
                     "--out", str(tmp_path / "x.pdsq"), "--n", "10"])
        assert code == EXIT_ANALYSIS
        assert "--sigma" in capsys.readouterr().err

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        assert "simulate" in capsys.readouterr().out


class TestSimulate:
    def test_writes_readable_dataset(self, tmp_path, capsys):
        path = _simulate(tmp_path)
        out = capsys.readouterr().out
        assert "2000 samples" in out
        ds = read_dataset(path)
        assert ds.n == 2000
        assert ds.meta.seed == 3
        assert ds.meta.model["noise"] == "gaussian"

    def test_same_seed_same_bytes(self, tmp_path):
        p1 = _simulate(tmp_path, "a.pdsq")
        p2 = _simulate(tmp_path, "b.pdsq")
        assert p1.read_bytes() == p2.read_bytes()

    def test_theta_recorded(self, tmp_path):
        path = _simulate(tmp_path, extra=("--theta", "rad:0.25"))
        assert read_dataset(path).theta == 0.25


class TestAnalyze:
    def test_json_report_to_file(self, tmp_path, capsys):
        path = _simulate(tmp_path)
        out_json = tmp_path / "report.json"
        code = main(["analyze", str(path), "--cf", "--moments",
                     "--max-order", "4", "--replicates", "5",
                     "--grid-points", "30", "--json", str(out_json)])
        assert code == EXIT_OK
        rep = json.loads(out_json.read_text())
        assert set(rep["results"]) == {"summary", "cf", "moments"}
        assert rep["config"]["analyses"] == ["cf", "moments"]
        assert rep["results"]["moments"]["orders"] == [2, 4]
        # dataset carries its model, so oracle columns appear
        assert "oracle" in rep["results"]["moments"]

    def test_report_to_stdout(self, tmp_path, capsys):
        path = _simulate(tmp_path)
        capsys.readouterr()  # drop the simulate progress line
        code = main(["analyze", str(path), "--cf",
                     "--grid-points", "20", "--replicates", "5"])
        assert code == EXIT_OK
        rep = json.loads(capsys.readouterr().out)
        assert rep["results"]["cf"]["grid"]["points"] == 20

    def test_csv_import_with_theta(self, tmp_path):
        csv = tmp_path / "x.csv"
        csv.write_text("\n".join(str(v) for v in np.linspace(-1, 1, 64)))
        out_json = tmp_path / "r.json"
        code = main(["analyze", str(csv), "--moments", "--max-order", "2",
                     "--replicates", "5", "--theta", "deg:0",
                     "--json", str(out_json)])
        assert code == EXIT_OK
        rep = json.loads(out_json.read_text())
        assert rep["results"]["summary"]["theta"] == 0.0
        assert "oracle" not in rep["results"]["moments"]

    def test_theta_override_on_container_rejected(self, tmp_path, capsys):
        path = _simulate(tmp_path)
        code = main(["analyze", str(path), "--cf", "--theta", "rad:1.0"])
        assert code == EXIT_ANALYSIS
        assert "CSV" in capsys.readouterr().err

    def test_matrices_dims_parsing(self, tmp_path):
        path = _simulate(tmp_path)
        out_json = tmp_path / "m.json"
        code = main(["analyze", str(path), "--matrices", "--dims", "2,3",
                     "--replicates", "5", "--json", str(out_json)])
        assert code == EXIT_OK
        rep = json.loads(out_json.read_text())
        assert rep["results"]["matrices"]["dims"] == [2, 3]


class TestReportCommand:
    def _write_config(self, tmp_path):
        from pdsq.report import RunConfig
        from pdsq.states import PhaseNoise, SqueezingParams, StateModel
        model = StateModel(SqueezingParams(0.36, 5.28), PhaseNoise.delta())
        cfg = RunConfig(model=model, n=1500, seed=6,
                        analyses=frozenset({"cf"}), grid_points=25)
        path = tmp_path / "cfg.json"
        path.write_text(cfg.to_json())
        return path

    def test_json_output(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path)
        out = tmp_path / "out"
        code = main(["report", str(cfg), "--out-dir", str(out)])
        assert code == EXIT_OK
        rep = json.loads((out / "report.json").read_text())
        assert rep["config"]["n"] == 1500
        assert rep["results"]["cf"]["significance"]["detected"] is True

    def test_csv_output(self, tmp_path):
        cfg = self._write_config(tmp_path)
        out = tmp_path / "csv"
        code = main(["report", str(cfg), "--out-dir", str(out),
                     "--format", "csv"])
        assert code == EXIT_OK
        names = sorted(p.name for p in out.iterdir())
        assert names == ["cf_curves.csv", "table1.csv"]

    def test_malformed_config_is_io(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"model\": 3")
        assert main(["report", str(bad)]) == EXIT_IO
        assert "bad run config" in capsys.readouterr().err


class TestCatalogCommand:
    def test_small_run(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PDSQ_THREADS", "1")
        out = tmp_path / "cat"
        code = main(["catalog", "--n", "400", "--replicates", "4",
                     "--seeds", "1,2,3,4,5", "--out-dir", str(out),
                     "--format", "json"])
        assert code == EXIT_OK
        text = capsys.readouterr().out
        for label in ("sigma=0.0", "sigma=6.3", "sigma=12.6",
                      "sigma=22.2", "sigma=inf"):
            assert label in text
        rep = json.loads((out / "report.json").read_text())
        # canonical JSON sorts keys, so compare as a set
        assert set(rep["results"]["states"]) == {"0.0", "6.3", "12.6",
                                                 "22.2", "inf"}

    def test_wrong_seed_count_is_analysis(self, tmp_path, capsys):
        code = main(["catalog", "--n", "100", "--seeds", "1,2",
                     "--out-dir", str(tmp_path)])
        assert code == EXIT_ANALYSIS
        assert "seeds" in capsys.readouterr().err

    def test_bad_thread_cap_is_analysis(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("PDSQ_THREADS", "zero")
        code = main(["catalog", "--n", "100", "--out-dir", str(tmp_path)])
        assert code == EXIT_ANALYSIS
        assert "PDSQ_THREADS" in capsys.readouterr().err


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "pdsq.cli", "--help"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "simulate" in proc.stdout
