"""End-to-end tests for the keyrate command line."""

import json
from pathlib import Path

import pandas as pd
import pytest

from keyrate import EXIT_CHECK_FAILED, EXIT_DEGENERATE, EXIT_DOMAIN, EXIT_OK, main

FIG4_CONFIG = str(Path(__file__).resolve().parents[1] / "configs" / "fig4_params.json")

pytestmark = pytest.mark.integration


class TestRate:
    def test_prints_point(self, capsys):
        assert main(["rate", "--config", FIG4_CONFIG, "--override", "L=100"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "Rate at L=100 km (real)" in out
        assert "chi" in out

    def test_csv_output(self, tmp_path):
        path = tmp_path / "rate.csv"
        assert main(["rate", "--preset", "fig4", "--override", "L=50", "--output", str(path)]) == EXIT_OK
        frame = pd.read_csv(path)
        assert list(frame.columns)[:2] == ["L_km", "rate"]
        assert frame.loc[0, "rate"] > 0.0

    def test_invalid_parameter(self, capsys):
        assert main(["rate", "--override", "mu=0"]) == EXIT_DOMAIN
        assert "mu must be positive" in capsys.readouterr().err

    def test_unknown_parameter(self):
        assert main(["rate", "--override", "wavelength=1550"]) == EXIT_DOMAIN

    def test_flags_printed(self, capsys):
        assert main(["rate", "--override", "L=10", "--epsilon", "0"]) == EXIT_OK
        assert "no_conclusive_events" in capsys.readouterr().out


class TestSweep:
    def test_byte_identical_across_workers(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["sweep", "--config", FIG4_CONFIG, "--start", "0", "--stop", "460", "--step", "20"]
        assert main(base + ["--workers", "1", "--output", str(a)]) == EXIT_OK
        assert main(base + ["--workers", "3", "--output", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert len(pd.read_csv(a)) == 24

    def test_attack_variant(self, tmp_path):
        path = tmp_path / "attack.csv"
        argv = ["sweep", "--preset", "fig2", "--start", "1", "--stop", "10", "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert list(pd.read_csv(path).columns) == [
            "L_km", "e_distinguish", "e_signal", "ratio", "regime", "detectable",
        ]

    def test_bad_grid(self, tmp_path):
        argv = ["sweep", "--start", "10", "--stop", "5", "--output", str(tmp_path / "x.csv")]
        assert main(argv) == EXIT_DOMAIN


class TestMaxDistance:
    def test_fig4(self, capsys):
        assert main(["max-distance", "--preset", "fig4"]) == EXIT_OK
        out = capsys.readouterr().out
        value = float(out.split("max_distance_km=")[1].split()[0])
        assert 431.0 <= value <= 451.0

    def test_loss_only_has_no_crossing(self, capsys):
        assert main(["max-distance", "--variant", "loss", "--bracket", "0", "2000"]) == EXIT_DEGENERATE
        assert "numerical error" in capsys.readouterr().err


class TestAttack:
    def test_realistic(self, tmp_path, capsys):
        path = tmp_path / "attack.csv"
        argv = ["attack", "--preset", "fig3", "--start", "1", "--stop", "901", "--step", "100",
                "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert "detectable at 10/10 points" in capsys.readouterr().out
        assert (pd.read_csv(path)["ratio"] > 1.0).all()

    def test_randomized_baseline(self, tmp_path, capsys):
        path = tmp_path / "attack.csv"
        argv = ["attack", "--preset", "fig3", "--variant", "rand", "--start", "1", "--stop", "901",
                "--step", "100", "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert "10/10 points (realistic, baseline rand)" in capsys.readouterr().out
        assert (pd.read_csv(path)["ratio"] > 1.0).all()

    def test_preset_baseline_is_default(self, tmp_path, capsys):
        argv = ["attack", "--preset", "fig3_rand", "--start", "1", "--stop", "11", "--step", "5",
                "--output", str(tmp_path / "attack.csv")]
        assert main(argv) == EXIT_OK
        assert "baseline rand" in capsys.readouterr().out

    def test_regime_follows_loss_preset(self, tmp_path, capsys):
        path = tmp_path / "attack.csv"
        argv = ["attack", "--preset", "fig2", "--start", "1", "--stop", "10", "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert "(loss)" in capsys.readouterr().out
        assert set(pd.read_csv(path)["regime"]) == {"loss"}

    def test_explicit_regime_wins(self, tmp_path):
        path = tmp_path / "attack.csv"
        argv = ["attack", "--preset", "fig2", "--regime", "realistic", "--start", "1", "--stop", "10",
                "--output", str(path)]
        assert main(argv) == EXIT_OK
        assert set(pd.read_csv(path)["regime"]) == {"realistic"}

    def test_unknown_baseline_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["attack", "--variant", "real_aopp"])


class TestMcValidate:
    def test_passes(self, tmp_path, capsys):
        trace = tmp_path / "trace.csv"
        argv = ["mc-validate", "--override", "L=0", "--seed", "42", "--N", "1000000",
                "--trace", str(trace), "--trace-limit", "100"]
        assert main(argv) == EXIT_OK
        out = capsys.readouterr().out
        assert "PCG64" in out
        assert "PASS" in out
        assert len(pd.read_csv(trace)) == 100

    def test_zero_rounds(self):
        assert main(["mc-validate", "--N", "0"]) == EXIT_DOMAIN


class TestReproduce:
    def test_fig4_json(self, tmp_path, capsys):
        argv = ["reproduce", "fig4", "--no-curve", "--json", "--output-dir", str(tmp_path)]
        assert main(argv) == EXIT_OK
        assert "band check: PASS" in capsys.readouterr().out
        data = json.loads((tmp_path / "fig4.json").read_text())
        assert data["passes"] is True

    @pytest.mark.slow
    def test_fig4_curve(self, tmp_path):
        assert main(["reproduce", "fig4", "--output-dir", str(tmp_path), "--workers", "2"]) == EXIT_OK
        assert len(pd.read_csv(tmp_path / "fig4.csv")) == 501

    def test_unknown_preset_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["reproduce", "fig99"])


class TestOptimize:
    def test_writes_json(self, tmp_path):
        path = tmp_path / "opt.json"
        argv = ["optimize", "--preset", "fig4", "--L", "50", "--output", str(path)]
        assert main(argv) == EXIT_OK
        data = json.loads(path.read_text())
        assert 0.0 < data["epsilon"] < 0.5
        assert data["params"]["L"] == 50.0

    def test_flat_objective(self):
        argv = ["optimize", "--variant", "loss", "--override", "alpha=1.0", "--L", "3500"]
        assert main(argv) == EXIT_DEGENERATE


def test_check_failed_exit_code_is_distinct():
    assert len({EXIT_OK, EXIT_CHECK_FAILED, EXIT_DOMAIN, EXIT_DEGENERATE}) == 4
