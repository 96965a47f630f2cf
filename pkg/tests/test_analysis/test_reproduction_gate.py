"""Tests for ReproductionGate distance checks."""

import json

import pytest

from src.analysis.presets import get_preset
from src.analysis.reproduction_gate import ReproductionGate, ReproductionResult


def make_result(max_km, expected=441.0, tol=10.0, **kwargs):
    return ReproductionResult(
        preset="fig4",
        variant="real",
        max_distance_km=max_km,
        last_positive_grid_km=kwargs.pop("last", None),
        expected_km=expected,
        tolerance_km=tol,
        **kwargs,
    )


class TestConstruction:
    def test_bad_workers_raises(self):
        with pytest.raises(ValueError):
            ReproductionGate(workers=0)

    def test_bad_tolerance_raises(self):
        with pytest.raises(ValueError):
            ReproductionGate(tol_km=0.0)

    def test_defaults(self):
        gate = ReproductionGate()
        assert gate.workers == 1
        assert gate.tol_km == 0.5


class TestResult:
    def test_summary_line_pass(self):
        line = make_result(443.2).summary_line()
        assert line == "max_distance_km=443.2 expected=441±10.0 band check: PASS"

    def test_summary_line_fail(self):
        result = make_result(400.0)
        assert not result.passes()
        assert result.summary_line().endswith("band check: FAIL")

    def test_band_edges_inclusive(self):
        assert make_result(451.0).passes()
        assert make_result(431.0).passes()

    def test_no_band_always_passes(self):
        result = make_result(300.0, expected=None, tol=None)
        assert result.passes()
        assert "no expected band" in result.summary_line()

    def test_to_dict(self):
        data = make_result(443.0, margins_km={"sns_tf": -437.0}).to_dict()
        assert data["passes"] is True
        assert data["margins_km"] == {"sns_tf": -437.0}
        assert "points" not in data


class TestEvaluate:
    def test_attack_preset_rejected(self):
        with pytest.raises(ValueError):
            ReproductionGate().evaluate(get_preset("fig3"))

    def test_fig4_without_curve(self):
        result = ReproductionGate().evaluate(get_preset("fig4"), with_curve=False)
        assert result.passes()
        assert result.points == []
        assert result.last_positive_grid_km is None

    @pytest.mark.slow
    def test_fig4_with_curve(self):
        result = ReproductionGate(workers=2).evaluate(get_preset("fig4"))
        assert len(result.points) == 501
        assert abs(result.max_distance_km - result.last_positive_grid_km) <= 1.0

    @pytest.mark.slow
    def test_margins_reported(self):
        result = ReproductionGate().evaluate(get_preset("fig7a"), with_curve=False)
        assert set(result.margins_km) == {"sns_tf", "sns_tf_post"}
        assert result.margins_km["sns_tf"] > 0.0


class TestReportAndSave:
    def test_report_mentions_margins(self):
        gate = ReproductionGate()
        text = gate.report(make_result(973.0, expected=973.0, tol=19.46,
                                       margins_km={"sns_tf": 93.0}, last=972.0))
        assert "band check: PASS" in text
        assert "last positive grid point: 972 km" in text
        assert "SNS-TF-QKD" in text

    def test_save_writes_versioned_json(self, tmp_path):
        path = tmp_path / "out" / "fig4.json"
        ReproductionGate().save(make_result(443.0), path)
        data = json.loads(path.read_text())
        assert data["schema_version"] == 1
        assert data["max_distance_km"] == 443.0
        assert not (tmp_path / "out" / "fig4.json.tmp").exists()
