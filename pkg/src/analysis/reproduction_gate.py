"""
ReproductionGate: checks that a preset still reaches its expected
distance.

Runs the bisection search for the preset's maximum distance, sweeps the
preset grid at 1 km resolution, and compares the result against the
expected distance band. Also reports how far the curve reaches past the
competitor endpoints the preset is compared with.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from src.analysis.constants import COMPETITOR_ENDPOINTS
from src.analysis.presets import Preset
from src.analysis.rates import RatePoint
from src.analysis.sweep import last_positive, max_distance, sweep
from src.utils.output import write_json


@dataclass
class ReproductionResult:
    preset: str
    variant: str
    max_distance_km: float
    last_positive_grid_km: Optional[float]
    expected_km: Optional[float]
    tolerance_km: Optional[float]
    margins_km: Dict[str, float] = field(default_factory=dict)
    points: List[RatePoint] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "variant": self.variant,
            "max_distance_km": self.max_distance_km,
            "last_positive_grid_km": self.last_positive_grid_km,
            "expected_km": self.expected_km,
            "tolerance_km": self.tolerance_km,
            "margins_km": dict(self.margins_km),
            "passes": self.passes(),
        }

    def passes(self) -> bool:
        if self.expected_km is None or self.tolerance_km is None:
            return True
        return abs(self.max_distance_km - self.expected_km) <= self.tolerance_km

    def summary_line(self) -> str:
        if self.expected_km is None or self.tolerance_km is None:
            return f"max_distance_km={self.max_distance_km:.1f} (no expected band)"
        verdict = "PASS" if self.passes() else "FAIL"
        return (
            f"max_distance_km={self.max_distance_km:.1f} "
            f"expected={self.expected_km:.0f}±{self.tolerance_km:.1f} "
            f"band check: {verdict}"
        )


class ReproductionGate:
    def __init__(self, workers: int = 1, tol_km: float = 0.5):
        if workers < 1:
            raise ValueError("workers must be >= 1")
        if tol_km <= 0:
            raise ValueError("tol_km must be > 0")
        self.workers = workers
        self.tol_km = tol_km

    def evaluate(self, preset: Preset, *, with_curve: bool = True) -> ReproductionResult:
        if preset.is_attack:
            raise ValueError(f"preset {preset.name!r} is an attack sweep, not a rate curve")
        L_star = max_distance(preset.params, preset.variant, preset.bracket, self.tol_km)

        points: List[RatePoint] = []
        last_grid = None
        if with_curve:
            points = sweep(preset.spec(), workers=self.workers)
            last_grid = last_positive(points)

        margins = {
            key: COMPETITOR_ENDPOINTS[key].margin_km(L_star) for key in preset.compare_with
        }
        return ReproductionResult(
            preset=preset.name,
            variant=preset.variant,
            max_distance_km=L_star,
            last_positive_grid_km=last_grid,
            expected_km=preset.expected_km,
            tolerance_km=preset.tolerance_km,
            margins_km=margins,
            points=points,
        )

    def report(self, result: ReproductionResult) -> str:
        lines = [f"\nReproduction of {result.preset} ({result.variant}):", "  " + result.summary_line()]
        if result.last_positive_grid_km is not None:
            lines.append(f"  last positive grid point: {result.last_positive_grid_km:.0f} km")
        for key, margin in result.margins_km.items():
            endpoint = COMPETITOR_ENDPOINTS[key]
            lines.append(
                f"  vs {endpoint.label:<32} {endpoint.distance_km:>7.1f} km  margin {margin:+8.1f} km"
            )
        return "\n".join(lines)

    def save(self, result: ReproductionResult, path: Path) -> Path:
        return write_json(result.to_dict(), path)
