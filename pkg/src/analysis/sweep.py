"""
Rate-distance sweeps, maximum-distance search and pointwise epsilon
optimisation.

A sweep evaluates one variant on a distance grid. Points are independent,
so they can run on a thread pool; results always come back in grid order.
A point that fails with a domain or degeneracy error is logged, recorded
as a NaN row carrying an ``error:`` flag, and the sweep moves on.

Attack sweeps (``attack_loss`` / ``attack_realistic``) go through
``attack.detectability`` and return AttackReports instead of RatePoints;
``SweepSpec.baseline`` names the protocol variant the attack error is
compared with.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from src.analysis.attack import ATTACK_BASELINES, AttackReport, detectability
from src.analysis.rates import VARIANTS, RatePoint, rate
from src.protocol.errors import (
    FlatObjectiveError,
    NoSignChangeError,
    NumericalDegeneracyError,
    ParameterDomainError,
)
from src.protocol.params import ProtocolParams

logger = logging.getLogger(__name__)

ATTACK_VARIANTS = {"attack_loss": "loss", "attack_realistic": "realistic"}
SWEEP_VARIANTS = VARIANTS + tuple(ATTACK_VARIANTS)

BISECTION_TOLERANCE_KM = 0.5
EPSILON_BOUNDS = (1e-6, 1.0 - 1e-6)
EPSILON_XATOL = 1e-6


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    step: float = 1.0

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.stop <= self.start:
            raise ValueError("stop must be > start")
        if self.start < 0:
            raise ValueError("start must be >= 0")

    def points(self) -> np.ndarray:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(count)


@dataclass(frozen=True)
class SweepSpec:
    params: ProtocolParams
    variant: str
    grid: Grid
    preset: Optional[str] = None
    baseline: str = "real"

    def __post_init__(self):
        if self.variant not in SWEEP_VARIANTS:
            raise ParameterDomainError(
                f"variant must be one of {SWEEP_VARIANTS}, got {self.variant!r}", "variant"
            )
        if self.baseline not in ATTACK_BASELINES:
            raise ParameterDomainError(
                f"baseline must be one of {ATTACK_BASELINES}, got {self.baseline!r}", "baseline"
            )

    @property
    def is_attack(self) -> bool:
        return self.variant in ATTACK_VARIANTS


SweepRecord = Union[RatePoint, AttackReport]


def _failed_point(variant: str, L: float, exc: Exception) -> RatePoint:
    nan = math.nan
    return RatePoint(
        L=L, R=nan, e_signal=nan, chi=nan, p_conclusive=nan,
        P_sns=nan, P_ss=nan, P_nn=nan, variant=variant,
        epsilon=nan, e_key=nan, flags=(f"error: {exc}",),
    )


def _evaluate_point(params: ProtocolParams, variant: str, L: float) -> RatePoint:
    try:
        return rate(params.with_updates(L=L), variant)
    except (ParameterDomainError, NumericalDegeneracyError) as exc:
        logger.warning("L=%.3f km %s failed: %s", L, variant, exc)
        return _failed_point(variant, L, exc)


def sweep(spec: SweepSpec, workers: int = 1) -> List[SweepRecord]:
    if workers < 1:
        raise ValueError("workers must be >= 1")
    grid = [float(L) for L in spec.grid.points()]
    label = spec.preset or spec.variant
    logger.info(
        "sweep %s: %d points %.1f..%.1f km, %d worker(s)",
        label, len(grid), grid[0], grid[-1], workers,
    )

    if spec.is_attack:
        regime = ATTACK_VARIANTS[spec.variant]
        return list(detectability(spec.params, grid, regime=regime, variant=spec.baseline))

    if workers == 1:
        points = [_evaluate_point(spec.params, spec.variant, L) for L in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda L: _evaluate_point(spec.params, spec.variant, L), grid))

    positive = [p.L for p in points if p.positive]
    if positive:
        logger.info("sweep %s: last positive grid point %.1f km", label, positive[-1])
    else:
        logger.info("sweep %s: no positive rate on the grid", label)
    return points


def last_positive(points: Sequence[RatePoint]) -> Optional[float]:
    positive = [p.L for p in points if p.positive]
    return positive[-1] if positive else None


def _rate_at(params: ProtocolParams, variant: str) -> Callable[[float], float]:
    def f(L: float) -> float:
        return rate(params.with_updates(L=L), variant).R
    return f


def max_distance(
    params: ProtocolParams,
    variant: str = "real",
    bracket: Tuple[float, float] = (0.0, 2000.0),
    tol: float = BISECTION_TOLERANCE_KM,
) -> float:
    """Largest L (to within ``tol``) with a positive rate.

    ``bracket`` must hold R > 0 at its start and R <= 0 at its end.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ParameterDomainError(f"bracket must be increasing, got {bracket!r}", "bracket")
    if not tol > 0:
        raise ParameterDomainError(f"tol must be positive, got {tol!r}", "tol")
    f = _rate_at(params, variant)

    r_lo = f(lo)
    if not r_lo > 0.0:
        raise NoSignChangeError(
            f"{variant}: rate at bracket start L={lo} km is {r_lo:.3e}, not positive"
        )
    r_hi = f(hi)
    if r_hi > 0.0:
        raise NoSignChangeError(
            f"{variant}: rate still positive at bracket end L={hi} km ({r_hi:.3e})"
        )

    steps = 0
    while hi - lo > tol:
        middle = 0.5 * lo + 0.5 * hi
        if f(middle) > 0.0:
            lo = middle
        else:
            hi = middle
        steps += 1
    logger.info("max distance %s: %.2f km after %d bisection steps", variant, lo, steps)
    return lo


@dataclass
class EpsilonOptimum:
    L: float
    epsilon: float
    rate: float
    profile_epsilon: float
    profile_rate: float

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "epsilon": self.epsilon,
            "rate": self.rate,
            "profile_epsilon": self.profile_epsilon,
            "profile_rate": self.profile_rate,
        }


def optimize_epsilon(
    params: ProtocolParams,
    variant: str = "real",
    L: Optional[float] = None,
    bounds: Tuple[float, float] = EPSILON_BOUNDS,
    xatol: float = EPSILON_XATOL,
) -> EpsilonOptimum:
    """Sending probability that maximises the rate at fixed L."""
    if L is not None:
        params = params.with_updates(L=L)

    def objective(eps: float) -> float:
        return -rate(params, variant, epsilon=eps).R

    samples = np.linspace(bounds[0], bounds[1], 9)
    values = np.array([objective(e) for e in samples])
    if np.ptp(values) == 0.0:
        raise FlatObjectiveError(
            f"{variant}: rate is constant in epsilon at L={params.L} km ({-values[0]:.3e})"
        )

    result = minimize_scalar(objective, bounds=bounds, method="bounded", options={"xatol": xatol})
    best_eps, best_rate = float(result.x), float(-result.fun)

    profile_eps = params.epsilon
    profile_rate = rate(params, variant).R
    if profile_rate > best_rate:
        best_eps, best_rate = profile_eps, profile_rate

    logger.info(
        "optimal epsilon %s at L=%.1f km: %.6f (rate %.4e, profile %.4f -> %.4e)",
        variant, params.L, best_eps, best_rate, profile_eps, profile_rate,
    )
    return EpsilonOptimum(
        L=params.L,
        epsilon=best_eps,
        rate=best_rate,
        profile_epsilon=profile_eps,
        profile_rate=profile_rate,
    )
