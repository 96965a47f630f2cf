"""
Double-POVM attack: Eve measures each party's (signal, reference) pair on
its own and fabricates Charlie's announcement. Her error is the chance of
confusing a sending/not-sending pair with a both-send (or neither-send)
pair when she sees a constructive click on one side and silence on the
other.

Her single-party operators are the two-mode operators applied to
|+sqrt(mu), +sqrt(mu)> at the channel transmittance eta(L).

The attack is detectable when her induced error exceeds the protocol's
own signal error rate. In the loss-only model the protocol has no error
at all, so any nonzero induced error gives it away.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from src.analysis.rates import rate
from src.protocol.errors import ParameterDomainError, SingularConfigurationError
from src.protocol.optics import signal_pair_state
from src.protocol.params import ProtocolParams
from src.protocol.povm import build_realistic, expectation

logger = logging.getLogger(__name__)

ATTACK_REGIMES = ("realistic", "loss")
# protocol variants whose signal error the realistic attack is compared with
ATTACK_BASELINES = ("real", "rand")

VERDICT_RATIO = "detectable by ratio"
VERDICT_NONZERO = "detectable by nonzero error"
VERDICT_HIDDEN = "not detectable"


@dataclass
class AttackReport:
    L: float
    e_distinguish: float
    e_baseline: float
    ratio: float
    regime: str
    detectable: bool
    verdict: str
    baseline: str = "real"

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "e_distinguish": self.e_distinguish,
            "e_baseline": self.e_baseline,
            "ratio": self.ratio,
            "regime": self.regime,
            "detectable": self.detectable,
            "verdict": self.verdict,
            "baseline": self.baseline,
        }

    def to_row(self) -> dict:
        return {
            "L_km": self.L,
            "e_distinguish": self.e_distinguish,
            "e_signal": self.e_baseline,
            "ratio": self.ratio,
            "regime": self.regime,
            "detectable": self.detectable,
        }


def posteriors(p_a: float, p_b: float) -> Tuple[float, float]:
    total = p_a + p_b
    if not total > 0.0:
        raise SingularConfigurationError(
            "attack joint probabilities are all zero: posteriors undefined"
        )
    return p_a / total, p_b / total


def _min_posterior(p_a: float, p_b: float) -> float:
    a, b = posteriors(p_a, p_b)
    # exact tie stays at 1/2
    return a if a <= b else b


def distinguish_error_loss_only(
    mu: float,
    eps: float,
    eta: float,
    *,
    include_common_factor: bool = False,
) -> float:
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    if not 0.0 <= eps <= 1.0:
        raise ParameterDomainError(f"epsilon must be in [0, 1], got {eps!r}", "epsilon")
    if not 0.0 < eta <= 1.0:
        raise ParameterDomainError(f"eta must be in (0, 1], got {eta!r}", "eta")
    xi2 = math.exp(-2.0 * mu * math.sqrt(eta))
    common = 1.0
    if include_common_factor:
        common = eps * -math.expm1(-2.0 * mu * math.sqrt(eta))
    p_sns = common * (1.0 - eps)
    p_ss = common * eps * xi2
    return _min_posterior(p_sns, p_ss)


def _single_party_expectations(params: ProtocolParams) -> Tuple[float, float]:
    mu, eta = params.mu, params.eta
    state = signal_pair_state("+", "+", mu)
    click = build_realistic("plus", mu, eta, params.delta, params.V, params.p_dark)
    silent = build_realistic("noclick", mu, eta, params.delta, params.V, params.p_dark)
    return expectation(state, click), expectation(state, silent)


def distinguish_error_realistic(params: ProtocolParams, epsilon: Optional[float] = None) -> float:
    eps = params.epsilon if epsilon is None else epsilon
    if not 0.0 <= eps <= 1.0:
        raise ParameterDomainError(f"epsilon must be in [0, 1], got {eps!r}", "epsilon")
    pd = params.p_dark
    click, silent = _single_party_expectations(params)
    not_sending_silent = (1.0 - eps) * (1.0 - pd) ** 2
    p_sns = eps * click * not_sending_silent
    p_ss = eps * click * eps * silent
    p_nn = (1.0 - eps) * (1.0 - pd) * pd * not_sending_silent
    try:
        return _min_posterior(p_sns, p_ss + p_nn)
    except SingularConfigurationError as exc:
        raise SingularConfigurationError(f"{exc} (L={params.L} km)") from exc


def _report(params: ProtocolParams, regime: str, variant: str) -> AttackReport:
    if regime == "loss":
        e_dist = distinguish_error_loss_only(params.mu, params.epsilon, params.eta)
        detectable = e_dist > 0.0
        return AttackReport(
            L=params.L,
            e_distinguish=e_dist,
            e_baseline=0.0,
            ratio=math.inf if detectable else math.nan,
            regime=regime,
            detectable=detectable,
            verdict=VERDICT_NONZERO if detectable else VERDICT_HIDDEN,
            baseline="loss",
        )

    e_dist = distinguish_error_realistic(params)
    e_base = rate(params, variant).e_signal
    if e_base > 0.0:
        ratio = e_dist / e_base
        detectable = ratio > 1.0
        verdict = VERDICT_RATIO if detectable else VERDICT_HIDDEN
    else:
        ratio = math.inf if e_dist > 0.0 else math.nan
        detectable = e_dist > 0.0
        verdict = VERDICT_NONZERO if detectable else VERDICT_HIDDEN
    return AttackReport(
        L=params.L,
        e_distinguish=e_dist,
        e_baseline=e_base,
        ratio=ratio,
        regime=regime,
        detectable=detectable,
        verdict=verdict,
        baseline=variant,
    )


def detectability(
    params: ProtocolParams,
    L_grid: Iterable[float],
    regime: str = "realistic",
    variant: str = "real",
) -> List[AttackReport]:
    """One AttackReport per distance, in grid order.

    ``variant`` picks the protocol whose signal error is the baseline in the
    realistic regime: the fixed-phase protocol or its phase-randomized form.
    """
    if regime not in ATTACK_REGIMES:
        raise ParameterDomainError(
            f"regime must be one of {ATTACK_REGIMES}, got {regime!r}", "regime"
        )
    if variant not in ATTACK_BASELINES:
        raise ParameterDomainError(
            f"baseline variant must be one of {ATTACK_BASELINES}, got {variant!r}", "variant"
        )
    grid = [float(L) for L in L_grid]
    if not grid:
        raise ParameterDomainError("L_grid must not be empty", "L_grid")
    reports = [_report(params.with_updates(L=L), regime, variant) for L in grid]
    hidden = sum(1 for r in reports if not r.detectable)
    logger.info(
        "attack %s vs %s: %d points, %d not detectable", regime, variant, len(reports), hidden
    )
    return reports
