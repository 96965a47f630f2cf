"""
Secret-key rates for the six protocol variants.

    loss        2 eps (1 - eps) (1 - xi^2) [1 - chi]           closed form
    loss_rand   0.5 * loss
    real        D [1 - chi - f_EC H(e)]
    real_aopp   s D [1 - chi - f_EC H(e~)]
    rand        0.5 D' [1 - chi - f_EC H(e')]
    rand_aopp   0.5 s' D' [1 - chi - f_EC H(e~')]

D is the conclusive-event probability 2 eps (1-eps) P_sns + eps^2 P_ss +
(1-eps)^2 P_nn. The primed quantities swap the fixed-phase coupler output
gamma for the worst-case randomized output psi. chi is always evaluated
on the pre-pairing states.

Every function takes an optional ``epsilon`` that bypasses the sending
probability profile. With no conclusive events the rate is 0 and the
point carries the ``no_conclusive_events`` flag with a NaN error rate.
When only both-send or neither-send events remain (eps of 0 or 1) the
rate is 0 with the ``no_sns_events`` flag.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from src.protocol.entropy import ec_leakage, holevo_from_overlap
from src.protocol.errors import NoConclusiveEventsError, ParameterDomainError
from src.protocol.optics import (
    coupler_output_intensity,
    signal_pair_state,
    ss_output_state,
    worst_case_ss_intensity,
)
from src.protocol.params import ProtocolParams
from src.protocol.povm import build_realistic, expectation, eve_overlap

logger = logging.getLogger(__name__)

VARIANTS = ("loss", "loss_rand", "real", "real_aopp", "rand", "rand_aopp")
RANDOMIZED_VARIANTS = ("loss_rand", "rand", "rand_aopp")
AOPP_VARIANTS = ("real_aopp", "rand_aopp")

# Fraction of rounds surviving phase-interval sifting.
PHASE_INTERVAL_SIFTING = 0.5

NO_CONCLUSIVE_EVENTS = "no_conclusive_events"
# every conclusive event is an error; no key can be formed
NO_SNS_EVENTS = "no_sns_events"

ROW_COLUMNS = ("L_km", "rate", "e_signal", "chi", "p_conclusive", "P_sns", "P_ss", "P_nn", "variant")


@dataclass
class RatePoint:
    L: float
    R: float
    e_signal: float
    chi: float
    p_conclusive: float
    P_sns: float
    P_ss: float
    P_nn: float
    variant: str
    epsilon: float
    e_key: float
    flags: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "R": self.R,
            "e_signal": self.e_signal,
            "chi": self.chi,
            "p_conclusive": self.p_conclusive,
            "P_sns": self.P_sns,
            "P_ss": self.P_ss,
            "P_nn": self.P_nn,
            "variant": self.variant,
            "epsilon": self.epsilon,
            "e_key": self.e_key,
            "flags": list(self.flags),
        }

    def to_row(self) -> dict:
        """One CSV row, columns in ROW_COLUMNS order."""
        return {
            "L_km": self.L,
            "rate": self.R,
            "e_signal": self.e_signal,
            "chi": self.chi,
            "p_conclusive": self.p_conclusive,
            "P_sns": self.P_sns,
            "P_ss": self.P_ss,
            "P_nn": self.P_nn,
            "variant": self.variant,
        }

    @property
    def positive(self) -> bool:
        return self.R > 0.0


@dataclass(frozen=True)
class SignalProbabilities:
    P_sns: float
    P_ss: float
    P_nn: float
    ss_intensity: float


@dataclass(frozen=True)
class ErrorBreakdown:
    e: float
    e1: float
    e2: float
    D: float


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ParameterDomainError(f"variant must be one of {VARIANTS}, got {variant!r}", "variant")


def _check_epsilon(eps: float) -> float:
    if not 0.0 <= eps <= 1.0:
        raise ParameterDomainError(f"epsilon must be in [0, 1], got {eps!r}", "epsilon")
    return float(eps)


def _resolve_epsilon(params: ProtocolParams, epsilon: Optional[float]) -> float:
    if epsilon is None:
        return params.epsilon
    return _check_epsilon(epsilon)


# -- loss-only closed forms -------------------------------------------------

def loss_only_click_probability(mu: float, eta: float) -> float:
    """1 - exp(-2 mu sqrt(eta)): the destructive port clicks on one sending party."""
    return -math.expm1(-2.0 * mu * math.sqrt(eta))


def loss_only_overlap(mu: float, eta: float) -> float:
    sqrt_eta = math.sqrt(eta)
    return math.exp(-4.0 * mu * (1.0 - sqrt_eta) - 2.0 * mu * sqrt_eta)


def _check_loss_inputs(mu: float, eps: float, eta: float) -> None:
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    _check_epsilon(eps)
    if not 0.0 <= eta <= 1.0:
        raise ParameterDomainError(f"eta must be in [0, 1], got {eta!r}", "eta")


def rate_loss_only(mu: float, eps: float, eta: float) -> float:
    _check_loss_inputs(mu, eps, eta)
    chi = holevo_from_overlap(loss_only_overlap(mu, eta))
    return 2.0 * eps * (1.0 - eps) * loss_only_click_probability(mu, eta) * (1.0 - chi)


def rate_loss_only_randomized(mu: float, eps: float, eta: float) -> float:
    return PHASE_INTERVAL_SIFTING * rate_loss_only(mu, eps, eta)


def _loss_point(params: ProtocolParams, variant: str, epsilon: Optional[float]) -> RatePoint:
    eps = _resolve_epsilon(params, epsilon)
    mu, eta = params.mu, params.eta
    P_sns = loss_only_click_probability(mu, eta)
    D = 2.0 * eps * (1.0 - eps) * P_sns
    chi = holevo_from_overlap(loss_only_overlap(mu, eta))
    if variant == "loss":
        R = rate_loss_only(mu, eps, eta)
    else:
        R = rate_loss_only_randomized(mu, eps, eta)
    flags: Tuple[str, ...] = ()
    e = 0.0
    if D == 0.0:
        flags = (NO_CONCLUSIVE_EVENTS,)
        e = math.nan
    return RatePoint(
        L=params.L, R=R, e_signal=e, chi=chi, p_conclusive=D,
        P_sns=P_sns, P_ss=0.0, P_nn=0.0, variant=variant,
        epsilon=eps, e_key=e, flags=flags,
    )


# -- realistic components ---------------------------------------------------

def signal_probs(
    params: ProtocolParams,
    variant: str = "real",
    *,
    force_zero_ss: bool = False,
) -> SignalProbabilities:
    """(P_sns, P_ss, P_nn) for the destructive-port outcome.

    The randomized variants evaluate the sending-sending term at the
    worst-case coupler output psi instead of the fixed-phase output gamma.
    ``force_zero_ss`` drops that term entirely.
    """
    _check_variant(variant)
    mu, eta = params.mu, params.eta
    signal_op = build_realistic("minus", mu, eta, params.delta, params.V, params.p_dark)
    P_plus_minus = expectation(signal_pair_state("+", "-", mu), signal_op)
    P_minus_plus = expectation(signal_pair_state("-", "+", mu), signal_op)
    if params.sns_weighting == "summed":
        P_sns = P_plus_minus + P_minus_plus
    else:
        P_sns = 0.5 * (P_plus_minus + P_minus_plus)

    if variant in RANDOMIZED_VARIANTS:
        intensity = worst_case_ss_intensity(mu, params.V)
    else:
        intensity = coupler_output_intensity(mu, 0.0, params.delta, params.V)
    if force_zero_ss:
        P_ss = 0.0
    else:
        ss_op = build_realistic("minus", intensity, eta, params.delta, params.V, params.p_dark)
        P_ss = expectation(ss_output_state(intensity), ss_op)

    P_nn = params.p_dark * (1.0 - params.p_dark)
    return SignalProbabilities(P_sns=P_sns, P_ss=P_ss, P_nn=P_nn, ss_intensity=intensity)


def conclusive_probability(P_sns: float, P_ss: float, P_nn: float, eps: float) -> float:
    return 2.0 * eps * (1.0 - eps) * P_sns + eps ** 2 * P_ss + (1.0 - eps) ** 2 * P_nn


def signal_error_rate(P_sns: float, P_ss: float, P_nn: float, eps: float) -> ErrorBreakdown:
    D = conclusive_probability(P_sns, P_ss, P_nn, eps)
    if D <= 0.0:
        raise NoConclusiveEventsError(
            f"no conclusive events at epsilon={eps!r}: cannot form an error rate"
        )
    e1 = eps ** 2 * P_ss / D
    e2 = (1.0 - eps) ** 2 * P_nn / D
    return ErrorBreakdown(e=(eps ** 2 * P_ss + (1.0 - eps) ** 2 * P_nn) / D, e1=e1, e2=e2, D=D)


def aopp_transform(e: float) -> Tuple[float, float]:
    """Sifting factor and post-pairing error rate of odd-parity pairing."""
    if not 0.0 <= e <= 1.0:
        raise ParameterDomainError(f"error rate must be in [0, 1], got {e!r}", "e")
    kept = (1.0 - e) ** 2 + e ** 2
    return 0.5 * kept, e ** 2 / kept


def _realistic_point(
    params: ProtocolParams,
    variant: str,
    epsilon: Optional[float],
    force_zero_ss: bool = False,
) -> RatePoint:
    eps = _resolve_epsilon(params, epsilon)
    probs = signal_probs(params, variant, force_zero_ss=force_zero_ss)
    chi = holevo_from_overlap(eve_overlap(params, "realistic"))
    D = conclusive_probability(probs.P_sns, probs.P_ss, probs.P_nn, eps)
    if D <= 0.0:
        logger.debug("L=%.3f km %s: no conclusive events at epsilon=%g", params.L, variant, eps)
        return RatePoint(
            L=params.L, R=0.0, e_signal=math.nan, chi=chi, p_conclusive=0.0,
            P_sns=probs.P_sns, P_ss=probs.P_ss, P_nn=probs.P_nn, variant=variant,
            epsilon=eps, e_key=math.nan, flags=(NO_CONCLUSIVE_EVENTS,),
        )

    errors = signal_error_rate(probs.P_sns, probs.P_ss, probs.P_nn, eps)
    sifting = PHASE_INTERVAL_SIFTING if variant in RANDOMIZED_VARIANTS else 1.0
    e_key = errors.e
    if variant in AOPP_VARIANTS:
        pairing, e_key = aopp_transform(errors.e)
        sifting *= pairing

    flags: Tuple[str, ...] = ()
    if 2.0 * eps * (1.0 - eps) * probs.P_sns == 0.0:
        R = 0.0
        flags = (NO_SNS_EVENTS,)
    else:
        R = sifting * D * (1.0 - chi - ec_leakage(e_key, params.f_EC))
    logger.debug("L=%.3f km %s: R=%.6e e=%.6e chi=%.6f", params.L, variant, R, errors.e, chi)
    return RatePoint(
        L=params.L, R=R, e_signal=errors.e, chi=chi, p_conclusive=D,
        P_sns=probs.P_sns, P_ss=probs.P_ss, P_nn=probs.P_nn, variant=variant,
        epsilon=eps, e_key=e_key, flags=flags,
    )


def rate_realistic(params: ProtocolParams, epsilon: Optional[float] = None) -> RatePoint:
    return _realistic_point(params, "real", epsilon)


def rate_realistic_aopp(params: ProtocolParams, epsilon: Optional[float] = None) -> RatePoint:
    return _realistic_point(params, "real_aopp", epsilon)


def rate_randomized(
    params: ProtocolParams,
    epsilon: Optional[float] = None,
    *,
    force_zero_ss: bool = False,
) -> RatePoint:
    return _realistic_point(params, "rand", epsilon, force_zero_ss)


def rate_randomized_aopp(
    params: ProtocolParams,
    epsilon: Optional[float] = None,
    *,
    force_zero_ss: bool = False,
) -> RatePoint:
    return _realistic_point(params, "rand_aopp", epsilon, force_zero_ss)


_DISPATCH: Dict[str, Callable[..., RatePoint]] = {
    "loss": lambda p, eps: _loss_point(p, "loss", eps),
    "loss_rand": lambda p, eps: _loss_point(p, "loss_rand", eps),
    "real": rate_realistic,
    "real_aopp": rate_realistic_aopp,
    "rand": rate_randomized,
    "rand_aopp": rate_randomized_aopp,
}


def rate(params: ProtocolParams, variant: str = "real", epsilon: Optional[float] = None) -> RatePoint:
    """Evaluate one variant at ``params.L``."""
    _check_variant(variant)
    return _DISPATCH[variant](params, epsilon)
