"""Binary entropy, Holevo term and error-correction leakage (all in bits)."""

import math

from scipy.special import entr

from src.protocol.errors import ParameterDomainError

CLAMP_TOLERANCE = 1e-12
_LN2 = math.log(2.0)


def clamp_probability(p: float, *, tol: float = CLAMP_TOLERANCE, name: str = "p") -> float:
    """Snap floating slop within ``tol`` of [0, 1] onto the interval."""
    if math.isnan(p):
        raise ParameterDomainError(f"{name} is NaN", name)
    if -tol <= p < 0.0:
        return 0.0
    if 1.0 < p <= 1.0 + tol:
        return 1.0
    if not 0.0 <= p <= 1.0:
        raise ParameterDomainError(f"{name} must be in [0, 1], got {p!r}", name)
    return float(p)


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    p = clamp_probability(p)
    return float((entr(p) + entr(1.0 - p)) / _LN2)


def holevo_from_overlap(overlap_magnitude: float) -> float:
    """Holevo bound for an equal mixture of two pure states with |<a|b>| = m."""
    m = clamp_probability(overlap_magnitude, name="overlap")
    return binary_entropy((1.0 - m) / 2.0)


def ec_leakage(e: float, f_EC: float) -> float:
    if not f_EC >= 1.0:
        raise ParameterDomainError(f"f_EC must be ≥1, got {f_EC!r}", "f_EC")
    return f_EC * binary_entropy(e)
