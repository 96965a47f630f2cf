"""
Coherent states in the even/odd canonical basis, and the coupler model.

A single-mode coherent state of intensity I is written exactly in the
two-dimensional span of

    |e0> ∝ (|a> + |-a>),   |e1> ∝ (|a> - |-a>),   |a|^2 = I

as |±sqrt(I)> = c0 |e0> ± c1 |e1>, with c0 = e^{-I/2} sqrt(cosh I) and
c1 = e^{-I/2} sqrt(sinh I). Two-mode product states use the fixed basis
order (|e0e0>, |e1e1>, |e0e1>, |e1e0>) so the operator matrices in
``povm`` split into two contiguous 2x2 blocks.

The coupler merges Alice's and Bob's pulses with a relative phase Delta
and leaves an output of intensity

    gamma = (1 + V - 2 sqrt(V) cos(Delta - delta)) * mu

The output's global phase is absorbed into the basis and dropped.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.protocol.errors import ParameterDomainError

BASIS_LABELS = ("e0e0", "e1e1", "e0e1", "e1e0")

_SIGNS = {"+": 1.0, "-": -1.0, 1: 1.0, -1: -1.0}

Sign = Union[str, int]


def _sign_value(sign: Sign) -> float:
    try:
        return _SIGNS[sign]
    except KeyError:
        raise ParameterDomainError(f"sign must be '+' or '-', got {sign!r}", "sign") from None


def _check_intensity(I: float) -> None:
    if not I >= 0.0:
        raise ParameterDomainError(f"intensity must be non-negative, got {I!r}", "intensity")


@dataclass(frozen=True)
class TwoModeState:
    amplitudes: np.ndarray
    intensity: float

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (4,):
            raise ValueError(f"amplitudes must have shape (4,), got {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)
        _check_intensity(self.intensity)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class CouplerConfig:
    delta: float = 0.0
    V: float = 1.0
    Delta: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.V <= 1.0:
            raise ParameterDomainError(f"V must be in (0, 1], got {self.V!r}", "V")

    def output_intensity(self, mu: float) -> float:
        return coupler_output_intensity(mu, self.Delta, self.delta, self.V)


def canonical_coeffs(I: float) -> Tuple[float, float]:
    """(c0, c1) for intensity I; c0**2 + c1**2 == 1."""
    _check_intensity(I)
    # e^{-I} cosh I = (1 + e^{-2I}) / 2 and e^{-I} sinh I = (1 - e^{-2I}) / 2
    c0 = math.sqrt((1.0 + math.exp(-2.0 * I)) / 2.0)
    c1 = math.sqrt(-math.expm1(-2.0 * I) / 2.0)
    return c0, c1


def coherent_mode(sign: Sign, I: float) -> np.ndarray:
    """Single-mode amplitudes (c0, ±c1) of |±sqrt(I)>."""
    c0, c1 = canonical_coeffs(I)
    return np.array([c0, _sign_value(sign) * c1], dtype=complex)


def product_state(mode_q: np.ndarray, mode_t: np.ndarray, I: float) -> TwoModeState:
    q0, q1 = mode_q
    t0, t1 = mode_t
    return TwoModeState(np.array([q0 * t0, q1 * t1, q0 * t1, q1 * t0]), I)


def signal_pair_state(sign_Q: Sign, sign_T: Sign, mu: float) -> TwoModeState:
    """|sign_Q sqrt(mu), sign_T sqrt(mu)> for the signal (Q) and reference (T) modes."""
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    return product_state(coherent_mode(sign_Q, mu), coherent_mode(sign_T, mu), mu)


def coupler_output_intensity(mu: float, Delta: float, delta: float, V: float) -> float:
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    if not 0.0 < V <= 1.0:
        raise ParameterDomainError(f"V must be in (0, 1], got {V!r}", "V")
    gamma = (1.0 + V - 2.0 * math.sqrt(V) * math.cos(Delta - delta)) * mu
    return max(gamma, 0.0)


def worst_case_ss_intensity(mu: float, V: float) -> float:
    """Coupler output when the relative phase sits at delta - pi."""
    if not mu > 0.0:
        raise ParameterDomainError(f"mu must be positive, got {mu!r}", "mu")
    if not 0.0 < V <= 1.0:
        raise ParameterDomainError(f"V must be in (0, 1], got {V!r}", "V")
    return (1.0 + V + 2.0 * math.sqrt(V)) * mu


def ss_output_state(I: float) -> TwoModeState:
    """Both coupler outputs |sqrt(I), sqrt(I)> with per-mode amplitudes (c0, -c1)."""
    mode = coherent_mode("-", I)
    return product_state(mode, mode, I)
