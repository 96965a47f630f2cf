"""
POVM operators of Charlie's beamsplitter measurement on the two coupler
outputs, as 4x4 matrices in the basis order of ``optics``.

Every operator has the form

    F = D^-1 K D^-1,   D = diag(c0^2, c1^2, c0 c1, c0 c1)

where K holds the physics (loss, mismatch, dark counts) and D carries
the basis normalisation at the operator's build intensity I. Product
states are D times a sign vector, so expectation values reduce to sign
patterns of K and stay well conditioned at small I. At I = 0 the odd
basis vector does not exist; the rows and columns that would divide by
zero are set to zero, which leaves the vacuum element intact.

Channel scalars (t = sqrt(eta) * I):

    xi    = exp(-t)                       survival amplitude at Charlie
    Omega = exp(-2 (1 - sqrt(eta)) I)     overlap of the lost light

Ideal regime: perfect interference, no dark counts. Realistic regime:
phase mismatch delta and mode mismatch V enter through the coefficients
a, b, c, d, o, p, and dark counts mix in the no-click element:

    F-_imp = (1 - p) F-_mis + (1 - p) p F?_mis
    F+_imp = (1 - p) F+_mis + (1 - p) p F?_mis
    F?_imp = (1 - p)^2 F?_mis

F?_mis equals the ideal F?. Powers of xi are evaluated as exponentials
of t with ``expm1`` so that rates stay accurate at 1000+ km, where t is
around 1e-10.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Tuple

import numpy as np

from src.protocol.entropy import clamp_probability
from src.protocol.errors import (
    IntensityMismatchError,
    NumericalDegeneracyError,
    ParameterDomainError,
    SingularConfigurationError,
)
from src.protocol.optics import BASIS_LABELS, canonical_coeffs, signal_pair_state

if TYPE_CHECKING:
    from src.protocol.params import ProtocolParams

OUTCOMES = ("minus", "plus", "noclick")
REGIMES = ("ideal", "realistic")

HERMITIAN_TOLERANCE = 1e-10
PSD_TOLERANCE = -1e-10
EXPECTATION_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PovmOperator:
    matrix: np.ndarray
    outcome: str
    regime: str
    build_intensity: float

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ParameterDomainError(f"unknown outcome {self.outcome!r}", "outcome")
        if self.regime not in REGIMES:
            raise ParameterDomainError(f"unknown regime {self.regime!r}", "regime")
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def min_eigenvalue(self) -> float:
        hermitian = (self.matrix + self.matrix.conj().T) / 2.0
        return float(np.linalg.eigvalsh(hermitian)[0])

    def is_physical(self) -> bool:
        return (
            self.hermiticity_residual() < HERMITIAN_TOLERANCE
            and self.min_eigenvalue() >= PSD_TOLERANCE
        )

    def to_text(self) -> str:
        """Plain-text dump of the matrix, one basis row per line."""
        lines = [f"F[{self.outcome}] regime={self.regime} I={self.build_intensity:.6g}"]
        header = " " * 6 + "".join(f"{label:>26}" for label in BASIS_LABELS)
        lines.append(header)
        for label, row in zip(BASIS_LABELS, self.matrix):
            cells = "".join(f"{v.real:>+13.5e}{v.imag:>+12.5e}j" for v in row)
            lines.append(f"{label:<6}{cells}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ChannelScalars:
    t: float
    xi2: float
    omega: float

    @property
    def xi2_omega2(self) -> float:
        return self.xi2 * self.omega ** 2


@dataclass(frozen=True)
class MismatchCoefficients:
    a: float
    b: float
    c: complex
    d: complex
    o: float
    p: float


def _check_eta(eta: float) -> None:
    if not 0.0 < eta <= 1.0:
        raise ParameterDomainError(f"eta must be in (0, 1], got {eta!r}", "eta")


def channel_scalars(I: float, eta: float) -> ChannelScalars:
    _check_eta(eta)
    sqrt_eta = math.sqrt(eta)
    t = sqrt_eta * I
    return ChannelScalars(
        t=t,
        xi2=math.exp(-2.0 * t),
        omega=math.exp(-2.0 * (1.0 - sqrt_eta) * I),
    )


def mismatch_coefficients(I: float, eta: float, delta: float, V: float) -> MismatchCoefficients:
    """a, b, c, d, o, p with xi^q written as exp(-q t)."""
    if not 0.0 < V <= 1.0:
        raise ParameterDomainError(f"V must be in (0, 1], got {V!r}", "V")
    ch = channel_scalars(I, eta)
    k = math.sqrt(V) * math.cos(delta)
    s = math.sqrt(V) * math.sin(delta)
    t = ch.t
    plus_loss = math.expm1(-(1.0 + k) * t)
    minus_loss = math.expm1(-(1.0 - k) * t)
    c = ch.xi2 * ch.omega * complex(-2.0 * math.sin(s * t / 2.0) ** 2, -math.sin(s * t))
    return MismatchCoefficients(
        a=-plus_loss * math.exp(-(1.0 - k) * t),
        b=ch.xi2_omega2 * plus_loss,
        c=c,
        d=c.conjugate(),
        o=-minus_loss * math.exp(-(1.0 + k) * t),
        p=ch.xi2_omega2 * minus_loss,
    )


def _basis_scale(I: float) -> np.ndarray:
    c0, c1 = canonical_coeffs(I)
    d = np.array([c0 * c0, c1 * c1, c0 * c1, c0 * c1])
    inv = np.divide(1.0, d, out=np.zeros_like(d), where=d > 0.0)
    return np.outer(inv, inv)


def _block_kernel(sign: float, upper: Tuple[complex, complex, complex],
                  lower: Tuple[complex, complex, complex, complex]) -> np.ndarray:
    u00, u11, u01 = upper
    l22, l33, l23, l32 = lower
    return np.array([
        [u00, sign * u01, 0.0, 0.0],
        [sign * u01, u11, 0.0, 0.0],
        [0.0, 0.0, l22, sign * l23],
        [0.0, 0.0, sign * l32, l33],
    ], dtype=complex)


def _ideal_click_kernel(outcome: str, ch: ChannelScalars, I: float, eta: float) -> np.ndarray:
    click = -math.expm1(-2.0 * ch.t)
    sqrt_eta = math.sqrt(eta)
    a_term = -math.expm1(-2.0 * ch.t - 4.0 * (1.0 - sqrt_eta) * I)
    b_term = 1.0 + ch.xi2_omega2
    sign = -1.0 if outcome == "minus" else 1.0
    return click / 8.0 * _block_kernel(
        sign,
        (a_term, a_term, a_term),
        (b_term, b_term, b_term, b_term),
    )


def _noclick_kernel(ch: ChannelScalars, I: float, eta: float) -> np.ndarray:
    sqrt_eta = math.sqrt(eta)
    one_minus_omega = -math.expm1(-2.0 * (1.0 - sqrt_eta) * I)
    one_minus_omega2 = -math.expm1(-4.0 * (1.0 - sqrt_eta) * I)
    diag = [(1.0 + ch.omega) ** 2, one_minus_omega ** 2, one_minus_omega2, one_minus_omega2]
    return ch.xi2 / 4.0 * np.diag(np.array(diag, dtype=complex))


def _mismatch_kernel(outcome: str, m: MismatchCoefficients) -> np.ndarray:
    a, b, c, d, o, p = m.a, m.b, m.c, m.d, m.o, m.p
    sign = -1.0 if outcome == "minus" else 1.0
    return _block_kernel(
        sign,
        (
            a + b + 2 * c + 2 * d + o + p,
            a + b - 2 * c - 2 * d + o + p,
            a + b - o - p,
        ),
        (
            a - b + o - p,
            a - b + o - p,
            a - b + 2 * c - 2 * d - o + p,
            a - b - 2 * c + 2 * d - o + p,
        ),
    ) / 8.0


def _check_build(outcome: str, I: float) -> None:
    if outcome not in OUTCOMES:
        raise ParameterDomainError(
            f"outcome must be one of {OUTCOMES}, got {outcome!r}", "outcome"
        )
    if not I >= 0.0:
        raise ParameterDomainError(f"intensity must be non-negative, got {I!r}", "intensity")


def build_ideal(outcome: str, I: float, eta: float) -> PovmOperator:
    _check_build(outcome, I)
    ch = channel_scalars(I, eta)
    if outcome == "noclick":
        kernel = _noclick_kernel(ch, I, eta)
    else:
        kernel = _ideal_click_kernel(outcome, ch, I, eta)
    return PovmOperator(kernel * _basis_scale(I), outcome, "ideal", I)


def build_realistic(
    outcome: str,
    I: float,
    eta: float,
    delta: float,
    V: float,
    p_dark: float,
) -> PovmOperator:
    _check_build(outcome, I)
    if not 0.0 <= p_dark < 1.0:
        raise ParameterDomainError(f"p_dark must be in [0, 1), got {p_dark!r}", "p_dark")
    ch = channel_scalars(I, eta)
    noclick = _noclick_kernel(ch, I, eta)
    if outcome == "noclick":
        kernel = (1.0 - p_dark) ** 2 * noclick
    else:
        mis = _mismatch_kernel(outcome, mismatch_coefficients(I, eta, delta, V))
        kernel = (1.0 - p_dark) * mis + (1.0 - p_dark) * p_dark * noclick
    return PovmOperator(kernel * _basis_scale(I), outcome, "realistic", I)


def _check_intensities(op: PovmOperator, *states) -> None:
    for state in states:
        if not math.isclose(state.intensity, op.build_intensity, rel_tol=1e-12, abs_tol=1e-300):
            raise IntensityMismatchError(
                f"state intensity {state.intensity!r} does not match operator "
                f"build intensity {op.build_intensity!r}"
            )


def cross_term(state_a, state_b, op: PovmOperator) -> complex:
    """<state_a| F |state_b>."""
    _check_intensities(op, state_a, state_b)
    return complex(np.vdot(state_a.amplitudes, op.matrix @ state_b.amplitudes))


def expectation(state, op: PovmOperator) -> float:
    value = cross_term(state, state, op)
    if abs(value.imag) > EXPECTATION_TOLERANCE:
        raise NumericalDegeneracyError(
            f"expectation of F[{op.outcome}] has imaginary residual {value.imag:.3e}"
        )
    return clamp_probability(value.real, tol=EXPECTATION_TOLERANCE, name=f"<F[{op.outcome}]>")


def eve_overlap(params: "ProtocolParams", regime: str = "realistic") -> float:
    """|<+-|F-|-+>| / sqrt(<+-|F-|+-> <-+|F-|-+>) at the signal intensity.

    ``regime="ideal"`` is the loss-only model; ``"realistic"`` includes
    mismatch and dark counts from ``params``.
    """
    mu, eta = params.mu, params.eta
    if regime == "ideal":
        op = build_ideal("minus", mu, eta)
    elif regime == "realistic":
        op = build_realistic("minus", mu, eta, params.delta, params.V, params.p_dark)
    else:
        raise ParameterDomainError(f"regime must be one of {REGIMES}, got {regime!r}", "regime")
    plus_minus = signal_pair_state("+", "-", mu)
    minus_plus = signal_pair_state("-", "+", mu)
    numerator = abs(cross_term(plus_minus, minus_plus, op))
    denominator = math.sqrt(expectation(plus_minus, op) * expectation(minus_plus, op))
    if denominator <= 0.0:
        raise SingularConfigurationError(
            f"Eve overlap undefined at L={params.L} km: zero conclusive probability"
        )
    return clamp_probability(numerator / denominator, tol=1e-10, name="overlap")
