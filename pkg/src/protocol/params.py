"""
Protocol configuration and the channel quantities derived from it.

``ProtocolParams`` is an immutable, validated record of every scalar the
rate formulas consume. Distances are the total Alice–Bob length in km;
each arm carries the amplitude transmittance ``sqrt(eta)``.

The sending probability is either a constant or the cubic profile

    eps(L) = eps0 + (eps_max - eps0) * (L / L_max) ** 3

clamped to ``eps_max`` beyond ``L_max`` so that the max-distance search
can run past the end of the profile.
"""

import math
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from src.protocol.errors import ParameterDomainError

SNS_WEIGHTINGS = ("summed", "per_ordering")


def overall_transmittance(eta_det: float, alpha: float, L: float) -> float:
    """eta = eta_det**2 * 10**(-alpha * L / 10)."""
    if not 0.0 < eta_det <= 1.0:
        raise ParameterDomainError(f"eta_det must be in (0, 1], got {eta_det!r}", "eta_det")
    if not alpha >= 0.0:
        raise ParameterDomainError(f"alpha must be non-negative, got {alpha!r}", "alpha")
    if not L >= 0.0:
        raise ParameterDomainError(f"L must be non-negative, got {L!r}", "L")
    return eta_det ** 2 * 10.0 ** (-alpha * L / 10.0)


def _profile_violations(eps0: float, eps_max: float, L_max: float) -> List[str]:
    problems = []
    if not 0.0 < eps0 < 1.0:
        problems.append(f"eps0 must be in (0, 1), got {eps0!r}")
    if not 0.0 < eps_max < 1.0:
        problems.append(f"eps_max must be in (0, 1), got {eps_max!r}")
    if not eps0 <= eps_max:
        problems.append(f"eps0 must not exceed eps_max ({eps0!r} > {eps_max!r})")
    if not L_max > 0.0:
        problems.append(f"L_max must be positive, got {L_max!r}")
    return problems


def sending_probability(L: float, eps0: float, eps_max: float, L_max: float) -> float:
    problems = _profile_violations(eps0, eps_max, L_max)
    if problems:
        raise ParameterDomainError("; ".join(problems), "epsilon_profile")
    if not L >= 0.0:
        raise ParameterDomainError(f"L must be non-negative, got {L!r}", "L")
    if L >= L_max:
        return eps_max
    return eps0 + (eps_max - eps0) * (L / L_max) ** 3


class EpsilonProfile(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    eps0: float
    eps_max: float
    L_max: float

    @model_validator(mode="after")
    def _check(self) -> "EpsilonProfile":
        problems = _profile_violations(self.eps0, self.eps_max, self.L_max)
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def at(self, L: float) -> float:
        return sending_probability(L, self.eps0, self.eps_max, self.L_max)


class ProtocolParams(BaseModel):
    """All scalar protocol and imperfection parameters for one evaluation.

    ``epsilon_profile`` is a float for a constant sending probability or an
    ``EpsilonProfile`` (``{"eps0", "eps_max", "L_max"}`` in config files).
    ``sns_weighting`` selects how the two sending/not-sending orderings
    enter the conclusive-event probability:

    * ``"summed"``: P_sns is the sum of both orderings' expectations
      (the default; the distance presets are calibrated against it).
    * ``"per_ordering"``: P_sns is their mean, which makes the realistic
      rate collapse onto the loss-only closed form when every imperfection
      is switched off.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    mu: float = 0.1
    epsilon_profile: Union[float, EpsilonProfile] = 0.05
    delta: float = 0.0
    V: float = 1.0
    eta_det: float = 1.0
    p_dark: float = 0.0
    f_EC: float = 1.0
    alpha: float = 0.2
    L: float = 0.0
    # realistic == loss-only with imperfections off holds only under "per_ordering"
    sns_weighting: Literal["summed", "per_ordering"] = "summed"

    @field_validator("mu")
    @classmethod
    def _check_mu(cls, v: float) -> float:
        if not v > 0.0:
            raise ValueError("mu must be positive")
        return v

    @field_validator("epsilon_profile")
    @classmethod
    def _check_epsilon(cls, v):
        if isinstance(v, EpsilonProfile):
            return v
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        return float(v)

    @field_validator("delta")
    @classmethod
    def _check_delta(cls, v: float) -> float:
        if not 0.0 <= v < math.pi:
            raise ValueError("delta must be in [0, pi)")
        return v

    @field_validator("V")
    @classmethod
    def _check_v(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError("V must be in (0, 1]")
        return v

    @field_validator("eta_det")
    @classmethod
    def _check_eta_det(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError("eta_det must be in (0, 1]")
        return v

    @field_validator("p_dark")
    @classmethod
    def _check_p_dark(cls, v: float) -> float:
        if not 0.0 <= v < 1.0:
            raise ValueError("p_dark must be in [0, 1)")
        return v

    @field_validator("f_EC")
    @classmethod
    def _check_f_ec(cls, v: float) -> float:
        if not v >= 1.0:
            raise ValueError("f_EC must be ≥1")
        return v

    @field_validator("alpha")
    @classmethod
    def _check_alpha(cls, v: float) -> float:
        if not v >= 0.0:
            raise ValueError("alpha must be non-negative")
        return v

    @field_validator("L")
    @classmethod
    def _check_l(cls, v: float) -> float:
        if not v >= 0.0:
            raise ValueError("L must be non-negative")
        return v

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ProtocolParams":
        """Validate a plain mapping, converting failures to ParameterDomainError."""
        try:
            return cls.model_validate(dict(data))
        except ValidationError as exc:
            messages = _violation_messages(exc)
            first = exc.errors()[0]["loc"][0] if exc.errors() and exc.errors()[0]["loc"] else ""
            raise ParameterDomainError("; ".join(messages), str(first)) from exc

    def with_updates(self, **updates: Any) -> "ProtocolParams":
        data = self.model_dump()
        data.update(updates)
        return ProtocolParams.from_mapping(data)

    # -- derived quantities -----------------------------------------------

    @property
    def eta(self) -> float:
        return overall_transmittance(self.eta_det, self.alpha, self.L)

    @property
    def sqrt_eta(self) -> float:
        return math.sqrt(self.eta)

    @property
    def epsilon(self) -> float:
        return self.epsilon_at(self.L)

    def epsilon_at(self, L: float) -> float:
        if isinstance(self.epsilon_profile, EpsilonProfile):
            return self.epsilon_profile.at(L)
        return float(self.epsilon_profile)

    @property
    def L_max(self) -> Optional[float]:
        if isinstance(self.epsilon_profile, EpsilonProfile):
            return self.epsilon_profile.L_max
        return None


def _violation_messages(exc: ValidationError) -> List[str]:
    messages = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err["loc"])
        if err["type"] == "extra_forbidden":
            messages.append(f"unknown parameter {loc!r}")
        elif err["type"] == "value_error":
            msg = err["msg"]
            if msg.startswith("Value error, "):
                msg = msg[len("Value error, "):]
            messages.append(msg)
        else:
            messages.append(f"{loc}: {err['msg']}")
    return messages


def validate(params: Union[ProtocolParams, Mapping[str, Any]]) -> List[str]:
    """Return every violated invariant as a readable string; empty means ok."""
    if isinstance(params, ProtocolParams):
        return []
    try:
        ProtocolParams.model_validate(dict(params))
    except ValidationError as exc:
        return _violation_messages(exc)
    return []


def params_summary(params: ProtocolParams) -> Dict[str, Any]:
    """Flat view used by CLI summaries and sweep logs."""
    data = params.model_dump()
    data["eta"] = params.eta
    data["epsilon"] = params.epsilon
    return data
