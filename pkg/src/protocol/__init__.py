from src.protocol.errors import (
    FlatObjectiveError,
    IntensityMismatchError,
    NoConclusiveEventsError,
    NoSignChangeError,
    NumericalDegeneracyError,
    ParameterDomainError,
    SingularConfigurationError,
)
from src.protocol.params import EpsilonProfile, ProtocolParams

__all__ = [
    'EpsilonProfile',
    'FlatObjectiveError',
    'IntensityMismatchError',
    'NoConclusiveEventsError',
    'NoSignChangeError',
    'NumericalDegeneracyError',
    'ParameterDomainError',
    'ProtocolParams',
    'SingularConfigurationError',
]
