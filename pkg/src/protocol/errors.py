"""
Exception hierarchy shared by the protocol, analysis and simulation packages.

Two families matter to callers:

* ``ParameterDomainError``: an input is outside its allowed range (or a
  config key / preset / variant name is unknown). The CLI exits with 2.
* ``NumericalDegeneracyError``: the inputs are valid but the evaluation
  has no meaningful value (zero denominators, no sign change, flat
  objective). The CLI exits with 3.
"""


class ParameterDomainError(ValueError):
    """An input parameter is outside its allowed domain."""

    def __init__(self, message: str, parameter: str = ""):
        super().__init__(message)
        self.parameter = parameter


class IntensityMismatchError(ValueError):
    """A state and an operator were built at different per-mode intensities."""


class NumericalDegeneracyError(ArithmeticError):
    """Base class for evaluations that are well-posed but numerically empty."""


class SingularConfigurationError(NumericalDegeneracyError):
    pass


class NoConclusiveEventsError(NumericalDegeneracyError):
    pass


class NoSignChangeError(NumericalDegeneracyError):
    pass


class FlatObjectiveError(NumericalDegeneracyError):
    pass
