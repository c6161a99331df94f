"""Exception hierarchy shared by all predtime modules."""


class PredtimeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PredtimeError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class ConfigurationError(PredtimeError, ValueError):
    """A parameter set violates a structural constraint.

    The message always names the violated constraint.
    """


class InfeasibleGainError(ConfigurationError):
    """The robust gain does not dominate the disturbance bound (rho3 <= delta)."""


class ConvergenceError(PredtimeError, ArithmeticError):
    """A series or continued fraction did not converge within max_iterations."""


class DegeneracyError(PredtimeError, ArithmeticError):
    """A class-K1 derivative vanished where the theory requires it positive."""


class RankDeficiencyError(PredtimeError, ArithmeticError):
    """G(x, t) B(x) is numerically singular."""

    def __init__(self, message: str, smallest_singular_value: float, condition: float):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value
        self.condition = condition


class DivergenceError(PredtimeError, ArithmeticError):
    """Integration produced a non-finite state."""

    def __init__(self, message: str, step_index: int, time: float):
        super().__init__(message)
        self.step_index = step_index
        self.time = time


class DisturbanceBoundError(PredtimeError, AssertionError):
    """A disturbance sample exceeded its declared bound."""


class CoverageError(PredtimeError, ValueError):
    """A trajectory does not cover the time window a check needs."""


class ScenarioError(PredtimeError, ValueError):
    """A scenario file could not be parsed or validated.

    ``section`` and ``key`` locate the offending entry when known.
    """

    def __init__(self, message: str, section: str | None = None, key: str | None = None):
        where = ""
        if section is not None:
            where = f"[{section}]"
            if key is not None:
                where += f" {key}"
            where += ": "
        super().__init__(where + message)
        self.section = section
        self.key = key
