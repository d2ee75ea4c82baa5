"""Exception hierarchy shared by all modules."""


class HybridRisError(Exception):
    """Base class for every error raised by the toolkit."""


class AmplitudeExceedsCap(HybridRisError, ValueError):
    pass


class InvalidDistance(HybridRisError, ValueError):
    pass


class ShapeError(HybridRisError, ValueError):
    pass


class InvalidRegime(HybridRisError, ValueError):
    pass


class InfeasibleBudget(HybridRisError):
    """A power budget leaves no room for any feasible point."""


class NonFiniteValue(HybridRisError, FloatingPointError):
    pass


class RankDeficientDirectChannel(HybridRisError, ValueError):
    pass


class ScenarioError(HybridRisError):
    """Base class for scenario-file problems; carries the offending key."""

    def __init__(self, message, key=None):
        self.key = key
        self.message = message
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)


class ParseError(ScenarioError):
    pass


class UnitError(ScenarioError):
    pass


class InvariantViolation(ScenarioError, ValueError):
    pass
