"""Exception hierarchy shared by every module."""


class ScenarioError(ValueError):
    """A scenario field violates its invariant. ``field`` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvalidDensity(ScenarioError):
    pass


class InvalidFraction(ScenarioError):
    pass


class PathlossTooFlat(ScenarioError):
    pass


class NonPositiveDistance(ValueError):
    pass


class DomainError(ValueError):
    pass


class BothZero(ValueError):
    pass


class NoConvergence(ArithmeticError):
    pass


class InfeasibleOperator(ValueError):
    """The no-sharing baseline already violates an operator constraint."""


class CellularInfeasible(InfeasibleOperator):
    pass


class IntraD2DInfeasible(InfeasibleOperator):
    pass


class PropertyViolated(AssertionError):
    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class WindowTooSmall(ValueError):
    pass


class ConfigParseError(ValueError):
    pass


class ConfigValidationError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer
