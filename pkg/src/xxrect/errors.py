"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto a
category without inspecting messages.
"""

from __future__ import annotations


class XXRectError(Exception):
    exit_code = 1


class ValidationError(XXRectError, ValueError):
    """Invalid user input: chain parameters, temperatures, configs."""

    exit_code = 2


class ChainDimensionError(ValidationError):
    pass


class InvalidRateError(ValidationError):
    pass


class NonFiniteError(ValidationError):
    pass


class TemperatureError(ValidationError):
    pass


class ConfigError(ValidationError):
    """Config parse or schema failure. ``field`` names the offending key."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class NumericalError(XXRectError, ArithmeticError):
    exit_code = 3


class EigensolverError(NumericalError):
    def __init__(self, message: str, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class DegenerateFrequencyError(NumericalError):
    pass


class SteadyStateError(NumericalError):
    def __init__(self, message: str, nullity: int | None = None):
        super().__init__(message)
        self.nullity = nullity


class OutputError(XXRectError, OSError):
    exit_code = 4
