# coding:utf8
"""
Errors raised by the simulator.

Every class carries an ``exit_code`` so the command line can report the
category of a failure: 2 config, 3 divergence, 4 data or I/O, 1 anything else.
"""
from typing import Optional


class SimulatorError(Exception):
    exit_code = 1


class ConfigError(SimulatorError, ValueError):
    exit_code = 2

    def __init__(self, message: str, field: str = ""):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class DimensionError(SimulatorError, ValueError):
    def __init__(self, left: int, right: int, what: str = "dimension"):
        self.left = left
        self.right = right
        super().__init__(f"{what} mismatch: {left} != {right}")


class NonFiniteError(SimulatorError, ValueError):
    pass


class EstimationError(SimulatorError):
    pass


class DivergenceError(SimulatorError):
    exit_code = 3

    def __init__(
        self,
        message: str = "parameters diverged",
        *,
        method: Optional[str] = None,
        round: Optional[int] = None,
        client: Optional[int] = None,
        step: Optional[int] = None,
    ):
        self.message = message
        self.method = method
        self.round = round
        self.client = client
        self.step = step
        super().__init__(message)

    def __str__(self):
        return "{} (method={}, round={}, client={}, step={})".format(
            self.message, self.method, self.round, self.client, self.step
        )


class DataFormatError(SimulatorError):
    exit_code = 4

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class OutputError(SimulatorError):
    exit_code = 4

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
