"""Exception hierarchy shared by every solver and the CLI."""

from __future__ import annotations


class BarrierWalkError(Exception):
    """Base class for all package errors."""


class GraphError(BarrierWalkError, ValueError):
    """The graph violates a structural or probabilistic rule."""


class BarrierSumError(GraphError):
    pass


class EdgeParamError(GraphError):
    pass


class DanglingReference(GraphError):
    pass


class IsolatedBarrier(GraphError):
    pass


class UnknownEdge(GraphError, KeyError):
    def __str__(self):  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class SingularSystem(BarrierWalkError, ArithmeticError):
    """A linear system had a vanishing pivot (no absorption mechanism)."""


class InternalConsistencyError(BarrierWalkError, ArithmeticError):
    """A computed expectation came out clearly negative."""


class DriftError(BarrierWalkError, ValueError):
    pass


class InfiniteTime(BarrierWalkError):
    """Expected time requested where it diverges."""


class ConfigError(BarrierWalkError, ValueError):
    pass


class ParseError(BarrierWalkError, ValueError):
    """Malformed document; ``line`` / ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownDemo(BarrierWalkError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""
