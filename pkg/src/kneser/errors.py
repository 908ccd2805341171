"""Exception types shared across the package."""

from __future__ import annotations


class ParameterError(ValueError):
    """Invalid (n, k, r, s) or a violated operation precondition."""


class BudgetExceeded(RuntimeError):
    """A search or enumeration hit its configured cap."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class StructuralError(RuntimeError):
    """A monochromatic edge that must exist was not found.

    Raised by the composite-arity reduction when its hypotheses fail. Under
    correct hypotheses this indicates a bug, never a runtime condition.
    """
