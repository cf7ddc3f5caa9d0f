"""Exception types raised by the sumprod library."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class FieldError(ValueError):
    """The requested modulus is not a supported odd prime."""


class DomainError(ValueError):
    """An argument is outside the domain of the operation."""


@dataclass
class GuardExceeded(ValueError):
    operation: str
    limit: int
    requested: int
    advice: str | None = None

    def __str__(self) -> str:
        text = f"{self.operation}: instance size {self.requested} exceeds guard {self.limit}"
        if self.advice:
            text += f" ({self.advice})"
        return text


@dataclass
class InvarianceError(ValueError):
    x: int
    gamma: int

    def __str__(self) -> str:
        return f"function is not invariant: f({self.x}*{self.gamma}) != f({self.x})"


@dataclass
class IndependenceError(ValueError):
    family: str
    combination: Any

    def __str__(self) -> str:
        return f"linear dependence in {self.family}: {self.combination}"


def check_guard(operation: str, requested: int, limit: int, advice: str | None = None) -> None:
    if requested > limit:
        raise GuardExceeded(operation=operation, limit=limit, requested=requested, advice=advice)
