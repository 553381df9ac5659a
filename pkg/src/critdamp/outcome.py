"""Run outcomes: global solution, finite lifespan, or numerical breakdown."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class BreakdownCause(str, Enum):
    NEGATIVE_DENSITY = "NegativeDensity"
    CFL_COLLAPSE = "CflCollapse"
    GRADIENT_THRESHOLD = "GradientThreshold"
    NON_FINITE = "NonFinite"


@dataclass(frozen=True)
class Global:
    """Smooth solution for all computed times; ``horizon`` records how far a run got."""

    horizon: float | None = None


@dataclass(frozen=True)
class FiniteLifespan:
    """Smooth solution up to ``lifespan`` only.

    ``lifespan`` may be ``inf`` when the closed-form crossing time overflows
    float64 (finite but astronomically large, e.g. exp(1/(eps*m)) - 1).
    """

    lifespan: float

    def __post_init__(self) -> None:
        if not self.lifespan > 0:
            raise ValueError("lifespan must be positive")


@dataclass(frozen=True)
class NumericalBreakdown:
    """The discrete scheme stopped at ``time`` for the stated cause."""

    time: float
    cause: BreakdownCause

    def __post_init__(self) -> None:
        if not self.time >= 0:
            raise ValueError("breakdown time must be nonnegative")


Verdict = Union[Global, FiniteLifespan, NumericalBreakdown]


class BreakdownError(Exception):
    """Internal stepping signal; callers convert it into a NumericalBreakdown."""

    def __init__(self, time: float, cause: BreakdownCause):
        super().__init__(f"{cause.value} at t={time!r}")
        self.time = time
        self.cause = cause


def verdict_label(verdict: Verdict) -> str:
    """Wire format: Global | FiniteLifespan:<T> | NumericalBreakdown:<t>:<cause>."""
    if isinstance(verdict, Global):
        return "Global"
    if isinstance(verdict, FiniteLifespan):
        return f"FiniteLifespan:{float(verdict.lifespan)!r}"
    if isinstance(verdict, NumericalBreakdown):
        return f"NumericalBreakdown:{float(verdict.time)!r}:{verdict.cause.value}"
    raise TypeError(f"not a verdict: {verdict!r}")


def parse_verdict_label(label: str) -> Verdict:
    parts = label.split(":")
    if parts[0] == "Global":
        return Global()
    if parts[0] == "FiniteLifespan" and len(parts) == 2:
        return FiniteLifespan(float(parts[1]))
    if parts[0] == "NumericalBreakdown" and len(parts) == 3:
        return NumericalBreakdown(float(parts[1]), BreakdownCause(parts[2]))
    raise ValueError(f"unrecognized verdict label: {label!r}")
