"""The three-grade ordinal scale and the five-grade risk rating.

One ordered type serves every quantity the assessment rates on the
Low/Moderate/High scale: threat-source capability, vector skill requirement,
residual and inherent likelihoods, combined likelihoods, and business impact.
The role is conveyed by the field name at the point of use; the algebra
(total order, min, max) is identical for all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable

from .errors import EmptyAggregation

__all__ = ["Level", "RiskLabel", "RiskRating", "level_max", "level_min"]


@total_ordering
class Level(Enum):
    """Ordered three-grade scale: LOW < MODERATE < HIGH."""

    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _RANKS[self]

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, Level):
            return NotImplemented
        return self.rank < other.rank

    @property
    def short(self) -> str:
        """Compact display form used in tree annotations: Low / Mod / High."""
        return _SHORT[self]

    @property
    def display(self) -> str:
        """Full display form used in tables: Low / Moderate / High."""
        return self.value.capitalize()

    @classmethod
    def parse(cls, token: str) -> "Level":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"not a level: {token!r} (expected low/moderate/high)") from None


_RANKS = {Level.LOW: 0, Level.MODERATE: 1, Level.HIGH: 2}
_SHORT = {Level.LOW: "Low", Level.MODERATE: "Mod", Level.HIGH: "High"}


def level_max(values: Iterable[Level]) -> Level:
    """Order-maximum of a nonempty collection of levels."""
    values = list(values)
    if not values:
        raise EmptyAggregation("level_max of empty collection")
    return max(values)


def level_min(values: Iterable[Level]) -> Level:
    """Order-minimum of a nonempty collection of levels."""
    values = list(values)
    if not values:
        raise EmptyAggregation("level_min of empty collection")
    return min(values)


class RiskLabel(Enum):
    VERY_LOW = "very_low"
    LOW = "low"
    MODERATE = "moderate"
    HIGH = "high"
    VERY_HIGH = "very_high"

    @property
    def display(self) -> str:
        return _LABEL_DISPLAY[self]


_LABEL_DISPLAY = {
    RiskLabel.VERY_LOW: "Very Low",
    RiskLabel.LOW: "Low",
    RiskLabel.MODERATE: "Moderate",
    RiskLabel.HIGH: "High",
    RiskLabel.VERY_HIGH: "Very High",
}

# The only (label, score) pairs the risk matrix produces. Moderate appears with
# two scores because the matrix assigns 3 to the off-diagonal corners and 4 to
# the centre cell.
_SANCTIONED_PAIRS = {
    (RiskLabel.VERY_LOW, 1),
    (RiskLabel.LOW, 2),
    (RiskLabel.MODERATE, 3),
    (RiskLabel.MODERATE, 4),
    (RiskLabel.HIGH, 6),
    (RiskLabel.VERY_HIGH, 9),
}


@dataclass(frozen=True)
class RiskRating:
    """A (label, score) pair as produced by the risk matrix.

    Only matrix-sanctioned pairings are constructible; anything else raises
    ValueError at construction time.
    """

    label: RiskLabel
    score: int

    def __post_init__(self) -> None:
        if (self.label, self.score) not in _SANCTIONED_PAIRS:
            raise ValueError(
                f"({self.label.value}, {self.score}) is not a risk-matrix cell"
            )

    @property
    def display(self) -> str:
        return f"{self.label.display} ({self.score})"
