"""
Region constraints (predicates on lattice points)
"""
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Dict

from .invariants import LatticePoint, RegionLine


class Predicate(ABC):
    @abstractmethod
    def test(self, point: LatticePoint) -> bool:
        """
        Return True if the point satisfies the constraint.
        """

    @classmethod
    def descriptive_identifier(cls) -> str:
        """
        Return a short name for this predicate based on the class name such as "line_le",
        "spin_congruence".
        This is used as identifier in region files and the JSON report.
        """
        return "".join(("_" + ch.lower() if ch.isupper() else ch) for ch in cls.__name__)[1:]

    def as_json(self):
        return {"type": self.descriptive_identifier()}


class Nonnegative(Predicate):
    """Points with c ≥ 0"""

    def __repr__(self):
        return "Nonnegative()"

    def test(self, point: LatticePoint) -> bool:
        return point.c >= 0


class SpinCongruence(Predicate):
    """Points with c ≡ 8χ (mod 16)"""

    def __repr__(self):
        return "SpinCongruence()"

    def test(self, point: LatticePoint) -> bool:
        return (point.c - 8 * point.chi) % 16 == 0


class _LinePredicate(Predicate):
    def __init__(self, line: RegionLine):
        self.line = line

    def __repr__(self):
        return f"{self.__class__.__name__}(line={self.line.name.value})"

    def value(self, point: LatticePoint) -> Fraction:
        return self.line(point.chi)

    def as_json(self):
        result = super().as_json()
        result["line"] = self.line.name.value
        if self.line.name.value == "FLine":
            result["slope"] = self.line.slope
            result["intercept"] = self.line.intercept
        return result


class LineLe(_LinePredicate):
    """Points on or below the line"""

    def test(self, point: LatticePoint) -> bool:
        return point.c <= self.value(point)


class LineLt(_LinePredicate):
    """Points strictly below the line"""

    def test(self, point: LatticePoint) -> bool:
        return point.c < self.value(point)


class LineGe(_LinePredicate):
    """Points on or above the line"""

    def test(self, point: LatticePoint) -> bool:
        return point.c >= self.value(point)


class LineGt(_LinePredicate):
    """Points strictly above the line"""

    def test(self, point: LatticePoint) -> bool:
        return point.c > self.value(point)


class OnLine(_LinePredicate):
    """Points on the line"""

    def test(self, point: LatticePoint) -> bool:
        return point.c == self.value(point)


class NoetherBoundary(Predicate):
    """
    Points reachable by the base families: c ≤ 2χ − 6 in general, and
    c ≤ 2χ − 12 when c is a positive multiple of 16.
    """

    def __repr__(self):
        return "NoetherBoundary()"

    def test(self, point: LatticePoint) -> bool:
        if point.c > 0 and point.c % 16 == 0:
            return point.c <= 2 * point.chi - 12
        return point.c <= 2 * point.chi - 6


PREDICATES: Dict[str, Any] = {
    cls.descriptive_identifier(): cls
    for cls in (Nonnegative, SpinCongruence, LineLe, LineLt, LineGe, LineGt, OnLine, NoetherBoundary)
}
