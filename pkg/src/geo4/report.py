"""
Routines for printing a coverage report.
"""
from collections import Counter
from dataclasses import dataclass
from io import StringIO
from typing import Any, Dict, List, Optional, Tuple

from .geography import RegionSpec
from .invariants import LatticePoint
from .json import OneLine


@dataclass(frozen=True)
class PointOutcome:
    """
    Result of realizing one lattice point. Outcomes carry their coordinates so
    that reports can be assembled in any order.
    """
    point: LatticePoint
    expression: Optional[str] = None
    route: Optional[str] = None
    checks: Tuple[Tuple[str, bool], ...] = ()
    reason: Optional[str] = None
    trace: Tuple[str, ...] = ()
    ppx: Optional[str] = None

    @property
    def realized(self) -> bool:
        return self.expression is not None

    def as_json(self):
        result: Dict[str, Any] = {"point": OneLine(self.point.as_list())}
        if self.realized:
            result["expression"] = self.expression
            result["route"] = self.route
            result["checks"] = OneLine({name: passed for name, passed in self.checks})
        else:
            result["reason"] = self.reason
            if self.trace:
                result["trace"] = list(self.trace)
        if self.ppx is not None:
            result["ppx"] = self.ppx
        return result


def safe_divide(numerator: int, denominator: int) -> float:
    if not denominator:
        return 1.0
    return numerator / denominator


class CoverageReport:
    def __init__(self, region: Optional[RegionSpec] = None) -> None:
        self.region = region
        self.realized: Dict[LatticePoint, PointOutcome] = {}
        self.unrealized: Dict[LatticePoint, PointOutcome] = {}
        # Allowed points realized symplectically where no spin complex surface exists
        self.counterexamples: List[LatticePoint] = []
        self.routes: Counter = Counter()

    def __repr__(self):
        return f"CoverageReport(realized={len(self.realized)}, unrealized={len(self.unrealized)})"

    def add(self, outcome: PointOutcome) -> None:
        if outcome.realized:
            self.realized[outcome.point] = outcome
            self.routes[outcome.route] += 1
            if outcome.ppx == "not_admissible":
                self.counterexamples.append(outcome.point)
        else:
            self.unrealized[outcome.point] = outcome

    def __iadd__(self, other: Any):
        if not isinstance(other, CoverageReport):
            raise ValueError(f"Cannot add {other.__class__.__name__}")
        for outcome in list(other.realized.values()) + list(other.unrealized.values()):
            self.add(outcome)
        return self

    @property
    def n(self) -> int:
        return len(self.realized) + len(self.unrealized)

    @property
    def fully_covered(self) -> bool:
        return not self.unrealized

    @property
    def covered_fraction(self) -> float:
        return safe_divide(len(self.realized), self.n)

    def outcomes(self) -> List[PointOutcome]:
        return sorted(
            list(self.realized.values()) + list(self.unrealized.values()), key=lambda o: o.point)

    def as_json(self) -> Dict:
        return {
            "tag": "geo4-coverage",
            "schema_version": OneLine([0, 1]),
            "region": self.region.as_json() if self.region is not None else None,
            "points": self.n,
            "realized": len(self.realized),
            "unrealized": len(self.unrealized),
            "fully_covered": self.fully_covered,
            "routes": OneLine(dict(sorted(self.routes.items()))),
            "counterexamples": [OneLine(p.as_list()) for p in sorted(self.counterexamples)],
            "outcomes": [o.as_json() for o in self.outcomes()],
        }


def full_report(report: CoverageReport, time: float) -> str:
    """Human-readable summary of a coverage run"""
    region = report.region.name if report.region is not None else "region"
    if report.n == 0:
        return f"Region {region} contains no allowed points; vacuously covered."
    sio = StringIO()

    def print_s(*args, **kwargs):
        kwargs['file'] = sio
        print(*args, **kwargs)

    print_s(f"Finished in {time:.2F} s ({1E3 * time / report.n:.2F} ms/point).")
    print_s()
    print_s("=== Summary ===")
    print_s()
    print_s(f"Region:                          {region}")
    print_s(f"Allowed points:                  {report.n:13,d}")
    print_s(f"Realized:                        {len(report.realized):13,d} "
        f"({report.covered_fraction:.1%})")
    for route, count in sorted(report.routes.items()):
        print_s(f"  via {route + ':':27} {count:13,d}")
    print_s(f"Unrealized:                      {len(report.unrealized):13,d}")
    if report.counterexamples:
        print_s(f"Not spin complex-admissible:     {len(report.counterexamples):13,d}")
    print_s()
    if report.fully_covered:
        print_s(f"covered 100%: every allowed point of {region} is realized")
    else:
        print_s(f"covered {report.covered_fraction:.1%}")
        print_s()
        print_s("=== Unrealized points ===")
        print_s()
        for outcome in report.outcomes():
            if not outcome.realized:
                print_s(f"{str(outcome.point):>14}  {outcome.reason}")
    return sio.getvalue().rstrip("\n")


def minimal_report(report: CoverageReport, time: float) -> str:
    """Create a minimal tabular report suitable for concatenation"""
    _ = time
    fields = [
        "OK" if report.fully_covered else "INCOMPLETE",
        report.region.name if report.region is not None else "",
        report.n,
        len(report.realized),
        len(report.unrealized),
        report.routes.get("base", 0),
        report.routes.get("general", 0),
        len(report.counterexamples),
    ]
    header = ["status", "region", "points", "realized", "unrealized", "base", "general", "counterexamples"]
    return "\t".join(header) + "\n" + "\t".join(str(x) for x in fields)
