"""
Realization of lattice points by explicit constructions, coverage of regions,
the composite manifold X of large c/χ ratio, its f line and the threshold above
which every signature-zero point carries infinitely many smooth structures.
"""
import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

import pydantic

from .catalog import BadParams, BlockSpec, Catalog, Family, ParseError, parse_error
from .constraints import (
    LineGe, LineGt, LineLe, LineLt, NoetherBoundary, Nonnegative, OnLine, Predicate, PREDICATES,
    SpinCongruence,
)
from .construct import (
    Construction, EvalReport, FiberSum, KnotSurgery, Leaf, evaluate, iterate_fiber_sum, serialize,
    expr_to_json,
)
from .invariants import (
    CharNumbers, HomeoType, LatticePoint, LineName, RegionLine, f_line, homeo_type, is_allowed, line,
)
from .json import OneLine
from .swring import TorusKnot
from .utils import open_text

logger = logging.getLogger(__name__)

# c/χ ratio of the positive-signature region boundary
RATIO_BOUND = Fraction(876, 100)


class GeographyError(ValueError):
    pass


class OutOfRegion(GeographyError):
    pass


class NoRealization(GeographyError):
    pass


class NotCovered(GeographyError):
    def __init__(self, message: str, trace: Sequence[str] = ()):
        super().__init__(message)
        self.trace = list(trace)


class BelowThreshold(GeographyError):
    def __init__(self, message: str, threshold: int):
        super().__init__(message)
        self.threshold = threshold


class RatioTooSmall(GeographyError):
    pass


class CertificateError(GeographyError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    """
    Allowed lattice points with chi_min ≤ χ ≤ chi_max whose offset-shifted
    coordinates satisfy every constraint.
    """
    name: str
    constraints: Tuple[Predicate, ...]
    chi_max: int
    offset: LatticePoint = LatticePoint(0, 0)
    chi_min: int = 1

    def contains(self, point: LatticePoint) -> bool:
        if not (self.chi_min <= point.chi <= self.chi_max):
            return False
        shifted = point - self.offset
        return all(constraint.test(shifted) for constraint in self.constraints)

    def points(self) -> Iterator[LatticePoint]:
        """Allowed points of the region, ordered by χ, then c"""
        for chi in range(max(self.chi_min, 1), self.chi_max + 1):
            # b2- = 10χ - 1 - c must be non-negative
            for c in range((8 * chi) % 16, 10 * chi, 16):
                point = LatticePoint(chi, c)
                if self.contains(point):
                    yield point

    def translated(self, offset: LatticePoint, name: Optional[str] = None) -> "RegionSpec":
        return RegionSpec(
            name or f"{offset}+{self.name}", self.constraints, self.chi_max,
            self.offset + offset, self.chi_min)

    def as_json(self):
        return {
            "name": self.name,
            "chi_min": self.chi_min,
            "chi_max": self.chi_max,
            "offset": OneLine(self.offset.as_list()),
            "constraints": [OneLine(c.as_json()) for c in self.constraints],
        }


def preset_regions(chi_max: int) -> Dict[str, RegionSpec]:
    return {
        "base": RegionSpec("base", (Nonnegative(), NoetherBoundary()), chi_max),
        "noether-wedge": RegionSpec(
            "noether-wedge", (Nonnegative(), LineLe(line(LineName.NOETHER))), chi_max),
        "omega": RegionSpec("omega", (Nonnegative(), LineLe(line(LineName.NP12))), chi_max),
        "ppx-strip": RegionSpec(
            "ppx-strip", (LineGe(line(LineName.NOETHER)), LineLt(line(LineName.PPX))), chi_max),
        "signature-zero": RegionSpec("signature-zero", (OnLine(line(LineName.SIGZERO)),), chi_max),
        "positive-signature": RegionSpec(
            "positive-signature",
            (LineGt(line(LineName.SIGZERO)), LineLe(line(LineName.RATIO876))), chi_max),
    }


# Alternative spellings accepted in region files
_PREDICATE_ALIASES = {
    "congruence": "spin_congruence",
    "nonneg": "nonnegative",
}


class ConstraintModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    type: str
    line: Optional[str] = None
    slope: Optional[Union[int, str]] = None
    intercept: Optional[Union[int, str]] = None


class RegionModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    name: str = "region"
    chi_min: int = pydantic.Field(default=1, ge=1)
    chi_max: int = pydantic.Field(ge=1)
    offset: Tuple[int, int] = (0, 0)
    constraints: List[ConstraintModel]


def _constraint(model: ConstraintModel, index: int) -> Predicate:
    name = _PREDICATE_ALIASES.get(model.type, model.type)
    if name not in PREDICATES:
        raise ParseError(
            f"constraints[{index}]: unknown constraint type '{model.type}'; known types: "
            + ", ".join(sorted(PREDICATES)))
    cls = PREDICATES[name]
    if cls in (Nonnegative, SpinCongruence, NoetherBoundary):
        return cls()
    if model.line is None:
        raise ParseError(f"constraints[{index}]: '{model.type}' needs a line")
    try:
        if model.slope is not None or model.intercept is not None:
            region_line = RegionLine(
                LineName(model.line), Fraction(model.slope or 0), Fraction(model.intercept or 0))
        else:
            region_line = line(model.line)
    except (KeyError, ValueError):
        raise ParseError(
            f"constraints[{index}]: cannot use line '{model.line}'; known lines are "
            + ", ".join(n.value for n in LineName) + "; FLine needs slope and intercept") from None
    return cls(region_line)


def region_from_json(text: str, source: str = "region") -> RegionSpec:
    try:
        model = RegionModel.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise parse_error(e, source) from None
    return RegionSpec(
        model.name,
        tuple(_constraint(c, i) for i, c in enumerate(model.constraints)),
        model.chi_max,
        LatticePoint(*model.offset),
        model.chi_min,
    )


def load_region(name_or_path: str, chi_max: Optional[int] = None) -> RegionSpec:
    """A preset region by name, or a region file"""
    presets = preset_regions(chi_max or 200)
    if name_or_path in presets:
        return presets[name_or_path]
    with open_text(name_or_path) as f:
        region = region_from_json(f.read(), name_or_path)
    if chi_max is not None:
        region = RegionSpec(region.name, region.constraints, chi_max, region.offset, region.chi_min)
    return region


@dataclass(frozen=True)
class Certificate:
    """
    An expression whose evaluation has the requested invariants and is spin,
    simply connected and symplectic.
    """
    point: LatticePoint
    expr: Construction
    report: EvalReport
    checks: Tuple[Tuple[str, bool], ...]
    route: str = "base"

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def verify(self) -> bool:
        """Re-evaluate the expression and repeat the checks"""
        return all(passed for _, passed in _checks(self.point, evaluate(self.expr, with_sw=False)))

    @property
    def homeo(self) -> HomeoType:
        return homeo_type(self.point, self.report.spin)

    def as_json(self):
        return {
            "tag": "geo4-certificate",
            "schema_version": OneLine([0, 1]),
            "point": OneLine(self.point.as_list()),
            "route": self.route,
            "expression": serialize(self.expr),
            "ast": expr_to_json(self.expr),
            "checks": OneLine({name: passed for name, passed in self.checks}),
            "homeo_type": OneLine(self.homeo.as_dict()),
            "report": self.report.as_json(),
        }


def _checks(point: LatticePoint, report: EvalReport) -> Tuple[Tuple[str, bool], ...]:
    return (
        ("invariants", report.point == point),
        ("spin", report.spin),
        ("simply_connected", report.simply_connected),
        ("symplectic", report.symplectic),
    )


def issue_certificate(point: LatticePoint, expr: Construction, route: str = "base") -> Certificate:
    report = evaluate(expr, with_sw=False)
    checks = _checks(point, report)
    failed = [name for name, passed in checks if not passed]
    if failed:
        raise CertificateError(
            f"{serialize(expr)} does not certify {point}: failed {', '.join(failed)}")
    return Certificate(point, expr, report, checks, route)


def base_construction(point: LatticePoint, catalog: Optional[Catalog] = None) -> Construction:
    """
    Expression realizing an allowed point of the wedge 0 ≤ c ≤ 2χ − 6:

      - c = 0: X(χ)
      - c ≡ 8 (mod 16): H(8k′−1) ♯_f E(2n) with c = 16k′ − 8
      - c ≡ 0 (mod 16), c > 0: H(7) ♯_f H(8k′−1) ♯_f E(2n) with c = 16k′, which needs c ≤ 2χ − 12
    """
    catalog = catalog if catalog is not None else Catalog.default()
    verdict = is_allowed(point)
    if not verdict:
        raise OutOfRegion(f"{point} is not allowed: {', '.join(verdict.messages())}")
    chi, c = point.chi, point.c
    if c > 2 * chi - 6:
        raise OutOfRegion(f"{point} lies above the Noether line c = 2χ - 6")
    if c == 0:
        return Leaf(catalog.block(Family.X2N, n=chi // 2))
    if c % 16 == 8:
        k_prime = (c + 8) // 16
        n = (chi - (8 * k_prime - 1)) // 2
        horikawa: Construction = Leaf(catalog.block(Family.H, k=2 * k_prime))
        if n == 0:
            return horikawa
        return FiberSum(horikawa, Leaf(catalog.block(Family.E, n=2 * n)), "f", "f")
    k_prime = c // 16
    n = (chi - 8 * k_prime - 6) // 2
    if n < 0:
        raise NoRealization(
            f"{point}: H(7) ♯ H({8 * k_prime - 1}) ♯ E(2n) needs c <= 2*chi - 12")
    pair: Construction = FiberSum(
        Leaf(catalog.block(Family.H, k=2)), Leaf(catalog.block(Family.H, k=2 * k_prime)), "f", "f")
    if n == 0:
        return pair
    return FiberSum(pair, Leaf(catalog.block(Family.E, n=2 * n)), "f", "f")


def base_family_points(chi_max: int) -> Set[LatticePoint]:
    """
    Points reached by the base families, enumerated from their parameters
    (k′, n) rather than from the lattice.
    """
    points = set()
    for n in range(2, chi_max // 2 + 1):
        points.add(LatticePoint(2 * n, 0))
    k_prime = 1
    while 8 * k_prime - 1 <= chi_max:
        n = 0
        while 8 * k_prime - 1 + 2 * n <= chi_max:
            points.add(LatticePoint(8 * k_prime - 1 + 2 * n, 16 * k_prime - 8))
            n += 1
        n = 0
        while 8 * k_prime + 6 + 2 * n <= chi_max:
            points.add(LatticePoint(8 * k_prime + 6 + 2 * n, 16 * k_prime))
            n += 1
        k_prime += 1
    return points


@dataclass(frozen=True)
class CompositeX:
    """A manifold of large c/χ ratio used to translate the base region"""
    expr: Construction
    report: EvalReport
    description: str = ""

    @property
    def point(self) -> LatticePoint:
        return self.report.point

    @property
    def numbers(self) -> CharNumbers:
        return self.report.numbers

    @property
    def sigma(self) -> int:
        return self.numbers.sigma

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.numbers.c, self.numbers.chi)

    @property
    def sigma_positive(self) -> bool:
        return self.sigma > 0

    @property
    def exceeds_ratio_bound(self) -> bool:
        return self.ratio > RATIO_BOUND

    @property
    def rohlin_consistent(self) -> bool:
        return self.sigma % 16 == 0

    def as_json(self):
        return {
            "description": self.description,
            "expression": serialize(self.expr) if _size(self.expr) <= 16 else f"<{_size(self.expr)} blocks>",
            "point": OneLine(self.point.as_list()),
            "sigma": self.sigma,
            "ratio": self.ratio,
            "ratio_decimal": round(float(self.ratio), 6),
            "sigma_positive": self.sigma_positive,
            "exceeds_ratio_bound": self.exceeds_ratio_bound,
            "rohlin_consistent": self.rohlin_consistent,
            "spin": self.report.spin,
            "simply_connected": self.report.simply_connected,
        }


def _size(expr: Construction) -> int:
    if isinstance(expr, Leaf):
        return 1
    if isinstance(expr, FiberSum):
        return _size(expr.left) + _size(expr.right)
    return _size(expr.base)


def build_composite_X(x: int, g: int, k: int, catalog: Optional[Catalog] = None) -> CompositeX:
    """
    k copies of Y(x) fiber-summed along their genus-g surfaces Σ_g, then summed
    with Z(g) along Σ.
    """
    if x < 1 or g < 2 or k < 1:
        raise BadParams(f"need x >= 1, g >= 2, k >= 1; got x={x}, g={g}, k={k}")
    catalog = catalog if catalog is not None else Catalog.default()
    y = Leaf(catalog.block(Family.Y, x=x, g=g))
    z = Leaf(catalog.block(Family.Z, g=g))
    expr = iterate_fiber_sum(y, k, "Σ_g", tail=z, tail_slot="Σ")
    composite = CompositeX(expr, evaluate(expr), f"{k} x Y(x={x},g={g}) ♯_Σ Z(g={g})")
    if not composite.rohlin_consistent:
        logger.warning(
            "composite X %s has σ = %d, not divisible by 16 (model values of Y for odd x)",
            composite.point, composite.sigma)
    return composite


def composite_from_block(block: BlockSpec) -> CompositeX:
    expr = Leaf(block)
    return CompositeX(expr, evaluate(expr), block.name)


def exotic_threshold(composite: Union[CompositeX, CharNumbers, LatticePoint]) -> int:
    """
    Least χ with f(χ) ≥ 8χ, the signature-zero line.

    >>> exotic_threshold(LatticePoint(10, 96))
    264
    """
    point = composite.point if not isinstance(composite, LatticePoint) else composite
    f = f_line(point)
    if f.slope <= 8:
        raise RatioTooSmall(f"c/χ = {f.slope} of {point} does not exceed 8")
    return max(1, math.ceil(-f.intercept / (f.slope - 8)))


class Realizer:
    """
    Finds certificates for lattice points: first inside the base wedge, then as
    m copies of the composite X fiber-summed with a base-wedge manifold.
    """

    def __init__(self, catalog: Optional[Catalog] = None, composite: Optional[CompositeX] = None):
        self.catalog = catalog if catalog is not None else Catalog.default()
        self.composite = composite

    def __repr__(self):
        return f"Realizer(composite={self.composite.point if self.composite else None})"

    def realize_base(self, point: LatticePoint) -> Certificate:
        return issue_certificate(point, base_construction(point, self.catalog), "base")

    def realize_general(self, point: LatticePoint) -> Certificate:
        verdict = is_allowed(point)
        if not verdict:
            raise OutOfRegion(f"{point} is not allowed: {', '.join(verdict.messages())}")
        if self.composite is None:
            raise NotCovered(f"{point}: no composite manifold X configured")
        x = self.composite.point
        if x.chi <= 0 or x.c <= 0:
            raise NotCovered(f"{point}: composite X {x} must lie in the open first quadrant")
        # points above the f line are still searched
        f = f_line(x)
        above = point.c > f(point.chi)
        if above:
            logger.debug("%s lies above the f line of X = %s: f(%d) = %s", point, x, point.chi, f(point.chi))
        trace = []
        for m in range(0, point.c // x.c + 1):
            residual = point - x.scaled(m)
            if residual.chi < 1:
                trace.append(f"m={m}: residual {residual} has χ < 1")
                break
            try:
                tail = base_construction(residual, self.catalog)
            except (OutOfRegion, NoRealization) as e:
                trace.append(f"m={m}: {e}")
                continue
            if m == 0:
                return issue_certificate(point, tail, "base")
            expr = iterate_fiber_sum(self.composite.expr, m, "f", tail=tail, tail_slot="f")
            return issue_certificate(point, expr, "general")
        if above:
            trace.append(f"{point} lies above the f line of X = {x}: f({point.chi}) = {f(point.chi)}")
        raise NotCovered(f"{point} is not m·X + V for X = {x} and V in the base wedge", trace)

    def realize(self, point: LatticePoint) -> Certificate:
        try:
            return self.realize_base(point)
        except (OutOfRegion, NoRealization) as base_error:
            if not is_allowed(point) or self.composite is None:
                raise
            logger.debug("%s: base wedge failed (%s), trying m·X + V", point, base_error)
        return self.realize_general(point)


def realize_base(point: LatticePoint, catalog: Optional[Catalog] = None) -> Certificate:
    return Realizer(catalog).realize_base(point)


def realize_general(point: LatticePoint, composite: CompositeX, catalog: Optional[Catalog] = None) -> Certificate:
    return Realizer(catalog, composite).realize_general(point)


class PPXVerdict(enum.Enum):
    NOT_APPLICABLE = "not_applicable"
    ADMISSIBLE = "admissible"
    NOT_ADMISSIBLE = "not_admissible"


def ppx_admissible(point: LatticePoint) -> PPXVerdict:
    """
    Inside the strip 2χ − 6 ≤ c < 3(χ − 5), a minimal complex surface of general
    type exists only on c = 2(χ − 3) with c/8 an odd integer, or on
    3c = 8(χ − 4) with χ divisible by 3.

    >>> ppx_admissible(LatticePoint(13, 20)).value
    'not_admissible'
    """
    chi, c = point.chi, point.c
    if not (2 * chi - 6 <= c < 3 * (chi - 5)):
        return PPXVerdict.NOT_APPLICABLE
    if c == 2 * (chi - 3) and c % 8 == 0 and (c // 8) % 2 == 1:
        return PPXVerdict.ADMISSIBLE
    if 3 * c == 8 * (chi - 4) and chi % 3 == 0:
        return PPXVerdict.ADMISSIBLE
    return PPXVerdict.NOT_ADMISSIBLE


@dataclass(frozen=True)
class ExoticMember:
    index: int
    expr: Construction
    report: EvalReport
    knot: Optional[TorusKnot] = None

    @property
    def multiset(self) -> Optional[Counter]:
        if not self.report.sw.is_exact or self.report.sw.value is None:
            return None
        return self.report.sw.value.coefficient_multiset()

    def as_json(self):
        multiset = self.multiset
        return {
            "index": self.index,
            "knot": str(self.knot) if self.knot else None,
            "expression": serialize(self.expr) if _size(self.expr) <= 16 else None,
            "ast": expr_to_json(self.expr),
            "sw_status": self.report.sw.kind.value,
            "basic_class_count": sum(multiset.values()) if multiset is not None else None,
            "coefficient_multiset": OneLine(sorted(multiset.items())) if multiset is not None else None,
        }


@dataclass(frozen=True)
class ExoticFamily:
    n: int
    point: LatticePoint
    threshold: int
    torus_slot: str
    homeo: HomeoType
    members: Tuple[ExoticMember, ...]
    # None when SW is only partially known
    distinct: Optional[bool]
    notes: Tuple[str, ...] = ()

    def as_json(self):
        return {
            "tag": "geo4-exotic",
            "schema_version": OneLine([0, 1]),
            "n": self.n,
            "point": OneLine(self.point.as_list()),
            "threshold": self.threshold,
            "homeo_type": OneLine(self.homeo.as_dict()),
            "torus_slot": self.torus_slot,
            "pairwise_distinct": self.distinct,
            "notes": list(self.notes),
            "members": [m.as_json() for m in self.members],
        }


def elliptic_fiber_slots(report: EvalReport) -> List[str]:
    """Slots that are the fiber T of an elliptic piece and still have a dual sphere"""
    elliptic = {tag for tag, name in report.leaves if name.startswith(("E(", "X2n("))}
    result = []
    for slot in report.slots:
        tag, _, original = slot.origin.partition(":")
        if slot.genus == 1 and slot.dual_sphere and tag in elliptic and original == "T":
            result.append(slot.id)
    return result


def choose_surgery_torus(report: EvalReport) -> str:
    """
    A torus with a dual sphere for knot surgery, preferring the fiber of an
    elliptic piece.
    """
    fibers = elliptic_fiber_slots(report)
    if fibers:
        return fibers[0]
    candidates = [slot for slot in report.slots if slot.genus == 1 and slot.dual_sphere]
    if candidates:
        return candidates[0].id
    raise NoRealization("no torus with a dual sphere is available for knot surgery")


def exotic_family(n: int, count: int, realizer: Realizer) -> ExoticFamily:
    """
    ``count`` pairwise non-diffeomorphic manifolds homeomorphic to (2n+1)(S²×S²):
    the signature-zero certificate W and knot surgeries on it with the torus
    knots T(2, 2j+1).
    """
    if n < 0 or count < 1:
        raise ValueError(f"need n >= 0 and count >= 1, got n={n}, count={count}")
    point = LatticePoint(n + 1, 8 * n + 8)
    if realizer.composite is None:
        raise NotCovered(f"{point}: no composite manifold X configured")
    threshold = exotic_threshold(realizer.composite)
    if point.chi < threshold:
        raise BelowThreshold(
            f"n = {n} is below the threshold: signature-zero points need χ >= {threshold} "
            f"for X = {realizer.composite.point}", threshold)
    certificate = realizer.realize_general(point)
    base_report = evaluate(certificate.expr)
    slot = choose_surgery_torus(base_report)
    notes = []
    if slot not in elliptic_fiber_slots(base_report):
        logger.info("%s: the certificate has no elliptic piece; knot surgery along %s", point, slot)
        notes.append(f"the certificate has no elliptic piece; knot surgery along the torus {slot}")
    members = [ExoticMember(0, certificate.expr, base_report)]
    for j in range(1, count):
        knot = TorusKnot(2, 2 * j + 1)
        expr = KnotSurgery(certificate.expr, slot, knot)
        members.append(ExoticMember(j, expr, evaluate(expr), knot))
    for member in members:
        if member.report.topology()[:2] != base_report.topology()[:2]:
            raise CertificateError(f"member {member.index} changed the characteristic numbers")
    multisets = [m.multiset for m in members]
    distinct: Optional[bool]
    if any(ms is None for ms in multisets):
        distinct = None
        notes.append("SW of the base is only partially known; distinctness is not certified")
    else:
        keys = [tuple(sorted(ms.items())) for ms in multisets if ms is not None]
        distinct = len(set(keys)) == len(keys) and all(keys)
        notes.append("the standard smooth structure has SW = 0; every member has a basic class")
    return ExoticFamily(
        n=n, point=point, threshold=threshold, torus_slot=slot,
        homeo=homeo_type(point, True), members=tuple(members), distinct=distinct,
        notes=tuple(notes))


def describe_lines(composite: Optional[CompositeX] = None) -> List[Dict[str, Any]]:
    result = []
    for name in LineName:
        if name is LineName.FLINE:
            if composite is None:
                continue
            region_line = f_line(composite.point)
        else:
            region_line = line(name)
        result.append({
            "name": name.value,
            "label": region_line.label(),
            "slope": region_line.slope,
            "intercept": region_line.intercept,
        })
    return result
