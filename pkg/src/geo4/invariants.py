"""
Characteristic numbers of closed simply connected 4-manifolds, the spin
lattice of the (χ, c) plane and the named lines of the geography picture.

All arithmetic is exact: integers for invariants, Fractions for line slopes.
"""
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union


class InvariantError(ValueError):
    pass


class NonIntegralChi(InvariantError):
    pass


class InvalidBetti(InvariantError):
    pass


class NotAllowed(InvariantError):
    pass


class ZeroChi(InvariantError):
    pass


@dataclass(frozen=True, order=True)
class LatticePoint:
    """
    A point (χ, c) of the geography plane, χ = holomorphic Euler characteristic,
    c = c₁².
    """
    chi: int
    c: int

    def __str__(self):
        return f"({self.chi}, {self.c})"

    @property
    def sigma(self) -> int:
        return self.c - 8 * self.chi

    @property
    def euler(self) -> int:
        return 12 * self.chi - self.c

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.chi + other.chi, self.c + other.c)

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return LatticePoint(self.chi - other.chi, self.c - other.c)

    def scaled(self, m: int) -> "LatticePoint":
        return LatticePoint(m * self.chi, m * self.c)

    def as_list(self):
        return [self.chi, self.c]


@dataclass(frozen=True)
class CharNumbers:
    """
    Euler characteristic, signature, χ = (σ + e)/4, c = 3σ + 2e and the
    Betti numbers b₂⁺, b₂⁻ of a closed simply connected 4-manifold (b₁ = 0).
    """
    e: int
    sigma: int
    chi: int
    c: int
    b2plus: int
    b2minus: int

    def __post_init__(self):
        if self.b2plus < 0 or self.b2minus < 0:
            raise InvalidBetti(
                f"b2+ = {self.b2plus} and b2- = {self.b2minus} must be non-negative")
        if self.e != 2 + self.b2plus + self.b2minus:
            raise InvariantError(f"e = {self.e} differs from 2 + b2+ + b2-")
        if self.sigma != self.b2plus - self.b2minus:
            raise InvariantError(f"signature {self.sigma} differs from b2+ - b2-")
        if 4 * self.chi != self.sigma + self.e:
            raise NonIntegralChi(f"(σ + e)/4 = ({self.sigma} + {self.e})/4 is not {self.chi}")
        if self.c != 3 * self.sigma + 2 * self.e:
            raise InvariantError(f"c = {self.c} differs from 3σ + 2e")

    @classmethod
    def from_betti(cls, b2plus: int, b2minus: int) -> "CharNumbers":
        if b2plus < 0 or b2minus < 0:
            raise InvalidBetti(f"Betti numbers must be non-negative, got ({b2plus}, {b2minus})")
        e = 2 + b2plus + b2minus
        sigma = b2plus - b2minus
        if (sigma + e) % 4 != 0:
            raise NonIntegralChi(
                f"χ = (σ + e)/4 = {sigma + e}/4 is not an integer for b2+ = {b2plus}, b2- = {b2minus}")
        return cls(
            e=e, sigma=sigma, chi=(sigma + e) // 4, c=3 * sigma + 2 * e,
            b2plus=b2plus, b2minus=b2minus)

    @classmethod
    def from_euler_signature(cls, e: int, sigma: int) -> "CharNumbers":
        if (e - 2 + sigma) % 2 != 0:
            raise InvalidBetti(f"e = {e} and σ = {sigma} do not come from integral Betti numbers")
        return cls.from_betti((e - 2 + sigma) // 2, (e - 2 - sigma) // 2)

    @classmethod
    def from_point(cls, point: LatticePoint) -> "CharNumbers":
        return cls.from_euler_signature(point.euler, point.sigma)

    @property
    def point(self) -> LatticePoint:
        return LatticePoint(self.chi, self.c)

    def as_dict(self) -> Dict[str, int]:
        return {
            "chi": self.chi, "c": self.c, "e": self.e, "sigma": self.sigma,
            "b2plus": self.b2plus, "b2minus": self.b2minus,
        }


def char_from_betti(b2plus: int, b2minus: int) -> CharNumbers:
    """
    >>> char_from_betti(3, 19).point
    LatticePoint(chi=2, c=0)
    """
    return CharNumbers.from_betti(b2plus, b2minus)


# Names of the constraints checked by is_allowed, with their messages
VIOLATIONS = {
    "nonnegative": "c < 0",
    "congruence": "congruence violated (c ≢ 8χ mod 16)",
}


@dataclass(frozen=True)
class Verdict:
    ok: bool
    violations: Tuple[str, ...] = ()

    def __bool__(self):
        return self.ok

    def messages(self) -> Tuple[str, ...]:
        return tuple(VIOLATIONS.get(v, v) for v in self.violations)


def is_allowed(point: LatticePoint) -> Verdict:
    """
    A lattice point is allowed for spin manifolds when c ≥ 0 and c ≡ 8χ (mod 16),
    i.e. the signature is divisible by 16.

    >>> is_allowed(LatticePoint(7, 8)).ok
    True
    >>> is_allowed(LatticePoint(3, 0)).violations
    ('congruence',)
    """
    violations = []
    if point.c < 0:
        violations.append("nonnegative")
    if (point.c - 8 * point.chi) % 16 != 0:
        violations.append("congruence")
    return Verdict(not violations, tuple(violations))


@dataclass(frozen=True)
class HomeoType:
    b2plus: int
    b2minus: int
    sigma: int
    spin: bool
    name: Optional[str] = None

    def __str__(self):
        parity = "even" if self.spin else "odd"
        text = f"b2+ = {self.b2plus}, b2- = {self.b2minus}, σ = {self.sigma}, {parity}"
        if self.name:
            text += f" ({self.name})"
        return text

    def as_dict(self):
        return {
            "b2plus": self.b2plus, "b2minus": self.b2minus, "sigma": self.sigma,
            "spin": self.spin, "name": self.name,
        }


def homeo_type(point: LatticePoint, spin: bool) -> HomeoType:
    """
    Homeomorphism type of a closed simply connected manifold with the given
    characteristic numbers (Freedman): the intersection form is determined by
    rank, signature and parity.
    """
    if spin and not is_allowed(point):
        raise NotAllowed(f"{point} is not an allowed point for a spin manifold: "
            + ", ".join(is_allowed(point).messages()))
    numbers = CharNumbers.from_point(point)
    name = None
    if spin and numbers.sigma == 0:
        copies = numbers.b2plus
        name = "S²×S²" if copies == 1 else f"{copies}(S²×S²)"
    elif not spin:
        name = f"{numbers.b2plus}CP²#{numbers.b2minus}CP²bar"
    return HomeoType(numbers.b2plus, numbers.b2minus, numbers.sigma, spin, name)


class LineName(enum.Enum):
    ELLIPTIC = "Elliptic"
    NOETHER = "Noether"
    NP12 = "NP12"
    SIGZERO = "SigZero"
    RATIO876 = "Ratio876"
    BMY = "BMY"
    PPX = "PPX"
    FLINE = "FLine"


@dataclass(frozen=True)
class RegionLine:
    """A line c = slope·χ + intercept of the geography plane"""
    name: LineName
    slope: Fraction
    intercept: Fraction

    def __call__(self, chi: Union[int, Fraction]) -> Fraction:
        return self.slope * chi + self.intercept

    def label(self) -> str:
        if self.name is LineName.FLINE:
            return "f(χ)"
        text = "c = "
        if self.slope != 0:
            text += "χ" if self.slope == 1 else f"{_number(self.slope)}χ"
        if self.intercept != 0 or self.slope == 0:
            if self.slope == 0:
                text += _number(self.intercept)
            else:
                sign = "+" if self.intercept > 0 else "−"
                text += f" {sign} {_number(abs(self.intercept))}"
        return text


def _number(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return str(float(value))


STANDARD_LINES = {
    LineName.ELLIPTIC: RegionLine(LineName.ELLIPTIC, Fraction(0), Fraction(0)),
    LineName.NOETHER: RegionLine(LineName.NOETHER, Fraction(2), Fraction(-6)),
    LineName.NP12: RegionLine(LineName.NP12, Fraction(2), Fraction(-12)),
    LineName.SIGZERO: RegionLine(LineName.SIGZERO, Fraction(8), Fraction(0)),
    LineName.RATIO876: RegionLine(LineName.RATIO876, Fraction(876, 100), Fraction(0)),
    LineName.BMY: RegionLine(LineName.BMY, Fraction(9), Fraction(0)),
    LineName.PPX: RegionLine(LineName.PPX, Fraction(3), Fraction(-15)),
}


def line(name: Union[str, LineName]) -> RegionLine:
    if isinstance(name, str):
        name = LineName(name)
    if name is LineName.FLINE:
        raise KeyError("the f line depends on a composite manifold; use f_line()")
    return STANDARD_LINES[name]


def f_line(numbers: Union[CharNumbers, LatticePoint]) -> RegionLine:
    """
    The line through (c/2 + 6, c) of slope c/χ attached to a composite manifold
    with invariants (χ, c): f(x) = (c/χ)·(x − c/2 − 6) + c.

    >>> line = f_line(LatticePoint(10, 90))
    >>> (line.slope, line.intercept)
    (Fraction(9, 1), Fraction(-369, 1))
    """
    if numbers.chi == 0:
        raise ZeroChi("the f line needs χ ≠ 0")
    slope = Fraction(numbers.c, numbers.chi)
    intercept = numbers.c - slope * (Fraction(numbers.c, 2) + 6)
    return RegionLine(LineName.FLINE, slope, intercept)
