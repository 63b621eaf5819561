"""
Formal group ring Z[H²(X; Z)] in which Seiberg–Witten invariants are written
as finite sums of coefficients times exp(class), plus the gluing formulas for
fiber sums along tori and knot surgery, Alexander polynomials of torus knots
and basic-class bookkeeping.

Cohomology classes are opaque named generators. Two expressions are combined
by merging their bases by name; a name that refers to two different classes
(different provenance) is an error, never silently identified.
"""
import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import (
    TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union,
)

import sympy

from .invariants import CharNumbers

if TYPE_CHECKING:
    from .catalog import BlockSpec

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

# Products with more terms than this are shown factored
RENDER_LIMIT = 2000
# Basic class sets larger than this are counted but not materialized
MATERIALIZE_LIMIT = 100_000


class SWError(ValueError):
    pass


class BasisClash(SWError):
    pass


class BadKnotParams(SWError):
    pass


class UnknownSW(SWError):
    pass


class PartialSW(SWError):
    pass


class PairingMismatch(SWError):
    pass


class ClassKind(enum.Enum):
    CANONICAL = "canonical"
    FIBER = "fiber"
    GLUING = "gluing"
    EXCEPTIONAL = "exceptional"
    SURFACE = "surface"
    VARIABLE = "variable"


@dataclass(frozen=True)
class CohomologyClass:
    """
    A named generator of the group ring. ``label`` is the short display name
    ("T", "f", "K"), ``name`` is unique within a construction ("T@leaf3").
    """
    name: str
    label: str
    kind: ClassKind = ClassKind.SURFACE
    provenance: str = ""

    @classmethod
    def make(
        cls, label: str, kind: ClassKind = ClassKind.SURFACE, tag: Optional[str] = None,
        provenance: str = "",
    ) -> "CohomologyClass":
        name = label if tag is None else f"{label}@{tag}"
        return cls(name, label, kind, provenance)

    def __str__(self):
        return self.name


ClassBasis = Tuple[CohomologyClass, ...]


def merge_bases(first: Sequence[CohomologyClass], second: Sequence[CohomologyClass]) -> ClassBasis:
    """Union of two bases by name, keeping the order of ``first``"""
    by_name = {cls.name: cls for cls in first}
    merged = list(first)
    for cls in second:
        known = by_name.get(cls.name)
        if known is None:
            by_name[cls.name] = cls
            merged.append(cls)
        elif known != cls:
            raise BasisClash(
                f"class name '{cls.name}' refers to two different classes "
                f"(provenance '{known.provenance}' and '{cls.provenance}')")
    return tuple(merged)


class SWExpr:
    """
    Element of the group ring: a map from exponent vectors (indexing ``basis``)
    to non-zero integer coefficients.
    """

    __slots__ = ("basis", "terms")

    def __init__(self, basis: Iterable[CohomologyClass] = (), terms: Optional[Mapping] = None):
        self.basis: ClassBasis = tuple(basis)
        names = [cls.name for cls in self.basis]
        if len(set(names)) != len(names):
            raise BasisClash(f"duplicate class names in basis: {names}")
        self.terms: Dict[Exponent, int] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != len(self.basis):
                raise ValueError(
                    f"exponent vector {exponent} does not match basis of length {len(self.basis)}")
            if coefficient != 0:
                self.terms[exponent] = self.terms.get(exponent, 0) + int(coefficient)
        self.terms = {k: v for k, v in self.terms.items() if v != 0}

    @classmethod
    def zero(cls) -> "SWExpr":
        return cls()

    @classmethod
    def constant(cls, value: int) -> "SWExpr":
        return cls((), {(): value})

    @classmethod
    def one(cls) -> "SWExpr":
        return cls.constant(1)

    @classmethod
    def exp(cls, generator: CohomologyClass, multiple: int = 1, coefficient: int = 1) -> "SWExpr":
        """coefficient·exp(multiple·generator)"""
        return cls((generator,), {(multiple,): coefficient})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"SWExpr({str(self)!r})"

    def _reindexed(self, basis: ClassBasis) -> Dict[Exponent, int]:
        position = {cls.name: i for i, cls in enumerate(basis)}
        index = [position[cls.name] for cls in self.basis]
        result = {}
        for exponent, coefficient in self.terms.items():
            vector = [0] * len(basis)
            for i, k in zip(index, exponent):
                vector[i] = k
            result[tuple(vector)] = coefficient
        return result

    def __add__(self, other: "SWExpr") -> "SWExpr":
        if isinstance(other, int):
            other = SWExpr.constant(other)
        if not isinstance(other, SWExpr):
            return NotImplemented
        basis = merge_bases(self.basis, other.basis)
        terms = self._reindexed(basis)
        for exponent, coefficient in other._reindexed(basis).items():
            terms[exponent] = terms.get(exponent, 0) + coefficient
        return SWExpr(basis, terms)

    __radd__ = __add__

    def __neg__(self) -> "SWExpr":
        return SWExpr(self.basis, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "SWExpr") -> "SWExpr":
        if isinstance(other, int):
            other = SWExpr.constant(other)
        return self + (-other)

    def __mul__(self, other: Union["SWExpr", int]) -> "SWExpr":
        if isinstance(other, int):
            return SWExpr(self.basis, {k: v * other for k, v in self.terms.items()})
        if not isinstance(other, SWExpr):
            return NotImplemented
        basis = merge_bases(self.basis, other.basis)
        left = self._reindexed(basis)
        right = other._reindexed(basis)
        terms: Dict[Exponent, int] = {}
        for a, x in left.items():
            for b, y in right.items():
                exponent = tuple(i + j for i, j in zip(a, b))
                terms[exponent] = terms.get(exponent, 0) + x * y
        return SWExpr(basis, terms)

    def __rmul__(self, other: int) -> "SWExpr":
        return self * other

    def __pow__(self, n: int) -> "SWExpr":
        if n < 0:
            raise ValueError("negative powers are not defined in the group ring")
        result = SWExpr.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SWExpr):
            return NotImplemented
        a = self.trimmed()
        b = other.trimmed()
        if {cls.name for cls in a.basis} != {cls.name for cls in b.basis}:
            return False
        try:
            basis = merge_bases(a.basis, b.basis)
        except BasisClash:
            return False
        return a._reindexed(basis) == b._reindexed(basis)

    __hash__ = None  # type: ignore

    def conjugate(self) -> "SWExpr":
        """The image under exp(k) ↦ exp(−k)"""
        return SWExpr(self.basis, {tuple(-i for i in k): v for k, v in self.terms.items()})

    def trimmed(self) -> "SWExpr":
        """Same element with unused basis classes removed"""
        used = [i for i in range(len(self.basis)) if any(k[i] for k in self.terms)]
        if len(used) == len(self.basis):
            return self
        basis = tuple(self.basis[i] for i in used)
        return SWExpr(basis, {tuple(k[i] for i in used): v for k, v in self.terms.items()})

    def used_classes(self) -> FrozenSet[str]:
        return frozenset(cls.name for cls in self.trimmed().basis)

    def coefficient_multiset(self) -> Counter:
        return Counter(abs(v) for v in self.terms.values())

    def coefficient_sum(self) -> int:
        """Value at exp(k) = 1 for all k"""
        return sum(self.terms.values())

    def substitute(self, name: str, target: CohomologyClass, multiple: int) -> "SWExpr":
        """Replace exp(name) by exp(multiple·target)"""
        result = SWExpr.zero()
        position = [cls.name for cls in self.basis].index(name)
        rest = tuple(cls for cls in self.basis if cls.name != name)
        for exponent, coefficient in self.terms.items():
            k = exponent[position]
            others = exponent[:position] + exponent[position + 1:]
            result = result + SWExpr(rest, {others: coefficient}) * SWExpr.exp(target, multiple * k)
        return result

    def qualified(self, tag: Optional[str], provenance: str = "") -> "SWExpr":
        """Rename each class to label@tag, as it appears inside a construction"""
        if tag is None:
            return self
        basis = tuple(CohomologyClass.make(cls.label, cls.kind, tag, provenance) for cls in self.basis)
        return SWExpr(basis, self.terms)

    def _display_names(self) -> List[str]:
        labels = [cls.label for cls in self.basis]
        if len(set(labels)) == len(labels):
            return labels
        return [cls.name for cls in self.basis]

    def __str__(self):
        """
        Terms in descending lexicographic order of their exponent vectors.

        >>> T = CohomologyClass.make("T")
        >>> str((SWExpr.exp(T) - SWExpr.exp(T, -1)) ** 2)
        '+1*exp(2T) -2 +1*exp(-2T)'
        """
        expr = self.trimmed()
        if expr.is_zero:
            return "0"
        names = expr._display_names()
        parts = []
        for exponent, coefficient in sorted(expr.terms.items(), reverse=True):
            monomial = _monomial(exponent, names)
            if monomial:
                parts.append(f"{coefficient:+d}*exp({monomial})")
            else:
                parts.append(f"{coefficient:+d}")
        return " ".join(parts)

    def as_json(self):
        from .json import OneLine
        expr = self.trimmed()
        return {
            "basis": OneLine([cls.name for cls in expr.basis]),
            "terms": [
                OneLine({"exp": list(exponent), "coef": coefficient})
                for exponent, coefficient in sorted(expr.terms.items(), reverse=True)
            ],
        }


def _monomial(exponent: Exponent, names: Sequence[str]) -> str:
    pieces = []
    for k, name in zip(exponent, names):
        if k == 0:
            continue
        if k == 1:
            piece = name
        elif k == -1:
            piece = "-" + name
        else:
            piece = f"{k}{name}"
        if pieces and not piece.startswith("-"):
            piece = "+" + piece
        pieces.append(piece)
    return "".join(pieces)


def gluing_factor(f: CohomologyClass) -> SWExpr:
    """(e^f − e^{−f})², contributed by the torus along which two pieces are glued"""
    return (SWExpr.exp(f) - SWExpr.exp(f, -1)) ** 2


def elliptic_sw(fiber: CohomologyClass, power: int) -> SWExpr:
    """(e^T − e^{−T})^power, expanded with the binomial theorem"""
    if power < 0:
        raise ValueError("negative power")
    terms = {(power - 2 * i,): (-1) ** i * math.comb(power, i) for i in range(power + 1)}
    return SWExpr((fiber,), terms)


def minimal_general_type_sw(canonical: CohomologyClass, chi: int) -> SWExpr:
    """
    e^K + (−1)^χ e^{−K}: the basic classes of a minimal surface of general type
    with b₂⁺ > 1 are ±K.
    """
    sign = -1 if chi % 2 else 1
    return SWExpr.exp(canonical) + SWExpr.exp(canonical, -1, sign)


def sw_blowup(sw: SWExpr, exceptional: CohomologyClass) -> SWExpr:
    """Blow-up formula: each basic class k of X gives basic classes k ± e of X # CP²bar"""
    return sw * (SWExpr.exp(exceptional) + SWExpr.exp(exceptional, -1))


class FactoredSW:
    """
    A product of group ring elements whose classes are pairwise disjoint.

    Composites with many pieces have exponentially many basic classes; kept as
    a product, their counts and coefficient multisets are computed per factor.
    """

    def __init__(self, factors: Iterable[SWExpr] = ()):
        self.factors: Tuple[SWExpr, ...] = tuple(f.trimmed() for f in factors)

    @classmethod
    def of(cls, expr: SWExpr) -> "FactoredSW":
        return cls((expr,))

    def __repr__(self):
        return f"FactoredSW({len(self.factors)} factors)"

    @property
    def is_zero(self) -> bool:
        return any(f.is_zero for f in self.factors)

    def _times(self, expr: SWExpr) -> "FactoredSW":
        expr = expr.trimmed()
        if expr.is_zero or self.is_zero:
            return FactoredSW((SWExpr.zero(),))
        names = expr.used_classes()
        merged = expr
        rest = []
        for factor in self.factors:
            if factor.used_classes() & names or (not names and not factor.used_classes()):
                merged = merged * factor
            else:
                rest.append(factor)
        return FactoredSW(rest + [merged])

    def __mul__(self, other: Union["FactoredSW", SWExpr]) -> "FactoredSW":
        if isinstance(other, SWExpr):
            return self._times(other)
        if not isinstance(other, FactoredSW):
            return NotImplemented
        result = self
        for factor in other.factors:
            result = result._times(factor)
        return result

    def term_count(self) -> int:
        if self.is_zero:
            return 0
        return math.prod(len(f.terms) for f in self.factors)

    def expand(self, limit: Optional[int] = None) -> SWExpr:
        if limit is not None and self.term_count() > limit:
            raise ValueError(f"expansion would have {self.term_count()} terms (limit {limit})")
        result = SWExpr.one()
        for factor in self.factors:
            result = result * factor
        return result

    def conjugate(self) -> "FactoredSW":
        return FactoredSW(f.conjugate() for f in self.factors)

    def coefficient_multiset(self) -> Counter:
        """Multiset of absolute coefficients of the expanded product"""
        if self.is_zero:
            return Counter()
        result = Counter({1: 1})
        for factor in self.factors:
            product: Counter = Counter()
            for a, m in result.items():
                for b, n in factor.coefficient_multiset().items():
                    product[a * b] += m * n
            result = product
        return result

    def __eq__(self, other):
        if isinstance(other, SWExpr):
            other = FactoredSW.of(other)
        if not isinstance(other, FactoredSW):
            return NotImplemented
        return self.expand() == other.expand()

    __hash__ = None  # type: ignore

    def __str__(self):
        if self.term_count() <= RENDER_LIMIT:
            return str(self.expand())
        return " * ".join(f"({f})" for f in self.factors)

    def as_json(self):
        if self.term_count() <= RENDER_LIMIT:
            return self.expand().as_json()
        return {"factors": [f.as_json() for f in self.factors]}


SWValue = Union[SWExpr, FactoredSW]


def sw_fiber_sum_torus(sw_a: SWValue, sw_b: SWValue, f: CohomologyClass) -> SWValue:
    """
    SW of a fiber sum along tori in cusp neighborhoods: SW_A · SW_B · (e^f − e^{−f})².
    """
    if isinstance(sw_a, SWExpr) and isinstance(sw_b, SWExpr):
        return sw_a * sw_b * gluing_factor(f)
    if isinstance(sw_a, SWExpr):
        sw_a = FactoredSW.of(sw_a)
    return sw_a * sw_b * gluing_factor(f)


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def __post_init__(self):
        if not (2 <= self.p < self.q):
            raise BadKnotParams(f"torus knot parameters need 2 <= p < q, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise BadKnotParams(f"torus knot parameters ({self.p}, {self.q}) are not coprime")

    def __str__(self):
        return f"T({self.p},{self.q})"

    @property
    def genus(self) -> int:
        return (self.p - 1) * (self.q - 1) // 2


KNOT_VARIABLE = CohomologyClass.make("t", ClassKind.VARIABLE)


@lru_cache(maxsize=None)
def _alexander_terms(p: int, q: int) -> Tuple[Tuple[int, int], ...]:
    t = sympy.Symbol("t")
    numerator = sympy.Poly((t ** (p * q) - 1) * (t - 1), t)
    denominator = sympy.Poly((t ** p - 1) * (t ** q - 1), t)
    quotient, remainder = numerator.div(denominator)
    if not remainder.is_zero:
        raise BadKnotParams(f"Alexander quotient for T({p},{q}) is not a polynomial")
    shift = (p - 1) * (q - 1) // 2
    terms = []
    for (k,), coefficient in quotient.terms():
        if coefficient != int(coefficient):
            raise BadKnotParams(f"non-integral Alexander coefficient {coefficient}")
        terms.append((k - shift, int(coefficient)))
    return tuple(terms)


def alexander_torus_knot(p: int, q: int) -> SWExpr:
    """
    Symmetrized Alexander polynomial of the (p, q) torus knot,
    (t^{pq} − 1)(t − 1) / ((t^p − 1)(t^q − 1)) shifted to be symmetric.

    >>> str(alexander_torus_knot(2, 3))
    '+1*exp(t) -1 +1*exp(-t)'
    """
    TorusKnot(p, q)
    return SWExpr((KNOT_VARIABLE,), {(k,): v for k, v in _alexander_terms(p, q)})


def sw_knot_surgery(sw: SWValue, torus: CohomologyClass, knot: TorusKnot) -> SWValue:
    """SW of knot surgery along a torus T: SW · Δ_K(e^{2T})"""
    factor = alexander_torus_knot(knot.p, knot.q).substitute(KNOT_VARIABLE.name, torus, 2)
    return sw * factor


def conjugation_sign(sw: SWExpr) -> Optional[int]:
    """+1 or −1 if conjugate(sw) = ±sw, otherwise None"""
    conjugate = sw.conjugate()
    if conjugate == sw:
        return 1
    if conjugate == -sw:
        return -1
    return None


class StatusKind(enum.Enum):
    EXACT = "exact"
    PARTIAL = "partial"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SWStatus:
    """
    What is known about the SW invariant of a construction: the exact value,
    only a set of designated basic classes, or nothing.
    """
    kind: StatusKind
    value: Optional[FactoredSW] = None
    designated: Tuple[CohomologyClass, ...] = ()
    reason: str = ""
    formal_only: bool = False

    @classmethod
    def exact(cls, value: SWValue, designated: Sequence[CohomologyClass] = (), formal_only=False):
        if isinstance(value, SWExpr):
            value = FactoredSW.of(value)
        return cls(StatusKind.EXACT, value, tuple(designated), "", formal_only)

    @classmethod
    def partial(cls, designated: Sequence[CohomologyClass], reason: str = "", formal_only=False):
        return cls(StatusKind.PARTIAL, None, tuple(designated), reason, formal_only)

    @classmethod
    def unknown(cls, reason: str):
        return cls(StatusKind.UNKNOWN, None, (), reason)

    @property
    def is_exact(self) -> bool:
        return self.kind is StatusKind.EXACT

    def describe(self) -> str:
        if self.kind is StatusKind.EXACT:
            text = str(self.value)
        elif self.kind is StatusKind.PARTIAL:
            text = "partial: designated basic classes " + ", ".join(c.name for c in self.designated)
        else:
            text = f"unknown ({self.reason})"
        if self.formal_only:
            text += " [formal only: b2+ <= 1 on an operand]"
        return text

    def as_json(self):
        from .json import OneLine
        result = {
            "status": self.kind.value,
            "designated": OneLine([c.name for c in self.designated]),
            "formal_only": self.formal_only,
        }
        if self.value is not None:
            result["text"] = str(self.value)
            result["value"] = self.value.as_json()
        if self.reason:
            result["reason"] = self.reason
        return result


class SWKind(enum.Enum):
    ELLIPTIC = "elliptic"
    MINIMAL_GENERAL_TYPE = "minimal_general_type"
    BLOWUP_GENERAL_TYPE = "blowup_general_type"
    EXPLICIT = "explicit"
    PARTIAL = "partial"


def sw_of_block(block: "BlockSpec", tag: Optional[str] = None, provenance: str = "") -> SWStatus:
    """
    SW invariant of a catalog block. Classes are named ``label@tag`` when a
    tag is given.
    """
    numbers: CharNumbers = block.numbers
    if numbers.b2plus <= 1:
        raise UnknownSW(f"{block.name} has b2+ = {numbers.b2plus}; SW needs b2+ > 1")

    def make(label: str, kind: ClassKind) -> CohomologyClass:
        return CohomologyClass.make(label, kind, tag, provenance)

    kind = block.sw_kind
    if kind is SWKind.ELLIPTIC:
        return SWStatus.exact(elliptic_sw(make("T", ClassKind.FIBER), numbers.chi - 2))
    if kind is SWKind.MINIMAL_GENERAL_TYPE:
        canonical = make("K", ClassKind.CANONICAL)
        return SWStatus.exact(minimal_general_type_sw(canonical, numbers.chi), (canonical,))
    if kind is SWKind.BLOWUP_GENERAL_TYPE:
        canonical = make("K", ClassKind.CANONICAL)
        value = sw_blowup(
            minimal_general_type_sw(canonical, numbers.chi), make("e", ClassKind.EXCEPTIONAL))
        return SWStatus.exact(value, (make("K+e", ClassKind.CANONICAL),))
    if kind is SWKind.EXPLICIT:
        if block.sw_explicit is None:
            raise UnknownSW(f"{block.name} declares an explicit SW but none is stored")
        return SWStatus.exact(
            block.sw_explicit.qualified(tag, provenance),
            tuple(make(label, ClassKind.CANONICAL) for label in block.designated))
    if kind is SWKind.PARTIAL:
        return SWStatus.partial(
            tuple(make(label, ClassKind.CANONICAL) for label in block.designated),
            reason="only the designated classes are known")
    raise UnknownSW(f"no SW data for {block.name}")


def propagate_designated_class(
    first: CohomologyClass,
    second: CohomologyClass,
    genus: int,
    pairings: Tuple[Optional[int], Optional[int]],
    tag: Optional[str] = None,
    label: str = "K",
    provenance: str = "",
) -> CohomologyClass:
    """
    Fiber sum along surfaces of genus g > 1: when both designated classes pair
    with the surface to 2g − 2 (adjunction equality), their sum descends to a
    basic class of the fiber sum.
    """
    if genus <= 1:
        raise ValueError("designated classes are propagated only for genus > 1")
    expected = 2 * genus - 2
    for cls, pairing in zip((first, second), pairings):
        if pairing != expected:
            raise PairingMismatch(
                f"class {cls.name} pairs to {pairing} with the surface, expected 2g-2 = {expected}")
    return CohomologyClass.make(label, ClassKind.CANONICAL, tag, provenance)


@dataclass(frozen=True)
class BasicClassSet:
    count: int
    count_up_to_sign: int
    basis: Tuple[str, ...] = ()
    classes: Optional[FrozenSet[Exponent]] = None

    def __len__(self):
        return self.count


def _orbits(count: int, symmetric: int, has_zero: bool) -> int:
    """Orbits of v ↦ −v on a set S with |S| = count and |S ∩ −S| = symmetric"""
    return count - (symmetric - int(has_zero)) // 2


def _product_set(
    blocks: Sequence[FrozenSet[Exponent]], basis: Tuple[str, ...], limit: int = MATERIALIZE_LIMIT,
) -> BasicClassSet:
    count = math.prod(len(b) for b in blocks)
    symmetric = math.prod(len({v for v in b if tuple(-i for i in v) in b}) for b in blocks)
    has_zero = all(tuple(0 for _ in next(iter(b))) in b for b in blocks if b)
    classes = None
    if count <= limit:
        vectors = [()]  # type: List[Tuple[int, ...]]
        for block in blocks:
            vectors = [v + w for v in vectors for w in block]
        classes = frozenset(vectors)
    return BasicClassSet(count, _orbits(count, symmetric, has_zero), basis, classes)


def basic_classes(sw: Union[SWStatus, SWValue]) -> BasicClassSet:
    if isinstance(sw, SWStatus):
        if sw.kind is StatusKind.PARTIAL:
            raise PartialSW("only designated classes are known; the basic class set is undetermined")
        if sw.kind is StatusKind.UNKNOWN or sw.value is None:
            raise UnknownSW(sw.reason or "SW unknown")
        sw = sw.value
    if isinstance(sw, SWExpr):
        sw = FactoredSW.of(sw)
    if sw.is_zero:
        return BasicClassSet(0, 0, (), frozenset())
    blocks = [frozenset(f.terms) for f in sw.factors]
    basis = tuple(cls.name for f in sw.factors for cls in f.basis)
    return _product_set(blocks, basis)


def w_basic_classes(
    m: int, k_prime: int, n: int, with_h7: bool = False, composite_class: str = "K_X",
) -> BasicClassSet:
    """
    Formal basic classes of W = X ♯_f ⋯ ♯_f X ♯_f [H(7) ♯_f] H(8k′−1) ♯_f E(2n)
    with m copies of X:

        K_H ± K_H7 ± 2jT ± K_X ± ⋯ ± K_X + Σ_i {0, ±2f_i},   |j| ≤ n − 1,

    with one gluing torus f_i per fiber sum. The set returned is closed under
    negation.
    """
    if m < 0 or k_prime < 1 or n < 1:
        raise ValueError(f"need m >= 0, k' >= 1, n >= 1, got m={m}, k'={k_prime}, n={n}")
    sums = m + 1 + int(with_h7)
    basis = [f"K_H({8 * k_prime - 1})"]
    coordinates = [frozenset({(1,)})]
    if with_h7:
        basis.append("K_H7")
        coordinates.append(frozenset({(1,), (-1,)}))
    basis.append("T")
    coordinates.append(frozenset((2 * j,) for j in range(-(n - 1), n)))
    for i in range(1, m + 1):
        basis.append(f"{composite_class}{i}")
        coordinates.append(frozenset({(1,), (-1,)}))
    for i in range(1, sums + 1):
        basis.append(f"f{i}")
        coordinates.append(frozenset({(0,), (2,), (-2,)}))
    half = _product_set(coordinates, tuple(basis), limit=0)
    # K_H appears with coefficient +1 only, so the set and its negative are disjoint
    classes = None
    if 2 * half.count <= MATERIALIZE_LIMIT:
        positive = _product_set(coordinates, tuple(basis)).classes or frozenset()
        classes = positive | frozenset(tuple(-i for i in v) for v in positive)
    return BasicClassSet(2 * half.count, half.count, tuple(basis), classes)


class Admissibility(enum.Enum):
    ADMISSIBLE = "admissible"
    NOT_ADMISSIBLE = "not_admissible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AdmissibilityVerdict:
    status: Admissibility
    reasons: Tuple[str, ...] = ()

    def __str__(self):
        text = {
            Admissibility.ADMISSIBLE: "complex-admissible",
            Admissibility.NOT_ADMISSIBLE: "not complex-admissible",
            Admissibility.UNKNOWN: "complex-admissibility unknown",
        }[self.status]
        if self.reasons:
            text += " (" + "; ".join(self.reasons) + ")"
        return text


PROXIES = ("provenance", "multiset")


def is_complex_admissible(report, proxy: str = "provenance") -> AdmissibilityVerdict:
    """
    Decide whether the SW invariant of an evaluated construction is compatible
    with a complex structure.

    c > 0: a minimal complex surface of general type has exactly one basic class
    up to sign. c = 0: compare with the elliptic surface E(χ) through a proxy;
    ``multiset`` compares absolute coefficient multisets, ``provenance`` also
    requires every class in the support to be an elliptic fiber class.
    """
    if proxy not in PROXIES:
        raise ValueError(f"unknown proxy {proxy!r}; choose one of {', '.join(PROXIES)}")
    numbers: CharNumbers = report.numbers
    try:
        classes = basic_classes(report.sw)
    except PartialSW:
        return AdmissibilityVerdict(
            Admissibility.UNKNOWN, ("partial SW: only designated classes are known",))
    except UnknownSW as e:
        return AdmissibilityVerdict(Admissibility.UNKNOWN, (f"SW unknown: {e}",))
    if classes.count == 0:
        return AdmissibilityVerdict(Admissibility.UNKNOWN, ("SW vanishes",))
    if numbers.c > 0:
        if classes.count_up_to_sign > 1:
            return AdmissibilityVerdict(Admissibility.NOT_ADMISSIBLE, (
                f"{classes.count_up_to_sign} basic classes up to sign; a minimal surface "
                "of general type has exactly one",))
        return AdmissibilityVerdict(
            Admissibility.ADMISSIBLE, ("one basic class up to sign, as for general type",))
    if numbers.c == 0 and numbers.chi >= 2:
        fiber = CohomologyClass.make("T", ClassKind.FIBER)
        reference = elliptic_sw(fiber, numbers.chi - 2).coefficient_multiset()
        value: FactoredSW = report.sw.value
        same = value.coefficient_multiset() == reference
        if proxy == "provenance":
            kinds = {cls.kind for f in value.factors for cls in f.basis}
            same = same and kinds <= {ClassKind.FIBER}
        if same:
            return AdmissibilityVerdict(Admissibility.ADMISSIBLE, (
                f"c=0 elliptic comparison: matches E({numbers.chi}) per {proxy} proxy",))
        return AdmissibilityVerdict(Admissibility.NOT_ADMISSIBLE, (
            f"c=0 elliptic comparison: differs from E({numbers.chi}) basic-class structure "
            f"per {proxy} proxy",))
    return AdmissibilityVerdict(
        Admissibility.UNKNOWN, (f"no complex comparison available for c = {numbers.c}",))
