"""
Catalog of primitive spin symplectic building blocks: the elliptic surfaces
E(n), the Horikawa surfaces H(4k−1), the manifolds Z(g), the surfaces Y(x)
of general type, X(2n) = E(2) ♯_f E(2n−2), the blown-up Brieskorn pieces Xp(g),
and synthetic blocks loaded from catalog files.

Each block records its characteristic numbers, spin and simple-connectivity
flags, the embedded square-zero surfaces available for fiber sums, and what
is known about its Seiberg–Witten invariant.
"""
import enum
import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Tuple, Union

import pydantic

from .invariants import CharNumbers, InvariantError, LatticePoint, is_allowed
from .json import OneLine, dumps
from .swring import ClassKind, CohomologyClass, SWExpr, SWKind, elliptic_sw, gluing_factor
from .utils import open_text

logger = logging.getLogger(__name__)


class CatalogError(ValueError):
    pass


class BadParams(CatalogError):
    pass


class UnknownBlock(CatalogError):
    pass


class ParseError(CatalogError):
    pass


class ValidationError(CatalogError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class Family(enum.Enum):
    E = "E"
    H = "H"
    Z = "Z"
    Y = "Y"
    X2N = "X2n"
    XP = "Xp"
    SYNTHETIC = "synthetic"


class SlotKind(enum.Enum):
    TORUS_IN_CUSP = "torus_in_cusp"
    SYMPLECTIC = "symplectic"


@dataclass(frozen=True)
class SurfaceSlot:
    """
    An embedded surface of self-intersection 0 offered for fiber sums or knot
    surgery.
    """
    id: str
    genus: int
    kind: SlotKind
    dual_sphere: bool
    host: str = ""
    self_intersection: int = 0
    class_label: str = "f"
    class_kind: ClassKind = ClassKind.SURFACE
    # ⟨designated class, [Σ]⟩
    pairing: Optional[int] = None
    # disjointness from the other slots is assumed, not established
    assumed_disjoint: bool = False
    # "leafN:id" or "sumN:id" once the slot belongs to an evaluated construction
    origin: str = ""
    homology: Optional[CohomologyClass] = None

    def as_json(self):
        result = {
            "id": self.id,
            "genus": self.genus,
            "self_intersection": self.self_intersection,
            "kind": self.kind.value,
            "dual_sphere": self.dual_sphere,
            "host": self.host,
            "class_label": self.class_label,
            "pairing": self.pairing,
            "assumed_disjoint": self.assumed_disjoint,
        }
        if self.origin:
            result["origin"] = self.origin
        return result


# Parameter names and their minimum values, in display order
PARAMS: Dict[Family, Tuple[Tuple[str, int], ...]] = {
    Family.E: (("n", 1),),
    Family.H: (("k", 1),),
    Family.Z: (("g", 1),),
    Family.Y: (("x", 1), ("g", 2)),
    Family.X2N: (("n", 2),),
    Family.XP: (("g", 2),),
}


@dataclass(frozen=True)
class BlockSpec:
    family: Family
    params: Tuple[Tuple[str, int], ...]
    numbers: CharNumbers
    spin: bool
    simply_connected: bool
    surfaces: Tuple[SurfaceSlot, ...]
    sw_kind: SWKind
    symplectic: bool = True
    sw_explicit: Optional[SWExpr] = None
    designated: Tuple[str, ...] = ()
    # invariants are model values adopted as exact
    approximate: bool = False
    note: str = ""

    @property
    def name(self) -> str:
        return f"{self.family.value}({','.join(f'{k}={v}' for k, v in self.params)})"

    def __str__(self):
        return self.name

    @property
    def point(self) -> LatticePoint:
        return self.numbers.point

    def param(self, name: str) -> int:
        return dict(self.params)[name]

    def slot(self, slot_id: str) -> Optional[SurfaceSlot]:
        for slot in self.surfaces:
            if slot.id == slot_id:
                return slot
        return None


def _check_params(family: Family, params: Mapping[str, int]) -> Tuple[Tuple[str, int], ...]:
    if family is Family.SYNTHETIC:
        return tuple(sorted(params.items()))
    expected = PARAMS[family]
    names = [name for name, _ in expected]
    if sorted(params) != sorted(names):
        raise BadParams(
            f"{family.value} takes parameters ({', '.join(names)}), got ({', '.join(params)})")
    result = []
    for name, minimum in expected:
        value = params[name]
        if not isinstance(value, int) or isinstance(value, bool):
            raise BadParams(f"{family.value}: parameter {name} must be an integer, got {value!r}")
        if value < minimum:
            raise BadParams(f"{family.value}: parameter {name} must be >= {minimum}, got {value}")
        result.append((name, value))
    return tuple(result)


def _family(family: Union[str, Family]) -> Family:
    if isinstance(family, Family):
        return family
    try:
        return Family(family)
    except ValueError:
        raise UnknownBlock(
            f"unknown block family '{family}'; known families are "
            + ", ".join(f.value for f in Family)) from None


def block_invariants(family: Union[str, Family], params: Mapping[str, int]) -> CharNumbers:
    """
    >>> block_invariants("H", {"k": 2}).point
    LatticePoint(chi=7, c=8)
    """
    family = _family(family)
    values = dict(_check_params(family, params))
    if family is Family.E:
        chi, c = values["n"], 0
    elif family is Family.H:
        k = values["k"]
        chi, c = 4 * k - 1, 8 * k - 8
    elif family is Family.Z:
        g = values["g"]
        chi, c = 2 * g * g - g + 1, 8 * (g - 1) ** 2
    elif family is Family.Y:
        x = values["x"]
        chi, c = 6857 * x * x, 60068 * x * x
    elif family is Family.X2N:
        chi, c = 2 * values["n"], 0
    elif family is Family.XP:
        g = values["g"]
        chi, c = g * g - g + 1, 4 * (g - 1) * (g - 2)
    else:
        raise BadParams("synthetic blocks carry their invariants in the catalog file")
    return CharNumbers.from_point(LatticePoint(chi, c))


def block_spin(family: Union[str, Family], params: Mapping[str, int]) -> bool:
    family = _family(family)
    values = dict(_check_params(family, params))
    if family is Family.E:
        return values["n"] % 2 == 0
    if family is Family.H:
        return values["k"] % 2 == 0
    if family in (Family.Z, Family.Y, Family.X2N):
        return True
    if family is Family.XP:
        return False
    raise BadParams("synthetic blocks carry their spin flag in the catalog file")


def _cusp_available(p: int, q: int, r: int) -> bool:
    # B(p, q, r) contains a cusp neighborhood when p >= 2, q >= 3, r >= 7
    return p >= 2 and q >= 3 and r >= 7


def block_surfaces(family: Union[str, Family], params: Mapping[str, int]) -> Tuple[SurfaceSlot, ...]:
    family = _family(family)
    values = dict(_check_params(family, params))
    if family is Family.E:
        n = values["n"]
        return (
            SurfaceSlot(
                "f", 1, SlotKind.TORUS_IN_CUSP, True, host=f"cusp neighborhood in B(2,3,{6 * n - 1})",
                class_label="T", class_kind=ClassKind.FIBER, pairing=0),
            SurfaceSlot(
                "T", 1, SlotKind.SYMPLECTIC, True, host=f"regular fiber in the nucleus N({n})",
                class_label="T", class_kind=ClassKind.FIBER, pairing=0),
        )
    if family is Family.H:
        k = values["k"]
        return (
            SurfaceSlot(
                "f", 1, SlotKind.TORUS_IN_CUSP, True, host=f"cusp neighborhood in B(2,5,{10 * k - 1})",
                class_label="f", pairing=0),
            SurfaceSlot(
                "T", 2, SlotKind.SYMPLECTIC, True,
                host=f"genus-2 fiber; section of self-intersection -{k} as dual sphere",
                class_label="T", pairing=2, assumed_disjoint=True),
        )
    if family is Family.Z:
        g = values["g"]
        slots = []
        if _cusp_available(2, 2 * g + 1, 4 * g + 1):
            slots.append(SurfaceSlot(
                "f", 1, SlotKind.TORUS_IN_CUSP, True,
                host=f"cusp neighborhood in B(2,{2 * g + 1},{4 * g + 1})", class_label="f", pairing=0))
        slots.append(SurfaceSlot(
            "Σ", g, SlotKind.SYMPLECTIC, False, host="symplectic surface disjoint from the cusp",
            class_label="Σ", pairing=2 * g - 2))
        return tuple(slots)
    if family is Family.Y:
        g = values["g"]
        return (
            SurfaceSlot(
                "Σ_g", g, SlotKind.SYMPLECTIC, True, host="holomorphic curve with a dual 2-sphere",
                class_label="Σ", pairing=2 * g - 2),
        )
    if family is Family.X2N:
        n = values["n"]
        return (
            SurfaceSlot(
                "f", 1, SlotKind.TORUS_IN_CUSP, True, host="glued cusp torus of E(2) ♯_f E(2n-2)",
                class_label="f", class_kind=ClassKind.GLUING, pairing=0),
            SurfaceSlot(
                "T", 1, SlotKind.SYMPLECTIC, True, host=f"regular fiber of E({2 * n - 2})",
                class_label="T", class_kind=ClassKind.FIBER, pairing=0),
        )
    if family is Family.XP:
        g = values["g"]
        return (
            SurfaceSlot(
                "Σ", g, SlotKind.SYMPLECTIC, False, host="proper transform T - e of a genus-g fiber",
                class_label="Σ", pairing=2 * g - 2),
        )
    raise BadParams("synthetic blocks carry their surfaces in the catalog file")


def _x2n_sw(n: int) -> SWExpr:
    fiber = CohomologyClass.make("T", ClassKind.FIBER)
    torus = CohomologyClass.make("f", ClassKind.GLUING)
    return elliptic_sw(fiber, 2 * n - 4) * gluing_factor(torus)


def make_block(family: Union[str, Family], params: Mapping[str, int]) -> BlockSpec:
    """Build a catalog block of one of the parametrised families"""
    family = _family(family)
    if family is Family.SYNTHETIC:
        raise UnknownBlock("synthetic blocks must be defined in a catalog file")
    checked = _check_params(family, params)
    values = dict(checked)
    sw_kind = {
        Family.E: SWKind.ELLIPTIC,
        Family.H: SWKind.MINIMAL_GENERAL_TYPE,
        Family.Y: SWKind.MINIMAL_GENERAL_TYPE,
        Family.Z: SWKind.PARTIAL,
        Family.X2N: SWKind.EXPLICIT,
        Family.XP: SWKind.BLOWUP_GENERAL_TYPE,
    }[family]
    designated: Tuple[str, ...] = ()
    note = ""
    if family is Family.Z:
        designated = ("K",)
        note = "only K is known to be a basic class (genus > 1 fiber sum of two Xp pieces)"
    elif family is Family.Y:
        note = "invariants (6857x², 60068x²) are model values adopted as exact"
    block = BlockSpec(
        family=family,
        params=checked,
        numbers=block_invariants(family, values),
        spin=block_spin(family, values),
        simply_connected=True,
        surfaces=block_surfaces(family, values),
        sw_kind=sw_kind,
        sw_explicit=_x2n_sw(values["n"]) if family is Family.X2N else None,
        designated=designated,
        approximate=family is Family.Y,
        note=note,
    )
    validate_block(block)
    return block


def validate_block(block: BlockSpec, path: str = "block") -> None:
    if block.spin and not is_allowed(block.point):
        message = f"{block.name} is flagged spin but {block.point} violates " + ", ".join(
            is_allowed(block.point).messages())
        if not block.approximate:
            raise ValidationError(f"{path}.spin", message)
        logger.warning("%s (approximate model values)", message)
    ids = [slot.id for slot in block.surfaces]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"{path}.surfaces", f"duplicate slot ids {ids}")
    for i, slot in enumerate(block.surfaces):
        if slot.self_intersection != 0:
            raise ValidationError(f"{path}.surfaces[{i}].self_intersection",
                "only square-zero surfaces can be used for fiber sums")
        if slot.genus < 1:
            raise ValidationError(f"{path}.surfaces[{i}].genus", "genus must be at least 1")
        if slot.kind is SlotKind.TORUS_IN_CUSP and slot.genus != 1:
            raise ValidationError(f"{path}.surfaces[{i}].kind", "a torus in a cusp has genus 1")


class SurfaceModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    id: str
    genus: int
    self_intersection: int = 0
    kind: SlotKind
    dual_sphere: bool
    host: str = ""
    class_label: Optional[str] = None
    pairing: Optional[int] = None
    assumed_disjoint: bool = False


class TermModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    exp: List[int]
    coef: int


class SWModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    kind: SWKind
    basis: List[str] = []
    terms: List[TermModel] = []
    designated: List[str] = []


class BlockModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    family: Family
    params: Dict[str, int]
    chi: Optional[int] = None
    c: Optional[int] = None
    spin: Optional[bool] = None
    simply_connected: Optional[bool] = None
    symplectic: Optional[bool] = None
    surfaces: Optional[List[SurfaceModel]] = None
    sw: Optional[SWModel] = None
    note: str = ""


class CatalogModel(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    version: Literal[1] = 1
    blocks: List[BlockModel]


def format_location(loc: Iterable[Union[str, int]]) -> str:
    """
    >>> format_location(("blocks", 2, "spin"))
    'blocks[2].spin'
    """
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += ("." if path else "") + str(part)
    return path


def parse_error(error: pydantic.ValidationError, source: str) -> ParseError:
    details = "; ".join(
        f"{format_location(e['loc']) or '<document>'}: {e['msg']}" for e in error.errors())
    return ParseError(f"cannot parse {source}: {details}")


def class_kind_for(label: str) -> ClassKind:
    if label.startswith("K"):
        return ClassKind.CANONICAL
    if label == "T":
        return ClassKind.FIBER
    if label == "f":
        return ClassKind.GLUING
    if label == "e":
        return ClassKind.EXCEPTIONAL
    return ClassKind.SURFACE


def _slot_from_model(model: SurfaceModel) -> SurfaceSlot:
    label = model.class_label or model.id
    return SurfaceSlot(
        id=model.id, genus=model.genus, kind=model.kind, dual_sphere=model.dual_sphere,
        host=model.host, self_intersection=model.self_intersection, class_label=label,
        class_kind=class_kind_for(label), pairing=model.pairing,
        assumed_disjoint=model.assumed_disjoint)


def _slot_signature(slot: SurfaceSlot):
    return (slot.id, slot.genus, slot.kind, slot.dual_sphere)


def _explicit_sw(model: SWModel, path: str) -> SWExpr:
    basis = tuple(CohomologyClass.make(label, class_kind_for(label)) for label in model.basis)
    terms: Dict[Tuple[int, ...], int] = {}
    for i, term in enumerate(model.terms):
        if len(term.exp) != len(basis):
            raise ValidationError(f"{path}.terms[{i}].exp",
                f"exponent vector has {len(term.exp)} entries, basis has {len(basis)}")
        terms[tuple(term.exp)] = terms.get(tuple(term.exp), 0) + term.coef
    return SWExpr(basis, terms)


def block_from_model(model: BlockModel, path: str = "block") -> BlockSpec:
    if model.family is not Family.SYNTHETIC:
        try:
            block = make_block(model.family, model.params)
        except BadParams as e:
            raise ValidationError(f"{path}.params", str(e)) from None
        for field, expected in [
            ("chi", block.numbers.chi), ("c", block.numbers.c), ("spin", block.spin),
            ("simply_connected", block.simply_connected), ("symplectic", block.symplectic),
        ]:
            given = getattr(model, field)
            if given is not None and given != expected:
                raise ValidationError(f"{path}.{field}",
                    f"{block.name} has {field} = {expected}, the catalog entry says {given}")
        if model.surfaces is not None:
            given_slots = [_slot_signature(_slot_from_model(s)) for s in model.surfaces]
            if given_slots != [_slot_signature(s) for s in block.surfaces]:
                raise ValidationError(f"{path}.surfaces",
                    f"surfaces of {block.name} differ from the family definition")
        if model.sw is not None and model.sw.kind is not block.sw_kind:
            raise ValidationError(f"{path}.sw.kind",
                f"{block.name} has SW kind {block.sw_kind.value}, not {model.sw.kind.value}")
        return replace(block, note=model.note or block.note)

    for field in ("chi", "c", "spin", "simply_connected", "surfaces", "sw"):
        if getattr(model, field) is None:
            raise ValidationError(f"{path}.{field}", "required for synthetic blocks")
    assert model.chi is not None and model.c is not None and model.sw is not None
    assert model.surfaces is not None and model.spin is not None
    assert model.simply_connected is not None
    try:
        numbers = CharNumbers.from_point(LatticePoint(model.chi, model.c))
    except InvariantError as e:
        raise ValidationError(f"{path}.chi", str(e)) from None
    explicit = None
    if model.sw.kind is SWKind.EXPLICIT:
        explicit = _explicit_sw(model.sw, f"{path}.sw")
    block = BlockSpec(
        family=Family.SYNTHETIC,
        params=_check_params(Family.SYNTHETIC, model.params),
        numbers=numbers,
        spin=model.spin,
        simply_connected=model.simply_connected,
        surfaces=tuple(_slot_from_model(s) for s in model.surfaces),
        sw_kind=model.sw.kind,
        symplectic=True if model.symplectic is None else model.symplectic,
        sw_explicit=explicit,
        designated=tuple(model.sw.designated),
        note=model.note,
    )
    validate_block(block, path)
    return block


def block_to_json(block: BlockSpec):
    sw: Dict[str, object] = {"kind": block.sw_kind.value}
    if block.family is Family.SYNTHETIC and block.sw_explicit is not None:
        expr = block.sw_explicit
        sw["basis"] = OneLine([cls.label for cls in expr.basis])
        sw["terms"] = [
            OneLine({"exp": list(k), "coef": v}) for k, v in sorted(expr.terms.items(), reverse=True)]
    if block.family is Family.SYNTHETIC and block.designated:
        sw["designated"] = OneLine(list(block.designated))
    result = {
        "family": block.family.value,
        "params": OneLine(dict(block.params)),
        "chi": block.numbers.chi,
        "c": block.numbers.c,
        "spin": block.spin,
        "simply_connected": block.simply_connected,
        "symplectic": block.symplectic,
        "surfaces": [slot.as_json() for slot in block.surfaces],
        "sw": sw,
    }
    if block.note:
        result["note"] = block.note
    return result


class Catalog:
    """
    A set of blocks addressed by family and parameters. Blocks of the
    parametrised families are built on demand; synthetic blocks must have been
    added, usually by loading a catalog file.
    """

    def __init__(self, blocks: Iterable[BlockSpec] = ()):
        self._blocks: Dict[Tuple[Family, Tuple[Tuple[str, int], ...]], BlockSpec] = {}
        for block in blocks:
            self.add(block)

    def __repr__(self):
        return f"Catalog({len(self)} blocks)"

    def __iter__(self) -> Iterator[BlockSpec]:
        return iter(self._blocks.values())

    def __len__(self):
        return len(self._blocks)

    def add(self, block: BlockSpec) -> None:
        self._blocks[(block.family, tuple(sorted(block.params)))] = block

    def resolve(self, family: Union[str, Family], params: Mapping[str, int]) -> BlockSpec:
        family = _family(family)
        key = (family, tuple(sorted(params.items())))
        if key in self._blocks:
            return self._blocks[key]
        if family is Family.SYNTHETIC:
            description = ",".join(f"{k}={v}" for k, v in sorted(params.items()))
            raise UnknownBlock(f"synthetic({description}) is not in the catalog")
        try:
            return make_block(family, params)
        except BadParams as e:
            raise UnknownBlock(str(e)) from None

    def block(self, family: Union[str, Family], **params: int) -> BlockSpec:
        return self.resolve(family, params)

    @classmethod
    def default(cls) -> "Catalog":
        """Representative members of every family"""
        entries = [
            (Family.E, {"n": 2}), (Family.E, {"n": 3}), (Family.E, {"n": 4}),
            (Family.H, {"k": 1}), (Family.H, {"k": 2}),
            (Family.Z, {"g": 2}), (Family.Z, {"g": 3}),
            (Family.Y, {"x": 2, "g": 3}),
            (Family.X2N, {"n": 2}), (Family.X2N, {"n": 3}),
            (Family.XP, {"g": 2}),
        ]
        return cls(make_block(family, params) for family, params in entries)

    @classmethod
    def from_json(cls, text: str, source: str = "catalog") -> "Catalog":
        try:
            model = CatalogModel.model_validate_json(text)
        except pydantic.ValidationError as e:
            raise parse_error(e, source) from None
        blocks = [block_from_model(b, f"blocks[{i}]") for i, b in enumerate(model.blocks)]
        logger.debug("Loaded %d blocks from %s", len(blocks), source)
        return cls(blocks)

    @classmethod
    def load(cls, path) -> "Catalog":
        with open_text(path) as f:
            return cls.from_json(f.read(), str(path))

    def as_json(self):
        return {
            "version": 1,
            "blocks": [block_to_json(block) for block in self],
        }

    def save(self, path) -> None:
        with open_text(path, "w") as f:
            print(dumps(self.as_json()), file=f)

    def merged(self, other: "Catalog") -> "Catalog":
        result = Catalog(self)
        for block in other:
            result.add(block)
        return result
