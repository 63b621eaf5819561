"""
Construction expressions (catalog blocks combined by fiber sums and knot
surgery) and their evaluation into characteristic numbers, spin and
simple-connectivity flags, available surfaces and Seiberg–Witten data.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

from .catalog import BlockSpec, SlotKind, SurfaceSlot
from .invariants import CharNumbers, LatticePoint, homeo_type
from .json import OneLine
from .swring import (
    ClassKind, CohomologyClass, PairingMismatch, SWStatus, StatusKind, TorusKnot, UnknownSW,
    propagate_designated_class, sw_fiber_sum_torus, sw_knot_surgery, sw_of_block,
)

logger = logging.getLogger(__name__)


class ConstructionError(ValueError):
    pass


class MissingSlot(ConstructionError):
    pass


class SlotMismatch(ConstructionError):
    pass


class NonTorusSlot(ConstructionError):
    pass


@dataclass(frozen=True)
class Leaf:
    block: BlockSpec


@dataclass(frozen=True)
class FiberSum:
    left: "Construction"
    right: "Construction"
    left_slot: str
    right_slot: str


@dataclass(frozen=True)
class KnotSurgery:
    base: "Construction"
    torus_slot: str
    knot: TorusKnot


Construction = Union[Leaf, FiberSum, KnotSurgery]


def serialize(expr: Construction) -> str:
    """
    Text form accepted by the parser, e.g. ``fsum(f,f; H(k=2), E(n=2))``
    """
    if isinstance(expr, Leaf):
        return expr.block.name
    if isinstance(expr, FiberSum):
        return (f"fsum({expr.left_slot},{expr.right_slot}; "
            f"{serialize(expr.left)}, {serialize(expr.right)})")
    if isinstance(expr, KnotSurgery):
        return f"surgery({expr.torus_slot},({expr.knot.p},{expr.knot.q}); {serialize(expr.base)})"
    raise TypeError(f"not a construction: {expr!r}")


def expr_to_json(expr: Construction):
    if isinstance(expr, Leaf):
        return {
            "op": "block",
            "family": expr.block.family.value,
            "params": OneLine(dict(expr.block.params)),
        }
    if isinstance(expr, FiberSum):
        return {
            "op": "fsum",
            "slots": OneLine([expr.left_slot, expr.right_slot]),
            "left": expr_to_json(expr.left),
            "right": expr_to_json(expr.right),
        }
    if isinstance(expr, KnotSurgery):
        return {
            "op": "surgery",
            "slot": expr.torus_slot,
            "knot": OneLine([expr.knot.p, expr.knot.q]),
            "base": expr_to_json(expr.base),
        }
    raise TypeError(f"not a construction: {expr!r}")


def leaves(expr: Construction) -> List[BlockSpec]:
    """Blocks in evaluation order"""
    if isinstance(expr, Leaf):
        return [expr.block]
    if isinstance(expr, FiberSum):
        return leaves(expr.left) + leaves(expr.right)
    return leaves(expr.base)


def iterate_fiber_sum(
    base: Construction,
    copies: int,
    slot: str,
    tail: Optional[Construction] = None,
    tail_slot: Optional[str] = None,
) -> Construction:
    """
    base ♯ base ♯ ⋯ ♯ base (``copies`` times) ♯ tail, associated to the left.
    Every sum consumes the surface regenerated by the previous one.
    """
    if copies < 1:
        raise ValueError("at least one copy is needed")
    result = base
    for _ in range(copies - 1):
        result = FiberSum(result, base, slot, slot)
    if tail is not None:
        result = FiberSum(result, tail, slot, tail_slot or slot)
    return result


@dataclass(frozen=True)
class EvalReport:
    numbers: CharNumbers
    spin: bool
    simply_connected: bool
    symplectic: bool
    slots: Tuple[SurfaceSlot, ...]
    sw: SWStatus
    provenance: Tuple[str, ...] = ()
    formal_only: bool = False
    # (tag, block name) per leaf, in evaluation order
    leaves: Tuple[Tuple[str, str], ...] = field(default=())

    @property
    def point(self) -> LatticePoint:
        return self.numbers.point

    def slot(self, slot_id: str) -> Optional[SurfaceSlot]:
        for slot in self.slots:
            if slot.id == slot_id:
                return slot
        return None

    def topology(self):
        """Everything except SW data and provenance"""
        return (self.numbers, self.spin, self.simply_connected, self.symplectic)

    def as_json(self):
        result = {
            "invariants": OneLine(self.numbers.as_dict()),
            "spin": self.spin,
            "simply_connected": self.simply_connected,
            "symplectic": self.symplectic,
            "slots": [OneLine(slot.as_json()) for slot in self.slots],
            "sw": self.sw.as_json(),
            "formal_only": self.formal_only,
            "provenance": list(self.provenance),
        }
        try:
            result["homeo_type"] = OneLine(homeo_type(self.point, self.spin).as_dict())
        except ValueError:
            pass
        return result


def _find_slot(report: EvalReport, slot_id: str, side: str) -> SurfaceSlot:
    slot = report.slot(slot_id)
    if slot is None:
        available = ", ".join(s.id for s in report.slots) or "none"
        raise MissingSlot(f"no slot '{slot_id}' on the {side}; available: {available}")
    return slot


def combine_slots(
    left: Sequence[SurfaceSlot],
    right: Sequence[SurfaceSlot],
    left_slot: SurfaceSlot,
    right_slot: SurfaceSlot,
    tag: str,
    path: str,
) -> Tuple[SurfaceSlot, ...]:
    """
    Slots after a fiber sum: the summed surface comes first under the left
    slot's id, then unconsumed slots of the left and the right operand.
    Clashing ids are renamed id_2, id_3, ...
    """
    genus = left_slot.genus
    label, kind = ("f", ClassKind.GLUING) if genus == 1 else ("Σ", ClassKind.SURFACE)
    regenerated = SurfaceSlot(
        id=left_slot.id,
        genus=genus,
        kind=left_slot.kind if left_slot.kind is right_slot.kind else SlotKind.SYMPLECTIC,
        # the two punctured dual spheres glue to a sphere
        dual_sphere=left_slot.dual_sphere and right_slot.dual_sphere,
        host=f"surface of the fiber sum {tag}",
        class_label=label,
        class_kind=kind,
        pairing=left_slot.pairing if left_slot.pairing == right_slot.pairing else None,
        assumed_disjoint=left_slot.assumed_disjoint or right_slot.assumed_disjoint,
        origin=f"{tag}:{left_slot.id}",
        homology=CohomologyClass.make(label, kind, tag, path),
    )
    result = [regenerated]
    taken = {regenerated.id}
    carried = [s for s in left if s.id != left_slot.id] + [s for s in right if s.id != right_slot.id]
    for slot in carried:
        new_id = slot.id
        k = 2
        while new_id in taken:
            new_id = f"{slot.id}_{k}"
            k += 1
        taken.add(new_id)
        result.append(replace(slot, id=new_id))
    return tuple(result)


class Evaluator:
    """
    Evaluates construction expressions bottom-up. Leaves are tagged leaf1,
    leaf2, ... and fiber sums sum1, sum2, ... in evaluation order; class names
    inside SW expressions carry these tags.
    """

    def __init__(self, with_sw: bool = True, check_genus: bool = True):
        self.with_sw = with_sw
        self.check_genus = check_genus
        self._leaves = 0
        self._sums = 0

    def evaluate(self, expr: Construction, path: str = "root") -> EvalReport:
        if isinstance(expr, Leaf):
            return self._leaf(expr.block, path)
        if isinstance(expr, FiberSum):
            return self._fiber_sum(expr, path)
        if isinstance(expr, KnotSurgery):
            return self._knot_surgery(expr, path)
        raise TypeError(f"not a construction: {expr!r}")

    def _leaf(self, block: BlockSpec, path: str) -> EvalReport:
        self._leaves += 1
        tag = f"leaf{self._leaves}"
        slots = tuple(
            replace(
                slot,
                origin=f"{tag}:{slot.id}",
                homology=CohomologyClass.make(slot.class_label, slot.class_kind, tag, path),
            )
            for slot in block.surfaces
        )
        if self.with_sw:
            try:
                sw = sw_of_block(block, tag, path)
            except UnknownSW as e:
                sw = SWStatus.unknown(str(e))
        else:
            sw = SWStatus.unknown("not computed")
        provenance = [f"{tag} = {block.name}: catalog block"]
        if block.note:
            provenance.append(f"{tag}: {block.note}")
        return EvalReport(
            numbers=block.numbers,
            spin=block.spin,
            simply_connected=block.simply_connected,
            symplectic=block.symplectic,
            slots=slots,
            sw=sw,
            provenance=tuple(provenance),
            leaves=((tag, block.name),),
        )

    def _fiber_sum(self, expr: FiberSum, path: str) -> EvalReport:
        left = self.evaluate(expr.left, path + ".L")
        right = self.evaluate(expr.right, path + ".R")
        left_slot = _find_slot(left, expr.left_slot, "left operand")
        right_slot = _find_slot(right, expr.right_slot, "right operand")
        if self.check_genus and left_slot.genus != right_slot.genus:
            raise SlotMismatch(
                f"cannot sum along {left_slot.id} (genus {left_slot.genus}) and "
                f"{right_slot.id} (genus {right_slot.genus})")
        self._sums += 1
        tag = f"sum{self._sums}"
        genus = left_slot.genus
        numbers = CharNumbers.from_euler_signature(
            left.numbers.e + right.numbers.e + 4 * (genus - 1),
            left.numbers.sigma + right.numbers.sigma,
        )
        spin = left.spin and right.spin
        disk = left_slot.dual_sphere or right_slot.dual_sphere
        simply_connected = left.simply_connected and right.simply_connected and disk
        formal_only = left.numbers.b2plus <= 1 or right.numbers.b2plus <= 1
        provenance = list(left.provenance) + list(right.provenance)
        provenance.append(
            f"{tag}: fiber sum along {left_slot.id} and {right_slot.id} (genus {genus}): "
            f"e adds 4(g-1) = {4 * (genus - 1)}, σ adds 0, χ adds {genus - 1}, c adds {8 * (genus - 1)}")
        if spin:
            provenance.append(f"{tag}: spin, since both operands are spin")
        if simply_connected:
            provenance.append(
                f"{tag}: simply connected, since the meridian of the summed surface bounds a disk "
                "cut from a dual sphere")
        elif not disk:
            provenance.append(f"{tag}: simple connectivity not established: no dual sphere on either side")
        for slot in (left_slot, right_slot):
            if slot.assumed_disjoint:
                provenance.append(f"{tag}: disjointness of {slot.origin} from the other surfaces is assumed")
        if formal_only:
            logger.warning(
                "%s: an operand has b2+ <= 1; the SW gluing formula is applied formally", tag)
            provenance.append(f"{tag}: formal only, an operand has b2+ <= 1")
        if self.with_sw:
            sw = self._fiber_sum_sw(left, right, left_slot, right_slot, tag, path, formal_only)
            provenance.append(f"{tag}: SW {sw.kind.value}" + (f" ({sw.reason})" if sw.reason else ""))
        else:
            sw = SWStatus.unknown("not computed")
        return EvalReport(
            numbers=numbers,
            spin=spin,
            simply_connected=simply_connected,
            symplectic=left.symplectic and right.symplectic,
            slots=combine_slots(left.slots, right.slots, left_slot, right_slot, tag, path),
            sw=sw,
            provenance=tuple(provenance),
            formal_only=formal_only or left.formal_only or right.formal_only,
            leaves=left.leaves + right.leaves,
        )

    @staticmethod
    def _fiber_sum_sw(
        left: EvalReport, right: EvalReport, left_slot: SurfaceSlot, right_slot: SurfaceSlot,
        tag: str, path: str, formal_only: bool,
    ) -> SWStatus:
        kinds = (left.sw.kind, right.sw.kind)
        if StatusKind.UNKNOWN in kinds:
            return SWStatus.unknown("SW of an operand is unknown")
        genus = left_slot.genus
        if genus == 1:
            if left_slot.kind is not SlotKind.TORUS_IN_CUSP or right_slot.kind is not SlotKind.TORUS_IN_CUSP:
                return SWStatus.unknown("the product formula needs tori in cusp neighborhoods")
            if kinds == (StatusKind.EXACT, StatusKind.EXACT):
                assert left.sw.value is not None and right.sw.value is not None
                torus = CohomologyClass.make("f", ClassKind.GLUING, tag, path)
                value = sw_fiber_sum_torus(left.sw.value, right.sw.value, torus)
                return SWStatus.exact(
                    value, left.sw.designated + right.sw.designated, formal_only=formal_only)
            return SWStatus.partial(
                left.sw.designated + right.sw.designated,
                reason="torus fiber sum with a partially known operand", formal_only=formal_only)
        if not left.sw.designated or not right.sw.designated:
            return SWStatus.unknown("an operand has no designated basic class")
        try:
            canonical = propagate_designated_class(
                left.sw.designated[0], right.sw.designated[0], genus,
                (left_slot.pairing, right_slot.pairing), tag=tag, provenance=path)
        except PairingMismatch as e:
            return SWStatus.unknown(str(e))
        carried = left.sw.designated[1:] + right.sw.designated[1:]
        return SWStatus.partial(
            (canonical,) + carried,
            reason=f"fiber sum along genus {genus}: only the sum of the designated classes is known",
            formal_only=formal_only)

    def _knot_surgery(self, expr: KnotSurgery, path: str) -> EvalReport:
        base = self.evaluate(expr.base, path + ".B")
        slot = _find_slot(base, expr.torus_slot, "surgery base")
        if slot.genus != 1:
            raise NonTorusSlot(f"knot surgery needs a torus; slot {slot.id} has genus {slot.genus}")
        formal_only = base.numbers.b2plus <= 1
        provenance = list(base.provenance)
        provenance.append(
            f"knot surgery with {expr.knot} along {slot.id}: homeomorphic to the base; "
            f"SW multiplied by the Alexander polynomial of {expr.knot} in exp(2·{slot.class_label})")
        if not slot.dual_sphere:
            provenance.append(
                f"knot surgery along {slot.id}: no dual sphere recorded, "
                f"simple connectivity of the result is carried over from the base")
        sw = base.sw
        if self.with_sw and sw.kind is StatusKind.EXACT:
            assert sw.value is not None and slot.homology is not None
            sw = SWStatus.exact(
                sw_knot_surgery(sw.value, slot.homology, expr.knot), sw.designated,
                formal_only=formal_only or sw.formal_only)
        elif sw.kind is StatusKind.PARTIAL:
            sw = SWStatus.partial(sw.designated, "knot surgery on a partially known SW", sw.formal_only)
        if formal_only:
            logger.warning("knot surgery on a base with b2+ <= 1; SW formula applied formally")
        return replace(
            base,
            symplectic=base.symplectic,
            sw=sw,
            provenance=tuple(provenance),
            formal_only=base.formal_only or formal_only,
        )


def evaluate(expr: Construction, with_sw: bool = True) -> EvalReport:
    return Evaluator(with_sw=with_sw).evaluate(expr)


def slot_table(expr: Construction) -> Tuple[SurfaceSlot, ...]:
    """Slots offered by a construction, without checking genus compatibility"""
    return Evaluator(with_sw=False, check_genus=False).evaluate(expr).slots
