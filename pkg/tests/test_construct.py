import random
from dataclasses import replace

import pytest

from geo4.construct import (
    Evaluator, FiberSum, KnotSurgery, Leaf, MissingSlot, NonTorusSlot, SlotMismatch, evaluate,
    iterate_fiber_sum, leaves, serialize, slot_table,
)
from geo4.invariants import LatticePoint
from geo4.parser import parse_construction
from geo4.swring import FactoredSW, StatusKind, TorusKnot, basic_classes, conjugation_sign


def test_leaf(catalog):
    report = evaluate(Leaf(catalog.block("E", n=4)))
    assert report.point == LatticePoint(4, 0)
    assert report.spin
    assert report.simply_connected
    assert report.leaves == (("leaf1", "E(n=4)"),)
    assert [slot.origin for slot in report.slots] == ["leaf1:f", "leaf1:T"]


def test_fiber_sum_invariants():
    report = evaluate(parse_construction("fsum(f,f; H(k=2), E(n=10))"))
    assert report.point == LatticePoint(17, 8)
    assert report.spin
    assert report.simply_connected
    assert report.symplectic
    assert any("sum1: fiber sum along f and f (genus 1)" in line for line in report.provenance)


def test_h7_plus_e2():
    report = evaluate(parse_construction("fsum(f,f; H(k=2), E(n=2))"))
    assert report.point == LatticePoint(9, 8)
    assert report.numbers.sigma == -64
    assert report.numbers.e == 100


def test_spin_needs_both_operands():
    report = evaluate(parse_construction("fsum(f,f; H(k=1), E(n=2))"))
    assert report.point == LatticePoint(5, 0)
    assert not report.spin


@pytest.mark.parametrize("n", range(2, 51))
def test_x2n_matches_its_fiber_sum(n):
    primitive = evaluate(parse_construction(f"X2n(n={n})"), with_sw=False)
    derived = evaluate(parse_construction(f"fsum(f,f; E(n=2), E(n={2 * n - 2}))"), with_sw=False)
    assert primitive.point == derived.point == LatticePoint(2 * n, 0)
    assert primitive.topology() == derived.topology()
    assert primitive.spin


def test_genus_three_sum():
    report = evaluate(parse_construction("fsum(Σ_g,Σ; Y(x=2,g=3), Z(g=3))"))
    assert report.point == LatticePoint(27446, 240320)
    assert report.numbers.sigma == 20752
    assert report.spin
    assert report.simply_connected
    assert report.sw.kind is StatusKind.PARTIAL
    assert [c.name for c in report.sw.designated] == ["K@sum1"]
    regenerated = report.slots[0]
    assert (regenerated.id, regenerated.genus, regenerated.pairing) == ("Σ_g", 3, 4)


def test_slots_after_sum():
    report = evaluate(parse_construction("fsum(f,f; E(n=2), E(n=2))"))
    assert [slot.id for slot in report.slots] == ["f", "T", "T_2"]
    assert report.slots[0].origin == "sum1:f"
    assert [slot.origin for slot in report.slots[1:]] == ["leaf1:T", "leaf2:T"]


def test_sw_of_fiber_sum():
    report = evaluate(parse_construction("fsum(f,f; E(n=2), E(n=2))"))
    assert report.sw.is_exact
    assert report.sw.describe() == "+1*exp(2f) -2 +1*exp(-2f)"
    classes = basic_classes(report.sw)
    assert (classes.count, classes.count_up_to_sign) == (3, 2)


def test_sw_of_three_pieces():
    report = evaluate(parse_construction("fsum(f,f; fsum(f,f; H(k=2), H(k=4)), E(n=2))"))
    assert report.point == LatticePoint(24, 32)
    classes = basic_classes(report.sw)
    # ±K ± K' times {0, ±2f} twice
    assert classes.count == 4 * 9
    assert classes.count_up_to_sign == 18


def test_knot_surgery():
    report = evaluate(parse_construction("surgery(T,(2,3); E(n=4))"))
    assert report.point == LatticePoint(4, 0)
    assert str(report.sw.value) == "+1*exp(4T) -3*exp(2T) +4 -3*exp(-2T) +1*exp(-4T)"
    assert report.simply_connected


def test_knot_surgery_keeps_topology():
    base = parse_construction("fsum(f,f; H(k=2), E(n=4))")
    for q in (3, 5, 7):
        surgered = evaluate(KnotSurgery(base, "T_2", TorusKnot(2, q)))
        assert surgered.topology() == evaluate(base).topology()


def test_knot_surgery_needs_torus(catalog):
    with pytest.raises(NonTorusSlot):
        evaluate(KnotSurgery(Leaf(catalog.block("H", k=2)), "T", TorusKnot(2, 3)))


def test_knot_surgery_without_dual_sphere(catalog):
    block = catalog.block("E", n=4)
    surfaces = tuple(replace(s, dual_sphere=False) if s.id == "T" else s for s in block.surfaces)
    base = Leaf(replace(block, surfaces=surfaces))
    assert not base.block.slot("T").dual_sphere
    surgered = evaluate(KnotSurgery(base, "T", TorusKnot(2, 3)))
    assert surgered.simply_connected
    assert surgered.topology() == evaluate(base).topology()
    assert any("no dual sphere recorded" in line for line in surgered.provenance)


def test_genus_mismatch():
    with pytest.raises(SlotMismatch):
        evaluate(parse_construction("fsum(f,Σ; E(n=2), Z(g=3))"))


def test_missing_slot(catalog):
    expr = FiberSum(Leaf(catalog.block("E", n=2)), Leaf(catalog.block("E", n=2)), "f", "q")
    with pytest.raises(MissingSlot) as e:
        evaluate(expr)
    assert "available: f, T" in str(e.value)


def test_formal_only(caplog):
    report = evaluate(parse_construction("fsum(f,f; E(n=1), E(n=1))"))
    assert report.point == LatticePoint(2, 0)
    assert report.formal_only
    assert not report.spin
    assert report.sw.kind is StatusKind.UNKNOWN
    assert "b2+ <= 1" in caplog.text


def test_without_sw():
    report = Evaluator(with_sw=False).evaluate(parse_construction("fsum(f,f; E(n=2), E(n=2))"))
    assert report.sw.kind is StatusKind.UNKNOWN
    assert report.point == LatticePoint(4, 0)


def test_iterate_fiber_sum(catalog):
    e2 = Leaf(catalog.block("E", n=2))
    expr = iterate_fiber_sum(e2, 3, "f")
    assert serialize(expr) == "fsum(f,f; fsum(f,f; E(n=2), E(n=2)), E(n=2))"
    assert evaluate(expr).point == LatticePoint(6, 0)
    tail = Leaf(catalog.block("H", k=2))
    expr = iterate_fiber_sum(e2, 2, "f", tail=tail)
    assert [b.name for b in leaves(expr)] == ["E(n=2)", "E(n=2)", "H(k=2)"]
    assert iterate_fiber_sum(e2, 1, "f") is e2
    with pytest.raises(ValueError):
        iterate_fiber_sum(e2, 0, "f")


def test_slot_table_skips_genus_check():
    slots = slot_table(parse_construction("fsum(f,Σ; E(n=2), Z(g=3))"))
    assert slots[0].id == "f"


def test_report_json():
    report = evaluate(parse_construction("fsum(f,f; H(k=2), E(n=10))"))
    document = report.as_json()
    assert document["spin"] is True
    assert document["homeo_type"].value["b2plus"] == 33
    assert document["sw"]["status"] == "exact"


def random_leaf(rng, catalog):
    family = rng.choice(["E", "H", "X2n"])
    if family == "E":
        return Leaf(catalog.block("E", n=rng.randint(2, 4)))
    if family == "H":
        return Leaf(catalog.block("H", k=rng.randint(1, 3)))
    return Leaf(catalog.block("X2n", n=rng.randint(2, 3)))


def test_torus_sums_add_signature(catalog):
    rng = random.Random(4)
    for _ in range(200):
        a, b, c = (random_leaf(rng, catalog) for _ in range(3))
        pieces = [leaf.block.numbers for leaf in (a, b, c)]
        left_first = evaluate(FiberSum(FiberSum(a, b, "f", "f"), c, "f", "f"), with_sw=False)
        right_first = evaluate(FiberSum(a, FiberSum(b, c, "f", "f"), "f", "f"), with_sw=False)
        assert left_first.numbers.sigma == sum(p.sigma for p in pieces)
        assert left_first.numbers.e == sum(p.e for p in pieces)
        assert left_first.topology() == right_first.topology()
        swapped = evaluate(FiberSum(b, a, "f", "f"), with_sw=False)
        assert evaluate(FiberSum(a, b, "f", "f"), with_sw=False).topology() == swapped.topology()


@pytest.mark.parametrize("g", [2, 3, 4, 5, 6])
def test_higher_genus_sum_adds_signature(catalog, g):
    y = catalog.block("Y", x=2, g=g)
    z = catalog.block("Z", g=g)
    report = evaluate(FiberSum(Leaf(y), Leaf(z), "Σ_g", "Σ"), with_sw=False)
    assert report.numbers.sigma == y.numbers.sigma + z.numbers.sigma
    assert report.point == LatticePoint(
        y.numbers.chi + z.numbers.chi + g - 1, y.numbers.c + z.numbers.c + 8 * (g - 1))


def test_conjugation_sign_is_parity_of_chi(catalog):
    rng = random.Random(11)
    for _ in range(40):
        a, b, c = (random_leaf(rng, catalog) for _ in range(3))
        expr = FiberSum(FiberSum(a, b, "f", "f"), c, "f", "f")
        if rng.random() < 0.5:
            expr = KnotSurgery(expr, "f", TorusKnot(2, 2 * rng.randint(1, 2) + 1))
        report = evaluate(expr)
        assert report.sw.is_exact
        value = report.sw.value
        if isinstance(value, FactoredSW):
            value = value.expand()
        assert conjugation_sign(value) == (-1) ** report.numbers.chi, serialize(expr)


def test_torus_knot_surgeries_are_distinct(catalog):
    base = Leaf(catalog.block("E", n=4))
    values = [evaluate(base).sw.value]
    for j in range(1, 13):
        report = evaluate(KnotSurgery(base, "T", TorusKnot(2, 2 * j + 1)))
        assert report.topology() == evaluate(base).topology()
        assert basic_classes(report.sw).count == 2 * j + 3
        values.append(report.sw.value)
    for i, first in enumerate(values):
        for second in values[i + 1:]:
            assert first != second
