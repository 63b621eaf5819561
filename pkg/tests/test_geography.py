import logging
from fractions import Fraction

import pytest

from geo4.catalog import BadParams, ParseError
from geo4.construct import Leaf, evaluate, serialize
from geo4.geography import (
    BelowThreshold, CertificateError, NoRealization, NotCovered, OutOfRegion, PPXVerdict, RATIO_BOUND,
    RatioTooSmall, Realizer, base_construction, base_family_points, build_composite_X, choose_surgery_torus,
    describe_lines, elliptic_fiber_slots, exotic_family, exotic_threshold, issue_certificate, load_region,
    ppx_admissible, preset_regions, realize_base, realize_general, region_from_json,
)
from geo4.invariants import LatticePoint
from geo4.parser import parse_construction
from geo4.runners import verify_coverage

from utils import brute_force_allowed, datapath


@pytest.mark.parametrize("point,expression", [
    ((4, 0), "X2n(n=2)"),
    ((10, 0), "X2n(n=5)"),
    ((7, 8), "H(k=2)"),
    ((15, 24), "H(k=4)"),
    ((17, 8), "fsum(f,f; H(k=2), E(n=10))"),
    ((14, 16), "fsum(f,f; H(k=2), H(k=2))"),
    ((30, 32), "fsum(f,f; fsum(f,f; H(k=2), H(k=4)), E(n=8))"),
])
def test_realize_base(point, expression):
    certificate = realize_base(LatticePoint(*point))
    assert serialize(certificate.expr) == expression
    assert certificate.ok
    assert certificate.verify()
    assert certificate.report.point == LatticePoint(*point)
    assert certificate.route == "base"


def test_certificate_json():
    certificate = realize_base(LatticePoint(17, 8))
    document = certificate.as_json()
    assert document["tag"] == "geo4-certificate"
    assert document["expression"] == "fsum(f,f; H(k=2), E(n=10))"
    assert document["checks"].value == {
        "invariants": True, "spin": True, "simply_connected": True, "symplectic": True}
    assert document["homeo_type"].value["b2minus"] == 161


def test_base_construction_c_multiple_of_16_needs_room():
    with pytest.raises(NoRealization) as e:
        base_construction(LatticePoint(12, 16))
    assert "c <= 2*chi - 12" in str(e.value)


@pytest.mark.parametrize("point", [(2, 0), (3, 0), (7, 24), (1, -8)])
def test_base_construction_out_of_region(point):
    with pytest.raises(OutOfRegion):
        base_construction(LatticePoint(*point))


def test_base_matches_oracle():
    region = preset_regions(200)["base"]
    points = set(region.points())
    assert points == base_family_points(200)
    for point in points:
        assert realize_base(point).report.point == point


def test_region_points_match_definition():
    wedge = preset_regions(30)["noether-wedge"]
    expected = [p for p in brute_force_allowed(30) if p.c <= 2 * p.chi - 6]
    assert list(wedge.points()) == expected
    omega = preset_regions(30)["omega"]
    assert list(omega.points()) == [p for p in expected if p.c <= 2 * p.chi - 12]


def test_signature_zero_points():
    points = list(preset_regions(20)["signature-zero"].points())
    assert points == [LatticePoint(chi, 8 * chi) for chi in range(1, 21)]


def test_issue_certificate_rejects_wrong_point():
    with pytest.raises(CertificateError) as e:
        issue_certificate(LatticePoint(9, 8), parse_construction("H(k=2)"))
    assert "failed invariants" in str(e.value)


def test_issue_certificate_rejects_non_spin():
    with pytest.raises(CertificateError) as e:
        issue_certificate(LatticePoint(5, 0), parse_construction("fsum(f,f; H(k=1), E(n=2))"))
    assert "spin" in str(e.value)


def test_base_region_covered(base_realizer):
    report = verify_coverage(preset_regions(60)["base"], base_realizer)
    assert report.fully_covered
    assert report.n > 0
    assert set(report.realized) == base_family_points(60)


def test_noether_wedge_gaps(base_realizer):
    report = verify_coverage(preset_regions(40)["noether-wedge"], base_realizer)
    assert not report.fully_covered
    assert set(report.unrealized) == {
        LatticePoint(12, 16), LatticePoint(20, 32), LatticePoint(28, 48), LatticePoint(36, 64)}
    for point in report.unrealized:
        assert point.c == 2 * point.chi - 8


def test_region_file_matches_preset():
    region = load_region(datapath("wedge.json"))
    assert region.name == "wedge"
    assert list(region.points()) == list(preset_regions(40)["noether-wedge"].points())


def test_translated_region_covered(desk_realizer):
    region = load_region(datapath("translated.json"))
    assert region.offset == LatticePoint(10, 96)
    points = list(region.points())
    assert points
    assert all(p - region.offset in set(preset_regions(60)["base"].points()) for p in points)
    report = verify_coverage(region, desk_realizer)
    assert report.fully_covered
    assert report.routes["general"] > 0


def test_translated_method():
    region = preset_regions(60)["base"].translated(LatticePoint(10, 96))
    assert region.contains(LatticePoint(14, 96))
    assert not region.contains(LatticePoint(4, 0))
    assert region.name == "(10, 96)+base"


def test_empty_region(base_realizer):
    region = load_region(datapath("empty.json"))
    assert list(region.points()) == []
    report = verify_coverage(region, base_realizer)
    assert report.n == 0
    assert report.fully_covered


def test_load_region_chi_max_override():
    assert load_region("omega", 30).chi_max == 30
    assert load_region(datapath("wedge.json"), 25).chi_max == 25


def test_bad_region_files():
    with pytest.raises(ParseError) as e:
        load_region(datapath("bad_region.json"))
    assert "wobble" in str(e.value)
    with pytest.raises(ParseError):
        region_from_json('{"chi_max": 10, "constraints": [{"type": "line_le"}]}')
    with pytest.raises(ParseError):
        region_from_json('{"chi_max": 10, "constraints": [{"type": "line_le", "line": "Wobble"}]}')
    with pytest.raises(ParseError):
        region_from_json('{"chi_max": 0, "constraints": []}')
    with pytest.raises(ParseError):
        region_from_json('{"chi_max": 10, "constraints": [], "colour": "red"}')


def test_region_with_f_line():
    region = region_from_json(
        '{"chi_max": 300, "constraints": '
        '[{"type": "line_le", "line": "FLine", "slope": "48/5", "intercept": "-2112/5"}]}')
    (constraint,) = region.constraints
    # f(264) = 2112 = 8 * 264
    assert constraint.test(LatticePoint(264, 2112))
    assert not constraint.test(LatticePoint(264, 2128))


@pytest.mark.parametrize("point,verdict", [
    ((13, 20), PPXVerdict.NOT_ADMISSIBLE),
    ((7, 8), PPXVerdict.NOT_APPLICABLE),
    ((15, 24), PPXVerdict.ADMISSIBLE),
    ((23, 40), PPXVerdict.ADMISSIBLE),
    ((100, 208), PPXVerdict.NOT_ADMISSIBLE),
    ((100, 288), PPXVerdict.NOT_APPLICABLE),
])
def test_ppx_admissible(point, verdict):
    assert ppx_admissible(LatticePoint(*point)) is verdict


def test_ppx_counterexample_is_realized(desk_realizer):
    point = LatticePoint(100, 208)
    certificate = desk_realizer.realize(point)
    assert certificate.route == "general"
    assert certificate.ok
    assert serialize(certificate.expr) == (
        "fsum(f,f; synthetic(c=96,chi=10), fsum(f,f; fsum(f,f; H(k=2), H(k=14)), E(n=28)))")


def test_realize_general_desk(desk_realizer):
    certificate = desk_realizer.realize_general(LatticePoint(14, 96))
    assert serialize(certificate.expr) == "fsum(f,f; synthetic(c=96,chi=10), X2n(n=2))"
    assert certificate.route == "general"
    assert certificate.verify()


def test_realize_general_function(desk_session):
    certificate = realize_general(LatticePoint(24, 192), desk_session.composite, desk_session.catalog)
    # m = 2 copies of X plus X(4)
    assert certificate.report.point == LatticePoint(24, 192)
    assert serialize(certificate.expr).count("synthetic") == 2


def test_realize_prefers_base(desk_realizer):
    assert desk_realizer.realize(LatticePoint(17, 8)).route == "base"


def test_not_covered_has_trace(desk_realizer):
    with pytest.raises(NotCovered) as e:
        desk_realizer.realize(LatticePoint(12, 16))
    assert e.value.trace
    assert e.value.trace[0].startswith("m=0:")
    # f(12) = -1536/5 for X = (10, 96)
    assert "above the f line" in e.value.trace[-1]
    assert "-1536/5" in e.value.trace[-1]


def test_realize_general_above_f_line(desk_realizer, caplog):
    caplog.set_level(logging.DEBUG, logger="geo4.geography")
    certificate = desk_realizer.realize_general(LatticePoint(14, 96))
    assert certificate.ok
    assert "lies above the f line" in caplog.text


def test_realize_general_on_f_line(desk_realizer, caplog):
    caplog.set_level(logging.DEBUG, logger="geo4.geography")
    # f(264) = 2112 for X = (10, 96)
    certificate = desk_realizer.realize_general(LatticePoint(264, 2112))
    assert certificate.route == "general"
    assert "lies above the f line" not in caplog.text


def test_no_composite(base_realizer):
    with pytest.raises(NotCovered):
        base_realizer.realize_general(LatticePoint(14, 96))
    with pytest.raises(OutOfRegion):
        base_realizer.realize(LatticePoint(14, 96))


def test_realize_not_allowed(desk_realizer):
    with pytest.raises(OutOfRegion):
        desk_realizer.realize(LatticePoint(3, 0))


def test_desk_composite(desk_session):
    composite = desk_session.composite
    assert composite.point == LatticePoint(10, 96)
    assert composite.sigma == 16
    assert composite.sigma_positive
    assert composite.exceeds_ratio_bound
    assert composite.rohlin_consistent


def test_desk_threshold(desk_session):
    assert exotic_threshold(desk_session.composite) == 264
    assert exotic_threshold(LatticePoint(10, 96)) == 264


def test_threshold_needs_slope_above_8():
    with pytest.raises(RatioTooSmall):
        exotic_threshold(LatticePoint(10, 80))
    with pytest.raises(RatioTooSmall):
        exotic_threshold(LatticePoint(7, 8))


def test_build_composite_small(catalog):
    composite = build_composite_X(2, 3, 2, catalog)
    # two copies of Y(x=2) and Z(3), glued along genus-3 surfaces
    assert composite.point == LatticePoint(2 * 27428 + 16 + 2 * 2, 2 * 240272 + 32 + 2 * 16)
    assert composite.report.spin
    assert composite.report.simply_connected
    # 480608 / 54876 is just below 8.76: the Z(3) tail still drags the ratio down
    assert composite.ratio < RATIO_BOUND
    assert not composite.exceeds_ratio_bound
    assert composite.sigma_positive
    assert composite.rohlin_consistent
    assert composite.as_json()["expression"].startswith("fsum(Σ_g,Σ; fsum(Σ_g,Σ_g; Y(x=2,g=3)")


@pytest.mark.parametrize("x,g,k,point", [
    (10, 3, 2, (1371420, 12013664)),
    (2, 3, 100, (2743016, 24028832)),
])
def test_build_composite_above_ratio_bound(catalog, x, g, k, point):
    composite = build_composite_X(x, g, k, catalog)
    assert composite.point == LatticePoint(*point)
    assert composite.ratio > RATIO_BOUND
    assert composite.exceeds_ratio_bound
    assert composite.rohlin_consistent
    assert composite.as_json()["exceeds_ratio_bound"] is True


def test_build_composite_single_copy(catalog):
    composite = build_composite_X(1, 3, 1, catalog)
    assert composite.point == LatticePoint(6857 + 16 + 2, 60068 + 32 + 16)
    assert composite.sigma_positive
    assert not composite.exceeds_ratio_bound


def test_build_composite_bad_params():
    with pytest.raises(BadParams):
        build_composite_X(0, 3, 1)
    with pytest.raises(BadParams):
        build_composite_X(1, 1, 1)


def test_full_scale_threshold():
    composite = build_composite_X(10, 3, 100)
    threshold = exotic_threshold(composite)
    assert 250_000 <= threshold / (100 * 10 ** 2) <= 290_000
    assert composite.as_json()["expression"] == "<101 blocks>"


def test_below_threshold(desk_realizer):
    with pytest.raises(BelowThreshold) as e:
        exotic_family(262, 3, desk_realizer)
    assert e.value.threshold == 264


def test_exotic_needs_composite(base_realizer):
    with pytest.raises(NotCovered):
        exotic_family(300, 3, base_realizer)
    with pytest.raises(ValueError):
        exotic_family(-1, 3, base_realizer)


@pytest.mark.timeout(120)
def test_exotic_family_desk(desk_realizer):
    family = exotic_family(263, 12, desk_realizer)
    assert family.point == LatticePoint(264, 2112)
    assert family.homeo.name == "527(S²×S²)"
    assert family.threshold == 264
    assert len(family.members) == 12
    assert family.distinct is True
    assert family.members[0].knot is None
    assert str(family.members[1].knot) == "T(2,3)"
    counts = [sum(m.multiset.values()) for m in family.members]
    assert len(set(counts)) == 12
    for member in family.members:
        assert member.report.point == family.point
        assert member.report.spin
    document = family.as_json()
    assert document["tag"] == "geo4-exotic"
    assert document["pairwise_distinct"] is True
    # the certificate is m·X plus H(k=2)♯H(k=12), which has no elliptic fiber
    assert family.torus_slot not in elliptic_fiber_slots(family.members[0].report)
    assert any("no elliptic piece" in note and family.torus_slot in note for note in family.notes)


def test_surgery_torus_prefers_elliptic_fiber():
    report = evaluate(parse_construction("fsum(f,f; H(k=2), E(n=10))"))
    fibers = elliptic_fiber_slots(report)
    assert len(fibers) == 1
    assert choose_surgery_torus(report) == fibers[0]
    assert report.slot(fibers[0]).origin.endswith(":T")


def test_surgery_torus_fallback():
    report = evaluate(parse_construction("fsum(f,f; H(k=2), H(k=2))"))
    assert elliptic_fiber_slots(report) == []
    slot = report.slot(choose_surgery_torus(report))
    assert slot.genus == 1
    assert slot.dual_sphere


def test_surgery_torus_missing(catalog):
    with pytest.raises(NoRealization):
        choose_surgery_torus(evaluate(Leaf(catalog.block("Xp", g=2))))



def test_describe_lines(desk_session):
    names = [entry["name"] for entry in describe_lines()]
    assert "FLine" not in names
    lines = describe_lines(desk_session.composite)
    assert lines[-1]["name"] == "FLine"
    assert lines[-1]["slope"] == Fraction(48, 5)


def test_realizer_repr(desk_realizer):
    assert repr(desk_realizer) == "Realizer(composite=(10, 96))"
    assert repr(Realizer()) == "Realizer(composite=None)"


def test_leaf_certificate(catalog):
    certificate = issue_certificate(LatticePoint(7, 8), Leaf(catalog.block("H", k=2)))
    assert certificate.homeo.b2plus == 13
