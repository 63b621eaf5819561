from fractions import Fraction

import pytest

from geo4.invariants import (
    CharNumbers, InvalidBetti, InvariantError, LatticePoint, LineName, NonIntegralChi, NotAllowed,
    ZeroChi, char_from_betti, f_line, homeo_type, is_allowed, line,
)


@pytest.mark.parametrize("b2plus,b2minus,e,sigma,chi,c", [
    (3, 19, 24, -16, 2, 0),
    (1, 1, 4, 0, 1, 8),
    (13, 61, 76, -48, 7, 8),
    (21, 21, 44, 0, 11, 88),
])
def test_char_from_betti(b2plus, b2minus, e, sigma, chi, c):
    numbers = char_from_betti(b2plus, b2minus)
    assert (numbers.e, numbers.sigma, numbers.chi, numbers.c) == (e, sigma, chi, c)


@pytest.mark.timeout(10)
def test_identities_exhaustive():
    for b2plus in range(201):
        for b2minus in range(201):
            e = 2 + b2plus + b2minus
            sigma = b2plus - b2minus
            if (sigma + e) % 4 != 0:
                with pytest.raises(NonIntegralChi):
                    char_from_betti(b2plus, b2minus)
                continue
            numbers = char_from_betti(b2plus, b2minus)
            assert numbers.c == 3 * numbers.sigma + 2 * numbers.e
            assert numbers.sigma == numbers.c - 8 * numbers.chi
            assert numbers.e == 2 + numbers.b2plus + numbers.b2minus


def test_betti_negative():
    with pytest.raises(InvalidBetti):
        char_from_betti(-1, 3)


def test_non_integral_chi():
    with pytest.raises(NonIntegralChi):
        char_from_betti(2, 2)


def test_inconsistent_numbers():
    with pytest.raises(InvariantError):
        CharNumbers(e=24, sigma=-16, chi=2, c=1, b2plus=3, b2minus=19)


def test_from_point_roundtrip_values():
    numbers = CharNumbers.from_point(LatticePoint(7, 8))
    assert numbers.b2plus == 13
    assert numbers.b2minus == 61
    assert numbers.point == LatticePoint(7, 8)


def test_point_below_b2minus_zero():
    # b2- = 10χ - 1 - c
    with pytest.raises(InvalidBetti):
        CharNumbers.from_point(LatticePoint(1, 10))


def test_lattice_point_arithmetic():
    p = LatticePoint(17, 8)
    q = LatticePoint(10, 96)
    assert p + q == LatticePoint(27, 104)
    assert (p + q) - q == p
    assert q.scaled(3) == LatticePoint(30, 288)
    assert q.sigma == 16
    assert q.euler == 24
    assert str(p) == "(17, 8)"
    assert LatticePoint(2, 0) < LatticePoint(2, 16) < LatticePoint(3, 8)


def test_is_allowed():
    assert is_allowed(LatticePoint(7, 8)).ok
    assert is_allowed(LatticePoint(2, 0))
    verdict = is_allowed(LatticePoint(3, 0))
    assert not verdict
    assert verdict.messages() == ("congruence violated (c ≢ 8χ mod 16)",)
    verdict = is_allowed(LatticePoint(1, -8))
    assert not verdict
    assert verdict.violations == ("nonnegative",)
    assert verdict.messages() == ("c < 0",)


def test_is_allowed_both_violations():
    verdict = is_allowed(LatticePoint(2, -8))
    assert verdict.violations == ("nonnegative", "congruence")


def test_homeo_type_spin():
    homeo = homeo_type(LatticePoint(7, 8), spin=True)
    assert (homeo.b2plus, homeo.b2minus, homeo.sigma) == (13, 61, -48)
    assert homeo.spin
    assert homeo.name is None


@pytest.mark.parametrize("n,name", [
    (0, "S²×S²"),
    (1, "3(S²×S²)"),
    (5, "11(S²×S²)"),
])
def test_homeo_type_signature_zero(n, name):
    homeo = homeo_type(LatticePoint(n + 1, 8 * n + 8), spin=True)
    assert homeo.sigma == 0
    assert homeo.b2plus == homeo.b2minus == 2 * n + 1
    assert homeo.name == name


def test_homeo_type_odd():
    homeo = homeo_type(LatticePoint(3, 0), spin=False)
    assert homeo.name == "5CP²#29CP²bar"
    assert "odd" in str(homeo)


def test_homeo_type_spin_not_allowed():
    with pytest.raises(NotAllowed):
        homeo_type(LatticePoint(3, 0), spin=True)


def test_standard_lines():
    assert line(LineName.NOETHER)(10) == 14
    assert line("NP12")(10) == 8
    assert line(LineName.SIGZERO)(3) == 24
    assert line(LineName.RATIO876).slope == Fraction(219, 25)
    assert line(LineName.BMY)(2) == 18
    assert line(LineName.PPX)(10) == 15
    with pytest.raises(KeyError):
        line(LineName.FLINE)


def test_line_labels():
    assert line(LineName.ELLIPTIC).label() == "c = 0"
    assert line(LineName.NOETHER).label() == "c = 2χ − 6"
    assert line(LineName.SIGZERO).label() == "c = 8χ"
    assert line(LineName.RATIO876).label() == "c = 8.76χ"


def test_f_line():
    f = f_line(LatticePoint(10, 90))
    assert f.slope == 9
    assert f.intercept == -369
    # passes through (c/2 + 6, c)
    assert f(51) == 90
    assert f.name is LineName.FLINE
    assert f.label() == "f(χ)"


def test_f_line_exact_fractions():
    f = f_line(LatticePoint(6857, 60068))
    assert f.slope == Fraction(60068, 6857)
    assert f(60068 // 2 + 6) == 60068


def test_f_line_zero_chi():
    with pytest.raises(ZeroChi):
        f_line(LatticePoint(0, 8))
