from fractions import Fraction

import pytest
from mpmath import mpf, pi, fabs

from core.addons.analytic_calculator import AnalyticCalculator
from core.addons.errors import (
    NotPositiveError, PoleProximityError, DivergentConfiguration, LabError,
)
from core.models.analytic import UHPoint, ResidueVector, SchwartzFiniteLevel


@pytest.fixture
def z():
    return UHPoint.parse('i')


@pytest.fixture
def z_off_axis():
    return UHPoint.parse('0.3+0.8i')


def test_point_parsing():
    assert UHPoint.parse('i') == UHPoint.of(0, 1)
    point = UHPoint.parse('0.3+0.8i')
    assert (point.x, point.y) == (Fraction(3, 10), Fraction(4, 5))
    assert UHPoint.parse('-0.25+2i').x == Fraction(-1, 4)
    assert UHPoint.parse('1,2') == UHPoint.of(1, 2)
    with pytest.raises(NotPositiveError):
        UHPoint.parse('0.5-1i')
    with pytest.raises(LabError):
        UHPoint.parse('abc')
    with pytest.raises(LabError):
        UHPoint.of(0, 1, precision=10)


def test_point_text_round_trips():
    point = UHPoint.of(Fraction(1, 3), Fraction(4, 5))
    assert str(point) == '1/3+4/5i'
    assert UHPoint.parse(str(point)) == point
    assert UHPoint.parse(str(UHPoint.of(Fraction(-1, 4), 2))) == UHPoint.of(Fraction(-1, 4), 2)


def test_point_moves_stay_exact():
    point = UHPoint.of(Fraction(1, 3), 2)
    assert point.translate(1).x == Fraction(4, 3)
    assert point.scale(3) == UHPoint.of(1, 6)
    assert UHPoint.of(0, 1).invert() == UHPoint.of(0, 1)
    with pytest.raises(NotPositiveError):
        point.scale(0)


def test_residue_vectors():
    rv = ResidueVector(3, 4, -1)
    assert (rv.w1, rv.w2) == (1, 2)
    assert rv.w0 == (Fraction(1, 3), Fraction(2, 3))
    assert len(ResidueVector.nonzero(3)) == 8
    assert (-rv).w1 == 2
    with pytest.raises(NotPositiveError):
        ResidueVector(0, 0, 0)


def test_schwartz_functions():
    assert SchwartzFiniteLevel.phi_N(6).support == [(0, 1), (0, 5)]
    assert SchwartzFiniteLevel.phi_N(1).value_at_zero == 1
    phi = SchwartzFiniteLevel.phi_N(5)
    assert AnalyticCalculator.c_coefficient(phi, None, (0, 2)) == 1
    assert AnalyticCalculator.c_coefficient(phi, None, (1, 0)) == 0


def test_kronecker_limit_formula(z):
    assert AnalyticCalculator.klf_residual(z, ResidueVector(3, 1, 0)) < mpf('1e-8')
    with pytest.raises(DivergentConfiguration):
        AnalyticCalculator.klf_residual(z, ResidueVector(3, 0, 0))
    with pytest.raises(DivergentConfiguration):
        AnalyticCalculator.siegel_logabs(z, 0, 0)


def test_functional_equation(z):
    assert AnalyticCalculator.functional_equation_residual(z, '0.3', ResidueVector(3, 1, 0)) < mpf('1e-10')


def test_lattice_sum_oracle(z):
    rv = ResidueVector(3, 1, 0)
    theta = AnalyticCalculator.eisenstein(z, '1.2', rv)
    assert fabs(theta - AnalyticCalculator.eisenstein_lattice_sum(z, '1.2', rv)) < mpf('1e-12')
    with pytest.raises(DivergentConfiguration):
        AnalyticCalculator.eisenstein_lattice_sum(z, '0.8', rv)


def test_translation_moves_residue_class(z_off_axis):
    left = AnalyticCalculator.eisenstein(z_off_axis.translate(1), '0.3', ResidueVector(3, 1, 0))
    right = AnalyticCalculator.eisenstein(z_off_axis, '0.3', ResidueVector(3, 1, 1))
    assert fabs(left - right) < mpf('1e-15')


def test_pole_guards(z):
    with pytest.raises(PoleProximityError):
        AnalyticCalculator.eisenstein(z, 1, ResidueVector(3, 1, 0))
    with pytest.raises(PoleProximityError):
        AnalyticCalculator.eisenstein(z, 0, ResidueVector(1, 0, 0))
    with pytest.raises(LabError):
        AnalyticCalculator.eisenstein(z, '0.3', ResidueVector(3, 1, 0), subtract_pole=2)


def test_gamma0_limit_formula():
    z1, z2 = UHPoint.parse('0.1+1.1i'), UHPoint.parse('-0.2+0.9i')
    assert AnalyticCalculator.gamma0_klf_residual(z1, 9, 'difference', z2) < mpf('1e-8')
    assert [AnalyticCalculator.gamma0_case(N) for N in (1, 9, 6)] == [1, 2, 3]
    with pytest.raises(LabError):
        AnalyticCalculator.gamma0_klf_residual(z1, 9, 'difference')
    with pytest.raises(PoleProximityError):
        AnalyticCalculator.phi_N_at_zero(z1, 1, 'direct')


def test_whittaker_w00():
    value = AnalyticCalculator.whittaker_w00(1)
    assert fabs(value - AnalyticCalculator.whittaker_w00_oracle(1, 'whitw')) < mpf('1e-10')
    assert AnalyticCalculator.w00_underflows(10 ** 9)
    assert AnalyticCalculator.whittaker_w00(10 ** 9) == 0
    with pytest.raises(NotPositiveError):
        AnalyticCalculator.whittaker_w00(0)


def test_mellin_identity():
    assert AnalyticCalculator.ko_mellin_residual(1, D=3) < mpf('1e-6')
    with pytest.raises(DivergentConfiguration):
        AnalyticCalculator.ko_integral(-5, AnalyticCalculator.b_of(3))


def test_gamma_c():
    assert fabs(AnalyticCalculator.gamma_c(1) - 1 / pi) < mpf('1e-12')
    with pytest.raises(PoleProximityError):
        AnalyticCalculator.gamma_c(0)
    with pytest.raises(PoleProximityError):
        AnalyticCalculator.gamma_c(-2)
    residues = AnalyticCalculator.gamma_c_residues(6)
    assert all(later < earlier for earlier, later in zip(residues, residues[1:]))
    assert residues[-1] < mpf('1e-5')


def test_assembly():
    resolved = AnalyticCalculator.assemble_rhs(3, [], 1)
    completed = AnalyticCalculator.assemble_rhs(3, [], 1, completed=True)
    assert fabs(resolved / completed - 2 / pi ** 2) < mpf('1e-12')
    flipped = AnalyticCalculator.assemble_rhs(3, ['2'], 1)
    assert fabs(flipped + resolved) < mpf('1e-12')
    check = AnalyticCalculator.assemble_limit_check(3, [], 1)
    assert check['relative'] < mpf('1e-8')
