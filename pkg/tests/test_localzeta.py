import pytest

from core.addons.errors import (
    StrictModeViolation, WrongVariantError, CaseDataError, InsufficientDepthError, NotRamifiedError,
)
from core.addons.localzeta_calculator import LocalZetaCalculator
from core.models.satake import SatakeData, Partition3, FineSplitCase
from core.models.symlaurent import LaurentPoly

a = LaurentPoly.var('a')
a1, a2, a3 = (LaurentPoly.var(n) for n in ('a1', 'a2', 'a3'))


def test_inert_whittaker_values():
    assert LocalZetaCalculator.whittaker_inert(0) == 1
    assert LocalZetaCalculator.whittaker_inert(1) == a + a ** -1
    assert LocalZetaCalculator.whittaker_inert(2) == a ** 2 + 1 + a ** -2
    with pytest.raises(ValueError):
        LocalZetaCalculator.whittaker_inert(-1)


def test_schur_polynomials():
    assert LocalZetaCalculator.casselman_shalika(0, 0, 0) == 1
    assert LocalZetaCalculator.casselman_shalika(1, 0, 0) == a1 + a2 + a3
    assert LocalZetaCalculator.schur_gl3((1, 1, 0)) == a1 * a2 + a1 * a3 + a2 * a3
    assert LocalZetaCalculator.schur_gl3((1, 1, 1)) == a1 * a2 * a3
    with pytest.raises(ValueError):
        Partition3((0, 1, 0))


def test_pieri_identity():
    assert LocalZetaCalculator.pieri_identity_check(4, 4)


@pytest.mark.parametrize("data, order", [
    (SatakeData.inert(), 6),
    (SatakeData.inert(a=2, n1=3), 6),
    (SatakeData.split(), 4),
    (SatakeData.ramified(), 8),
])
def test_series_matches_closed_form(data, order):
    check = LocalZetaCalculator.series_check(data, order)
    assert check == {'order': order, 'equal': True, 'first_mismatch': None}


@pytest.mark.parametrize("data", [SatakeData.inert(), SatakeData.split(), SatakeData.ramified()])
def test_degree_and_twist(data):
    assert LocalZetaCalculator.degree_check(data)
    assert LocalZetaCalculator.twist_check(data)


def test_ramified_identity_flags():
    report = LocalZetaCalculator.ramified_identity(8)
    assert report['equal']
    assert report['first_mismatch'] is None
    for flag in ('unit_parameters', 'cancellation', 'shift', 'twist'):
        assert report[flag], flag


def test_ramified_shift_needs_the_right_factor():
    assert LocalZetaCalculator.ramified_shift_check(6)['shift']
    wrong = LocalZetaCalculator.ramified_shift_check(6, factor=LaurentPoly.var('p', 2))
    assert not wrong['shift']
    assert wrong['cancellation']


def test_ramified_reconstruction():
    check = LocalZetaCalculator.reconstruct_check(SatakeData.ramified(), 10)
    assert check['recovered']
    assert check['surplus'] == 5


def test_strict_mode_eliminates_one_parameter():
    data = SatakeData.inert(strict=True)
    assert data.is_compatible()
    assert not SatakeData.inert().is_compatible()
    assert SatakeData.split(strict=True).is_compatible()
    with pytest.raises(StrictModeViolation):
        SatakeData.inert(b=2, n1=1, n2=1, strict=True)


def test_satake_text_and_variants():
    data = SatakeData.from_text('inert', 'a=2, n1=3')
    assert data['a'] == 2
    assert data['b'] == LaurentPoly.var('b')
    with pytest.raises(ValueError):
        SatakeData.from_text('inert', 'a1=2')
    with pytest.raises(WrongVariantError):
        SatakeData('archimedean')
    with pytest.raises(WrongVariantError):
        LocalZetaCalculator.lfactor_inert(SatakeData.split())


@pytest.mark.parametrize("a3_order", range(4))
def test_unipotent_measure(a3_order):
    assert LocalZetaCalculator.unipotent_measure(a3_order, 3) == 3 ** a3_order


def test_unipotent_measure_errors():
    with pytest.raises(InsufficientDepthError):
        LocalZetaCalculator.unipotent_measure(2, 3, depth=3)
    with pytest.raises(NotRamifiedError):
        LocalZetaCalculator.unipotent_measure(1, 2)
    with pytest.raises(ValueError):
        LocalZetaCalculator.unipotent_measure(-1, 3)


@pytest.mark.parametrize("case", [
    FineSplitCase('two_factor'),
    FineSplitCase('one_factor', subcase='steinberg'),
    FineSplitCase('one_factor', subcase='nonDS'),
    FineSplitCase('supercuspidal', conductor=2),
])
def test_fine_split_alpha(case):
    assert LocalZetaCalculator.verify_alpha(case)
    if case.kind == 'supercuspidal':
        assert LocalZetaCalculator.alpha_p(case) is None


def test_fine_split_alpha_is_a_consistency_check(monkeypatch):
    assert 'Consistency' in LocalZetaCalculator.verify_alpha.__doc__
    case = FineSplitCase('two_factor')
    monkeypatch.setattr(LocalZetaCalculator, 'alpha_p', classmethod(lambda cls, c: LaurentPoly.var('p')))
    assert not LocalZetaCalculator.verify_alpha(case)


def test_fine_split_case_validation():
    with pytest.raises(CaseDataError):
        FineSplitCase('one_factor')
    with pytest.raises(CaseDataError):
        FineSplitCase('two_factor', subcase='steinberg')
    with pytest.raises(CaseDataError):
        FineSplitCase('supercuspidal', conductor=0)


@pytest.mark.parametrize("p, n", [(3, 1), (3, 2), (5, 1)])
def test_newvector_normalization(p, n):
    assert LocalZetaCalculator.newvector_normalization(p, n) == 1
