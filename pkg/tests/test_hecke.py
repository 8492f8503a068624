from fractions import Fraction

import pytest

from core.addons.errors import NotRamifiedError, UnmappedCuspError, LabError
from core.addons.hecke_calculator import HeckeCalculator
from core.models.boundary import DivisorLedger
from core.models.hecke import HeckeElement
from core.models.quadfield import Matrix3E, hermitian_form, similitude
from core.models.symlaurent import LaurentPoly

c = LaurentPoly.var('c')


@pytest.fixture(scope="module")
def mab():
    return HeckeCalculator.mab_element(3, 3)


def test_torus_generator_is_a_similitude():
    assert similitude(HeckeCalculator.torus_generator(3), hermitian_form(3)) == 1


def test_cosets_report_at_three():
    report = HeckeCalculator.cosets_report(3, 3)
    assert report['count'] == report['expected'] == 10
    assert report['distinct']
    assert report['smith_consistent']
    assert report['mass'] == 10
    assert report['eigenvalue_trivial'] == '10'
    assert report['annihilator_trivial'] == '0'
    assert len(report['representatives']) == 10


def test_unramified_primes_are_rejected():
    with pytest.raises(NotRamifiedError):
        HeckeCalculator.mab_representatives(5, 3)
    with pytest.raises(NotRamifiedError):
        HeckeCalculator.mab_representatives(2, 4)


def test_k_membership():
    place = HeckeCalculator.ramified_place(3, 3)
    assert HeckeCalculator.in_K(Matrix3E.identity(3), place)
    assert not HeckeCalculator.in_K(HeckeCalculator.torus_generator(3), place)


def test_eigenvalues(mab):
    assert HeckeCalculator.eigenvalue(mab) == 9 * c + c ** -1
    assert HeckeCalculator.eigenvalue(mab, 2) == Fraction(37, 2)
    assert HeckeCalculator.eigenvalue(HeckeCalculator.annihilator(mab)) == 9 * c + c ** -1 - 10
    with pytest.raises(LabError):
        HeckeCalculator.eigenvalue(mab, 0)


def test_convolution_is_multiplicative(mab):
    square = HeckeCalculator.convolve(mab, mab)
    assert square.mass() == 100
    assert HeckeCalculator.eigenvalue(square) == (9 * c + c ** -1) ** 2


def test_identity_element(mab):
    identity = HeckeElement.identity(mab.place)
    assert HeckeCalculator.eigenvalue(identity, 5) == 1
    assert (mab - mab).mass() == 0


def test_testvector_support(mab):
    report = HeckeCalculator.testvector_support_check(mab, 3)
    assert (report['up'], report['down']) == (9, 1)
    assert report['vanishing'] == [1, 2, 3]
    assert report['contradiction']
    assert all(step['value'] == '0' for step in report['steps'])


def test_testvector_support_not_forced(mab):
    seeded = HeckeCalculator.testvector_support_check(mab, 3, seed=(0, 1))
    assert seeded['vanishing'] == []
    assert not seeded['contradiction']
    assert seeded['steps'][0]['value'] == '1/9*c'

    flat = HeckeCalculator.testvector_support_check(HeckeElement.identity(mab.place), 3)
    assert flat['up'] == 0
    assert not flat['contradiction']


def test_transform_ledger(mab):
    ledger = DivisorLedger(pushforward={('C1', 'c1'): 'A', ('C1', 'c2'): 'B'}) \
        .add('C1', 'c1', 1).add('C1', 'c2', -1)
    scaled = HeckeCalculator.transform_ledger(ledger, mab, {'A': 1, 'B': 1})
    assert scaled.entries == [('C1', 'c1', 10), ('C1', 'c2', -10)]
    with pytest.raises(UnmappedCuspError):
        HeckeCalculator.transform_ledger(ledger, mab, {'A': 1})
    with pytest.raises(LabError):
        HeckeCalculator.transform_ledger(ledger, mab, {'A': 2, 'B': 1})
