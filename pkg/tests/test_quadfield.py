from fractions import Fraction

import pytest

from core.addons.errors import DiscriminantError, PlaceError, NotPositiveError
from core.models.quadfield import (
    Discriminant, FieldElem, Matrix3E, LocalPlace, hermitian_form, similitude, unipotent, weyl_element,
    random_group_element, local_valuation, hilbert_symbol, is_norm, find_norm_witness,
    invariant_ideal_valuation, xi_membership, vp,
)


def test_fundamental_discriminants():
    assert Discriminant.of(3).odd
    assert not Discriminant.of(4).odd
    assert Discriminant.is_fundamental(8)
    for D in (1, 5, 12, 27):
        with pytest.raises(DiscriminantError):
            Discriminant(D)


def test_field_arithmetic():
    x = FieldElem(1, 1, 3)
    assert x.norm() == 4
    assert x * x.inverse() == FieldElem(1, 0, 3)
    assert (x * x.conj()).is_rational()
    assert FieldElem(0, 1, 3) ** 2 == FieldElem(-3, 0, 3)
    assert x ** -2 * x ** 2 == FieldElem(1, 0, 3)
    with pytest.raises(ZeroDivisionError):
        FieldElem(0, 0, 3).inverse()


def test_field_elem_json():
    x = FieldElem(Fraction(1, 2), -3, 7)
    assert x.to_dict() == {'a': '1/2', 'b': '-3/1', 'D': 7}
    assert FieldElem.from_dict(x.to_dict()) == x


def test_matrix_inverse():
    g = unipotent(Fraction(1, 3), FieldElem(1, 2, 3), 3) * Matrix3E.diag((2, 1, 5), 3)
    assert g * g.inverse() == Matrix3E.identity(3)


def test_hermitian_form_is_hermitian():
    for D in (3, 4, 7):
        J = hermitian_form(D)
        assert J.is_hermitian()
        assert not J.det().is_zero()


def test_generators_are_similitudes():
    J = hermitian_form(3)
    assert similitude(weyl_element(3), J) == 1
    assert similitude(unipotent(2, FieldElem(1, -1, 3), 3), J) == 1
    assert similitude(Matrix3E.diag((1, 2, 1), 3), J) is None


def test_random_elements_norm_of_det(rng):
    # Nm(det g) = mu^3 on GU(J)
    for D in (3, 4, 7):
        J = hermitian_form(D)
        for _ in range(10):
            g = random_group_element(D, rng)
            mu = similitude(g, J)
            assert mu is not None
            assert g.det().norm() == mu ** 3


def test_place_classification():
    assert LocalPlace.of(7, 3).is_split
    assert LocalPlace.of(5, 3).is_inert
    assert LocalPlace.of(3, 3).is_ramified
    assert LocalPlace.of(2, 3).is_inert
    assert LocalPlace.of(2, 4).is_ramified


def test_local_valuations():
    split = LocalPlace.of(7, 3)
    x = FieldElem(Fraction(1, 7), 0, 3)
    assert local_valuation(x, split, 'first') == -1
    assert local_valuation(x, split, 'second') == -1
    # 2 + delta has norm 7: it lies above exactly one of the two primes
    y = FieldElem(2, 1, 3)
    assert sorted((local_valuation(y, split, 'first'), local_valuation(y, split, 'second'))) == [0, 1]
    with pytest.raises(PlaceError):
        local_valuation(y, split)

    ramified = LocalPlace.of(3, 3)
    assert local_valuation(FieldElem(0, 1, 3), ramified) == 1
    assert local_valuation(FieldElem(3, 0, 3), ramified) == 2
    assert local_valuation(FieldElem(5, 0, 3), LocalPlace.of(5, 3)) == 1


def test_hilbert_symbol_and_norms():
    assert hilbert_symbol(2, -3, 2) == -1
    assert is_norm(4, 3)
    assert is_norm(7, 3)
    assert is_norm(3, 3)
    assert not is_norm(2, 3)
    assert not is_norm(-1, 3)
    assert find_norm_witness(7, 3) == FieldElem(2, 1, 3)
    assert find_norm_witness(2, 3) is None


def test_norm_decision_agrees_with_witnesses(rng):
    for D in (3, 4, 7):
        for _ in range(40):
            q = Fraction(rng.randint(1, 40), rng.randint(1, 6))
            witness = find_norm_witness(q, D, bound=12)
            if witness is not None:
                assert witness.norm() == q
                assert is_norm(q, D)


def test_xi_membership_requires_positive_vector():
    J = hermitian_form(3)
    assert xi_membership((0, 1, 0), J)
    with pytest.raises(NotPositiveError):
        xi_membership((1, 0, 0), J)


@pytest.mark.parametrize("p, k", [(5, 1), (5, 2), (7, 1)])
def test_invariant_ideal_valuation(p, k):
    D = 3
    w = (FieldElem(0, Fraction(-1, p ** k), D), 0, Fraction(p ** k, 2))
    assert invariant_ideal_valuation(w, LocalPlace.of(p, D)) == -2 * k


def test_vp():
    assert vp(Fraction(9, 2), 3) == 2
    assert vp(Fraction(2, 27), 3) == -3
