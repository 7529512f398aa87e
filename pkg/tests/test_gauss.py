from fractions import Fraction

import pytest

from qcframe.gauss import GaussRational, gr


def test_field_operations_exact():
    a = gr(Fraction(1, 3), Fraction(-2, 7))
    b = gr(Fraction(5, 2), Fraction(1, 6))
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * b == b * a
    assert (a + b) * (a - b) == a * a - b * b


def test_conjugation_and_norm():
    a = gr(3, -4)
    assert a.conj() == gr(3, 4)
    assert (a * a.conj()) == gr(25)
    assert a.conj().conj() == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        gr(1) / gr(0)


def test_int_coercion():
    assert 2 * gr(1, 1) == gr(2, 2)
    assert gr(1, 1) + 1 == gr(2, 1)
    assert 1 - gr(0, 1) == gr(1, -1)
    assert gr(1) / 2 == gr(Fraction(1, 2))


def test_repr_roundtrip_shapes():
    assert repr(gr(3)) == "3"
    assert repr(gr(0, 1)) == "1*i"
    assert "i" in repr(gr(1, -2))
