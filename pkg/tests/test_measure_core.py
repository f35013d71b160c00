from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import frac, prefix_free, weight
from stagewise.measure_core import (ONE, ZERO, Cylinder, Dyadic, all_strings, compatible,
                                    cylinder_measure, dyadic_add, dyadic_scale, dyadic_sum,
                                    is_prefix, strings_up_to)
from strategies import bits, dyadics, prefix_free_families

D = Dyadic.parse


@pytest.mark.parametrize("a, b, want", [
    ("1/2^1", "1/2^2", "3/2^2"),
    ("5/2^4", "0", "5/2^4"),
    ("3/2^3", "5/2^3", "1"),
])
def test_add_examples(a, b, want):
    assert dyadic_add(D(a), D(b)) == D(want)


@pytest.mark.parametrize("a, e, want", [("1", 2, "1/2^2"), ("3/2^2", 0, "3/2^2"),
                                        ("5/2^3", 3, "5/2^6")])
def test_scale_examples(a, e, want):
    assert dyadic_scale(D(a), e) == D(want)


def test_canonical_form():
    assert Dyadic(4, 3) == Dyadic(1, 1)
    assert Dyadic(4, 3).numerator == 1 and Dyadic(4, 3).log_denominator == 1
    assert Dyadic(0, 7).log_denominator == 0
    assert Dyadic(6, 0).numerator == 6
    assert str(Dyadic(3, 2)) == "3/2^2"
    assert str(ZERO) == "0/2^0"


def test_parse_rejects_garbage():
    for bad in ["1/3", "0.5", "x/2^2", "1/2^-1"]:
        with pytest.raises(ValueError):
            D(bad)


def test_of_fraction():
    assert Dyadic.of(Fraction(3, 8)) == D("3/2^3")
    with pytest.raises(ValueError):
        Dyadic.of(Fraction(1, 3))


@pytest.mark.parametrize("a, b, want", [("0", "01", True), ("01", "00", False),
                                        ("10", "10", True), ("", "0110", True)])
def test_compatible_examples(a, b, want):
    assert compatible(a, b) is want


@pytest.mark.parametrize("base, want", [("", "1"), ("01", "1/2^2"), ("000", "1/2^3")])
def test_cylinder_measure_examples(base, want):
    assert cylinder_measure(Cylinder(base)) == D(want)


def test_string_enumeration_is_lexicographic():
    assert list(all_strings(2)) == ["00", "01", "10", "11"]
    assert list(all_strings(0)) == [""]
    assert len(list(strings_up_to(3))) == 15


@given(dyadics(), dyadics())
def test_add_then_subtract_roundtrips(a, b):
    assert (a + b) - b == a
    assert frac(a + b) == frac(a) + frac(b)


@given(dyadics(), dyadics())
def test_arithmetic_matches_fractions(a, b):
    assert frac(a - b) == frac(a) - frac(b)
    assert frac(a * b) == frac(a) * frac(b)
    assert (a < b) == (frac(a) < frac(b))


@given(dyadics(), st.integers(0, 40))
def test_scale_is_exact(a, e):
    assert frac(a.scale(e)) == frac(a) / 2 ** e


@given(dyadics())
def test_text_roundtrip(a):
    assert D(str(a)) == a


@given(dyadics(unit=True))
def test_binary_powers_sum_back(a):
    if a < ONE:
        assert dyadic_sum(Dyadic.power(k) for k in a.binary_powers()) == a


@given(bits, bits)
def test_compatible_symmetric(a, b):
    assert compatible(a, b) == compatible(b, a)
    assert compatible(a, a)
    if len(a) == len(b):
        assert compatible(a, b) == (a == b)
    assert compatible(a, b) == (is_prefix(a, b) or is_prefix(b, a))


@given(prefix_free_families())
def test_prefix_free_measure_at_most_one(family):
    assert prefix_free(family)
    total = dyadic_sum(Cylinder(x).measure for x in family)
    assert total <= ONE
    assert frac(total) == weight(family)
