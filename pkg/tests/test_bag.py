import pytest
from hypothesis import given
from hypothesis import strategies as st

from rwspn import Bag, BagUnderflowError, place

bags = st.dictionaries(st.integers(0, 5), st.integers(1, 4)).map(Bag)


def test_sum_empty_identity():
    assert Bag() + Bag({"x": 2}) == Bag({"x": 2})


def test_sum_listing_style_rendering():
    w0 = place(("w", 0))
    w1 = place(("w", 1))
    total = Bag({w0: 1}) + Bag({w1: 1})
    assert total.render() == '1 . p(< "w" ; 0 >) + 1 . p(< "w" ; 1 >)'


def test_sum_componentwise():
    assert Bag({"a": 3, "b": 1}) + Bag({"a": 1}) == Bag({"a": 4, "b": 1})


def test_diff_self_is_empty():
    b = Bag({"x": 2})
    assert b - b == Bag()
    assert not (b - b)


def test_diff_componentwise():
    assert Bag({"a": 3, "b": 1}) - Bag({"a": 1}) == Bag({"a": 2, "b": 1})


def test_diff_underflow_reports_element():
    with pytest.raises(BagUnderflowError) as err:
        Bag({"a": 1}) - Bag({"a": 1, "b": 1})
    assert err.value.element == "b"


def test_leq():
    assert Bag() <= Bag({"x": 5})
    assert not (Bag({"s": 2}) <= Bag({"s": 1}))
    assert Bag({"a": 1}) <= Bag({"a": 1, "b": 9})


def test_cardinality():
    assert Bag().size == 0
    assert Bag({"x": 2, "y": 3}).size == 5


def test_filter():
    b = Bag({"x": 2, "y": 1})
    assert b.filter(lambda e: True) == b
    assert b.filter(lambda e: False) == Bag()
    assert b.filter(lambda e: e == "x") == Bag({"x": 2})


def test_with_count():
    b = Bag({"x": 2})
    assert b.with_count("x", 0) == Bag()
    assert b.with_count("y", 3) == Bag({"x": 2, "y": 3})


def test_zero_entries_dropped_and_negative_rejected():
    assert Bag({"x": 0}) == Bag()
    with pytest.raises(ValueError):
        Bag({"x": -1})


def test_empty_renders_as_token():
    assert Bag().render() == "nilP"


def test_of():
    assert Bag.of("a", "a", "b") == Bag({"a": 2, "b": 1})


@given(bags, bags, bags)
def test_sum_assoc_comm(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + Bag() == a


@given(bags, bags)
def test_diff_inverts_sum(a, b):
    assert (a + b) - b == a


@given(bags, bags)
def test_leq_sum(a, b):
    assert a <= a + b


@given(bags, bags)
def test_equality_is_sorted_entries(a, b):
    assert (a == b) == (a.items() == b.items())
    assert (a + b).size == a.size + b.size
