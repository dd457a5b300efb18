import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codeclass.gf import FieldError, FieldSpec, GFVec, add_scaled, scalar_multiples, weight, weight_reference
from codeclass.k2 import code_from_multiplicities

F5 = FieldSpec(5)


def test_field_rejects_bad_modulus():
    for q in (1, 4, 6, 11):
        with pytest.raises(FieldError):
            FieldSpec(q)


def test_weight_trivial():
    assert weight(GFVec.zeros(F5, 18)) == 0
    assert weight(GFVec(F5, [1] * 21)) == 21


def test_weight_of_the_unique_18_2_15_code():
    code = code_from_multiplicities(0, (3,) * 6)
    nonzero = [c for c in code.codewords() if weight(c) > 0]
    assert len(nonzero) == 24
    assert all(weight(c) == 15 for c in nonzero)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 6), min_size=0, max_size=90))
def test_packed_weight_matches_digit_count(q, digits):
    v = GFVec(FieldSpec(q), [x % q for x in digits])
    assert weight(v) == weight_reference(v) == sum(1 for x in digits if x % q)
    assert len(v) == len(digits)
    assert list(v.digits) == [x % q for x in digits]


def test_add_scaled_examples():
    v = GFVec(F5, [1, 2, 3])
    w = GFVec(F5, [4, 4, 4])
    assert add_scaled(v, w, 0) == v
    assert add_scaled(GFVec.zeros(F5, 3), w, 1) == w
    assert list(add_scaled(v, w, 2).digits) == [4, 0, 1]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 70), st.data())
def test_add_scaled_against_scalar_reference(q, n, data):
    a = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    lam = data.draw(st.integers(0, q - 1))
    f = FieldSpec(q)
    got = add_scaled(GFVec(f, a), GFVec(f, b), lam)
    assert list(got.digits) == [(x + lam * y) % q for x, y in zip(a, b)]


def test_add_scaled_mismatch():
    with pytest.raises(FieldError):
        add_scaled(GFVec(F5, [1, 2]), GFVec(F5, [1, 2, 3]), 1)
    with pytest.raises(FieldError):
        add_scaled(GFVec(F5, [1, 2]), GFVec(FieldSpec(3), [1, 2]), 1)


def test_scalar_multiples_order():
    v = GFVec(F5, [0, 1, 3])
    mult = scalar_multiples(v)
    assert [list(m.digits) for m in mult] == [[0, 1, 3], [0, 2, 1], [0, 3, 4], [0, 4, 2]]
    assert len(scalar_multiples(GFVec(FieldSpec(7), [1]))) == 6


def test_string_round_trip():
    v = GFVec.from_string(F5, "0123401234")
    assert str(v) == "0123401234"
    assert np.array_equal(v.digits, [0, 1, 2, 3, 4, 0, 1, 2, 3, 4])
