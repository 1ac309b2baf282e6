import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import digits, number
from qas.register import (
    BasisState,
    DigitString,
    DimensionCapError,
    RegisterShape,
    ShapeError,
    StateVector,
    basis_state_vector,
    concat,
    encode,
    value,
)


@pytest.mark.parametrize("n, expected", [(0, (0, 0, 0)), (1, (1, 0, 0)), (6, (0, 1, 1))])
def test_encode_k2_L3(n, expected):
    assert encode(n, (2, 3)).digits == expected


@pytest.mark.parametrize("ds, k, expected", [((0, 0, 0), 2, 0), ((1, 1, 0), 2, 3), ((2, 1), 3, 5)])
def test_value(ds, k, expected):
    assert value(DigitString(k, ds)) == expected


@given(st.integers(2, 7), st.integers(1, 6), st.data())
def test_encode_value_round_trip(k, L, data):
    n = data.draw(st.integers(0, k**L - 1))
    s = encode(n, (k, L))
    assert s.digits == digits(n, k, L)
    assert value(s) == n
    assert encode(value(s), (k, L)) == s


def test_encode_rejects_out_of_range():
    with pytest.raises(ValueError):
        encode(8, (2, 3))
    with pytest.raises(ValueError):
        encode(-1, (2, 3))


def test_digit_range_enforced():
    with pytest.raises(ValueError):
        DigitString(2, (0, 2))


def test_unary_base_rejected():
    with pytest.raises(ShapeError):
        RegisterShape(1, 3)


def test_dimension_cap(monkeypatch):
    with pytest.raises(DimensionCapError):
        RegisterShape(2, 30)
    monkeypatch.setenv("QAS_DIM_CAP", "16")
    RegisterShape(2, 4)
    with pytest.raises(DimensionCapError):
        RegisterShape(2, 5)
    monkeypatch.setenv("QAS_DIM_CAP", "lots")
    with pytest.raises(ShapeError):
        RegisterShape(2, 2)


def test_dimension_exact_for_large_exponents():
    shape = RegisterShape(3, 5, 3, cap=3**15)
    assert shape.dimension == 14348907


def test_display_and_parse_msb_first():
    s = DigitString(2, (0, 1, 1))
    assert s.display() == "110"
    assert DigitString.parse("110", 2) == s
    wide = DigitString.parse("11,0,3", 12)
    assert wide.digits == (3, 0, 11)
    assert wide.display() == "11,0,3"
    with pytest.raises(ShapeError):
        DigitString.parse("10", 2, 3)


def test_concat():
    b = concat(DigitString(2, (1, 0)), DigitString(2, (0, 1)))
    assert b.string().digits == (1, 0, 0, 1)
    assert b.index == number((1, 0, 0, 1), 2)
    zero = concat(encode(0, (2, 3)), encode(0, (2, 3)))
    assert zero.string().digits == (0,) * 6
    ones = concat(encode(7, (2, 3)), encode(7, (2, 3)))
    assert ones.string().digits == (1,) * 6
    with pytest.raises(ShapeError):
        concat(encode(0, (2, 3)), encode(0, (3, 3)))


def test_basis_index_is_bijection():
    shape = RegisterShape(3, 2, 2)
    seen = {BasisState.from_index(i, shape).index for i in range(shape.dimension)}
    assert seen == set(range(shape.dimension))
    for i in range(shape.dimension):
        b = BasisState.from_index(i, shape)
        assert shape.join(b.values()) == i
        # register h sits on positions (h-1)L+1 .. hL
        assert b.values() == (i % 9, i // 9)


def test_digits_table_matches_oracle():
    shape = RegisterShape(3, 2, 2)
    table = shape.digits_table()
    for i in range(shape.dimension):
        assert tuple(table[i]) == digits(i, 3, 4)


@pytest.mark.parametrize("i", [0, 5])
def test_basis_state_vector(i):
    sv = basis_state_vector(i, RegisterShape(2, 3))
    assert dict(sv.amplitudes) == {i: 1 + 0j}
    assert sv.norm() == pytest.approx(1.0)


def test_statevector_normalization_enforced():
    shape = RegisterShape(2, 2)
    with pytest.raises(ValueError):
        StateVector(shape, {0: 1.0, 1: 1.0})
    with pytest.raises(ValueError):
        StateVector(shape, {4: 1.0})


def test_statevector_json_round_trip():
    shape = RegisterShape(2, 2)
    sv = StateVector(shape, {3: 0.6j, 1: 0.8, 2: 1e-14})
    data = json.loads(sv.dumps())
    assert [a["index"] for a in data["amplitudes"]] == [1, 3]
    back = StateVector.from_json(data)
    assert back.allclose(sv, 1e-12)
    data["amplitudes"].reverse()
    with pytest.raises(ValueError):
        StateVector.from_json(data)


def test_dense_round_trip():
    shape = RegisterShape(2, 3)
    rng = np.random.default_rng(3)
    vec = rng.normal(size=8) + 1j * rng.normal(size=8)
    vec /= np.linalg.norm(vec)
    assert np.allclose(StateVector.from_dense(shape, vec).to_dense(), vec)
