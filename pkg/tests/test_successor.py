import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import digits, number, pred, succ
from qas.ledger import ResourceLedger
from qas.permutation import PermutationOperator, cycle_lengths, orbit_period, power
from qas.register import RegisterShape, StateVector
from qas.successor import (
    adjoint_matrix,
    explicit_matrix,
    implicit_matrix,
    projector,
    successor,
    successor_adjoint,
    successor_dagger,
    successor_explicit,
    successor_implicit,
    u,
)

S23 = RegisterShape(2, 3)
S32 = RegisterShape(3, 2)


def idx(ds, k):
    return number(ds, k)


def test_u_examples():
    assert u(S23, 1)(idx((0, 0, 0), 2)) == idx((1, 0, 0), 2)
    assert u(S23, 1)(idx((1, 0, 0), 2)) == idx((0, 0, 0), 2)
    s33 = RegisterShape(3, 3)
    assert u(s33, 2)(idx((0, 2, 1), 3)) == idx((0, 0, 1), 3)


def test_successor_examples():
    assert successor_implicit(S23, 1)(7) == 0
    assert successor_implicit(S23, 2)(0) == 2
    assert successor_implicit(S32, 1)(5) == 6
    assert successor_explicit(S23, 1)(3) == 4
    assert successor_adjoint(S23, 1)(0) == 7
    assert successor_adjoint(S32, 2)(1) == 7


def test_explicit_top_position_is_u():
    for shape in (S23, S32):
        assert successor_explicit(shape, shape.L) == u(shape, shape.L)


@pytest.mark.parametrize("k, L", [(2, 1), (2, 3), (3, 2), (4, 2), (5, 3)])
def test_successor_matches_oracle(k, L):
    shape = RegisterShape(k, L)
    for j in range(1, L + 1):
        imp, exp, adj = successor_implicit(shape, j), successor_explicit(shape, j), successor_adjoint(shape, j)
        for n in range(shape.dimension):
            assert imp(n) == succ(n, j, k, L)
            assert exp(n) == imp(n)
            assert adj(n) == pred(n, j, k, L)


def test_successor_on_second_register():
    shape = RegisterShape(2, 2, 2)
    op = successor(shape, 1, register=2)
    for i in range(shape.dimension):
        a, b = shape.split(i)
        assert shape.split(op(i)) == (a, succ(b, 1, 2, 2))


@pytest.mark.parametrize("k, L", [(2, 3), (3, 2)])
def test_dense_forms_agree(k, L):
    shape = RegisterShape(k, L)
    for j in range(1, L + 1):
        perm = successor(shape, j).to_matrix()
        assert np.array_equal(implicit_matrix(shape, j), perm)
        assert np.array_equal(explicit_matrix(shape, j), perm)
        assert np.array_equal(adjoint_matrix(shape, j), perm.T)


def test_projector_partition():
    for j in (1, 2):
        total = sum(projector(S32, j, m).to_matrix() for m in range(3))
        assert np.array_equal(total, np.eye(9))
        eq = projector(S32, j, 2).to_matrix()
        ne = projector(S32, j, 2, equal=False).to_matrix()
        assert np.array_equal(eq + ne, np.eye(9))


@pytest.mark.parametrize("k, L", [(2, 3), (3, 2), (3, 3)])
def test_power_chain(k, L):
    shape = RegisterShape(k, L)
    for j in range(1, L):
        assert power(successor(shape, j), k) == successor(shape, j + 1)
    assert power(successor(shape, L), k).is_identity()
    for j in range(1, L + 1):
        assert power(successor(shape, j), k ** (L - j + 1)).is_identity()


def test_adjoint_is_inverse():
    for j in range(1, 4):
        v = successor(S23, j)
        assert (successor_dagger(S23, j) @ v).is_identity()
        assert successor_dagger(S23, j) == v.inverse()


def test_orbit_periods():
    for b in range(8):
        assert orbit_period(successor(S23, 1), b) == 8
        assert orbit_period(successor(S23, 3), b) == 2
        assert orbit_period(PermutationOperator.identity(S23), b) == 1
    assert sorted(set(cycle_lengths(successor(S32, 2)))) == [3]


def test_apply_preserves_norm():
    rng = np.random.default_rng(0)
    vec = rng.normal(size=9) + 1j * rng.normal(size=9)
    vec /= np.linalg.norm(vec)
    sv = StateVector.from_dense(S32, vec)
    out = successor(S32, 1).apply(sv)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(out.to_dense(), successor(S32, 1).to_matrix() @ vec)


def test_json_round_trip_and_size_guard():
    op = successor(S23, 2)
    data = op.to_json()
    assert data == {"dimension": 8, "map": [succ(n, 2, 2, 3) for n in range(8)]}
    assert PermutationOperator.from_json(data, S23) == op
    big = RegisterShape(2, 17)
    with pytest.raises(ValueError):
        PermutationOperator.identity(big).to_json()


def test_ripple_steps_on_all_ones():
    shape = RegisterShape(2, 8)
    ledger = ResourceLedger()
    out = successor(shape, 1).count(255, ledger)
    assert out == 0
    assert ledger.u_steps == 8 and ledger.projector_evals == 8


def test_ledger_additive_under_composition():
    a, b = successor(S32, 1), successor(S32, 2)
    for i in range(9):
        la, lb, lab = ResourceLedger(), ResourceLedger(), ResourceLedger()
        mid = b.count(i, lb)
        a.count(mid, la)
        (a @ b).count(i, lab)
        assert lab == la + lb


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(1, 4), st.data())
def test_successor_digitwise(k, L, data):
    shape = RegisterShape(k, L)
    j = data.draw(st.integers(1, L))
    n = data.draw(st.integers(0, k**L - 1))
    out = digits(successor(shape, j)(n), k, L)
    # digits below j never change
    assert out[: j - 1] == digits(n, k, L)[: j - 1]
    assert number(out, k) == succ(n, j, k, L)
