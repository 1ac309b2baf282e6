"""Digit shifts ``u_j`` and the successor operators ``V_j`` (add ``k**(j-1)``).

Each successor is built three ways: the recursive carry definition
(:func:`successor_implicit`), the sum over carry prefixes
(:func:`successor_explicit`) and, for small spaces, literal matrix algebra
(:func:`implicit_matrix`, :func:`explicit_matrix`).  All produce the same
permutation.  The operational ripple-carry evaluator attached as the stepper
is what the resource counts are measured on.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .ledger import ResourceLedger
from .permutation import PermutationOperator, ProjectorSpec
from .register import RegisterShape, ShapeError

DENSE_LIMIT = 2**12


def _check_local(shape: RegisterShape, j: int, register: int) -> int:
    """Validate a register-local position and return the global offset."""
    shape.check_register(register)
    if not 1 <= j <= shape.L:
        raise ShapeError(f"position {j} outside 1..{shape.L}")
    return (register - 1) * shape.L


def _shift_digit(shape: RegisterShape, idx: np.ndarray, pos: int, step: int) -> np.ndarray:
    """Add ``step`` mod k to the digit at global position ``pos``."""
    w = shape.k ** (pos - 1)
    d = (idx // w) % shape.k
    return idx + (((d + step) % shape.k) - d) * w


def u(shape: RegisterShape, j: int) -> PermutationOperator:
    """Cyclic shift of the digit at global position ``j``; identity elsewhere."""
    shape.check_position(j)
    table = _shift_digit(shape, np.arange(shape.dimension, dtype=np.int64), j, 1)

    def stepper(i: int, ledger: ResourceLedger) -> int:
        ledger.u_steps += 1
        return int(_shift_digit(shape, np.int64(i), j, 1))

    return PermutationOperator(shape, table, f"u{j}", stepper)


def projector(shape: RegisterShape, j: int, m: int, equal: bool = True) -> ProjectorSpec:
    return ProjectorSpec(shape, j, m, equal)


def _ripple_stepper(shape: RegisterShape, j: int, register: int, step: int):
    offset = (register - 1) * shape.L
    k = shape.k
    stop = k - 1 if step > 0 else 0

    def stepper(i: int, ledger: ResourceLedger) -> int:
        ledger.successor_calls += 1
        for pos in range(offset + j, offset + shape.L + 1):
            w = k ** (pos - 1)
            d = (i // w) % k
            ledger.projector_evals += 1
            ledger.u_steps += 1
            i += (((d + step) % k) - d) * w
            if d != stop:
                break
        return i

    return stepper


def successor_implicit(shape: RegisterShape, j: int, register: int = 1) -> PermutationOperator:
    """``V_j`` from the recursion ``u_j P(!=k-1) + V_{j+1} u_j P(k-1)``, base ``u_L``."""
    offset = _check_local(shape, j, register)

    def image(idx: np.ndarray, jj: int) -> np.ndarray:
        pos = offset + jj
        shifted = _shift_digit(shape, idx, pos, 1)
        if jj == shape.L:
            return shifted
        carry = shape.digit(idx, pos) == shape.k - 1
        out = shifted.copy()
        if carry.any():
            out[carry] = image(shifted[carry], jj + 1)
        return out

    table = image(np.arange(shape.dimension, dtype=np.int64), j)
    return PermutationOperator(shape, table, _name("V", j, register, shape), _ripple_stepper(shape, j, register, 1))


def _prefix_terms(shape: RegisterShape, j: int, register: int, step: int) -> np.ndarray:
    """Shared sum-over-prefixes builder for the successor and its adjoint.

    Term ``n`` covers the states whose digits ``j..n-1`` all trigger a carry
    (or borrow) and whose digit ``n`` does not; the last term covers a carry
    out of the register.  Supports are disjoint and must cover every state.
    """
    offset = _check_local(shape, j, register)
    k = shape.k
    idx = np.arange(shape.dimension, dtype=np.int64)
    table = np.full(shape.dimension, -1, dtype=np.int64)
    # digit value that is mapped onto the carry digit by the shift
    carry_in = k - 1 if step > 0 else 0
    prefix = np.ones(shape.dimension, dtype=bool)
    shifted = idx.copy()
    for n in range(j, shape.L + 1):
        pos = offset + n
        d = shape.digit(idx, pos)
        stop = prefix & (d != carry_in)
        here = _shift_digit(shape, shifted, pos, step)
        if (table[stop] != -1).any():
            raise AssertionError("prefix terms overlap")
        table[stop] = here[stop]
        prefix &= d == carry_in
        shifted = here
    table[prefix] = shifted[prefix]
    if (table < 0).any():
        raise AssertionError("prefix terms do not cover the basis")
    return table


def successor_explicit(shape: RegisterShape, j: int, register: int = 1) -> PermutationOperator:
    """``V_j`` as the sum over carry prefixes, built term by term."""
    table = _prefix_terms(shape, j, register, 1)
    return PermutationOperator(shape, table, _name("V", j, register, shape), _ripple_stepper(shape, j, register, 1))


def successor_adjoint(shape: RegisterShape, j: int, register: int = 1) -> PermutationOperator:
    """``V_j†`` as the sum over borrow prefixes; subtracts ``k**(j-1)``."""
    table = _prefix_terms(shape, j, register, -1)
    return PermutationOperator(shape, table, _name("V", j, register, shape) + "†", _ripple_stepper(shape, j, register, -1))


def _name(base: str, j: int, register: int, shape: RegisterShape) -> str:
    return f"{base}{j}" if shape.registers == 1 else f"{base}{j}[r{register}]"


@lru_cache(maxsize=256)
def successor(shape: RegisterShape, j: int, register: int = 1) -> PermutationOperator:
    """Cached canonical ``V_j`` (implicit construction)."""
    return successor_implicit(shape, j, register)


@lru_cache(maxsize=256)
def successor_dagger(shape: RegisterShape, j: int, register: int = 1) -> PermutationOperator:
    return successor_adjoint(shape, j, register)


def successor_family(shape: RegisterShape, register: int = 1) -> list[PermutationOperator]:
    return [successor(shape, j, register) for j in range(1, shape.L + 1)]


# -- dense matrix forms, small spaces only -------------------------------------


def _dense_check(shape: RegisterShape) -> None:
    if shape.dimension > DENSE_LIMIT:
        raise ShapeError(f"dense forms limited to dimension {DENSE_LIMIT}, got {shape.dimension}")


def _mats(shape: RegisterShape, pos: int, adjoint: bool = False):
    k = shape.k
    um = u(shape, pos).to_matrix().astype(np.int64)
    if adjoint:
        um = um.T
    top = projector(shape, pos, k - 1).to_matrix().astype(np.int64)
    return um, top, np.eye(shape.dimension, dtype=np.int64) - top


def implicit_matrix(shape: RegisterShape, j: int, register: int = 1) -> np.ndarray:
    """Matrix of ``V_j`` from the recursive definition."""
    _dense_check(shape)
    offset = _check_local(shape, j, register)
    um, top, rest = _mats(shape, offset + j)
    if j == shape.L:
        return um
    return um @ rest + implicit_matrix(shape, j + 1, register) @ um @ top


def explicit_matrix(shape: RegisterShape, j: int, register: int = 1) -> np.ndarray:
    """Matrix of ``V_j`` from the sum over carry prefixes."""
    _dense_check(shape)
    offset = _check_local(shape, j, register)
    eye = np.eye(shape.dimension, dtype=np.int64)
    total = np.zeros_like(eye)
    prefix = eye.copy()
    for n in range(j, shape.L + 1):
        um, top, rest = _mats(shape, offset + n)
        total += um @ rest @ prefix
        prefix = um @ top @ prefix
    return total + prefix


def adjoint_matrix(shape: RegisterShape, j: int, register: int = 1) -> np.ndarray:
    """Matrix of ``V_j†`` from the sum over borrow prefixes."""
    _dense_check(shape)
    offset = _check_local(shape, j, register)
    eye = np.eye(shape.dimension, dtype=np.int64)
    total = np.zeros_like(eye)
    prefix = eye.copy()
    for n in range(j, shape.L + 1):
        ud, top, rest = _mats(shape, offset + n, adjoint=True)
        total += rest @ ud @ prefix
        prefix = top @ ud @ prefix
    return total + prefix
