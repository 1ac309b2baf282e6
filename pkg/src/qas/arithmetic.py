"""Plus, its adjoint, the digit-shift helpers ``Q_j`` and times, as permutations.

Every operator reads its exponents (the digits of a control register) from
the basis state it acts on, so each is one fixed permutation of the full
multi-register basis and extends to superpositions by linearity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ledger import ResourceLedger
from .permutation import PermutationOperator
from .register import RegisterShape, ShapeError
from .successor import successor, successor_dagger


@dataclass(frozen=True)
class RegisterTarget:
    """Add register ``source`` into register ``dest`` (1-based)."""

    source: int
    dest: int

    def validate(self, shape: RegisterShape) -> None:
        shape.check_register(self.source)
        shape.check_register(self.dest)
        if self.source == self.dest:
            raise ShapeError(f"source and destination register are both {self.source}")


def _controlled_shifts(shape: RegisterShape, target: RegisterTarget, adjoint: bool) -> PermutationOperator:
    target.validate(shape)
    k, L = shape.k, shape.L
    src_offset = (target.source - 1) * L
    ops = [
        (successor_dagger if adjoint else successor)(shape, j, target.dest) for j in range(1, L + 1)
    ]
    idx = np.arange(shape.dimension, dtype=np.int64)
    cur = idx.copy()
    # V_1^{s_1} is applied first, V_L^{s_L} last
    for j, op in enumerate(ops, start=1):
        s_j = shape.digit(idx, src_offset + j)
        for t in range(1, k):
            mask = s_j >= t
            cur[mask] = op.table[cur[mask]]

    def stepper(i: int, ledger: ResourceLedger) -> int:
        ledger.plus_calls += 1
        orig = i
        for j, op in enumerate(ops, start=1):
            for _ in range(shape.digit(orig, src_offset + j)):
                i = op.stepper(i, ledger)
        return i

    if shape.registers == 2 and target == RegisterTarget(1, 2):
        name = "+†" if adjoint else "+"
    else:
        name = f"{'-' if adjoint else '+'}{target.source},{target.dest}"
    return PermutationOperator(shape, cur, name, stepper)


@lru_cache(maxsize=64)
def targeted_plus(shape: RegisterShape, target: RegisterTarget) -> PermutationOperator:
    """``+_{m,n}``: register ``n`` becomes ``m + n mod k**L``; ``m`` unchanged."""
    return _controlled_shifts(shape, target, adjoint=False)


@lru_cache(maxsize=64)
def targeted_minus(shape: RegisterShape, target: RegisterTarget) -> PermutationOperator:
    return _controlled_shifts(shape, target, adjoint=True)


def _require(shape: RegisterShape, registers: int, what: str) -> None:
    if shape.registers != registers:
        raise ShapeError(f"{what} needs a {registers}-register shape, got {shape.registers}")


def plus(shape: RegisterShape) -> PermutationOperator:
    """``|s>|w> -> |s>|s+w mod k**L>`` as ``prod_j V_j^{s_j}`` on the second register."""
    _require(shape, 2, "plus")
    return targeted_plus(shape, RegisterTarget(1, 2))


def plus_adjoint(shape: RegisterShape) -> PermutationOperator:
    """``|s>|w> -> |s>|w-s mod k**L>``, built from the successor adjoints."""
    _require(shape, 2, "plus_adjoint")
    return targeted_minus(shape, RegisterTarget(1, 2))


def _q_table(shape: RegisterShape, j: int, w_reg: int, y_reg: int) -> np.ndarray:
    k, L = shape.k, shape.L
    idx = np.arange(shape.dimension, dtype=np.int64)
    y_off = (y_reg - 1) * L
    w_off = (w_reg - 1) * L
    y = [shape.digit(idx, y_off + i) for i in range(1, L + 1)]
    w_digit = shape.digit(idx, w_off + L - j + 1)
    new = [(y[L - 1] - w_digit) % k] + y[: L - 1]
    out = idx.copy()
    for i in range(L):
        weight = k ** (y_off + i)
        out += (new[i] - y[i]) * weight
    return out


@lru_cache(maxsize=64)
def q_shift(shape: RegisterShape, j: int, w_reg: int = 2, y_reg: int = 3) -> PermutationOperator:
    """Rotate register ``y`` up one digit, writing ``y_L - w_{L-j+1} mod k`` into ``y_1``.

    When ``y`` holds ``w * k**(j-1)`` this multiplies it by ``k`` (the top digit
    leaving the register equals the subtracted digit of ``w``, so a zero enters).
    """
    _require(shape, 4, "q_shift")
    if not 1 <= j <= shape.L:
        raise ShapeError(f"Q index {j} outside 1..{shape.L}")
    table = _q_table(shape, j, w_reg, y_reg)
    L, k = shape.L, shape.k
    y_off, w_off = (y_reg - 1) * L, (w_reg - 1) * L

    def stepper(i: int, ledger: ResourceLedger) -> int:
        ledger.q_shifts += 1
        ledger.q_digit_ops += L
        y = [shape.digit(i, y_off + p) for p in range(1, L + 1)]
        top = (y[-1] - shape.digit(i, w_off + L - j + 1)) % k
        for p, new in enumerate([top] + y[:-1]):
            i += (new - y[p]) * k ** (y_off + p)
        return i

    return PermutationOperator(shape, table, f"Q{j}", stepper)


@lru_cache(maxsize=16)
def times(shape: RegisterShape) -> PermutationOperator:
    """``|s,w,0,0> -> |s,w,0,s*w mod k**L>``.

    The sequence is ``+_{2,3}``, then for ``j = 1..L``: ``(+_{3,4})^{s_j}``
    followed by ``Q_j``.  The third register returns to zero on those inputs;
    on other inputs the operator is still a bijection.
    """
    _require(shape, 4, "times")
    k, L = shape.k, shape.L
    add23 = targeted_plus(shape, RegisterTarget(2, 3))
    add34 = targeted_plus(shape, RegisterTarget(3, 4))
    qs = [q_shift(shape, j) for j in range(1, L + 1)]

    idx = np.arange(shape.dimension, dtype=np.int64)
    cur = add23.table.copy()
    for j in range(1, L + 1):
        s_j = shape.digit(idx, j)
        for t in range(1, k):
            mask = s_j >= t
            cur[mask] = add34.table[cur[mask]]
        cur = qs[j - 1].table[cur]

    def stepper(i: int, ledger: ResourceLedger) -> int:
        orig = i
        i = add23.stepper(i, ledger)
        for j in range(1, L + 1):
            for _ in range(shape.digit(orig, j)):
                i = add34.stepper(i, ledger)
            i = qs[j - 1].stepper(i, ledger)
        return i

    return PermutationOperator(shape, cur, "×", stepper)


def add(k: int, L: int, s: int, w: int, ledger: ResourceLedger | None = None) -> int:
    """``s + w mod k**L`` evaluated through the plus operator."""
    shape = RegisterShape(k, L, 2)
    i = shape.join([s, w])
    out = plus(shape).count(i, ledger) if ledger is not None else plus(shape)(i)
    return shape.split(out)[1]


def multiply(k: int, L: int, s: int, w: int, ledger: ResourceLedger | None = None) -> int:
    """``s * w mod k**L`` evaluated through the times operator."""
    shape = RegisterShape(k, L, 4)
    i = shape.join([s, w, 0, 0])
    out = times(shape).count(i, ledger) if ledger is not None else times(shape)(i)
    parts = shape.split(out)
    if parts[:3] != (s, w, 0):
        raise AssertionError(f"times left registers {parts[:3]} for inputs {(s, w, 0)}")
    return parts[3]
