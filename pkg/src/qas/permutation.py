"""Phase-free basis permutations and diagonal projectors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ledger import ResourceLedger
from .register import RegisterShape, ShapeError, StateVector

#: ``stepper(index, ledger) -> image`` evaluates one basis state while counting.
Stepper = Callable[[int, ResourceLedger], int]

JSON_TABLE_LIMIT = 2**16


def _freeze(table: np.ndarray) -> np.ndarray:
    table = np.ascontiguousarray(table, dtype=np.int64)
    table.setflags(write=False)
    return table


@dataclass(frozen=True, eq=False)
class PermutationOperator:
    """A bijection on the basis indices of ``shape``.

    ``table[i]`` is the image of basis index ``i``.  Composition follows operator
    notation: ``(a @ b)`` applies ``b`` first.
    """

    shape: RegisterShape
    table: np.ndarray
    name: str = "op"
    stepper: Stepper | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _freeze(self.table))
        if self.table.shape != (self.shape.dimension,):
            raise ShapeError(
                f"{self.name}: table length {self.table.shape[0]} != dimension {self.shape.dimension}"
            )

    @classmethod
    def identity(cls, shape: RegisterShape, name: str = "1") -> PermutationOperator:
        return cls(shape, np.arange(shape.dimension), name, stepper=lambda i, ledger: i)

    @property
    def dimension(self) -> int:
        return self.shape.dimension

    def __call__(self, index: int) -> int:
        return int(self.table[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationOperator):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.shape, self.table.tobytes()))

    def __matmul__(self, other: PermutationOperator) -> PermutationOperator:
        return self.compose(other)

    def compose(self, other: PermutationOperator) -> PermutationOperator:
        """``self ∘ other``; steppers compose so ledgers stay additive."""
        if self.shape != other.shape:
            raise ShapeError(f"cannot compose {self.name} on {self.shape} with {other.name} on {other.shape}")
        stepper = None
        if self.stepper is not None and other.stepper is not None:
            first, second = other.stepper, self.stepper

            def stepper(i: int, ledger: ResourceLedger) -> int:
                return second(first(i, ledger), ledger)

        return PermutationOperator(self.shape, self.table[other.table], f"{self.name}∘{other.name}", stepper)

    def inverse(self) -> PermutationOperator:
        inv = np.empty_like(self.table)
        inv[self.table] = np.arange(self.dimension)
        return PermutationOperator(self.shape, inv, f"{self.name}†")

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.dimension)))

    def is_bijection(self) -> bool:
        seen = np.zeros(self.dimension, dtype=bool)
        seen[self.table] = True
        return bool(seen.all())

    def fixed_points(self) -> np.ndarray:
        return np.flatnonzero(self.table == np.arange(self.dimension))

    def apply(self, state: StateVector) -> StateVector:
        if state.shape != self.shape:
            raise ShapeError(f"{self.name} acts on {self.shape}, state lives on {state.shape}")
        return StateVector(self.shape, {int(self.table[i]): a for i, a in state.amplitudes.items()})

    def apply_dense(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        out[self.table] = vec
        return out

    def count(self, index: int, ledger: ResourceLedger) -> int:
        """Evaluate one basis state through the operational evaluator, counting steps."""
        if self.stepper is None:
            raise TypeError(f"{self.name} has no operational evaluator")
        image = self.stepper(int(index), ledger)
        if image != self.table[index]:
            raise AssertionError(f"{self.name}: evaluator gave {image}, table gives {self.table[index]}")
        return image

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((self.dimension, self.dimension), dtype=np.int8)
        mat[self.table, np.arange(self.dimension)] = 1
        return mat

    def to_json(self) -> dict:
        if self.dimension > JSON_TABLE_LIMIT:
            raise ValueError(f"permutation tables are only emitted up to dimension {JSON_TABLE_LIMIT}")
        return {"dimension": self.dimension, "map": self.table.tolist()}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict, shape: RegisterShape, name: str = "op") -> PermutationOperator:
        if int(data["dimension"]) != shape.dimension:
            raise ShapeError(f"table dimension {data['dimension']} != {shape.dimension}")
        op = cls(shape, np.asarray(data["map"], dtype=np.int64), name)
        if not op.is_bijection():
            raise ValueError(f"{name}: map is not a permutation")
        return op


def power(op: PermutationOperator, e: int) -> PermutationOperator:
    """``op`` composed with itself ``e`` times, by repeated squaring."""
    if e < 0:
        raise ValueError(f"exponent must be non-negative, got {e}")
    result = np.arange(op.dimension, dtype=np.int64)
    base = op.table
    n = e
    while n:
        if n & 1:
            result = base[result]
        n >>= 1
        if n:
            base = base[base]
    return PermutationOperator(op.shape, result, f"({op.name})^{e}")


def orbit_period(op: PermutationOperator, index: int) -> int:
    """Least ``p > 0`` with ``op^p(index) == index``."""
    p, cur = 1, int(op.table[index])
    while cur != index:
        cur = int(op.table[cur])
        p += 1
    return p


def cycle_lengths(op: PermutationOperator) -> list[int]:
    """Lengths of all disjoint cycles of ``op`` (fixed points count as 1)."""
    seen = np.zeros(op.dimension, dtype=bool)
    lengths = []
    table = op.table
    for start in range(op.dimension):
        if seen[start]:
            continue
        n, cur = 0, start
        while not seen[cur]:
            seen[cur] = True
            cur = table[cur]
            n += 1
        lengths.append(n)
    return lengths


@dataclass(frozen=True)
class ProjectorSpec:
    """Diagonal projector onto digit ``m`` (or its complement) at position ``j``."""

    shape: RegisterShape
    j: int
    m: int
    equal: bool = True

    def __post_init__(self) -> None:
        self.shape.check_position(self.j)
        if not 0 <= self.m < self.shape.k:
            raise ValueError(f"digit {self.m} outside [0, {self.shape.k - 1}]")

    def mask(self) -> np.ndarray:
        hit = self.shape.digit(np.arange(self.shape.dimension), self.j) == self.m
        return hit if self.equal else ~hit

    def holds(self, index: int) -> bool:
        return (self.shape.digit(index, self.j) == self.m) == self.equal

    def to_matrix(self) -> np.ndarray:
        return np.diag(self.mask().astype(np.int8))
