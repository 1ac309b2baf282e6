"""Physical label models: relabelling maps between number states and physical states.

A physical basis state assigns a value from ``B`` to every site label in
``A``.  A :class:`LabelModel` fixes bijections ``g`` (positions ``1..L`` to
sites) and ``d`` (digits ``0..k-1`` to values); together they give the
tensor-product preserving map ``W`` from digit strings to physical states,
and through conjugation the physical versions of every arithmetic operator.

Physical basis states are indexed with the sites in the listed order of
``A`` and the values in the listed order of ``B``; this index convention is
fixed by the label sets alone and does not depend on any model.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .axioms import ArithmeticModel
from .arithmetic import plus, times
from .permutation import PermutationOperator
from .register import DigitString, RegisterShape, ShapeError
from .successor import successor


class LabelError(ValueError):
    """Labels or maps outside the declared label sets."""


@dataclass(frozen=True)
class LabelSets:
    """Site labels ``A`` (one per position) and value labels ``B`` (one per digit)."""

    A: tuple[str, ...]
    B: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", tuple(str(a) for a in self.A))
        object.__setattr__(self, "B", tuple(str(b) for b in self.B))
        if len(set(self.A)) != len(self.A) or not self.A:
            raise LabelError(f"site labels must be distinct and non-empty: {self.A}")
        if len(set(self.B)) != len(self.B) or len(self.B) < 2:
            raise LabelError(f"value labels must be distinct, at least two: {self.B}")

    @property
    def L(self) -> int:
        return len(self.A)

    @property
    def k(self) -> int:
        return len(self.B)

    def shape(self, registers: int = 1) -> RegisterShape:
        return RegisterShape(self.k, self.L, registers)


@dataclass(frozen=True)
class PhysicalBasisState:
    """The function ``t`` from sites to values."""

    assignment: Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    def __getitem__(self, a: str) -> str:
        return self.assignment[a]

    def index(self, labels: LabelSets) -> int:
        if set(self.assignment) != set(labels.A):
            raise LabelError(f"state sites {sorted(self.assignment)} differ from {sorted(labels.A)}")
        out = 0
        for pos, a in enumerate(labels.A):
            try:
                out += labels.B.index(self.assignment[a]) * labels.k**pos
            except ValueError:
                raise LabelError(f"value {self.assignment[a]!r} at site {a!r} not in {labels.B}") from None
        return out

    @classmethod
    def from_index(cls, index: int, labels: LabelSets) -> PhysicalBasisState:
        k = labels.k
        return cls({a: labels.B[(index // k**pos) % k] for pos, a in enumerate(labels.A)})

    def to_json(self) -> dict:
        return dict(self.assignment)


@dataclass(frozen=True)
class LabelModel:
    """``g[j-1]`` indexes the site of position ``j``; ``d[h]`` indexes the value of digit ``h``."""

    labels: LabelSets
    g: tuple[int, ...]
    d: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", tuple(int(x) for x in self.g))
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if sorted(self.g) != list(range(self.labels.L)):
            raise LabelError(f"g must be a bijection onto the {self.labels.L} sites, got {self.g}")
        if sorted(self.d) != list(range(self.labels.k)):
            raise LabelError(f"d must be a bijection onto the {self.labels.k} values, got {self.d}")

    @classmethod
    def identity(cls, labels: LabelSets) -> LabelModel:
        return cls(labels, tuple(range(labels.L)), tuple(range(labels.k)))

    @property
    def k(self) -> int:
        return self.labels.k

    @property
    def L(self) -> int:
        return self.labels.L

    def site(self, j: int) -> str:
        """``g(j)``."""
        return self.labels.A[self.g[j - 1]]

    def value_label(self, h: int) -> str:
        """``d(h)``."""
        return self.labels.B[self.d[h]]

    def inverse(self) -> tuple[dict[str, int], dict[str, int]]:
        """``g^-1`` (site -> position) and ``d^-1`` (value -> digit)."""
        g_inv = {self.site(j): j for j in range(1, self.L + 1)}
        d_inv = {self.value_label(h): h for h in range(self.k)}
        return g_inv, d_inv

    def with_d(self, d: Sequence[int]) -> LabelModel:
        return LabelModel(self.labels, self.g, tuple(d))

    def to_json(self) -> dict:
        return {"A": list(self.labels.A), "B": list(self.labels.B), "g": list(self.g), "d": list(self.d)}

    @classmethod
    def from_json(cls, data: Mapping) -> LabelModel:
        for key in ("A", "B", "g", "d"):
            if key not in data:
                raise LabelError(f"label model JSON is missing field {key!r}")
        return cls(LabelSets(tuple(data["A"]), tuple(data["B"])), tuple(data["g"]), tuple(data["d"]))


def load_model(path: str) -> LabelModel:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LabelError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return LabelModel.from_json(data)


def w_map(m: LabelModel, s: DigitString) -> PhysicalBasisState:
    """Digit ``s(j)`` at position ``j`` becomes value ``d(s(j))`` at site ``g(j)``."""
    if (s.k, s.L) != (m.k, m.L):
        raise ShapeError(f"digit string shape ({s.k},{s.L}) differs from model ({m.k},{m.L})")
    return PhysicalBasisState({m.site(j): m.value_label(s(j)) for j in range(1, m.L + 1)})


def w_inverse(m: LabelModel, t: PhysicalBasisState) -> DigitString:
    """Read the number state of ``t``: digit at ``g^-1(a)`` is ``d^-1(t(a))``."""
    g_inv, d_inv = m.inverse()
    if set(t.assignment) != set(g_inv):
        raise LabelError(f"state sites {sorted(t.assignment)} differ from {sorted(g_inv)}")
    digits = [0] * m.L
    for a, b in t.assignment.items():
        if b not in d_inv:
            raise LabelError(f"value {b!r} at site {a!r} not in {m.labels.B}")
        digits[g_inv[a] - 1] = d_inv[b]
    return DigitString(m.k, tuple(digits))


def w_table(m: LabelModel, registers: int = 1) -> np.ndarray:
    """``W`` (tensored over ``registers``) as a map from abstract to physical index."""
    k, L = m.k, m.L
    shape = m.labels.shape(registers)
    idx = np.arange(shape.dimension, dtype=np.int64)
    out = np.zeros_like(idx)
    for r in range(registers):
        for j in range(1, L + 1):
            digit = (idx // k ** (r * L + j - 1)) % k
            phys_digit = np.asarray(m.d, dtype=np.int64)[digit]
            out += phys_digit * k ** (r * L + m.g[j - 1])
    return out


def w_operator(m: LabelModel, registers: int = 1) -> PermutationOperator:
    return PermutationOperator(m.labels.shape(registers), w_table(m, registers), "W")


def induce_operator(m: LabelModel, op: PermutationOperator) -> PermutationOperator:
    """``W op W^†`` acting on physical indices."""
    if (op.shape.k, op.shape.L) != (m.k, m.L):
        raise ShapeError(f"operator shape ({op.shape.k},{op.shape.L}) differs from model ({m.k},{m.L})")
    W = w_table(m, op.shape.registers)
    W_inv = np.empty_like(W)
    W_inv[W] = np.arange(W.size)
    return PermutationOperator(op.shape, W[op.table[W_inv]], f"W{op.name}W†")


def induced_successor_direct(m: LabelModel, j: int, register: int = 1, registers: int = 1) -> PermutationOperator:
    """Physical ``V_j`` written directly on sites ``g(j)..g(L)`` with values mapped by ``d``.

    Term ``n`` fires when sites ``g(j)..g(n-1)`` hold ``d(k-1)`` and site
    ``g(n)`` does not; every site in ``g(j)..g(n)`` is advanced by the
    relabelled shift ``d(h) -> d(h+1 mod k)``.
    """
    k, L = m.k, m.L
    shape = m.labels.shape(registers)
    if not 1 <= j <= L:
        raise ShapeError(f"position {j} outside 1..{L}")
    shape.check_register(register)
    offset = (register - 1) * L
    d = np.asarray(m.d, dtype=np.int64)
    d_inv = np.empty_like(d)
    d_inv[d] = np.arange(k)
    top = d[k - 1]
    idx = np.arange(shape.dimension, dtype=np.int64)

    def shift_site(x: np.ndarray, n: int) -> np.ndarray:
        w = k ** (offset + m.g[n - 1])
        b = (x // w) % k
        return x + (d[(d_inv[b] + 1) % k] - b) * w

    table = np.full(shape.dimension, -1, dtype=np.int64)
    prefix = np.ones(shape.dimension, dtype=bool)
    shifted = idx.copy()
    for n in range(j, L + 1):
        b = (idx // k ** (offset + m.g[n - 1])) % k
        shifted = shift_site(shifted, n)
        stop = prefix & (b != top)
        table[stop] = shifted[stop]
        prefix &= b == top
    table[prefix] = shifted[prefix]
    name = f"V{j}[g,d]" if registers == 1 else f"V{j}[g,d][r{register}]"
    return PermutationOperator(shape, table, name)


def induced_plus(m: LabelModel) -> PermutationOperator:
    """``(W⊗W) + (W†⊗W†)``."""
    return induce_operator(m, plus(m.labels.shape(2)))


def induced_times(m: LabelModel) -> PermutationOperator:
    return induce_operator(m, times(m.labels.shape(4)))


def physical_model(m: LabelModel) -> ArithmeticModel:
    """States ``W|s>`` with the induced successor, plus and times operators."""
    shape = m.labels.shape()
    succ = [induce_operator(m, successor(shape, j)) for j in range(1, m.L + 1)]
    return ArithmeticModel(m.k, m.L, w_table(m), succ, induced_plus(m), induced_times(m), f"physical g={m.g} d={m.d}")


def _unrank(rank: int, n: int) -> tuple[int, ...]:
    """Permutation of ``range(n)`` with the given lexicographic rank."""
    items = list(range(n))
    out = []
    for i in range(n, 0, -1):
        q, rank = divmod(rank, math.factorial(i - 1))
        out.append(items.pop(q))
    return tuple(out)


def enumerate_models(labels: LabelSets, count: int | None = None, seed: int = 0) -> list[LabelModel]:
    """``count`` distinct models; all ``L!*k!`` of them (ranked order) when ``count`` is None or the total."""
    n_g, n_d = math.factorial(labels.L), math.factorial(labels.k)
    total = n_g * n_d
    if count is None:
        count = total
    if not 0 <= count <= total:
        raise ValueError(f"requested {count} models, only {total} exist")
    ranks = range(total) if count == total else sorted(random.Random(seed).sample(range(total), count))
    return [LabelModel(labels, _unrank(r // n_d, labels.L), _unrank(r % n_d, labels.k)) for r in ranks]
