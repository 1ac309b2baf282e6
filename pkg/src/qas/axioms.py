"""Exhaustive checks of the modular-arithmetic axioms and of operator families.

Two kinds of input are verified:

* an :class:`ArithmeticModel` (number states plus successor, plus and times
  operators) against the ring/arithmetic properties, by evaluating every
  operand combination through the operators themselves;
* an :class:`OperatorFamily` (labelled permutations on an opaque space)
  against the structural properties that let a label set be ordered and a
  basis numbered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .arithmetic import plus, times
from .permutation import PermutationOperator, cycle_lengths, power
from .register import DigitString, RegisterShape, ShapeError, encode, value
from .successor import successor_family


class FamilyError(ValueError):
    """An operator family does not support the requested construction."""


class NumberingCollision(FamilyError):
    """Two digit strings were assigned the same basis state."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        out = {"passed": self.passed}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


# -- cyclic shifts and families ------------------------------------------------


def opaque_space(dimension: int) -> RegisterShape:
    """A structureless space of the given dimension (one digit of base ``dimension``)."""
    return RegisterShape(dimension, 1, 1)


def check_cyclic_shift(op: PermutationOperator) -> CheckResult:
    """Fixed-point free with every orbit of one common period."""
    fixed = op.fixed_points()
    if fixed.size:
        return CheckResult("cyclic_shift", False, {"fixed_point": int(fixed[0])}, "has fixed points")
    periods = sorted(set(cycle_lengths(op)))
    if len(periods) != 1:
        return CheckResult("cyclic_shift", False, {"periods": periods}, "unequal orbit periods")
    return CheckResult("cyclic_shift", True, {"period": periods[0]})


@dataclass(frozen=True)
class OperatorFamily:
    """Permutations indexed by opaque labels, all on one space."""

    k: int
    operators: Mapping[str, PermutationOperator]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ShapeError(f"base k must be >= 2, got {self.k}")
        if not self.operators:
            raise FamilyError("a family needs at least one label")
        shapes = {op.shape for op in self.operators.values()}
        if len(shapes) != 1:
            raise FamilyError("family operators act on different spaces")
        object.__setattr__(self, "operators", dict(self.operators))

    @property
    def labels(self) -> list[str]:
        return list(self.operators)

    @property
    def shape(self) -> RegisterShape:
        return next(iter(self.operators.values())).shape

    @property
    def dimension(self) -> int:
        return self.shape.dimension

    def relabel(self, mapping: Mapping[str, str]) -> OperatorFamily:
        return OperatorFamily(self.k, {mapping[a]: op for a, op in self.operators.items()})

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "dimension": self.dimension,
            "labels": self.labels,
            "operators": {a: op.table.tolist() for a, op in self.operators.items()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> OperatorFamily:
        for key in ("k", "dimension", "labels", "operators"):
            if key not in data:
                raise FamilyError(f"family JSON is missing field {key!r}")
        shape = opaque_space(int(data["dimension"]))
        labels = [str(a) for a in data["labels"]]
        if len(set(labels)) != len(labels):
            raise FamilyError("family labels must be distinct")
        ops = {}
        for a in labels:
            if a not in data["operators"]:
                raise FamilyError(f"operators.{a}: missing permutation")
            table = np.asarray(data["operators"][a], dtype=np.int64)
            if table.shape != (shape.dimension,):
                raise FamilyError(f"operators.{a}: expected {shape.dimension} entries, got {table.size}")
            op = PermutationOperator(shape, table, a)
            if not op.is_bijection():
                raise FamilyError(f"operators.{a}: not a permutation")
            ops[a] = op
        return cls(int(data["k"]), ops)


def canonical_family(k: int, L: int, prefix: str = "a") -> OperatorFamily:
    """Labels ``a1..aL`` mapped to the successors ``V_1..V_L`` of one register."""
    shape = RegisterShape(k, L)
    return OperatorFamily(k, {f"{prefix}{j}": op for j, op in enumerate(successor_family(shape), start=1)})


def _from_cycles(dimension: int, cycles: Sequence[Sequence[int]], name: str) -> PermutationOperator:
    table = np.arange(dimension, dtype=np.int64)
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            table[a] = b
    return PermutationOperator(opaque_space(dimension), table, name)


def counterexample_families() -> dict[str, tuple[OperatorFamily, int]]:
    """Small families that each break exactly one structural property.

    Returns ``name -> (family, property number)``.

    * ``fixed_point``: one label acting as the identity on a 2-state space;
      only the cyclic-shift property fails (the identity has fixed points).
    * ``mixed_periods``: ``k = 6`` and one label acting as ``(0 1)(2 3 4)``;
      fixed-point free and its sixth power is 1, but the orbits have periods
      2 and 3, so again only the cyclic-shift property fails.
    * ``non_commuting``: on 12 states, ``a1`` is three 4-cycles and
      ``a2 = a1**2``; ``x`` is four 3-cycles that do not commute with ``a1``
      and ``y = x**2`` (so ``y**2 = x``).  With ``k = 2`` every operator is a
      cyclic shift and the chain ``a1 -> a2 -> 1`` has a unique bottom and
      top, while ``x <-> y`` forms a closed loop; only commutation fails.

    The remaining properties cannot be broken alone: once successors and
    predecessors are unique the label graph is a union of paths and loops, so
    the number of tops equals the number of bottoms.
    """
    ident = _from_cycles(2, [], "a")
    mixed = _from_cycles(5, [(0, 1), (2, 3, 4)], "a")
    a1 = _from_cycles(12, [(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)], "a1")
    x = _from_cycles(12, [(0, 4, 8), (1, 5, 9), (2, 6, 10), (3, 11, 7)], "x")
    return {
        "fixed_point": (OperatorFamily(2, {"a": ident}), 1),
        "mixed_periods": (OperatorFamily(6, {"a": mixed}), 1),
        "non_commuting": (OperatorFamily(2, {"a1": a1, "a2": power(a1, 2), "x": x, "y": power(x, 2)}), 2),
    }


@dataclass(frozen=True)
class FamilyReport:
    properties: dict[int, CheckResult]
    chain: tuple[str, ...] | None = None
    chain_complete: bool = False

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.properties.values())

    def failed(self) -> list[int]:
        return sorted(p for p, r in self.properties.items() if not r.passed)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "properties": {str(p): r.to_json() for p, r in sorted(self.properties.items())},
            "chain": list(self.chain) if self.chain is not None else None,
            "chain_complete": self.chain_complete,
        }


def check_family(f: OperatorFamily) -> FamilyReport:
    labels = f.labels
    ops = f.operators
    kth = {a: power(ops[a], f.k) for a in labels}
    is_one = {a: kth[a].is_identity() for a in labels}
    # successors[a] = labels a' != a with V_a^k = V_a'
    successors = {a: [b for b in labels if b != a and kth[a] == ops[b]] for a in labels}
    predecessors = {b: [a for a in labels if a != b and kth[a] == ops[b]] for b in labels}

    props: dict[int, CheckResult] = {}

    bad = {a: r.to_json() for a in labels if not (r := check_cyclic_shift(ops[a])).passed}
    props[1] = CheckResult("cyclic_shifts", not bad, bad or None)

    noncomm = None
    for i, a in enumerate(labels):
        for b in labels[i + 1 :]:
            if ops[a] @ ops[b] != ops[b] @ ops[a]:
                noncomm = [a, b]
                break
        if noncomm:
            break
    props[2] = CheckResult("commute", noncomm is None, noncomm)

    bad3 = {a: successors[a] for a in labels if not is_one[a] and len(successors[a]) != 1}
    props[3] = CheckResult("unique_successor", not bad3, bad3 or None)

    bad4 = {b: predecessors[b] for b in labels if len(predecessors[b]) > 1}
    props[4] = CheckResult("unique_predecessor", not bad4, bad4 or None)

    tops = [a for a in labels if is_one[a]]
    props[5] = CheckResult("one_top", len(tops) == 1, tops)

    bottoms = [b for b in labels if not predecessors[b]]
    props[6] = CheckResult("one_bottom", len(bottoms) == 1, bottoms)

    chain = None
    complete = False
    if all(r.passed for r in props.values()):
        walk = [bottoms[0]]
        while not is_one[walk[-1]]:
            nxt = successors[walk[-1]][0]
            if nxt in walk:
                break
            walk.append(nxt)
        chain = tuple(walk)
        complete = len(chain) == len(labels)
    return FamilyReport(props, chain, complete)


def derive_ordering(f: OperatorFamily) -> tuple[str, ...]:
    """Labels ordered bottom (weight ``k**0``) to top."""
    report = check_family(f)
    if not report.passed:
        raise FamilyError(f"family fails properties {report.failed()}")
    if not report.chain_complete:
        raise FamilyError(f"chain {list(report.chain)} does not reach every label")
    return report.chain


@dataclass(frozen=True)
class Numbering:
    """Basis state assigned to each digit string, relative to a chosen zero."""

    k: int
    L: int
    zero: int
    images: np.ndarray = field(repr=False)

    def __call__(self, n: DigitString | int) -> int:
        idx = value(n) if isinstance(n, DigitString) else int(n)
        return int(self.images[idx])

    def decode(self, index: int) -> DigitString:
        hits = np.flatnonzero(self.images == index)
        if not hits.size:
            raise KeyError(f"basis state {index} is not numbered")
        return encode(int(hits[0]), (self.k, self.L))


def construct_numbering(f: OperatorFamily, zero: int) -> Numbering:
    """``beta_n = prod_l V_{a_l}^{n_l} beta_0`` for every digit string ``n``."""
    order = derive_ordering(f)
    k, L = f.k, len(order)
    if not 0 <= zero < f.dimension:
        raise ValueError(f"zero state {zero} outside the space")
    count = k**L
    numbers = np.arange(count, dtype=np.int64)
    images = np.full(count, zero, dtype=np.int64)
    for pos, a in enumerate(order):
        digit = (numbers // k**pos) % k
        table = f.operators[a].table
        for t in range(1, k):
            mask = digit >= t
            images[mask] = table[images[mask]]
    if np.unique(images).size != count:
        raise NumberingCollision("two digit strings map to the same basis state")
    images.setflags(write=False)
    return Numbering(k, L, zero, images)


# -- arithmetic models -----------------------------------------------------------


@dataclass(frozen=True)
class ArithmeticModel:
    """Number states and operators to be checked against the axioms.

    ``states[n]`` is the single-register basis index representing ``n``.
    Multi-register operators index their space as ``r1 + D*r2 + D**2*r3 ...``
    with ``D`` the single-register dimension.
    """

    k: int
    L: int
    states: np.ndarray
    successors: Sequence[PermutationOperator]
    plus: PermutationOperator
    times: PermutationOperator
    name: str = "model"

    @property
    def size(self) -> int:
        return self.k**self.L


def abstract_model(k: int, L: int) -> ArithmeticModel:
    shape = RegisterShape(k, L)
    states = np.arange(shape.dimension, dtype=np.int64)
    return ArithmeticModel(
        k, L, states, successor_family(shape), plus(shape.with_registers(2)), times(shape.with_registers(4)), "abstract"
    )


def _first_false(mask: np.ndarray) -> tuple[int, ...] | None:
    bad = np.argwhere(~mask)
    return tuple(int(x) for x in bad[0]) if bad.size else None


def check_arithmetic_axioms(model: ArithmeticModel) -> dict[str, CheckResult]:
    k, L, N = model.k, model.L, model.size
    D = model.states.size
    states = np.asarray(model.states, dtype=np.int64)
    number = np.full(D, -1, dtype=np.int64)
    number[states] = np.arange(N)
    if (number < 0).any() or D != N:
        raise FamilyError("number states must cover the single-register basis exactly once")
    results: dict[str, CheckResult] = {}

    def record(name: str, mask: np.ndarray, labels: Sequence[str]) -> None:
        w = _first_false(mask)
        witness = dict(zip(labels, w)) if w is not None else None
        results[name] = CheckResult(name, w is None, witness)

    succ = list(model.successors)
    if len(succ) != L:
        raise FamilyError(f"expected {L} successor operators, got {len(succ)}")

    # successor chain: V_j^k = V_{j+1}, V_L^k = 1
    broken = None
    for j in range(L):
        kth = power(succ[j], k)
        if (j + 1 < L and kth != succ[j + 1]) or (j + 1 == L and not kth.is_identity()):
            broken = j + 1
            break
    results["successor_chain"] = CheckResult("successor_chain", broken is None, {"j": broken} if broken else None)

    # every number state is reached from zero by the first successor
    walk = np.empty(N, dtype=np.int64)
    cur = int(states[0])
    for n in range(N):
        walk[n] = cur
        cur = succ[0](cur)
    record("successor_generates_states", walk == states, ["n"])

    xs, ys = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    pin = states[xs] + D * states[ys]
    pout = model.plus.table[pin]
    record("plus_keeps_first", pout % D == states[xs], ["x", "y"])
    add = number[pout // D]  # add[x, y] = x + y

    zero = int(states[0])
    tin = states[xs] + D * states[ys] + D**2 * zero + D**3 * zero
    tout = model.times.table[tin]
    regs = [(tout // D**h) % D for h in range(4)]
    record("times_restores_inputs", (regs[0] == states[xs]) & (regs[1] == states[ys]) & (regs[2] == zero), ["x", "y"])
    mul = number[regs[3]]  # mul[x, y] = x * y

    for j, op in enumerate(succ, start=1):
        lifted = np.arange(D * D, dtype=np.int64)
        lifted = lifted % D + D * op.table[lifted // D]
        left = model.plus.table[lifted]
        right = lifted[model.plus.table]
        if not np.array_equal(left, right):
            bad = int(np.flatnonzero(left != right)[0])
            results["successor_commutes_with_plus"] = CheckResult(
                "successor_commutes_with_plus", False, {"j": j, "x": int(number[bad % D]), "y": int(number[bad // D])}
            )
            break
    else:
        results["successor_commutes_with_plus"] = CheckResult("successor_commutes_with_plus", True)

    n = np.arange(N)
    record("additive_identity", (add[0, n] == n) & (add[n, 0] == n), ["x"])
    one = int(number[succ[0](zero)])
    record("multiplicative_identity", (mul[one, n] == n) & (mul[n, one] == n), ["x"])
    record("plus_commutative", add == add.T, ["x", "y"])
    record("times_commutative", mul == mul.T, ["x", "y"])

    x3, y3, z3 = np.meshgrid(n, n, n, indexing="ij")
    record("plus_associative", add[add[x3, y3], z3] == add[x3, add[y3, z3]], ["x", "y", "z"])
    record("times_associative", mul[mul[x3, y3], z3] == mul[x3, mul[y3, z3]], ["x", "y", "z"])
    record(
        "distributive",
        (mul[x3, add[y3, z3]] == add[mul[x3, y3], mul[x3, z3]])
        & (mul[add[y3, z3], x3] == add[mul[y3, x3], mul[z3, x3]]),
        ["x", "y", "z"],
    )
    s_of = number[succ[0].table[states]]  # S(y) as a number
    record("times_successor", mul[xs, s_of[ys]] == add[mul[xs, ys], xs], ["x", "y"])
    return results


def axioms_passed(results: Mapping[str, CheckResult]) -> bool:
    return all(r.passed for r in results.values())


def axioms_to_json(results: Mapping[str, CheckResult]) -> dict:
    return {"passed": axioms_passed(results), "axioms": {n: r.to_json() for n, r in results.items()}}


def load_family(path: str) -> OperatorFamily:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FamilyError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return OperatorFamily.from_json(data)
