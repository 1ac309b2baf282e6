"""Step counts for the successor, plus and times evaluators.

Cost unit: one elementary operation is a single-position increment mod k
(a u-step) or one digit move of a ``Q_j`` rotation.  Projector evaluations
are also recorded; on the ripple-carry evaluator they equal the u-steps.

Sweeps over many inputs are vectorized, but every per-step cost they add up
comes from the scalar evaluators attached to the operators, so vectorized
and scalar ledgers agree exactly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .ledger import ResourceLedger
from .register import RegisterShape, ShapeError
from .successor import successor

__all__ = [
    "ResourceLedger",
    "SuccessorCount",
    "OperationCount",
    "count_successor",
    "count_naive_successor_power",
    "execute_naive_successor_power",
    "count_plus",
    "count_times",
    "plus_bound",
    "times_bound",
    "scaling_report",
    "ScalingReport",
]

SWEEP_CAP = 2**22
COST_UNIT = (
    "elementary operation = one single-position increment mod k (u-step) "
    "or one digit move of a Q_j rotation; projector evaluations equal u-steps"
)


@dataclass(frozen=True)
class SuccessorCount:
    j: int
    k: int
    L: int
    u_steps: np.ndarray = field(repr=False)  # per basis state
    projector_evals: np.ndarray = field(repr=False)

    @property
    def worst(self) -> int:
        return int(self.u_steps.max())

    @property
    def mean(self) -> float:
        return float(self.u_steps.mean())


def _single_counts(shape: RegisterShape, j: int) -> tuple[np.ndarray, np.ndarray]:
    op = successor(shape, j)
    steps = np.empty(shape.dimension, dtype=np.int64)
    projs = np.empty(shape.dimension, dtype=np.int64)
    for i in range(shape.dimension):
        ledger = ResourceLedger()
        op.count(i, ledger)
        steps[i] = ledger.u_steps
        projs[i] = ledger.projector_evals
    return steps, projs


def count_successor(j: int, k: int, L: int) -> SuccessorCount:
    """Ripple-carry steps of ``V_j`` on every basis state of one register."""
    shape = RegisterShape(k, L)
    if not 1 <= j <= L:
        raise ShapeError(f"position {j} outside 1..{L}")
    steps, projs = _single_counts(shape, j)
    return SuccessorCount(j, k, L, steps, projs)


def count_naive_successor_power(j: int, k: int) -> int:
    """Applications of ``V_1`` needed to emulate ``V_j``: ``k**(j-1)``."""
    if j < 1:
        raise ValueError(f"position must be >= 1, got {j}")
    if k < 2:
        raise ValueError(f"base must be >= 2, got {k}")
    return k ** (j - 1)


def execute_naive_successor_power(j: int, k: int, L: int | None = None) -> int:
    """Apply ``V_1`` repeatedly until the result equals ``V_j`` as a permutation.

    Returns the number of applications; only feasible for small ``k**(j-1)``.
    """
    L = j if L is None else L
    shape = RegisterShape(k, L)
    v1 = successor(shape, 1)
    target = successor(shape, j)
    cur = np.arange(shape.dimension, dtype=np.int64)
    reps = 0
    limit = shape.dimension
    while not np.array_equal(cur, target.table):
        cur = v1.table[cur]
        reps += 1
        if reps > limit:
            raise AssertionError(f"V_{j} is not a power of V_1 within {limit} steps")
    return reps


@dataclass(frozen=True)
class OperationCount:
    """Per-input ledgers of one operation over an exhaustive input sweep."""

    operation: str
    k: int
    L: int
    u_steps: np.ndarray = field(repr=False)
    successor_calls: np.ndarray = field(repr=False)
    q_digit_ops: np.ndarray = field(repr=False)

    @property
    def elementary(self) -> np.ndarray:
        return self.u_steps + self.q_digit_ops

    @property
    def worst(self) -> int:
        return int(self.elementary.max())

    @property
    def mean(self) -> float:
        return float(self.elementary.mean())


class _Sweeper:
    """Vectorized replay of the successor evaluators on register values."""

    def __init__(self, k: int, L: int):
        self.k, self.L = k, L
        shape = RegisterShape(k, L)
        self.tables = [successor(shape, j).table for j in range(1, L + 1)]
        self.steps = [_single_counts(shape, j)[0] for j in range(1, L + 1)]

    def plus(self, src, dst, u, calls, active=None):
        """``dst += src`` through ``prod_j V_j^{src_j}``; ledgers updated in place."""
        k = self.k
        for j in range(self.L):
            digit = (src // k**j) % k
            for t in range(1, k):
                mask = digit >= t
                if active is not None:
                    mask &= active
                u += np.where(mask, self.steps[j][dst], 0)
                calls += mask
                dst = np.where(mask, self.tables[j][dst], dst)
        return dst


def _check_sweep(k: int, L: int) -> None:
    if k ** (2 * L) > SWEEP_CAP:
        raise ShapeError(f"exhaustive sweep over {k}^{2 * L} input pairs exceeds cap {SWEEP_CAP}")


def count_plus(k: int, L: int) -> OperationCount:
    """Ledgers of plus on every pair ``(s, w)``; arrays are indexed ``[s, w]``."""
    _check_sweep(k, L)
    N = k**L
    sw = _Sweeper(k, L)
    s, w = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    s, w = s.ravel(), w.ravel()
    u = np.zeros(N * N, dtype=np.int64)
    calls = np.zeros(N * N, dtype=np.int64)
    sw.plus(s, w, u, calls)
    return OperationCount("plus", k, L, u.reshape(N, N), calls.reshape(N, N), np.zeros((N, N), dtype=np.int64))


def count_times(k: int, L: int) -> OperationCount:
    """Ledgers of times on every intended input ``|s, w, 0, 0>``; arrays indexed ``[s, w]``."""
    _check_sweep(k, L)
    N = k**L
    sw = _Sweeper(k, L)
    s, w = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    s, w = s.ravel(), w.ravel()
    y = np.zeros_like(s)
    z = np.zeros_like(s)
    u = np.zeros_like(s)
    calls = np.zeros_like(s)
    q = np.zeros_like(s)
    y = sw.plus(w, y, u, calls)
    for j in range(1, L + 1):
        digit = (s // k ** (j - 1)) % k
        for t in range(1, k):
            z = sw.plus(y, z, u, calls, active=digit >= t)
        # Q_j: rotate y up one digit, top digit minus w_{L-j+1} enters at the bottom
        top = (y // k ** (L - 1)) % k
        w_digit = (w // k ** (L - j)) % k
        y = (y * k) % N + (top - w_digit) % k
        q += L
    if (y != 0).any():
        raise AssertionError("times sweep left a non-zero third register")
    if (z != (s * w) % N).any():
        raise AssertionError("times sweep disagrees with modular multiplication")
    return OperationCount("times", k, L, u.reshape(N, N), calls.reshape(N, N), q.reshape(N, N))


def plus_bound(k: int, L: int) -> int:
    """``(k-1) * sum_j (L-j+1) = (k-1) L (L+1) / 2``."""
    return (k - 1) * L * (L + 1) // 2


def times_bound(k: int, L: int) -> int:
    """``((k-1)L + 1)`` plus invocations at :func:`plus_bound` each, plus ``L`` rotations of ``L`` digits."""
    return ((k - 1) * L + 1) * plus_bound(k, L) + L * L


@dataclass(frozen=True)
class ReportRow:
    k: int
    L: int
    j: int  # 0 for whole-register operations
    operation: str
    worst_count: int
    mean_count: float
    bound: int
    classification: str

    def key(self) -> tuple:
        return (self.k, self.L, self.j, self.operation)


CSV_COLUMNS = ["k", "L", "j", "operation", "worst_count", "mean_count", "bound", "classification"]


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple[ReportRow, ...]
    fitted: dict

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [r.k, r.L, r.j, r.operation, r.worst_count, f"{r.mean_count:.6g}", r.bound, r.classification]
            )
        return buf.getvalue()

    def summary(self) -> dict:
        return {"cost_unit": COST_UNIT, "rows": len(self.rows), "fitted": self.fitted}

    def select(self, operation: str, k: int | None = None) -> list[ReportRow]:
        return [r for r in self.rows if r.operation == operation and (k is None or r.k == k)]


def _classify(worst: int, bound: int) -> str:
    return "polynomial" if worst <= bound else "bound_exceeded"


def _loglog_slope(xs: list[int], ys: list[float]) -> float | None:
    pts = [(x, y) for x, y in zip(xs, ys) if x >= 2 and y > 0]
    if len(pts) < 2:
        return None
    lx, ly = zip(*[(math.log(x), math.log(y)) for x, y in pts])
    return float(np.polyfit(lx, ly, 1)[0])


def scaling_report(kmax: int, Lmax: int) -> ScalingReport:
    """Counts for every ``2 <= k <= kmax`` and ``1 <= L <= Lmax``; deterministic, no seed."""
    if kmax < 2 or Lmax < 1:
        raise ValueError(f"need kmax >= 2 and Lmax >= 1, got {kmax}, {Lmax}")
    _check_sweep(kmax, Lmax)
    rows: list[ReportRow] = []
    fitted: dict = {}
    for k in range(2, kmax + 1):
        plus_worst, times_worst, succ1_worst = [], [], []
        for L in range(1, Lmax + 1):
            for j in range(1, L + 1):
                sc = count_successor(j, k, L)
                rows.append(ReportRow(k, L, j, "successor", sc.worst, sc.mean, L - j + 1, _classify(sc.worst, L - j + 1)))
                naive = count_naive_successor_power(j, k)
                rows.append(ReportRow(k, L, j, "naive_power", naive, float(naive), naive, "exponential"))
                if j == 1:
                    succ1_worst.append(sc.worst)
            pc = count_plus(k, L)
            pb = plus_bound(k, L)
            rows.append(ReportRow(k, L, 0, "plus", pc.worst, pc.mean, pb, _classify(pc.worst, pb)))
            tc = count_times(k, L)
            tb = times_bound(k, L)
            rows.append(ReportRow(k, L, 0, "times", tc.worst, tc.mean, tb, _classify(tc.worst, tb)))
            plus_worst.append(pc.worst)
            times_worst.append(tc.worst)
        Ls = list(range(1, Lmax + 1))
        fitted[str(k)] = {
            "successor_j1_exponent": _loglog_slope(Ls, succ1_worst),
            "plus_exponent": _loglog_slope(Ls, plus_worst),
            "times_exponent": _loglog_slope(Ls, times_worst),
            "plus_c_over_L2": max(p / L**2 for p, L in zip(plus_worst, Ls)),
            "naive_growth_per_j": float(k),
        }
    rows.sort(key=ReportRow.key)
    return ScalingReport(tuple(rows), fitted)
