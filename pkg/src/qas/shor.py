"""Desk-scale Shor period finding carried out on a physical two-register space.

The step operator ``U`` (modular exponentiation into the output register,
then the Fourier transform of the input register) is defined on number
states.  The physical run applies ``W U W^†`` for a label model ``W``, and
the measured physical outcome is read back as a number through a possibly
different decode model.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .permutation import PermutationOperator
from .physical import LabelModel, LabelSets, induce_operator, w_table
from .register import NORM_TOL, RegisterShape, ShapeError


class ShorError(ValueError):
    pass


def register_size(M: int) -> int:
    """The ``n`` with ``M**2 <= 2**n <= 2*M**2``."""
    if M < 2:
        raise ShorError(f"M must be at least 2, got {M}")
    n = (M * M - 1).bit_length()
    if not M * M <= 2**n <= 2 * M * M:
        raise ShorError(f"no register size fits M={M}")
    return n


def modexp_map(m: int, M: int, shape: RegisterShape) -> PermutationOperator:
    """``|s>|y> -> |s>|y + m**s mod M  (mod k**L)>`` on a two-register shape."""
    if math.gcd(m, M) != 1:
        raise ShorError(f"gcd({m}, {M}) = {math.gcd(m, M)}; base must be coprime to M")
    if shape.registers != 2:
        raise ShapeError("modular exponentiation needs a two-register shape")
    D = shape.modulus
    if D < M:
        raise ShapeError(f"output register of size {D} cannot hold values up to {M - 1}")
    f = np.array([pow(m, s, M) for s in range(D)], dtype=np.int64)
    idx = np.arange(shape.dimension, dtype=np.int64)
    s, y = idx % D, idx // D
    return PermutationOperator(shape, s + D * ((y + f[s]) % D), f"f[{m}^s mod {M}]")


def fourier_transform(D: int) -> np.ndarray:
    """``F[w, s] = exp(-2 pi i w s / D) / sqrt(D)``."""
    if D < 1:
        raise ValueError(f"dimension must be positive, got {D}")
    ws = np.outer(np.arange(D), np.arange(D)) % D
    return np.exp(-2j * np.pi * ws / D) / math.sqrt(D)


def _fourier_first_register(vec: np.ndarray, D: int) -> np.ndarray:
    # index = s + D*y, so rows are y and columns are s; numpy's sign convention matches F
    grid = vec.reshape(-1, D)
    return (np.fft.fft(grid, axis=1) / math.sqrt(D)).reshape(-1)


def convergent_denominators(w: int, D: int, bound: int) -> list[int]:
    """Denominators of the continued-fraction convergents of ``w/D`` up to ``bound``."""
    out = []
    frac = Fraction(w, D)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while True:
        a = frac.numerator // frac.denominator
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > bound:
            break
        out.append(k)
        rest = frac - a
        if rest == 0:
            break
        frac = 1 / rest
    return out


def extract_period(w: int, D: int, m: int, M: int) -> int | None:
    """First convergent denominator ``p >= 2`` of ``w/D`` with ``m**p = 1 mod M``."""
    for q in convergent_denominators(w, D, M):
        if q >= 2 and pow(m, q, M) == 1:
            return q
    return None


def factors_from_period(m: int, M: int, p: int) -> tuple[int, int] | None:
    if p % 2:
        return None
    half = pow(m, p // 2, M)
    if half == M - 1:
        return None
    a, b = math.gcd(half - 1, M), math.gcd(half + 1, M)
    for f in (a, b):
        if 1 < f < M:
            return tuple(sorted((f, M // f)))
    return None


def true_period(m: int, M: int) -> int:
    p, x = 1, m % M
    while x != 1:
        x = x * m % M
        p += 1
    return p


@dataclass(frozen=True)
class ShorRun:
    M: int
    m: int
    n: int
    distribution: np.ndarray = field(repr=False)  # over decoded input-register numbers
    exact_verified_probability: float
    exact_factor_probability: float
    outcomes: tuple[int, ...]  # decoded numbers, one per trial
    periods: tuple[int | None, ...]
    factor_hits: tuple[bool, ...]
    period: int | None
    factors: tuple[int, int] | None

    @property
    def trials(self) -> int:
        return len(self.outcomes)

    @property
    def verified_rate(self) -> float:
        return sum(p is not None for p in self.periods) / self.trials if self.trials else 0.0

    @property
    def factor_rate(self) -> float:
        return sum(self.factor_hits) / self.trials if self.trials else 0.0

    def to_json(self) -> dict:
        support = {int(w): float(p) for w, p in enumerate(self.distribution) if p > 1e-12}
        return {
            "M": self.M,
            "m": self.m,
            "n": self.n,
            "distribution": support,
            "exact_verified_probability": self.exact_verified_probability,
            "exact_factor_probability": self.exact_factor_probability,
            "trials": self.trials,
            "verified_rate": self.verified_rate,
            "factor_rate": self.factor_rate,
            "outcomes": list(self.outcomes),
            "periods": list(self.periods),
            "period": self.period,
            "factors": list(self.factors) if self.factors else None,
        }


def default_labels(n: int) -> LabelSets:
    return LabelSets(tuple(f"q{i}" for i in range(n)), ("up", "down"))


def physical_distribution(m: int, M: int, model: LabelModel) -> np.ndarray:
    """Probabilities of each physical basis state of the input register after ``W U W^†``."""
    n = register_size(M)
    if (model.k, model.L) != (2, n):
        raise ShapeError(f"model must describe {n} qubits (k=2), got k={model.k}, L={model.L}")
    shape = RegisterShape(2, n, 2)
    D = shape.modulus
    W = w_table(model, 2)  # abstract index -> physical index

    # the initial number state: uniform input register, zero output register
    abstract = np.zeros(shape.dimension, dtype=complex)
    abstract[:D] = 1 / math.sqrt(D)
    phys = np.zeros_like(abstract)
    phys[W] = abstract

    phys = induce_operator(model, modexp_map(m, M, shape)).apply_dense(phys)
    _check_norm(phys, "after modular exponentiation")
    transformed = _fourier_first_register(phys[W], D)  # W F W^†
    phys = np.zeros_like(transformed)
    phys[W] = transformed
    _check_norm(phys, "after Fourier transform")
    return (np.abs(phys.reshape(-1, D)) ** 2).sum(axis=0)


def abstract_distribution(m: int, M: int) -> np.ndarray:
    """Input-register distribution computed on number states with no relabelling."""
    n = register_size(M)
    D = 2**n
    f = [pow(m, s, M) for s in range(D)]
    amps = np.zeros((M, D), dtype=complex)
    for s in range(D):
        amps[f[s], s] = 1 / math.sqrt(D)
    return (np.abs(amps @ fourier_transform(D).T) ** 2).sum(axis=0)


def _check_norm(vec: np.ndarray, stage: str) -> None:
    norm = float(np.vdot(vec, vec).real)
    if abs(norm - 1.0) > NORM_TOL:
        raise AssertionError(f"norm {norm} {stage}")


def shor_pipeline(
    m: int,
    M: int,
    model: LabelModel | None = None,
    decode_model: LabelModel | None = None,
    seed: int = 0,
    trials: int = 100,
) -> ShorRun:
    """Run the physical pipeline and read outcomes through ``decode_model``.

    ``decode_model`` defaults to ``model``; ``model`` defaults to the identity
    relabelling of ``n`` qubits.
    """
    if math.gcd(m, M) != 1:
        raise ShorError(f"gcd({m}, {M}) = {math.gcd(m, M)}; base must be coprime to M")
    n = register_size(M)
    if model is None:
        model = LabelModel.identity(default_labels(n))
    if decode_model is None:
        decode_model = model
    if decode_model.labels != model.labels:
        raise ShapeError("decode model must use the same label sets as the run model")
    D = 2**n
    phys_probs = physical_distribution(m, M, model)
    W_dec = w_table(decode_model)  # number -> physical index under the decode model
    decoded = phys_probs[W_dec]  # decoded[w] = P(physical outcome that decodes to w)
    number_of = np.empty(D, dtype=np.int64)
    number_of[W_dec] = np.arange(D)

    period_of = [extract_period(w, D, m, M) for w in range(D)]
    factor_of = [p is not None and factors_from_period(m, M, p) is not None for p in period_of]
    exact_verified = float(sum(decoded[w] for w in range(D) if period_of[w] is not None))
    exact_factor = float(sum(decoded[w] for w in range(D) if factor_of[w]))

    rng = np.random.default_rng(seed)
    probs = phys_probs / phys_probs.sum()
    physical_outcomes = rng.choice(D, size=trials, p=probs) if trials else np.array([], dtype=np.int64)
    outcomes = tuple(int(number_of[t]) for t in physical_outcomes)
    periods = tuple(period_of[w] for w in outcomes)
    hits = tuple(factor_of[w] for w in outcomes)

    found = Counter(p for p in periods if p is not None)
    period = found.most_common(1)[0][0] if found else None
    factors = factors_from_period(m, M, period) if period is not None else None
    return ShorRun(M, m, n, decoded, exact_verified, exact_factor, outcomes, periods, hits, period, factors)
