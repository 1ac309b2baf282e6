"""Register shapes, digit strings, basis states and sparse statevectors.

Digits are stored little-endian in the position index: position ``j = 1`` is
the least significant digit (weight ``k**0``).  Human-readable strings use the
opposite order, most significant digit first.

A multi-register basis state is the concatenation of its parts; register ``h``
(1-based) occupies positions ``(h-1)*L + 1 .. h*L`` so its value carries
weight ``k**((h-1)*L)`` in the flat basis index.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

DEFAULT_DIM_CAP = 2**24
NORM_TOL = 1e-9
AMPLITUDE_CUTOFF = 1e-12


class ShapeError(ValueError):
    """Raised for invalid or incompatible register shapes."""


class DimensionCapError(ShapeError):
    """Raised when a shape would exceed the configured dimension cap."""


def dimension_cap() -> int:
    """Current dimension cap, overridable through ``QAS_DIM_CAP``."""
    raw = os.environ.get("QAS_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ShapeError(f"QAS_DIM_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ShapeError(f"QAS_DIM_CAP must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class RegisterShape:
    """``registers`` registers of ``L`` base-``k`` digits each."""

    k: int
    L: int
    registers: int = 1
    cap: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("k", "L", "registers"):
            val = getattr(self, name)
            if not isinstance(val, (int, np.integer)) or isinstance(val, bool):
                raise ShapeError(f"{name} must be an integer, got {val!r}")
        if self.k < 2:
            # unary registers are excluded outright
            raise ShapeError(f"base k must be >= 2, got {self.k}")
        if self.L < 1:
            raise ShapeError(f"length L must be >= 1, got {self.L}")
        if self.registers < 1:
            raise ShapeError(f"register count must be >= 1, got {self.registers}")
        cap = dimension_cap() if self.cap is None else self.cap
        # exact integer arithmetic, no float overflow
        dim = self.k ** (self.registers * self.L)
        if dim > cap:
            raise DimensionCapError(
                f"dimension {self.k}^{self.registers * self.L} exceeds cap {cap}"
            )

    @property
    def positions(self) -> int:
        return self.registers * self.L

    @property
    def dimension(self) -> int:
        return self.k**self.positions

    @property
    def modulus(self) -> int:
        """Size of one register's value range, ``k**L``."""
        return self.k**self.L

    def single(self) -> RegisterShape:
        return RegisterShape(self.k, self.L, 1, cap=self.cap)

    def with_registers(self, registers: int) -> RegisterShape:
        return RegisterShape(self.k, self.L, registers, cap=self.cap)

    def check_position(self, j: int) -> None:
        if not 1 <= j <= self.positions:
            raise ShapeError(f"position {j} outside 1..{self.positions}")

    def check_register(self, h: int) -> None:
        if not 1 <= h <= self.registers:
            raise ShapeError(f"register {h} outside 1..{self.registers}")

    def digits_table(self) -> np.ndarray:
        """All basis indices as digit rows, shape ``(dimension, positions)``."""
        idx = np.arange(self.dimension, dtype=np.int64)
        weights = self.k ** np.arange(self.positions, dtype=np.int64)
        return (idx[:, None] // weights[None, :]) % self.k

    def register_values(self, indices: np.ndarray, h: int) -> np.ndarray:
        """Value of register ``h`` for each basis index in ``indices``."""
        self.check_register(h)
        return (np.asarray(indices) // self.modulus ** (h - 1)) % self.modulus

    def digit(self, indices: np.ndarray | int, j: int) -> np.ndarray | int:
        """Digit at global position ``j`` of each basis index."""
        return (indices // self.k ** (j - 1)) % self.k

    def join(self, values: Sequence[int]) -> int:
        """Flat basis index of the register values ``values`` (register 1 first)."""
        if len(values) != self.registers:
            raise ShapeError(f"expected {self.registers} register values, got {len(values)}")
        out = 0
        for h, v in enumerate(values):
            if not 0 <= v < self.modulus:
                raise ValueError(f"register value {v} outside [0, {self.modulus - 1}]")
            out += v * self.modulus**h
        return out

    def split(self, index: int) -> tuple[int, ...]:
        """Register values of a flat basis index (register 1 first)."""
        if not 0 <= index < self.dimension:
            raise ValueError(f"basis index {index} outside [0, {self.dimension - 1}]")
        return tuple((index // self.modulus**h) % self.modulus for h in range(self.registers))


@dataclass(frozen=True)
class DigitString:
    """A map from positions ``1..L`` to digits ``0..k-1``, stored j-ascending."""

    k: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if self.k < 2:
            raise ShapeError(f"base k must be >= 2, got {self.k}")
        if not self.digits:
            raise ShapeError("digit string must have at least one position")
        for pos, d in enumerate(self.digits, start=1):
            if not 0 <= d < self.k:
                raise ValueError(f"digit {d} at position {pos} outside [0, {self.k - 1}]")

    @property
    def L(self) -> int:
        return len(self.digits)

    def __call__(self, j: int) -> int:
        """Digit at position ``j`` (1-based)."""
        if not 1 <= j <= self.L:
            raise ShapeError(f"position {j} outside 1..{self.L}")
        return self.digits[j - 1]

    def display(self) -> str:
        """Most-significant-first rendering, e.g. ``(0,1,1)`` -> ``"110"``."""
        sep = "" if self.k <= 10 else ","
        return sep.join(str(d) for d in reversed(self.digits))

    @classmethod
    def parse(cls, text: str, k: int, L: int | None = None) -> DigitString:
        """Parse a most-significant-first string such as ``"101"`` or ``"2,0,11"``."""
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        try:
            msf = [int(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"not a digit string: {text!r}") from exc
        if L is not None and len(msf) != L:
            raise ShapeError(f"expected {L} digits, got {len(msf)} in {text!r}")
        return cls(k, tuple(reversed(msf)))


def encode(n: int, shape: RegisterShape | tuple[int, int]) -> DigitString:
    """Little-endian base-``k`` digits of ``n`` in a length-``L`` register."""
    k, L = (shape.k, shape.L) if isinstance(shape, RegisterShape) else shape
    if not 0 <= n < k**L:
        raise ValueError(f"{n} outside [0, {k**L - 1}] for k={k}, L={L}")
    digits = []
    for _ in range(L):
        n, d = divmod(n, k)
        digits.append(d)
    return DigitString(k, tuple(digits))


def value(s: DigitString) -> int:
    return sum(d * s.k**pos for pos, d in enumerate(s.digits))


@dataclass(frozen=True)
class BasisState:
    """Concatenation of equal-length digit strings, one per register."""

    parts: tuple[DigitString, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ShapeError("a basis state needs at least one register")
        k, L = self.parts[0].k, self.parts[0].L
        for p in self.parts[1:]:
            if (p.k, p.L) != (k, L):
                raise ShapeError(f"register shape ({p.k},{p.L}) differs from ({k},{L})")

    @property
    def shape(self) -> RegisterShape:
        p = self.parts[0]
        return RegisterShape(p.k, p.L, len(self.parts))

    def string(self) -> DigitString:
        """The concatenated string on positions ``1..m*L``."""
        return DigitString(self.parts[0].k, tuple(d for p in self.parts for d in p.digits))

    def __call__(self, h: int) -> int:
        return self.string()(h)

    @property
    def index(self) -> int:
        return value(self.string())

    @classmethod
    def from_index(cls, index: int, shape: RegisterShape) -> BasisState:
        return cls(tuple(encode(v, shape) for v in shape.split(index)))

    @classmethod
    def from_values(cls, values: Sequence[int], shape: RegisterShape) -> BasisState:
        return cls(tuple(encode(v, shape) for v in values))

    def values(self) -> tuple[int, ...]:
        return tuple(value(p) for p in self.parts)


def concat(s: DigitString, w: DigitString) -> BasisState:
    if (s.k, s.L) != (w.k, w.L):
        raise ShapeError(f"cannot concatenate shapes ({s.k},{s.L}) and ({w.k},{w.L})")
    return BasisState((s, w))


@dataclass(frozen=True)
class StateVector:
    """Normalized sparse amplitudes keyed by flat basis index."""

    shape: RegisterShape
    amplitudes: Mapping[int, complex]

    def __post_init__(self) -> None:
        amps = {}
        for i, a in self.amplitudes.items():
            i = int(i)
            if not 0 <= i < self.shape.dimension:
                raise ValueError(f"basis index {i} outside [0, {self.shape.dimension - 1}]")
            amps[i] = complex(a)
        norm = math.fsum(abs(a) ** 2 for a in amps.values())
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"statevector norm^2 {norm!r} differs from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", MappingProxyType(dict(sorted(amps.items()))))

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(a) ** 2 for a in self.amplitudes.values()))

    def __getitem__(self, index: int) -> complex:
        return self.amplitudes.get(index, 0j)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape.dimension, dtype=complex)
        for i, a in self.amplitudes.items():
            out[i] = a
        return out

    @classmethod
    def from_dense(cls, shape: RegisterShape, vec: np.ndarray) -> StateVector:
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (shape.dimension,):
            raise ShapeError(f"dense vector of length {vec.shape} for dimension {shape.dimension}")
        nz = np.flatnonzero(np.abs(vec) > AMPLITUDE_CUTOFF)
        return cls(shape, {int(i): complex(vec[i]) for i in nz})

    @classmethod
    def uniform(cls, shape: RegisterShape, indices: Iterable[int]) -> StateVector:
        idx = sorted(set(int(i) for i in indices))
        amp = 1 / math.sqrt(len(idx))
        return cls(shape, {i: amp for i in idx})

    def allclose(self, other: StateVector, tol: float = NORM_TOL) -> bool:
        if self.shape != other.shape:
            return False
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self[i] - other[i]) <= tol for i in keys)

    def to_json(self) -> dict:
        return {
            "k": self.shape.k,
            "L": self.shape.L,
            "registers": self.shape.registers,
            "amplitudes": [
                {"index": i, "re": a.real, "im": a.imag}
                for i, a in self.amplitudes.items()
                if abs(a) >= AMPLITUDE_CUTOFF
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping) -> StateVector:
        shape = RegisterShape(int(data["k"]), int(data["L"]), int(data.get("registers", 1)))
        prev = -1
        amps = {}
        for entry in data["amplitudes"]:
            i = int(entry["index"])
            if i <= prev:
                raise ValueError(f"amplitude indices must be strictly increasing (got {i} after {prev})")
            prev = i
            amps[i] = complex(float(entry["re"]), float(entry["im"]))
        return cls(shape, amps)


def basis_state_vector(b: BasisState | int, shape: RegisterShape | None = None) -> StateVector:
    """Statevector with a single unit amplitude on ``b``."""
    if isinstance(b, BasisState):
        return StateVector(b.shape, {b.index: 1 + 0j})
    if shape is None:
        raise ShapeError("a shape is required when b is a bare index")
    return StateVector(shape, {int(b): 1 + 0j})
