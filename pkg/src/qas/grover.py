"""Grover search on the physical qubit space.

The dynamics is written entirely with physical labels: the start state is
the Walsh-Hadamard image of the all-``B[0]`` state and the oracle reflects
about one physical basis state.  A label model only enters when a caller
asks which number that target represents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physical import LabelModel, LabelSets, PhysicalBasisState, w_inverse, w_table
from .register import NORM_TOL, ShapeError, value

DENSE_WH_LIMIT = 12

#: ``(sigma_x + sigma_z) / sqrt(2)`` with ``B[0]`` the ``sigma_z = +1`` value.
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def _require_qubits(labels: LabelSets) -> None:
    if labels.k != 2:
        raise ShapeError(f"Walsh-Hadamard needs k=2, got k={labels.k}")


def apply_walsh_hadamard(vec: np.ndarray, L: int) -> np.ndarray:
    """Apply the single-site Hadamard on every one of ``L`` sites."""
    out = np.asarray(vec, dtype=complex).reshape((2,) * L)
    for axis in range(L):
        out = np.moveaxis(np.tensordot(HADAMARD, out, axes=([1], [axis])), 0, axis)
    return out.reshape(-1)


def walsh_hadamard(labels: LabelSets) -> np.ndarray:
    """Dense Walsh-Hadamard matrix (small ``L`` only)."""
    _require_qubits(labels)
    if labels.L > DENSE_WH_LIMIT:
        raise ShapeError(f"dense Walsh-Hadamard limited to L <= {DENSE_WH_LIMIT}")
    mat = np.ones((1, 1))
    for _ in range(labels.L):
        mat = np.kron(HADAMARD, mat)
    return mat


def closed_form(L: int, r: int) -> float:
    """``sin^2((2r+1) theta)`` with ``sin(theta) = 2**(-L/2)``."""
    theta = math.asin(2.0 ** (-L / 2))
    return math.sin((2 * r + 1) * theta) ** 2


@dataclass(frozen=True)
class GroverRun:
    L: int
    target: PhysicalBasisState
    iterations: int
    probabilities: tuple[float, ...]  # after 0..iterations steps
    target_number: int | None = None

    @property
    def success_probability(self) -> float:
        return self.probabilities[-1]

    def to_json(self) -> dict:
        out = {
            "L": self.L,
            "target": self.target.to_json(),
            "iterations": self.iterations,
            "probabilities": list(self.probabilities),
            "success_probability": self.success_probability,
            "closed_form": closed_form(self.L, self.iterations),
        }
        if self.target_number is not None:
            out["target_number"] = self.target_number
        return out


def grover_iterate(
    labels: LabelSets, target: PhysicalBasisState, r: int, model: LabelModel | None = None
) -> GroverRun:
    """Run ``r`` iterations of ``-W I_up W I_target`` from the uniform state."""
    _require_qubits(labels)
    if r < 0:
        raise ValueError(f"iteration count must be non-negative, got {r}")
    L = labels.L
    t = target.index(labels)
    vec = np.zeros(2**L, dtype=complex)
    vec[0] = 1.0
    vec = apply_walsh_hadamard(vec, L)
    probs = [abs(vec[t]) ** 2]
    for _ in range(r):
        vec[t] = -vec[t]
        vec = apply_walsh_hadamard(vec, L)
        vec[0] = -vec[0]
        vec = -apply_walsh_hadamard(vec, L)
        norm = float(np.vdot(vec, vec).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise AssertionError(f"norm drifted to {norm}")
        probs.append(abs(vec[t]) ** 2)
    number = value(w_inverse(model, target)) if model is not None else None
    return GroverRun(L, target, r, tuple(float(p) for p in probs), number)


def grover_abstract_frame(model: LabelModel, target: PhysicalBasisState, r: int) -> tuple[float, ...]:
    """The same run carried out on number states, every operator conjugated by ``W^†``.

    Returns the success probabilities of the number state that ``target``
    decodes to; they agree with :func:`grover_iterate` for every model.
    """
    labels = model.labels
    _require_qubits(labels)
    L = labels.L
    W = w_table(model)  # abstract index -> physical index

    def to_phys(abs_vec: np.ndarray) -> np.ndarray:
        out = np.empty_like(abs_vec)
        out[W] = abs_vec
        return out

    def to_abs(phys_vec: np.ndarray) -> np.ndarray:
        return phys_vec[W]

    def wh(abs_vec: np.ndarray) -> np.ndarray:
        return to_abs(apply_walsh_hadamard(to_phys(abs_vec), L))

    t_abs = value(w_inverse(model, target))
    up_abs = int(np.flatnonzero(W == 0)[0])
    vec = np.zeros(2**L, dtype=complex)
    vec[up_abs] = 1.0
    vec = wh(vec)
    probs = [abs(vec[t_abs]) ** 2]
    for _ in range(r):
        vec[t_abs] = -vec[t_abs]
        vec = wh(vec)
        vec[up_abs] = -vec[up_abs]
        vec = -wh(vec)
        probs.append(abs(vec[t_abs]) ** 2)
    return tuple(float(p) for p in probs)


def parse_target(labels: LabelSets, bits: str) -> PhysicalBasisState:
    """A string of value indices, one per site, most-significant (last listed) site first.

    ``"101"`` with sites ``(x, y, z)`` puts ``B[1]`` on ``z`` and ``x``.
    """
    bits = bits.strip()
    if len(bits) != labels.L or any(c not in "0123456789"[: labels.k] for c in bits):
        raise ValueError(f"target {bits!r} must have {labels.L} characters from 0..{labels.k - 1}")
    return PhysicalBasisState({a: labels.B[int(c)] for a, c in zip(reversed(labels.A), bits)})
