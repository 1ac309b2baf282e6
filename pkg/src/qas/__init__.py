"""Digit-register arithmetic built from permutation operators on qudit spaces."""

__version__ = "0.1.0"

from .ledger import ResourceLedger
from .register import (
    BasisState,
    DigitString,
    RegisterShape,
    ShapeError,
    StateVector,
    encode,
    value,
)
from .permutation import PermutationOperator, power
from .successor import successor, successor_dagger
from .arithmetic import add, multiply, plus, times

__all__ = [
    "ResourceLedger",
    "BasisState",
    "DigitString",
    "RegisterShape",
    "ShapeError",
    "StateVector",
    "encode",
    "value",
    "PermutationOperator",
    "power",
    "successor",
    "successor_dagger",
    "add",
    "multiply",
    "plus",
    "times",
]
