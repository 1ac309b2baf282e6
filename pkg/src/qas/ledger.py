"""Elementary-operation counters shared by the operator evaluators."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass
class ResourceLedger:
    """Counts of elementary steps.

    One *u-step* is a single-position increment (or decrement) mod k and one
    projector evaluation is one test of a digit against ``k - 1``; together
    they are the factors of the explicit successor formula.  The remaining
    counters record higher-level invocations so composite costs can be read
    back.
    """

    u_steps: int = 0
    projector_evals: int = 0
    successor_calls: int = 0
    plus_calls: int = 0
    q_shifts: int = 0
    q_digit_ops: int = 0

    def __add__(self, other: ResourceLedger) -> ResourceLedger:
        return ResourceLedger(**{f.name: getattr(self, f.name) + getattr(other, f.name) for f in fields(self)})

    def merge(self, other: ResourceLedger) -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    @property
    def elementary(self) -> int:
        """u-steps plus digit moves of the Q shifts; the headline cost."""
        return self.u_steps + self.q_digit_ops

    def as_dict(self) -> dict[str, int]:
        return asdict(self)
