"""Run-wide defaults shared by the decision procedure and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

BITS_UNITS = "bits"
NATS_UNITS = "nats"


@dataclass(frozen=True)
class RunConfig:
    """Every knob a full run exposes, with the library-wide defaults.

    tol            capacity bracket width (bits) before a report is accepted
    peak_tol       divergence slack that still counts a symbol as peak
    violation_tol  negative search margin treated as a real violation (bits)
    cap_eq_tol     capacity difference treated as equality (bits)
    seed           master seed for searches and sampling
    starts         random restarts per simplex search
    samples        auxiliary joints drawn per region sample
    cardinalities  (|U|, |V|, |W|) for sampled auxiliaries
    units          bits or nats in reports and serialized output
    """

    tol: float = 1e-10
    peak_tol: float = 1e-6
    violation_tol: float = 1e-7
    cap_eq_tol: float = 1e-6
    seed: int = 0
    starts: int = 64
    samples: int = 2000
    cardinalities: tuple[int, int, int] = (2, 2, 2)
    units: str = BITS_UNITS

    def __post_init__(self):
        for name in ("tol", "peak_tol", "violation_tol", "cap_eq_tol"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.units not in (BITS_UNITS, NATS_UNITS):
            raise ValueError(f"units must be {BITS_UNITS!r} or {NATS_UNITS!r}, got {self.units!r}")
        if self.samples < 0 or self.starts < 0:
            raise ValueError("starts and samples must be nonnegative")
