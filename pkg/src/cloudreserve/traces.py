"""Demand traces: CSV ingestion, synthetic generators, and fluctuation-based grouping."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import TraceParseError

SYNTHETIC_PATTERNS = ("constant", "pulse", "diurnal", "bursty")

# sigma/mu cut points between the stable / medium / high fluctuation groups
MEDIUM_FLUCTUATION_THRESHOLD = 1.0
HIGH_FLUCTUATION_THRESHOLD = 5.0


@dataclass(frozen=True)
class DemandTrace:
    """Non-negative integer instance demand per billing slot, slots numbered from 1."""

    demands: tuple[int, ...]

    def __post_init__(self):
        if len(self.demands) == 0:
            raise ValueError("a demand trace needs at least one slot")
        vals = []
        for i, v in enumerate(self.demands):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ValueError(f"demand at slot {i + 1} must be an integer, got {v!r}")
            if v < 0:
                raise ValueError(f"demand at slot {i + 1} must be non-negative, got {v}")
            vals.append(int(v))
        object.__setattr__(self, "demands", tuple(vals))

    def __len__(self) -> int:
        return len(self.demands)

    def demand_at(self, slot: int) -> int:
        """Demand at a 1-based slot index; zero outside the trace."""
        if 1 <= slot <= len(self.demands):
            return self.demands[slot - 1]
        return 0

    @property
    def total(self) -> int:
        return sum(self.demands)

    @property
    def peak(self) -> int:
        return max(self.demands)


class FluctuationGroup(str, Enum):
    HIGH = "high_fluctuation"      # sigma/mu >= 5
    MEDIUM = "medium_fluctuation"  # 1 <= sigma/mu < 5
    STABLE = "stable"              # sigma/mu < 1


@dataclass(frozen=True)
class TraceStats:
    mean: float
    std_dev: float
    fluctuation: float
    group: FluctuationGroup


def classify(trace: DemandTrace) -> TraceStats:
    """Group a trace by its demand fluctuation level sigma/mu.

    Uses the population standard deviation over the full trace. An all-zero
    trace has undefined sigma/mu; it is reported with fluctuation 0 and grouped
    as stable.
    """
    arr = np.asarray(trace.demands, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std())
    fluctuation = std / mean if mean > 0 else 0.0
    if fluctuation >= HIGH_FLUCTUATION_THRESHOLD:
        group = FluctuationGroup.HIGH
    elif fluctuation >= MEDIUM_FLUCTUATION_THRESHOLD:
        group = FluctuationGroup.MEDIUM
    else:
        group = FluctuationGroup.STABLE
    return TraceStats(mean=mean, std_dev=std, fluctuation=fluctuation, group=group)


def _parse_int(token: str, line_no: int, label: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise TraceParseError(line_no, f"non-integer {label} {token!r}") from None


def parse_trace(source: str | bytes) -> DemandTrace:
    """Parse a demand trace from CSV text.

    Two layouts are accepted:
      * headerless: one non-negative integer per line, slot index implicit
        starting at 1;
      * `t,demand` rows (with or without the literal `t,demand` header line),
        where t must run 1, 2, 3, ... without duplicates or gaps.

    Blank lines are ignored. Errors carry the offending 1-based line number;
    missing slots are an error, never an implicit zero.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    else:
        text = source.lstrip("﻿")
    rows = [(no, line.strip()) for no, line in enumerate(text.splitlines(), start=1)
            if line.strip()]
    if not rows:
        raise TraceParseError(1, "empty trace")

    has_header = rows[0][1].replace(" ", "").lower() == "t,demand"
    data = rows[1:] if has_header else rows
    if not data:
        raise TraceParseError(rows[0][0], "header present but no demand rows")

    demands: list[int] = []
    if has_header or "," in data[0][1]:
        expected = 1
        for line_no, line in data:
            parts = [tok.strip() for tok in line.split(",")]
            if len(parts) != 2:
                raise TraceParseError(line_no, f"expected 't,demand' row, got {line!r}")
            t = _parse_int(parts[0], line_no, "slot index")
            demand = _parse_int(parts[1], line_no, "demand")
            if demand < 0:
                raise TraceParseError(line_no, f"negative demand {demand}")
            if t < expected:
                raise TraceParseError(line_no, f"duplicate or out-of-order slot index {t}")
            if t > expected:
                raise TraceParseError(line_no, f"gap in slot indices: expected {expected}, got {t}")
            demands.append(demand)
            expected += 1
    else:
        for line_no, line in data:
            if "," in line:
                raise TraceParseError(line_no, "mixed layouts: integer-per-line trace "
                                               "contains a 't,demand' row")
            demand = _parse_int(line, line_no, "demand")
            if demand < 0:
                raise TraceParseError(line_no, f"negative demand {demand}")
            demands.append(demand)
    return DemandTrace(tuple(demands))


def serialize_trace(trace: DemandTrace, headered: bool = False) -> str:
    """Render a trace in one of the two accepted CSV layouts."""
    if headered:
        lines = ["t,demand"] + [f"{t},{d}" for t, d in enumerate(trace.demands, start=1)]
    else:
        lines = [str(d) for d in trace.demands]
    return "\n".join(lines) + "\n"


def read_trace(path: str | Path) -> DemandTrace:
    return parse_trace(Path(path).read_bytes())


def write_trace(trace: DemandTrace, path: str | Path, headered: bool = False) -> None:
    Path(path).write_text(serialize_trace(trace, headered=headered), encoding="utf-8")


def generate_synthetic(pattern: str, length: int, amplitude: int, seed: int, *,
                       spacing: int = 30, diurnal_period: int = 24,
                       mean_on: float = 3.0, mean_off: float = 12.0) -> DemandTrace:
    """Generate a deterministic synthetic demand trace.

    Patterns:
      * constant: every slot demands `amplitude`;
      * pulse: isolated spikes of height `amplitude` every `spacing` slots,
        starting at slot 1 (pick spacing > 2 * reservation period to keep the
        spikes isolated from each other);
      * diurnal: integer-rounded sinusoid between 0 and `amplitude` with a
        `diurnal_period`-slot period;
      * bursty: on/off process, geometric dwell times with means `mean_on` /
        `mean_off` drawn from the seeded generator.

    The result is a pure function of the arguments.
    """
    if pattern not in SYNTHETIC_PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; expected one of {SYNTHETIC_PATTERNS}")
    if length < 1:
        raise ValueError("length must be >= 1")
    if amplitude < 0:
        raise ValueError("amplitude must be >= 0")

    if pattern == "constant":
        d = np.full(length, amplitude, dtype=int)
    elif pattern == "pulse":
        if spacing < 1:
            raise ValueError("spacing must be >= 1")
        d = np.zeros(length, dtype=int)
        d[0::spacing] = amplitude
    elif pattern == "diurnal":
        if diurnal_period < 1:
            raise ValueError("diurnal_period must be >= 1")
        phase = 2.0 * np.pi * np.arange(length) / diurnal_period
        d = np.rint(amplitude * (1.0 + np.sin(phase)) / 2.0).astype(int)
    else:  # bursty
        if mean_on < 1.0 or mean_off < 1.0:
            raise ValueError("geometric dwell means must be >= 1 slot")
        rng = np.random.default_rng(seed)
        d = np.zeros(length, dtype=int)
        t, on = 0, False
        while t < length:
            dwell = int(rng.geometric(1.0 / (mean_on if on else mean_off)))
            if on:
                d[t:t + dwell] = amplitude
            t += dwell
            on = not on
    return DemandTrace(tuple(int(v) for v in d))
