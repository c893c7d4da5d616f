"""Normalized instance pricing, feasibility checking, and exact cost accounting.

Prices are normalized so that one reservation fee costs 1. An instance reserved
at slot i stays active through slot i + period - 1. Usage on a reserved
instance is billed at discount * on_demand_rate per slot; on-demand usage at
on_demand_rate per slot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleScheduleError, ReservationNeverJustifiedError
from .traces import DemandTrace

# absolute slack for comparing accumulated money sums; demand and reservation
# counts are exact integers and never need it
TOLERANCE = 1e-9


@dataclass(frozen=True)
class PricingModel:
    """Instance prices normalized to a reservation fee of 1.

    on_demand_rate: per-slot price of an on-demand instance, in units of the fee.
    discount: fraction of the on-demand rate still charged while running on a
        reservation (0 = reserved usage free, 1 = reserving buys no discount).
    period: number of billing slots a reservation stays active.
    """

    on_demand_rate: float
    discount: float
    period: int

    def __post_init__(self):
        if not 0.0 <= self.discount <= 1.0:
            raise ValueError(f"discount must lie in [0, 1], got {self.discount}")
        if not self.on_demand_rate > 0.0:
            raise ValueError(f"on_demand_rate must be positive, got {self.on_demand_rate}")
        if isinstance(self.period, bool) or not isinstance(self.period, int) or self.period < 1:
            raise ValueError(f"period must be an integer >= 1, got {self.period!r}")

    @classmethod
    def from_raw_prices(cls, on_demand: float, reservation_fee: float,
                        reserved_rate: float, period: int) -> "PricingModel":
        """Normalize raw per-slot prices (e.g. dollars) against an upfront fee.

        on_demand / reservation_fee becomes the normalized rate and
        reserved_rate / on_demand the discount.
        """
        if on_demand <= 0 or reservation_fee <= 0:
            raise ValueError("raw on-demand rate and reservation fee must be positive")
        if reserved_rate < 0:
            raise ValueError("raw reserved rate must be non-negative")
        return cls(on_demand_rate=on_demand / reservation_fee,
                   discount=reserved_rate / on_demand,
                   period=period)


def break_even(pricing: PricingModel) -> float:
    """On-demand spend at which one reservation pays for itself: 1 / (1 - discount).

    Spending c on demand versus 1 + discount * c reserved is indifferent at
    c = 1 / (1 - discount). At discount 1 no finite spend ever justifies a
    reservation and ReservationNeverJustifiedError is raised; callers that
    want a threshold may treat it as +inf (a policy that never reserves).
    """
    if pricing.discount >= 1.0:
        raise ReservationNeverJustifiedError(
            "discount is 1: reserved usage costs the same as on-demand, "
            "so no break-even spend exists")
    return 1.0 / (1.0 - pricing.discount)


@dataclass
class PurchaseSchedule:
    """Per-slot purchase decisions: new reservations and on-demand launches.

    metadata carries run provenance (e.g. the sampled threshold of a randomized
    policy) and is ignored by equality.
    """

    reservations: tuple[int, ...]
    on_demand: tuple[int, ...]
    metadata: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self.reservations = _as_counts(self.reservations, "reservations")
        self.on_demand = _as_counts(self.on_demand, "on_demand")
        if len(self.reservations) != len(self.on_demand):
            raise ValueError("reservations and on_demand must have the same length")

    def __len__(self) -> int:
        return len(self.reservations)

    @property
    def num_reservations(self) -> int:
        return sum(self.reservations)

    @classmethod
    def empty(cls, length: int) -> "PurchaseSchedule":
        return cls((0,) * length, (0,) * length)


def _as_counts(values, label: str) -> tuple[int, ...]:
    out = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ValueError(f"{label}[{i}] must be an integer, got {v!r}")
        if v < 0:
            raise ValueError(f"{label}[{i}] must be non-negative, got {v}")
        out.append(int(v))
    return tuple(out)


def check_feasibility(trace: DemandTrace, schedule: PurchaseSchedule,
                      period: int) -> tuple[bool, int | None]:
    """Check that every slot's demand is covered.

    Coverage at slot t is o_t plus all reservations made in the trailing
    period (slots t - period + 1 .. t; reservations before the trace count as
    zero). Returns (True, None) or (False, first violating 1-based slot).
    """
    if len(schedule) != len(trace):
        raise ValueError(f"schedule length {len(schedule)} does not match "
                         f"trace length {len(trace)}")
    r, o, d = schedule.reservations, schedule.on_demand, trace.demands
    active = 0
    for t in range(1, len(d) + 1):
        active += r[t - 1]
        if t - period >= 1:
            active -= r[t - period - 1]
        if o[t - 1] + active < d[t - 1]:
            return False, t
    return True, None


@dataclass(frozen=True)
class CostReport:
    """Exact cost decomposition of one schedule on one trace.

    total = on_demand_cost + reservation_fees + reserved_usage_cost;
    normalized_to_on_demand is filled in by the experiment harness.
    """

    total: float
    on_demand_cost: float
    reservation_fees: float
    reserved_usage_cost: float
    num_reservations: int
    normalized_to_on_demand: float | None = None


def evaluate_cost(trace: DemandTrace, schedule: PurchaseSchedule,
                  pricing: PricingModel) -> CostReport:
    """Exact cost of a feasible schedule.

    Per slot the charge is o_t * p for on-demand usage, r_t reservation fees,
    and discount * p * (d_t - o_t) for usage running on reservations. Raises
    InfeasibleScheduleError naming the first uncovered slot.
    """
    ok, slot = check_feasibility(trace, schedule, pricing.period)
    if not ok:
        raise InfeasibleScheduleError(slot)
    p, alpha = pricing.on_demand_rate, pricing.discount
    o_total = sum(schedule.on_demand)
    fees = float(schedule.num_reservations)
    on_demand_cost = p * o_total
    reserved_usage = alpha * p * (trace.total - o_total)
    return CostReport(
        total=on_demand_cost + fees + reserved_usage,
        on_demand_cost=on_demand_cost,
        reservation_fees=fees,
        reserved_usage_cost=reserved_usage,
        num_reservations=schedule.num_reservations,
    )
