"""Online purchasing policies.

All policies walk the trace slot by slot and decide, with no knowledge of
future demand (beyond an optional short prediction window), how many instances
to reserve and how many to launch on demand. Every policy returns a schedule
that is feasible by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ReservationNeverJustifiedError
from .pricing import PricingModel, PurchaseSchedule, break_even
from .traces import DemandTrace


class ReservationLedger:
    """Per-slot reservation counters x_i for the threshold policies.

    Counters merge two kinds of increments: actual reservations (raised over
    the slots a new reservation covers, the current slot onward) and phantom
    credits (raised over strictly past slots to mark overspent history as
    already compensated). Slot indices may run past both ends of the trace;
    missing entries read as zero and counters never decrease.
    """

    __slots__ = ("period", "counters")

    def __init__(self, period: int):
        self.period = period
        self.counters: dict[int, int] = {}

    def count(self, slot: int) -> int:
        return self.counters.get(slot, 0)

    def bump_range(self, lo: int, hi: int) -> None:
        """Increment x_i for every slot lo..hi inclusive."""
        c = self.counters
        for i in range(lo, hi + 1):
            c[i] = c.get(i, 0) + 1

    def uncovered(self, trace: DemandTrace, lo: int, hi: int) -> int:
        """Slots in lo..hi whose demand exceeds the counter (demand 0 off-trace)."""
        c = self.counters
        demand_at = trace.demand_at
        return sum(1 for i in range(lo, hi + 1) if demand_at(i) > c.get(i, 0))


@dataclass(frozen=True)
class PolicyConfig:
    """Knobs for the threshold family.

    threshold None means "use the break-even spend"; window 0 means no demand
    prediction, positive selects the windowed variants; seed drives the
    randomized policies.
    """

    threshold: float | None = None
    window: int = 0
    seed: int = 0

    def validate(self, pricing: PricingModel) -> None:
        if not 0 <= self.window < pricing.period:
            raise ConfigError(f"window must lie in [0, period), got {self.window} "
                              f"with period {pricing.period}")
        if self.threshold is not None:
            if self.threshold < 0:
                raise ConfigError(f"threshold must be non-negative, got {self.threshold}")
            if pricing.discount < 1.0 and self.threshold > break_even(pricing) + 1e-12:
                raise ConfigError(f"threshold {self.threshold} exceeds the break-even "
                                  f"spend {break_even(pricing)}")


def run_threshold(trace: DemandTrace, pricing: PricingModel, z: float) -> PurchaseSchedule:
    """Threshold policy: reserve once trailing on-demand overspend exceeds z.

    At each slot t the policy looks at the trailing reservation period
    [t - period + 1, t] and counts the slots whose demand exceeds the
    reservation counter, i.e. the slots where one more on-demand instance was
    (or is being) used at the lowest uncovered demand level. While that usage
    priced on demand exceeds z, it reserves one instance: the counter rises on
    [t, t + period - 1] (a real reservation, usable from now on) and on
    [t - period + 1, t - 1] (a phantom credit so one overspend triggers at most
    one reservation). Demand left uncovered runs on demand. Each loop turn
    raises every counter in the window, so the loop stops after at most the
    window's peak demand iterations. z = break_even(pricing) gives the
    deterministic online strategy; smaller z reserves more aggressively, z = 0
    reserves on any on-demand use at all.
    """
    return _run_threshold_loop(trace, pricing, z, window=None)


def run_threshold_windowed(trace: DemandTrace, pricing: PricingModel, z: float,
                           w: int) -> PurchaseSchedule:
    """Threshold policy with a w-slot demand prediction window.

    Identical loop shape to run_threshold, but the inspected reservation
    period is shifted forward to [t + w - period + 1, t + w] (demand beyond the
    trace end reads as zero) and reservations are only made while the current
    slot itself is not yet covered (x_t < d_t), which also bounds the loop by
    d_t. Phantom credits cover [t + w - period + 1, t - 1]; actual reservations
    still cover [t, t + period - 1]. Note that w = 0 keeps the x_t < d_t guard
    and is therefore not the same policy as run_threshold.
    """
    if not 0 <= w < pricing.period:
        raise ConfigError(f"prediction window must lie in [0, period), got {w} "
                          f"with period {pricing.period}")
    return _run_threshold_loop(trace, pricing, z, window=w)


def _run_threshold_loop(trace: DemandTrace, pricing: PricingModel, z: float,
                        window: int | None) -> PurchaseSchedule:
    if z < 0:
        raise ValueError(f"threshold must be non-negative, got {z}")
    period = pricing.period
    p = pricing.on_demand_rate
    w = 0 if window is None else window
    guarded = window is not None

    T = len(trace)
    d = trace.demands
    demand_at = trace.demand_at
    ledger = ReservationLedger(period)
    x = ledger.counters
    r = [0] * T
    o = [0] * T

    # uncovered = slots in the inspected window with demand above the counter,
    # seeded with the pre-loop window [w - period + 1, w] (non-empty when w > 0)
    uncovered = ledger.uncovered(trace, w - period + 1, w)
    active = 0  # actual reservations covering the current slot
    for t in range(1, T + 1):
        hi = t + w
        lo = hi - period + 1
        # slide the window: drop slot lo-1, admit slot hi
        if demand_at(lo - 1) > x.get(lo - 1, 0):
            uncovered -= 1
        if demand_at(hi) > x.get(hi, 0):
            uncovered += 1
        if t - period >= 1:
            active -= r[t - period - 1]
        while uncovered * p > z and (not guarded or x.get(t, 0) < d[t - 1]):
            r[t - 1] += 1
            active += 1
            # actual cover [t, t+period-1] plus phantom [lo, t-1]: contiguous
            ledger.bump_range(lo, t + period - 1)
            uncovered = ledger.uncovered(trace, lo, hi)
        # by construction phantoms only ever land strictly in the past, so the
        # counter at the slot being finalized equals the live reservation count
        assert x.get(t, 0) == active, "ledger desync at current slot"
        shortfall = d[t - 1] - x.get(t, 0)
        o[t - 1] = shortfall if shortfall > 0 else 0
    return PurchaseSchedule(tuple(r), tuple(o))


def sample_threshold(pricing: PricingModel, seed: int | np.random.Generator) -> float:
    """Draw a reservation threshold from the cost-optimal mixed distribution.

    The draw follows the density (1-a) e^{(1-a) z} / (e - 1 + a) on
    [0, break_even) plus a point mass a / (e - 1 + a) at break_even exactly,
    where a is the usage discount. Sampling is by inverse transform: with
    u uniform on [0, 1), values below the continuous mass (e-1)/(e-1+a) map
    through the inverse CDF z = ln(1 + u (e-1+a)) / (1-a) (the CDF of the
    continuous part is F(z) = (e^{(1-a) z} - 1)/(e-1+a)); the rest return
    break_even. At a = 0 this reduces to the classical rent-or-buy density
    e^z / (e-1) on [0, 1) with no atom. Deterministic given an integer seed;
    a Generator may be passed for repeated draws.
    """
    alpha = pricing.discount
    if alpha >= 1.0:
        raise ReservationNeverJustifiedError(
            "discount is 1: no reservation regime, the threshold distribution degenerates")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    beta = break_even(pricing)
    denom = math.e - 1.0 + alpha
    u = rng.random()
    if u < (math.e - 1.0) / denom:
        return math.log1p(u * denom) / (1.0 - alpha)
    return beta


def run_randomized(trace: DemandTrace, pricing: PricingModel, seed: int) -> PurchaseSchedule:
    """Sample a threshold, then run the threshold policy with it.

    The sampled threshold and the seed are recorded in schedule metadata so
    runs are reproducible.
    """
    z = sample_threshold(pricing, seed)
    schedule = run_threshold(trace, pricing, z)
    schedule.metadata.update(sampled_threshold=z, seed=seed)
    return schedule


def run_randomized_windowed(trace: DemandTrace, pricing: PricingModel, w: int,
                            seed: int) -> PurchaseSchedule:
    """Windowed counterpart of run_randomized (same threshold distribution)."""
    z = sample_threshold(pricing, seed)
    schedule = run_threshold_windowed(trace, pricing, z, w)
    schedule.metadata.update(sampled_threshold=z, seed=seed, window=w)
    return schedule


def run_all_on_demand(trace: DemandTrace, pricing: PricingModel) -> PurchaseSchedule:
    """Never reserve; serve every unit on demand."""
    T = len(trace)
    return PurchaseSchedule((0,) * T, trace.demands)


def run_all_reserved(trace: DemandTrace, pricing: PricingModel) -> PurchaseSchedule:
    """Serve every unit via reservations, topping up whenever coverage falls short."""
    period = pricing.period
    T = len(trace)
    d = trace.demands
    r = [0] * T
    active = 0
    for t in range(1, T + 1):
        if t - period >= 1:
            active -= r[t - period - 1]
        shortfall = d[t - 1] - active
        if shortfall > 0:
            r[t - 1] = shortfall
            active += shortfall
    return PurchaseSchedule(tuple(r), (0,) * T)


def run_separate(trace: DemandTrace, pricing: PricingModel) -> PurchaseSchedule:
    """Per-demand-level decomposition into independent single-instance problems.

    Demand level k gets its own 0/1 trace I(d_t >= k) and runs the break-even
    threshold policy on it with a private ledger; the level schedules are
    summed. Capacity reserved for one level is never multiplexed with another,
    which is exactly why this baseline overbuys whenever demand could share
    instances over time.
    """
    T = len(trace)
    peak = trace.peak
    if peak == 0:
        return PurchaseSchedule.empty(T)
    try:
        z = break_even(pricing)
    except ReservationNeverJustifiedError:
        z = math.inf
    r = [0] * T
    o = [0] * T
    for level in range(1, peak + 1):
        level_trace = DemandTrace(tuple(1 if v >= level else 0 for v in trace.demands))
        sched = run_threshold(level_trace, pricing, z)
        for i in range(T):
            r[i] += sched.reservations[i]
            o[i] += sched.on_demand[i]
    return PurchaseSchedule(tuple(r), tuple(o), metadata={"virtual_users": peak})
