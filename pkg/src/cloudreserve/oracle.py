"""Exact offline optima and competitive-ratio evaluation at desk scale.

Two independent solvers are provided on purpose: a value-iteration solver over
active-reservation profiles and an exhaustive enumerator. They share no code
path, so agreement between them is the primary defense against bugs in either.
Both are exponential in general; anything past the configured budgets raises
IntractableInstanceError rather than thrashing.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import IntractableInstanceError
from .pricing import TOLERANCE, PricingModel, PurchaseSchedule, evaluate_cost
from .policies import run_all_on_demand, run_threshold, run_threshold_windowed, sample_threshold
from .traces import DemandTrace

# value-iteration budget: profile count * trace length
DEFAULT_STATE_BUDGET = 2_000_000
# exhaustive-search budget: number of enumerated reservation vectors
DEFAULT_ENUM_BUDGET = 2_000_000

_ZERO = 1e-12


def solve_dp(trace: DemandTrace, pricing: PricingModel, *,
             state_budget: int = DEFAULT_STATE_BUDGET) -> tuple[float, PurchaseSchedule]:
    """Minimum feasible cost by forward value iteration.

    The state after slot t is the (period-1)-tuple of reservation counts still
    active at slots t+1 .. t+period-1 (non-increasing as reservations expire).
    Reserving r at the next slot shifts the profile left and adds r everywhere;
    the transition charges r fees plus the on-demand top-up priced per slot.
    Entries are capped at peak demand: an optimum never needs more concurrent
    reservations than the peak, because a reservation idle for its whole life
    can be dropped, saving its fee (>= 1). The a-priori profile count is
    choose(peak + period - 1, period - 1); instances where that times the trace
    length exceeds state_budget raise IntractableInstanceError.

    Returns (optimal cost, one optimal schedule).
    """
    period = pricing.period
    p, alpha = pricing.on_demand_rate, pricing.discount
    d = trace.demands
    T = len(d)
    peak = trace.peak

    if peak == 0:
        return 0.0, PurchaseSchedule.empty(T)
    if period == 1:
        # a reservation covers a single slot: pure per-slot, per-unit choice
        reserve = 1.0 + alpha * p < p
        r = tuple(d) if reserve else (0,) * T
        o = (0,) * T if reserve else tuple(d)
        cost = trace.total * min(p, 1.0 + alpha * p)
        return cost, PurchaseSchedule(r, o)

    n_states = math.comb(peak + period - 1, period - 1)
    if n_states * T > state_budget:
        raise IntractableInstanceError(
            f"value iteration needs {n_states} profiles x {T} slots = {n_states * T} "
            f"state visits, over the budget of {state_budget}; the profile space grows "
            f"combinatorially in peak demand and period")

    zero_state = (0,) * (period - 1)
    layer: dict[tuple[int, ...], float] = {zero_state: 0.0}
    # per slot: state -> (best value, predecessor state, reservations made)
    history: list[dict[tuple[int, ...], tuple[float, tuple[int, ...], int]]] = []
    for t in range(T):
        dt = d[t]
        nxt: dict[tuple[int, ...], tuple[float, tuple[int, ...], int]] = {}
        for prev, value in layer.items():
            carry = prev[0]  # reservations from before, still active now
            r_max = peak - (prev[1] if period > 2 else 0)
            for r in range(r_max + 1):
                shortfall = dt - r - carry
                o = shortfall if shortfall > 0 else 0
                cost = value + o * p + r + alpha * p * (dt - o)
                if r == 0:
                    state = prev[1:] + (0,)
                else:
                    state = tuple(v + r for v in prev[1:]) + (r,)
                known = nxt.get(state)
                if known is None or cost < known[0]:
                    nxt[state] = (cost, prev, r)
        history.append(nxt)
        layer = {s: v[0] for s, v in nxt.items()}

    best_state, best_value = min(layer.items(), key=lambda kv: (kv[1], kv[0]))
    reservations = [0] * T
    state = best_state
    for t in range(T - 1, -1, -1):
        _, state, reservations[t] = history[t][state]

    on_demand = [0] * T
    active = 0
    for t in range(1, T + 1):
        active += reservations[t - 1]
        if t - period >= 1:
            active -= reservations[t - period - 1]
        shortfall = d[t - 1] - active
        on_demand[t - 1] = shortfall if shortfall > 0 else 0
    schedule = PurchaseSchedule(tuple(reservations), tuple(on_demand))
    assert abs(evaluate_cost(trace, schedule, pricing).total - best_value) <= TOLERANCE
    return best_value, schedule


_CACHEABLE_ROWS = 4_000_000


def _cumulative_table(length: int, r_cap: int) -> np.ndarray:
    """Row t holds, for every vector in [0, r_cap]^length enumerated in
    lexicographic order, the running sum r_1 + ... + r_{t+1}."""
    count = (r_cap + 1) ** length
    base = np.arange(r_cap + 1, dtype=np.int32)
    table = np.empty((length, count), dtype=np.int32)
    acc = np.zeros(count, dtype=np.int32)
    for t in range(length):
        reps = (r_cap + 1) ** (length - 1 - t)
        digit = np.tile(np.repeat(base, reps), count // (reps * (r_cap + 1)))
        acc = acc + digit
        table[t] = acc
    return table


@lru_cache(maxsize=48)
def _cumulative_table_cached(length: int, r_cap: int) -> np.ndarray:
    return _cumulative_table(length, r_cap)


def _enumerate_costs(trace: DemandTrace, pricing: PricingModel, r_cap: int | None,
                     budget: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Costs and reservation totals of every vector in [0, r_cap]^T,
    lexicographic order; returns (costs, reservation_sums, r_cap)."""
    d = trace.demands
    T = len(d)
    if r_cap is None:
        r_cap = int(trace.peak)
    if r_cap < 0:
        raise ValueError("r_cap must be non-negative")
    count = (r_cap + 1) ** T
    if count > budget:
        raise IntractableInstanceError(
            f"exhaustive search would enumerate {count} schedules, over the budget "
            f"of {budget}")
    period = pricing.period
    p, alpha = pricing.on_demand_rate, pricing.discount

    if count <= _CACHEABLE_ROWS:
        csum = _cumulative_table_cached(T, r_cap)
    else:
        csum = _cumulative_table(T, r_cap)
    o_sum = np.zeros(count, dtype=np.int32)
    tmp = np.empty(count, dtype=np.int32)
    for t in range(T):
        np.subtract(d[t], csum[t], out=tmp)
        if t - period >= 0:
            tmp += csum[t - period]  # expired reservations leave the window
        np.maximum(tmp, 0, out=tmp)
        o_sum += tmp
    r_sum = csum[T - 1]
    costs = p * o_sum + r_sum + (alpha * p) * (trace.total - o_sum)
    return costs, r_sum, r_cap


def _decode_reservations(index: int, length: int, r_cap: int) -> tuple[int, ...]:
    out = []
    for t in range(length):
        reps = (r_cap + 1) ** (length - 1 - t)
        out.append((index // reps) % (r_cap + 1))
    return tuple(out)


def solve_brute_force(trace: DemandTrace, pricing: PricingModel, r_cap: int | None = None,
                      *, budget: int = DEFAULT_ENUM_BUDGET) -> tuple[float, PurchaseSchedule]:
    """Exhaustive oracle over all reservation vectors in [0, r_cap]^T.

    r_cap defaults to the trace's peak demand. The on-demand side carries no
    state across slots, so given the reservations the cheapest feasible
    completion is the pointwise top-up (d_t - active_t)^+. Ties are broken by
    returning the lexicographically smallest reservation vector, which keeps
    golden outputs stable.
    """
    costs, _, cap = _enumerate_costs(trace, pricing, r_cap, budget)
    k = int(np.argmin(costs))  # first minimum = lexicographically smallest
    reservations = _decode_reservations(k, len(trace), cap)
    on_demand = []
    active = 0
    for t in range(1, len(trace) + 1):
        active += reservations[t - 1]
        if t - pricing.period >= 1:
            active -= reservations[t - pricing.period - 1]
        on_demand.append(max(trace.demands[t - 1] - active, 0))
    schedule = PurchaseSchedule(reservations, tuple(on_demand))
    return float(costs[k]), schedule


def max_reservations_among_optima(trace: DemandTrace, pricing: PricingModel,
                                  r_cap: int | None = None, *,
                                  budget: int = DEFAULT_ENUM_BUDGET,
                                  tie_tol: float = TOLERANCE) -> int:
    """Largest reservation count among cost-optimal schedules.

    Optimal schedules are not unique; this scans every enumerated schedule
    whose cost is within tie_tol of the minimum and reports the maximum total
    reservations seen, the right-hand side for reservation-count comparisons
    against lazy online policies.
    """
    costs, r_sum, _ = _enumerate_costs(trace, pricing, r_cap, budget)
    mask = costs <= costs.min() + tie_tol
    return int(r_sum[mask].max())


def competitive_ratio(policy_cost: float, oracle_cost: float) -> float:
    """Ratio of a policy's cost to the offline optimum, 1.0 when both are zero.

    A zero optimum with nonzero policy cost cannot happen for the policies in
    this package (zero optimum means zero demand, on which every
    feasible-by-construction policy spends nothing) and raises ValueError.
    """
    if oracle_cost < 0:
        raise ValueError(f"oracle cost must be non-negative, got {oracle_cost}")
    if oracle_cost <= _ZERO:
        if policy_cost <= _ZERO:
            return 1.0
        raise ValueError(f"invariant violation: zero oracle cost with policy cost "
                         f"{policy_cost}")
    return policy_cost / oracle_cost


def expected_cost_exact(trace: DemandTrace, pricing: PricingModel, *,
                        windowed: bool = False, window: int = 0) -> float:
    """Exact expected cost of the randomized policy on one trace.

    The threshold policy only ever compares integer multiples of the on-demand
    rate against its threshold (strictly), so its behavior is piecewise
    constant in z on [k p, (k+1) p). The expectation is the sum over those
    intervals, clipped at the break-even point, of the policy cost at the
    representative z = k p times the interval's mass under the continuous
    density, plus the cost at break-even times the point mass there. The mass
    of [a, b) in closed form is (e^{(1-alpha) b} - e^{(1-alpha) a}) / (e-1+alpha).

    With windowed=True the windowed threshold policy is used (same threshold
    distribution). At discount 1 no finite threshold exists and the policy
    degenerates to never reserving.
    """
    p, alpha = pricing.on_demand_rate, pricing.discount
    if alpha >= 1.0:
        return evaluate_cost(trace, run_all_on_demand(trace, pricing), pricing).total

    def cost_at(z: float) -> float:
        if windowed:
            schedule = run_threshold_windowed(trace, pricing, z, window)
        else:
            schedule = run_threshold(trace, pricing, z)
        return evaluate_cost(trace, schedule, pricing).total

    beta = 1.0 / (1.0 - alpha)
    denom = math.e - 1.0 + alpha
    expected = cost_at(beta) * alpha / denom
    k = 0
    while k * p < beta:
        a = k * p
        b = min((k + 1) * p, beta)
        mass = (math.exp((1.0 - alpha) * b) - math.exp((1.0 - alpha) * a)) / denom
        expected += cost_at(a) * mass
        k += 1
    return expected


def expected_cost_monte_carlo(trace: DemandTrace, pricing: PricingModel, n_samples: int,
                              seed: int, *, windowed: bool = False,
                              window: int = 0) -> tuple[float, float]:
    """Monte-Carlo estimate of the randomized policy's expected cost.

    Cross-check for expected_cost_exact only; returns (mean, standard error).
    """
    rng = np.random.default_rng(seed)
    costs = np.empty(n_samples)
    for i in range(n_samples):
        z = sample_threshold(pricing, rng)
        if windowed:
            schedule = run_threshold_windowed(trace, pricing, z, window)
        else:
            schedule = run_threshold(trace, pricing, z)
        costs[i] = evaluate_cost(trace, schedule, pricing).total
    return float(costs.mean()), float(costs.std(ddof=1) / math.sqrt(n_samples))
