# Offline oracles and worst-case guarantees: two independent exact solvers,
# the competitive ratios they certify, and an adversarial demand sequence that
# pushes the deterministic policy close to its worst case.

import math

import numpy as np

from cloudreserve import (DemandTrace, IntractableInstanceError, PricingModel,
                          break_even, competitive_ratio, evaluate_cost,
                          expected_cost_exact, run_threshold, solve_brute_force,
                          solve_dp)

pricing = PricingModel(on_demand_rate=1.0, discount=0.5, period=3)
trace = DemandTrace((1, 1, 1))

# Two routes to the optimum: value iteration over active-reservation profiles,
# and exhaustive search over every reservation vector. They are implemented
# independently and must agree wherever both run.
dp_cost, dp_sched = solve_dp(trace, pricing)
bf_cost, bf_sched = solve_brute_force(trace, pricing)
print("value iteration:", dp_cost, dp_sched.reservations)
print("exhaustive:     ", bf_cost, bf_sched.reservations)

online = evaluate_cost(trace, run_threshold(trace, pricing, break_even(pricing)),
                       pricing).total
print("online policy:  ", online, "-> ratio", competitive_ratio(online, dp_cost))

# Both are exponential; past the budget they refuse rather than thrash.
big = DemandTrace((4,) * 60)
try:
    solve_dp(big, PricingModel(0.1, 0.5, 40))
except IntractableInstanceError as err:
    print("\nlarge instance:", err)

# Guarantee curves: the deterministic policy never exceeds (2 - discount)
# times optimal; the randomized mixture improves that to e/(e-1+discount) in
# expectation. The two meet at discount 1, where reserving buys nothing.
print("\ndiscount   deterministic   randomized")
for alpha in np.arange(0.0, 1.01, 0.25):
    print(f"  {alpha:.2f}       {2 - alpha:.3f}          "
          f"{math.e / (math.e - 1 + alpha):.3f}")

# An adversary can force the deterministic policy close to its bound: demand
# one instance exactly while the policy has not reserved yet, then stop the
# moment it buys. The policy pays nearly a full break-even spend on demand
# plus the fee; hindsight would have reserved on day one.
p, alpha = 0.01, 0.5
adv_pricing = PricingModel(p, alpha, 201)
beta = break_even(adv_pricing)
demands = []
while True:
    demands.append(1)
    if run_threshold(DemandTrace(tuple(demands)), adv_pricing, beta).num_reservations:
        break
adv_trace = DemandTrace(tuple(demands))
policy_cost = evaluate_cost(adv_trace, run_threshold(adv_trace, adv_pricing, beta),
                            adv_pricing).total
opt_cost, _ = solve_dp(adv_trace, adv_pricing)
print(f"\nadversarial run of {len(adv_trace)} slots:")
print(f"  policy {policy_cost:.4f}, optimum {opt_cost:.4f}, "
      f"ratio {policy_cost / opt_cost:.4f} (bound {2 - alpha:.2f})")
# hedging over thresholds softens this particular adversary, though this
# instance sits in the narrow spend band where the expectation guarantee
# itself does not apply (see the oracle test suite)
print(f"  randomized in expectation: ratio "
      f"{expected_cost_exact(adv_trace, adv_pricing) / opt_cost:.4f}")
