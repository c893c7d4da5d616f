# The online threshold policy family: how lazy reservations work, what the
# aggressiveness knob does, and what a short prediction window buys.

from cloudreserve import (DemandTrace, PricingModel, break_even, evaluate_cost,
                          run_threshold, run_threshold_windowed)

pricing = PricingModel(on_demand_rate=1.0, discount=0.5, period=3)
beta = break_even(pricing)  # 2.0
trace = DemandTrace((1, 1, 1))

# The break-even policy serves everything on demand by default. At each slot
# it prices the on-demand usage left uncovered in the trailing reservation
# period; once that exceeds the break-even spend it buys a reservation to
# compensate, marking the overspent history with phantom credits so the same
# mistake is only paid for once.
sched = run_threshold(trace, pricing, beta)
print("demand:         ", trace.demands)
print("reservations:   ", sched.reservations)
print("on-demand:      ", sched.on_demand)
print("cost:           ", evaluate_cost(trace, sched, pricing).total)
# Slots 1 and 2 run on demand (spend 2.0, not above 2.0); slot 3 pushes the
# trailing spend to 3.0 > 2.0, so the policy reserves there: total 3.5 versus
# the hindsight optimum 2.5 (reserve at slot 1).

# Lower thresholds reserve sooner. z = 0 reserves on any on-demand use at all;
# z = break-even is the most conservative setting worth using.
print("\nthreshold -> (reservations, cost)")
for z in (0.0, 1.0, beta):
    s = run_threshold(trace, pricing, z)
    print(f"  z={z:4.1f} -> {s.reservations}, cost {evaluate_cost(trace, s, pricing).total}")

# With a 2-slot prediction window the policy inspects a period-sized window
# shifted into the known future, and already sees at slot 1 that three slots
# of demand are coming: it reserves immediately and matches the optimum.
windowed = run_threshold_windowed(trace, pricing, beta, 2)
print("\nwith a 2-slot window:", windowed.reservations,
      "cost", evaluate_cost(trace, windowed, pricing).total)

# The windowed variant only buys while the current slot itself is uncovered,
# so lookahead never triggers purchases ahead of the demand it predicts.
ramp = DemandTrace((0, 0, 2, 2, 2))
early = run_threshold_windowed(ramp, PricingModel(1.0, 0.5, 4), 2.0, 3)
print("\ndemand ramp:     ", ramp.demands)
print("window-3 buys at: ", early.reservations, "(not before the demand starts)")
