# Pricing basics: normalizing raw instance prices, the break-even spend, and
# exact cost accounting for a mixed reserved/on-demand schedule.

import numpy as np

from cloudreserve import (DemandTrace, PricingModel, PurchaseSchedule, break_even,
                          check_feasibility, evaluate_cost)

# Amazon-style prices for a small Linux instance: $0.08/hour on demand, or a
# $69 upfront fee for a year of usage at $0.039/hour. Normalizing by the fee
# puts every cost in "fees": p = 0.08/69 per slot, discount = 0.039/0.08.
pricing = PricingModel.from_raw_prices(on_demand=0.08, reservation_fee=69.0,
                                       reserved_rate=0.039, period=8760)
print("normalized on-demand rate:", pricing.on_demand_rate)
print("usage discount after reserving:", pricing.discount)

# Break-even: the on-demand spend at which one reservation pays for itself.
print("break-even spend:", break_even(pricing), "fees")

# One instance running 100 hours, served by a single reservation, costs the
# fee plus 100 discounted hours. In dollars that is 69 + 0.039 * 100 = 72.90.
trace = DemandTrace((1,) * 100)
schedule = PurchaseSchedule((1,) + (0,) * 99, (0,) * 100)
report = evaluate_cost(trace, schedule, pricing)
print("\n100-hour reserved run, in fees:", report.total)
print("same, in dollars:", report.total * 69.0)

# The same demand on pure on-demand costs 100 * 0.08 = $8.
on_demand_only = PurchaseSchedule((0,) * 100, (1,) * 100)
print("all on demand, in dollars:", evaluate_cost(trace, on_demand_only, pricing).total * 69)

# Feasibility: every slot's demand must be covered by on-demand launches plus
# reservations from the trailing period.
short = PurchaseSchedule((1,) + (0,) * 99, (0,) * 100)
ok, slot = check_feasibility(DemandTrace((2,) + (1,) * 99), short, pricing.period)
print("\nunder-provisioned schedule feasible?", ok, "- first violation at slot", slot)

# The break-even spend grows with the discount: cheap reserved usage makes
# reserving attractive even for short bursts of work.
print("\ndiscount -> break-even spend")
for alpha in np.arange(0.0, 1.0, 0.2):
    model = PricingModel(0.1, round(float(alpha), 2), 10)
    print(f"  {model.discount:.1f} -> {break_even(model):.3f}")
