# Trace-driven comparison across workload shapes: generate three families of
# synthetic demand (sparse spikes, short bursts, flat), sweep every policy
# over them, and summarize mean normalized costs per fluctuation group --
# the classic result that naive strategies only win at the extremes.

from pathlib import Path

from cloudreserve import (PricingModel, classify, generate_synthetic, run_sweep,
                          summarize_groups, write_trace)

out_dir = Path("demo_output")
out_dir.mkdir(exist_ok=True)

pricing = PricingModel(on_demand_rate=0.2, discount=0.49, period=26)

# fifteen traces per family; classification is by the sigma/mu fluctuation
# ratio, so the families land in the high / medium / stable groups
paths = []
for i in range(15):
    for name, trace in [
        ("spike", generate_synthetic("pulse", 156, 1 + i % 3, seed=10 + i, spacing=56)),
        ("burst", generate_synthetic("bursty", 156, 1 + i % 3, seed=20 + i,
                                     mean_on=1.5, mean_off=30.0)),
        ("flat", generate_synthetic("constant", 156, 1 + i % 3, seed=30 + i)),
    ]:
        path = out_dir / f"{name}_{i:02d}.csv"
        write_trace(trace, path)
        paths.append(path)

sample = classify(generate_synthetic("bursty", 156, 2, seed=21, mean_on=1.5,
                                     mean_off=30.0))
print(f"example burst trace: mean {sample.mean:.2f}, sigma/mu "
      f"{sample.fluctuation:.2f} -> {sample.group.value}")

reports = run_sweep(paths, pricing, base_seed=500, out_prefix=out_dir / "sweep")
print(f"\nswept {len(reports)} traces; reports, tidy rows and the summary "
      f"table are under {out_dir}/")

print("\nmean cost normalized to all-on-demand (lower is better):")
print(f"  {'group':20s} {'policy':16s} mean")
for row in summarize_groups(reports):
    print(f"  {row['group']:20s} {row['policy']:16s} {row['mean_normalized_cost']:.3f}")

print("""
Reading the table: all-reserved is the cheapest strategy on stable demand and
by far the most expensive on spiky demand; all-on-demand is the opposite. The
online policies stay close to the better of the two everywhere without
knowing the workload shape in advance.""")
