"""Command-line interface.

Subcommands: simulate, oracle, ratio, classify, generate, sweep.
Exit codes: 0 success, 2 parse/config error, 3 oracle intractable where the
subcommand requires the oracle (`oracle`, `ratio`); `simulate` degrades to a
warning in the report instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .errors import CloudReserveError, IntractableInstanceError, TraceParseError
from .harness import (DEFAULT_POLICIES, ExperimentConfig, SyntheticSpec, run_experiment,
                      run_sweep, summarize_groups)
from .oracle import competitive_ratio, solve_brute_force, solve_dp
from .pricing import PricingModel
from .traces import (SYNTHETIC_PATTERNS, classify, generate_synthetic, read_trace,
                     write_trace)


def _add_pricing_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pricing (normalized, or raw dollars)")
    group.add_argument("--alpha", type=float, help="usage discount after reserving")
    group.add_argument("--rate", type=float,
                       help="normalized on-demand rate per slot (reservation fee = 1)")
    group.add_argument("--ondemand-dollars", type=float,
                       help="raw on-demand price per slot")
    group.add_argument("--reserve-fee-dollars", type=float,
                       help="raw upfront reservation fee")
    group.add_argument("--reserved-dollars", type=float,
                       help="raw reserved usage price per slot")
    group.add_argument("--tau", type=int, required=True,
                       help="reservation period in slots")


def _pricing_from_args(args) -> tuple[PricingModel, float | None]:
    raw = (args.ondemand_dollars, args.reserve_fee_dollars, args.reserved_dollars)
    if all(v is not None for v in raw):
        if args.alpha is not None or args.rate is not None:
            raise CloudReserveError("give either --alpha/--rate or the raw dollar "
                                    "prices, not both")
        model = PricingModel.from_raw_prices(args.ondemand_dollars,
                                             args.reserve_fee_dollars,
                                             args.reserved_dollars, args.tau)
        return model, args.reserve_fee_dollars
    if any(v is not None for v in raw):
        raise CloudReserveError("raw pricing needs all of --ondemand-dollars, "
                                "--reserve-fee-dollars and --reserved-dollars")
    if args.alpha is None or args.rate is None:
        raise CloudReserveError("pricing needs --alpha and --rate (or the raw "
                                "dollar prices)")
    return PricingModel(on_demand_rate=args.rate, discount=args.alpha,
                        period=args.tau), None


def _add_trace_source_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("trace source (file or synthetic)")
    group.add_argument("--trace", help="demand trace CSV")
    group.add_argument("--pattern", choices=SYNTHETIC_PATTERNS,
                       help="synthetic pattern instead of --trace")
    group.add_argument("--length", type=int, default=100)
    group.add_argument("--amplitude", type=int, default=1)
    group.add_argument("--spacing", type=int, default=30,
                       help="pulse spacing in slots")


def _trace_source(args) -> tuple[str | None, SyntheticSpec | None]:
    if (args.trace is None) == (args.pattern is None):
        raise CloudReserveError("exactly one of --trace or --pattern is required")
    if args.trace is not None:
        return args.trace, None
    return None, SyntheticSpec(pattern=args.pattern, length=args.length,
                               amplitude=args.amplitude, seed=args.seed,
                               spacing=args.spacing)


def _load_trace(args):
    path, synthetic = _trace_source(args)
    return read_trace(path) if path else synthetic.build()


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    print(text)


def _cmd_simulate(args) -> int:
    pricing, factor = _pricing_from_args(args)
    trace_path, synthetic = _trace_source(args)
    policies = tuple(args.policy.split(",")) if args.policy else DEFAULT_POLICIES
    config = ExperimentConfig(pricing=pricing, trace_path=trace_path,
                              synthetic=synthetic, policies=policies,
                              threshold=args.threshold, window=args.window,
                              seed=args.seed, oracle=args.oracle,
                              out_path=args.out, normalization_factor=factor)
    report = run_experiment(config)
    print(report.to_json())
    return 0


def _cmd_oracle(args) -> int:
    pricing, _ = _pricing_from_args(args)
    trace = _load_trace(args)
    if args.oracle == "none":
        raise CloudReserveError("the oracle subcommand needs --oracle dp or brute")
    solver = solve_dp if args.oracle == "dp" else solve_brute_force
    cost, schedule = solver(trace, pricing)
    _emit({"method": args.oracle, "cost": cost,
           "num_reservations": schedule.num_reservations,
           "reservations": list(schedule.reservations),
           "on_demand": list(schedule.on_demand)}, args.out)
    return 0


def _cmd_ratio(args) -> int:
    pricing, factor = _pricing_from_args(args)
    trace_path, synthetic = _trace_source(args)
    if args.oracle == "none":
        raise CloudReserveError("the ratio subcommand needs --oracle dp or brute")
    config = ExperimentConfig(pricing=pricing, trace_path=trace_path,
                              synthetic=synthetic, policies=(args.policy,),
                              threshold=args.threshold, window=args.window,
                              seed=args.seed, oracle="none",
                              normalization_factor=factor)
    report = run_experiment(config)
    trace = _load_trace(args)
    solver = solve_dp if args.oracle == "dp" else solve_brute_force
    oracle_cost, _ = solver(trace, pricing)
    policy_cost = report.policies[args.policy].cost.total
    _emit({"policy": args.policy, "policy_cost": policy_cost,
           "oracle_method": args.oracle, "oracle_cost": oracle_cost,
           "competitive_ratio": competitive_ratio(policy_cost, oracle_cost)},
          args.out)
    return 0


def _cmd_classify(args) -> int:
    trace = _load_trace(args)
    stats = classify(trace)
    payload = asdict(stats)
    payload["group"] = stats.group.value
    payload["length"] = len(trace)
    _emit(payload, args.out)
    return 0


def _cmd_generate(args) -> int:
    trace = generate_synthetic(args.pattern, args.length, args.amplitude, args.seed,
                               spacing=args.spacing)
    if args.out:
        write_trace(trace, args.out, headered=args.headered)
        print(f"wrote {len(trace)} slots to {args.out}")
    else:
        sys.stdout.write("\n".join(str(d) for d in trace.demands) + "\n")
    return 0


def _cmd_sweep(args) -> int:
    pricing, _ = _pricing_from_args(args)
    paths = list(args.trace or [])
    if args.trace_dir:
        paths.extend(str(p) for p in sorted(Path(args.trace_dir).glob("*.csv")))
    if not paths:
        raise CloudReserveError("sweep needs --trace files and/or --trace-dir")
    policies = tuple(args.policy.split(",")) if args.policy else DEFAULT_POLICIES
    reports = run_sweep(paths, pricing, policies=policies, threshold=args.threshold,
                        window=args.window, oracle=args.oracle, base_seed=args.seed,
                        out_prefix=args.out)
    for row in summarize_groups(reports):
        print(f"{row['group']:20s} {row['policy']:16s} "
              f"mean normalized cost {row['mean_normalized_cost']:.4f} "
              f"({row['n_traces']} traces)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloudreserve",
        description="Online reserve-or-on-demand purchasing strategies for cloud "
                    "instances, with exact offline oracles.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run policies on one trace")
    _add_pricing_args(p_sim)
    _add_trace_source_args(p_sim)
    p_sim.add_argument("--policy", help="comma-separated policy names "
                                        f"(default {','.join(DEFAULT_POLICIES)})")
    p_sim.add_argument("--threshold", type=float)
    p_sim.add_argument("--window", type=int, default=0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--oracle", choices=["dp", "brute", "none"], default="none")
    p_sim.add_argument("--out")
    p_sim.set_defaults(func=_cmd_simulate)

    p_oracle = sub.add_parser("oracle", help="exact offline optimum for one trace")
    _add_pricing_args(p_oracle)
    _add_trace_source_args(p_oracle)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--oracle", choices=["dp", "brute"], default="dp")
    p_oracle.add_argument("--out")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_ratio = sub.add_parser("ratio", help="policy cost over the offline optimum")
    _add_pricing_args(p_ratio)
    _add_trace_source_args(p_ratio)
    p_ratio.add_argument("--policy", default="deterministic")
    p_ratio.add_argument("--threshold", type=float)
    p_ratio.add_argument("--window", type=int, default=0)
    p_ratio.add_argument("--seed", type=int, default=0)
    p_ratio.add_argument("--oracle", choices=["dp", "brute"], default="dp")
    p_ratio.add_argument("--out")
    p_ratio.set_defaults(func=_cmd_ratio)

    p_cls = sub.add_parser("classify", help="fluctuation statistics of a trace")
    _add_trace_source_args(p_cls)
    p_cls.add_argument("--seed", type=int, default=0)
    p_cls.add_argument("--out")
    p_cls.set_defaults(func=_cmd_classify)

    p_gen = sub.add_parser("generate", help="write a synthetic trace CSV")
    p_gen.add_argument("--pattern", choices=SYNTHETIC_PATTERNS, required=True)
    p_gen.add_argument("--length", type=int, required=True)
    p_gen.add_argument("--amplitude", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--spacing", type=int, default=30)
    p_gen.add_argument("--headered", action="store_true",
                       help="write the t,demand layout instead of one value per line")
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=_cmd_generate)

    p_sweep = sub.add_parser("sweep", help="run policies across many traces")
    _add_pricing_args(p_sweep)
    p_sweep.add_argument("--trace", action="append", help="trace CSV (repeatable)")
    p_sweep.add_argument("--trace-dir", help="directory of *.csv traces")
    p_sweep.add_argument("--policy", help="comma-separated policy names")
    p_sweep.add_argument("--threshold", type=float)
    p_sweep.add_argument("--window", type=int, default=0)
    p_sweep.add_argument("--seed", type=int, default=0,
                         help="base seed; instance i uses seed + i")
    p_sweep.add_argument("--oracle", choices=["dp", "brute", "none"], default="none")
    p_sweep.add_argument("--out", help="output prefix for reports/rows/summary files")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IntractableInstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (TraceParseError, CloudReserveError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
