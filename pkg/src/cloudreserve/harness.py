"""Experiment orchestration: single runs, sweeps, reports, and group summaries.

Reports are JSON documents with a versioned schema (see REPORT_SCHEMA_VERSION
and the README); every cost in a report is also normalized to what the same
trace would cost served entirely on demand.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from .errors import (ConfigError, IntractableInstanceError,
                     ReservationNeverJustifiedError)
from .oracle import competitive_ratio, solve_brute_force, solve_dp
from .policies import (PolicyConfig, run_all_on_demand, run_all_reserved, run_randomized,
                       run_randomized_windowed, run_separate, run_threshold,
                       run_threshold_windowed)
from .pricing import CostReport, PricingModel, break_even, evaluate_cost
from .traces import (DemandTrace, classify, generate_synthetic, read_trace)

REPORT_SCHEMA_VERSION = 1

POLICY_NAMES = ("all-on-demand", "all-reserved", "separate", "deterministic",
                "randomized", "threshold")
DEFAULT_POLICIES = ("all-on-demand", "all-reserved", "separate", "deterministic",
                    "randomized")
ORACLE_METHODS = ("dp", "brute", "none")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a generated trace (see traces.generate_synthetic)."""

    pattern: str
    length: int
    amplitude: int
    seed: int = 0
    spacing: int = 30

    def build(self) -> DemandTrace:
        return generate_synthetic(self.pattern, self.length, self.amplitude,
                                  self.seed, spacing=self.spacing)

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "length": self.length,
                "amplitude": self.amplitude, "seed": self.seed,
                "spacing": self.spacing}


@dataclass
class ExperimentConfig:
    """One experiment: a trace source, a pricing model, policies, optional oracle."""

    pricing: PricingModel
    trace_path: str | None = None
    synthetic: SyntheticSpec | None = None
    policies: tuple[str, ...] = DEFAULT_POLICIES
    threshold: float | None = None
    window: int = 0
    seed: int = 0
    oracle: str = "none"
    oracle_budget: int | None = None
    out_path: str | None = None
    normalization_factor: float | None = None  # raw fee when prices came in dollars

    def validate(self) -> None:
        if (self.trace_path is None) == (self.synthetic is None):
            raise ConfigError("exactly one trace source required: trace_path or synthetic")
        if self.oracle not in ORACLE_METHODS:
            raise ConfigError(f"oracle must be one of {ORACLE_METHODS}, got {self.oracle!r}")
        unknown = [name for name in self.policies if name not in POLICY_NAMES]
        if unknown:
            raise ConfigError(f"unknown policies {unknown}; expected names from {POLICY_NAMES}")
        if "threshold" in self.policies and self.threshold is None:
            raise ConfigError("the 'threshold' policy needs an explicit threshold value")
        PolicyConfig(threshold=self.threshold, window=self.window,
                     seed=self.seed).validate(self.pricing)

    def to_dict(self) -> dict:
        return {
            "pricing": {"on_demand_rate": self.pricing.on_demand_rate,
                        "discount": self.pricing.discount,
                        "period": self.pricing.period},
            "trace_path": self.trace_path,
            "synthetic": self.synthetic.to_dict() if self.synthetic else None,
            "policies": list(self.policies),
            "threshold": self.threshold,
            "window": self.window,
            "seed": self.seed,
            "oracle": self.oracle,
            "normalization_factor": self.normalization_factor,
        }


@dataclass
class PolicyResult:
    cost: CostReport
    competitive_ratio: float | None = None
    sampled_threshold: float | None = None
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "cost": {
                "total": self.cost.total,
                "on_demand_cost": self.cost.on_demand_cost,
                "reservation_fees": self.cost.reservation_fees,
                "reserved_usage_cost": self.cost.reserved_usage_cost,
                "num_reservations": self.cost.num_reservations,
                "normalized_to_on_demand": self.cost.normalized_to_on_demand,
            },
            "competitive_ratio": self.competitive_ratio,
            "sampled_threshold": self.sampled_threshold,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolicyResult":
        return cls(cost=CostReport(**data["cost"]),
                   competitive_ratio=data.get("competitive_ratio"),
                   sampled_threshold=data.get("sampled_threshold"),
                   seed=data.get("seed"))


@dataclass
class Report:
    """Result document for one experiment; equality ignores the timestamp."""

    config: dict
    trace_summary: dict
    policies: dict[str, PolicyResult]
    oracle: dict | None
    warnings: list[str]
    degenerate_zero_demand: bool
    schema_version: int = REPORT_SCHEMA_VERSION
    timestamp: str = field(default="", compare=False)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "timestamp": self.timestamp,
            "config": self.config,
            "trace_summary": self.trace_summary,
            "policies": {name: res.to_dict() for name, res in self.policies.items()},
            "oracle": self.oracle,
            "warnings": list(self.warnings),
            "degenerate_zero_demand": self.degenerate_zero_demand,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            config=data["config"],
            trace_summary=data["trace_summary"],
            policies={name: PolicyResult.from_dict(res)
                      for name, res in data["policies"].items()},
            oracle=data.get("oracle"),
            warnings=list(data.get("warnings", [])),
            degenerate_zero_demand=data["degenerate_zero_demand"],
            schema_version=data["schema_version"],
            timestamp=data.get("timestamp", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")


def _load_trace(config: ExperimentConfig) -> DemandTrace:
    if config.trace_path is not None:
        return read_trace(config.trace_path)
    return config.synthetic.build()


def _policy_schedule(name: str, trace: DemandTrace, config: ExperimentConfig):
    pricing = config.pricing
    if name == "all-on-demand":
        return run_all_on_demand(trace, pricing)
    if name == "all-reserved":
        return run_all_reserved(trace, pricing)
    if name == "separate":
        return run_separate(trace, pricing)
    try:
        beta = break_even(pricing)
    except ReservationNeverJustifiedError:
        beta = math.inf  # no discount: the break-even policy simply never reserves
    if name == "deterministic":
        if config.window > 0:
            return run_threshold_windowed(trace, pricing, beta, config.window)
        return run_threshold(trace, pricing, beta)
    if name == "randomized":
        if config.window > 0:
            return run_randomized_windowed(trace, pricing, config.window, config.seed)
        return run_randomized(trace, pricing, config.seed)
    if name == "threshold":
        if config.window > 0:
            return run_threshold_windowed(trace, pricing, config.threshold, config.window)
        return run_threshold(trace, pricing, config.threshold)
    raise ConfigError(f"unknown policy {name!r}")


def run_experiment(config: ExperimentConfig) -> Report:
    """Run the configured policies on one trace and assemble a report.

    Deterministic given the config (including seeds). If the requested oracle
    is intractable at this scale the report is still emitted, with ratio fields
    absent and a warning recorded.
    """
    config.validate()
    pricing = config.pricing
    trace = _load_trace(config)
    stats = classify(trace)
    degenerate = trace.total == 0
    warnings: list[str] = []

    baseline = evaluate_cost(trace, run_all_on_demand(trace, pricing), pricing)

    oracle_info: dict | None = None
    oracle_cost: float | None = None
    if config.oracle != "none":
        budget_kw = {}
        if config.oracle_budget is not None:
            key = "state_budget" if config.oracle == "dp" else "budget"
            budget_kw[key] = config.oracle_budget
        try:
            if config.oracle == "dp":
                value, opt_schedule = solve_dp(trace, pricing, **budget_kw)
            else:
                value, opt_schedule = solve_brute_force(trace, pricing, **budget_kw)
            oracle_cost = value
            oracle_info = {"method": config.oracle, "cost": value,
                           "num_reservations": opt_schedule.num_reservations,
                           "normalized_to_on_demand":
                               1.0 if degenerate else value / baseline.total,
                           "intractable": False}
        except IntractableInstanceError as exc:
            warnings.append(f"oracle '{config.oracle}' intractable: {exc}")
            oracle_info = {"method": config.oracle, "cost": None,
                           "num_reservations": None,
                           "normalized_to_on_demand": None, "intractable": True}

    results: dict[str, PolicyResult] = {}
    for name in config.policies:
        schedule = _policy_schedule(name, trace, config)
        cost = evaluate_cost(trace, schedule, pricing)
        normalized = 1.0 if degenerate else cost.total / baseline.total
        ratio = None
        if oracle_cost is not None:
            ratio = competitive_ratio(cost.total, oracle_cost)
        results[name] = PolicyResult(
            cost=replace(cost, normalized_to_on_demand=normalized),
            competitive_ratio=ratio,
            sampled_threshold=schedule.metadata.get("sampled_threshold"),
            seed=schedule.metadata.get("seed"),
        )

    if degenerate:
        warnings.append("zero total demand: normalized costs are 1.0 by convention")

    report = Report(
        config=config.to_dict(),
        trace_summary={"length": len(trace), "total_demand": trace.total,
                       "peak_demand": trace.peak, "mean": stats.mean,
                       "std_dev": stats.std_dev, "fluctuation": stats.fluctuation,
                       "group": stats.group.value},
        policies=results,
        oracle=oracle_info,
        warnings=warnings,
        degenerate_zero_demand=degenerate,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    if config.out_path:
        report.write(config.out_path)
    return report


def run_sweep(trace_paths: list[str | Path], pricing: PricingModel, *,
              policies: tuple[str, ...] = DEFAULT_POLICIES,
              threshold: float | None = None, window: int = 0,
              oracle: str = "none", oracle_budget: int | None = None,
              base_seed: int = 0, out_prefix: str | Path | None = None) -> list[Report]:
    """Run every policy on every trace file; one report per trace.

    Randomized policies get per-instance seeds base_seed + index, so a sweep is
    reproducible as a whole. Reports come back sorted by instance id (the
    lexicographic position of the trace path). With out_prefix set, writes
    <prefix>_reports.json, <prefix>_rows.csv (one row per instance x policy)
    and <prefix>_summary.csv (group means).
    """
    reports = []
    for idx, path in enumerate(sorted(str(p) for p in trace_paths)):
        config = ExperimentConfig(pricing=pricing, trace_path=path, policies=policies,
                                  threshold=threshold, window=window,
                                  seed=base_seed + idx, oracle=oracle,
                                  oracle_budget=oracle_budget)
        reports.append(run_experiment(config))
    if out_prefix is not None:
        prefix = str(out_prefix)
        Path(f"{prefix}_reports.json").write_text(
            json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n",
            encoding="utf-8")
        write_rows_csv(reports, f"{prefix}_rows.csv")
        write_summary_csv(summarize_groups(reports), f"{prefix}_summary.csv")
    return reports


def report_rows(reports: list[Report]) -> list[dict]:
    """Tidy rows, one per (instance, policy), for plotting or further analysis."""
    rows = []
    for idx, report in enumerate(reports):
        source = report.config.get("trace_path") or "synthetic"
        for name, res in sorted(report.policies.items()):
            rows.append({
                "instance": idx,
                "trace": source,
                "group": report.trace_summary["group"],
                "policy": name,
                "total_cost": res.cost.total,
                "normalized_to_on_demand": res.cost.normalized_to_on_demand,
                "num_reservations": res.cost.num_reservations,
                "competitive_ratio": res.competitive_ratio,
                "sampled_threshold": res.sampled_threshold,
                "seed": res.seed,
            })
    return rows


def write_rows_csv(reports: list[Report], path: str | Path) -> None:
    rows = report_rows(reports)
    fields = ["instance", "trace", "group", "policy", "total_cost",
              "normalized_to_on_demand", "num_reservations", "competitive_ratio",
              "sampled_threshold", "seed"]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def summarize_groups(reports: list[Report]) -> list[dict]:
    """Mean normalized cost per (fluctuation group, policy) across reports."""
    if not reports:
        raise ValueError("summarize_groups needs at least one report")
    sums: dict[tuple[str, str], list[float]] = {}
    for report in reports:
        group = report.trace_summary["group"]
        for name, res in report.policies.items():
            sums.setdefault((group, name), []).append(res.cost.normalized_to_on_demand)
    rows = []
    for (group, name), values in sorted(sums.items()):
        rows.append({"group": group, "policy": name,
                     "mean_normalized_cost": sum(values) / len(values),
                     "n_traces": len(values)})
    return rows


def write_summary_csv(rows: list[dict], path: str | Path) -> None:
    fields = ["group", "policy", "mean_normalized_cost", "n_traces"]
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
