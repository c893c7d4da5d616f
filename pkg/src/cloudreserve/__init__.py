"""Online reserve-or-on-demand purchasing for cloud instances.

The package decides, slot by slot and without future knowledge, how many
instances to reserve versus run on demand, and certifies the policies'
worst-case guarantees against exact offline oracles on small instances.
"""

from .errors import (CloudReserveError, ConfigError, InfeasibleScheduleError,
                     IntractableInstanceError, ReservationNeverJustifiedError,
                     TraceParseError)
from .harness import (DEFAULT_POLICIES, POLICY_NAMES, REPORT_SCHEMA_VERSION,
                      ExperimentConfig, PolicyResult, Report, SyntheticSpec,
                      report_rows, run_experiment, run_sweep, summarize_groups,
                      write_rows_csv, write_summary_csv)
from .oracle import (DEFAULT_ENUM_BUDGET, DEFAULT_STATE_BUDGET, competitive_ratio,
                     expected_cost_exact, expected_cost_monte_carlo,
                     max_reservations_among_optima, solve_brute_force, solve_dp)
from .policies import (PolicyConfig, ReservationLedger, run_all_on_demand,
                       run_all_reserved, run_randomized, run_randomized_windowed,
                       run_separate, run_threshold, run_threshold_windowed,
                       sample_threshold)
from .pricing import (TOLERANCE, CostReport, PricingModel, PurchaseSchedule,
                      break_even, check_feasibility, evaluate_cost)
from .traces import (SYNTHETIC_PATTERNS, DemandTrace, FluctuationGroup, TraceStats,
                     classify, generate_synthetic, parse_trace, read_trace,
                     serialize_trace, write_trace)

__version__ = "0.1.0"

__all__ = [
    "CloudReserveError", "ConfigError", "InfeasibleScheduleError",
    "IntractableInstanceError", "ReservationNeverJustifiedError", "TraceParseError",
    "DEFAULT_POLICIES", "POLICY_NAMES", "REPORT_SCHEMA_VERSION",
    "ExperimentConfig", "PolicyResult", "Report", "SyntheticSpec",
    "report_rows", "run_experiment", "run_sweep", "summarize_groups",
    "write_rows_csv", "write_summary_csv",
    "DEFAULT_ENUM_BUDGET", "DEFAULT_STATE_BUDGET", "competitive_ratio",
    "expected_cost_exact", "expected_cost_monte_carlo",
    "max_reservations_among_optima", "solve_brute_force", "solve_dp",
    "PolicyConfig", "ReservationLedger", "run_all_on_demand", "run_all_reserved",
    "run_randomized", "run_randomized_windowed", "run_separate", "run_threshold",
    "run_threshold_windowed", "sample_threshold",
    "TOLERANCE", "CostReport", "PricingModel", "PurchaseSchedule", "break_even",
    "check_feasibility", "evaluate_cost",
    "SYNTHETIC_PATTERNS", "DemandTrace", "FluctuationGroup", "TraceStats",
    "classify", "generate_synthetic", "parse_trace", "read_trace",
    "serialize_trace", "write_trace",
    "__version__",
]
