import json

import pytest

from cloudreserve import (
    ConfigError,
    ExperimentConfig,
    PricingModel,
    Report,
    SyntheticSpec,
    report_rows,
    run_experiment,
    run_sweep,
    summarize_groups,
    write_trace,
)

PRICING = PricingModel(0.25, 0.49, 10)


def constant_config(**overrides):
    base = dict(pricing=PRICING,
                synthetic=SyntheticSpec("constant", 50, 2, seed=0),
                seed=3, oracle="none")
    base.update(overrides)
    return ExperimentConfig(**base)


def test_config_requires_exactly_one_source(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig(pricing=PRICING).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig(pricing=PRICING, trace_path="x.csv",
                         synthetic=SyntheticSpec("constant", 5, 1)).validate()
    with pytest.raises(ConfigError):
        constant_config(oracle="magic").validate()
    with pytest.raises(ConfigError):
        constant_config(policies=("deterministic", "nonsense")).validate()
    with pytest.raises(ConfigError):
        constant_config(policies=("threshold",)).validate()
    with pytest.raises(ConfigError):
        constant_config(window=10).validate()


def test_all_on_demand_normalizes_to_one():
    report = run_experiment(constant_config())
    assert report.policies["all-on-demand"].cost.normalized_to_on_demand == pytest.approx(1.0)
    assert report.trace_summary["group"] == "stable"
    assert not report.degenerate_zero_demand


def test_stable_demand_favors_all_reserved():
    # long flat demand: reserving everything beats on demand, and nothing
    # beats reserving everything (verified against the exact oracle)
    report = run_experiment(constant_config(oracle="dp"))
    norm = {name: res.cost.normalized_to_on_demand
            for name, res in report.policies.items()}
    assert norm["all-reserved"] < 1.0
    assert norm["all-reserved"] <= min(norm.values()) + 1e-9
    oracle_norm = report.oracle["normalized_to_on_demand"]
    assert oracle_norm <= norm["all-reserved"] + 1e-9
    for name, res in report.policies.items():
        assert res.competitive_ratio >= 1.0 - 1e-9


def test_sparse_spikes_make_all_reserved_expensive():
    config = constant_config(synthetic=SyntheticSpec("pulse", 105, 1, seed=0, spacing=35))
    report = run_experiment(config)
    norm = {name: res.cost.normalized_to_on_demand
            for name, res in report.policies.items()}
    assert report.trace_summary["group"] == "high_fluctuation"
    assert norm["all-reserved"] > 1.0
    assert norm["deterministic"] == pytest.approx(1.0)


def test_zero_trace_is_degenerate_with_unit_normalization():
    config = constant_config(synthetic=SyntheticSpec("constant", 10, 0, seed=0))
    report = run_experiment(config)
    assert report.degenerate_zero_demand
    assert any("zero total demand" in w for w in report.warnings)
    for res in report.policies.values():
        assert res.cost.normalized_to_on_demand == 1.0
        assert res.cost.total == 0.0


def test_intractable_oracle_degrades_to_warning():
    config = constant_config(
        synthetic=SyntheticSpec("constant", 40, 3, seed=0),
        oracle="brute", oracle_budget=100)
    report = run_experiment(config)
    assert report.oracle["intractable"] is True
    assert report.oracle["cost"] is None
    assert any("intractable" in w for w in report.warnings)
    for res in report.policies.values():
        assert res.competitive_ratio is None


def test_randomized_metadata_recorded():
    report = run_experiment(constant_config(policies=("randomized",), seed=11))
    res = report.policies["randomized"]
    assert res.seed == 11
    assert res.sampled_threshold is not None
    assert 0.0 <= res.sampled_threshold <= 1 / 0.51 + 1e-12


def test_report_determinism_and_json_round_trip():
    a = run_experiment(constant_config())
    b = run_experiment(constant_config())
    assert a == b  # timestamps excluded from equality
    parsed = Report.from_json(a.to_json())
    assert parsed == a
    # identical payload modulo the timestamp field
    da, db = a.to_dict(), b.to_dict()
    da.pop("timestamp"), db.pop("timestamp")
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


def test_report_written_to_disk(tmp_path):
    out = tmp_path / "report.json"
    run_experiment(constant_config(out_path=str(out)))
    assert Report.from_json(out.read_text()).policies["deterministic"].cost.total > 0


def test_threshold_policy_selection():
    config = constant_config(policies=("threshold",), threshold=0.5)
    report = run_experiment(config)
    assert report.policies["threshold"].cost.total > 0


def test_summarize_groups_single_and_identical_reports():
    report = run_experiment(constant_config())
    rows = summarize_groups([report])
    assert {r["policy"] for r in rows} == set(report.policies)
    for row in rows:
        assert row["group"] == "stable" and row["n_traces"] == 1
        assert row["mean_normalized_cost"] == pytest.approx(
            report.policies[row["policy"]].cost.normalized_to_on_demand)
    doubled = summarize_groups([report, report])
    for row, single in zip(doubled, rows):
        assert row["mean_normalized_cost"] == pytest.approx(single["mean_normalized_cost"])
        assert row["n_traces"] == 2


def test_summarize_groups_empty_rejected():
    with pytest.raises(ValueError):
        summarize_groups([])


def test_sweep_writes_reports_rows_and_summary(tmp_path):
    from cloudreserve import generate_synthetic

    paths = []
    for i, (pattern, amp) in enumerate([("constant", 2), ("pulse", 1), ("constant", 1)]):
        trace = generate_synthetic(pattern, 70, amp, seed=i, spacing=35)
        path = tmp_path / f"trace_{i}.csv"
        write_trace(trace, path)
        paths.append(str(path))

    prefix = tmp_path / "sweep"
    reports = run_sweep(paths, PRICING, base_seed=100, out_prefix=prefix)
    assert len(reports) == 3
    # per-instance seeds derive from the base seed in path order
    sorted_paths = sorted(paths)
    for i, report in enumerate(reports):
        assert report.config["seed"] == 100 + i
        assert report.config["trace_path"] == sorted_paths[i]

    rows = report_rows(reports)
    assert len(rows) == 3 * len(reports[0].policies)
    assert [r["instance"] for r in rows] == sorted(r["instance"] for r in rows)

    assert (tmp_path / "sweep_reports.json").exists()
    rows_text = (tmp_path / "sweep_rows.csv").read_text().splitlines()
    assert rows_text[0].startswith("instance,trace,group,policy")
    assert len(rows_text) == 1 + len(rows)
    summary_text = (tmp_path / "sweep_summary.csv").read_text().splitlines()
    assert summary_text[0] == "group,policy,mean_normalized_cost,n_traces"
    assert len(summary_text) > 1
