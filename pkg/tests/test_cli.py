import json

import pytest

from cloudreserve import Report
from cloudreserve.cli import main

PRICING_ARGS = ["--alpha", "0.49", "--rate", "0.25", "--tau", "10"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_writes_trace(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, stdout, _ = run_cli(capsys, "generate", "--pattern", "pulse", "--length", "10",
                              "--amplitude", "3", "--spacing", "5", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines() == ["3", "0", "0", "0", "0", "3", "0", "0", "0", "0"]


def test_generate_headered_round_trips(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _, _ = run_cli(capsys, "generate", "--pattern", "constant", "--length", "4",
                         "--amplitude", "2", "--headered", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "t,demand"


def test_classify_reports_group(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("0\n0\n0\n8\n")
    code, stdout, _ = run_cli(capsys, "classify", "--trace", str(trace))
    assert code == 0
    payload = json.loads(stdout)
    assert payload["group"] == "medium_fluctuation"
    assert payload["mean"] == pytest.approx(2.0)


def test_simulate_emits_report(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("2\n" * 30)
    out = tmp_path / "report.json"
    code, stdout, _ = run_cli(capsys, "simulate", *PRICING_ARGS, "--trace", str(trace),
                              "--oracle", "dp", "--seed", "5", "--out", str(out))
    assert code == 0
    report = Report.from_json(stdout)
    assert report == Report.from_json(out.read_text())
    assert report.policies["all-on-demand"].cost.normalized_to_on_demand == 1.0
    assert report.oracle["cost"] is not None


def test_simulate_with_raw_dollar_prices(capsys, tmp_path):
    trace = tmp_path / "t.csv"
    trace.write_text("1\n" * 20)
    code, stdout, _ = run_cli(capsys, "simulate",
                              "--ondemand-dollars", "0.08",
                              "--reserve-fee-dollars", "69",
                              "--reserved-dollars", "0.039",
                              "--tau", "8760", "--trace", str(trace))
    assert code == 0
    report = Report.from_json(stdout)
    assert report.config["pricing"]["discount"] == pytest.approx(0.4875)
    assert report.config["normalization_factor"] == pytest.approx(69.0)


def test_oracle_subcommand(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("1\n1\n1\n")
    code, stdout, _ = run_cli(capsys, "oracle", "--alpha", "0.5", "--rate", "1.0",
                              "--tau", "3", "--trace", str(trace), "--oracle", "brute")
    assert code == 0
    payload = json.loads(stdout)
    assert payload["cost"] == pytest.approx(2.5)
    assert payload["reservations"] == [1, 0, 0]


def test_ratio_subcommand(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("1\n1\n1\n")
    code, stdout, _ = run_cli(capsys, "ratio", "--alpha", "0.5", "--rate", "1.0",
                              "--tau", "3", "--trace", str(trace),
                              "--policy", "deterministic", "--oracle", "dp")
    assert code == 0
    payload = json.loads(stdout)
    assert payload["policy_cost"] == pytest.approx(3.5)
    assert payload["oracle_cost"] == pytest.approx(2.5)
    assert payload["competitive_ratio"] == pytest.approx(1.4)


def test_parse_error_exits_2(tmp_path, capsys):
    trace = tmp_path / "bad.csv"
    trace.write_text("1,-2\n")
    code, _, stderr = run_cli(capsys, "classify", "--trace", str(trace))
    assert code == 2
    assert "line 1" in stderr


def test_config_error_exits_2(tmp_path, capsys):
    code, _, stderr = run_cli(capsys, "simulate", *PRICING_ARGS)
    assert code == 2
    assert "trace" in stderr


def test_missing_pricing_exits_2(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("1\n")
    code, _, stderr = run_cli(capsys, "simulate", "--tau", "3", "--trace", str(trace))
    assert code == 2


def test_oracle_intractable_exits_3(tmp_path, capsys):
    trace = tmp_path / "t.csv"
    trace.write_text("3\n" * 40)
    code, _, stderr = run_cli(capsys, "oracle", "--alpha", "0.5", "--rate", "0.1",
                              "--tau", "30", "--trace", str(trace), "--oracle", "brute")
    assert code == 3
    assert "budget" in stderr or "enumerate" in stderr


def test_sweep_subcommand(tmp_path, capsys):
    for i in range(2):
        (tmp_path / f"t{i}.csv").write_text("2\n" * 40)
    prefix = tmp_path / "out"
    code, stdout, _ = run_cli(capsys, "sweep", *PRICING_ARGS,
                              "--trace-dir", str(tmp_path), "--out", str(prefix))
    assert code == 0
    assert "stable" in stdout
    assert (tmp_path / "out_summary.csv").exists()
    assert (tmp_path / "out_rows.csv").exists()
    reports = json.loads((tmp_path / "out_reports.json").read_text())
    assert len(reports) == 2


def test_synthetic_source_flags(capsys):
    code, stdout, _ = run_cli(capsys, "simulate", *PRICING_ARGS,
                              "--pattern", "constant", "--length", "20",
                              "--amplitude", "2")
    assert code == 0
    report = Report.from_json(stdout)
    assert report.config["synthetic"]["pattern"] == "constant"
    assert report.trace_summary["total_demand"] == 40
