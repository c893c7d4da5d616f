import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cloudreserve import (
    DemandTrace,
    FluctuationGroup,
    TraceParseError,
    classify,
    generate_synthetic,
    parse_trace,
    serialize_trace,
)


def test_demand_trace_validation():
    with pytest.raises(ValueError):
        DemandTrace(())
    with pytest.raises(ValueError):
        DemandTrace((1, -1))
    with pytest.raises(ValueError):
        DemandTrace((1.5,))
    trace = DemandTrace([2, 0, 1])
    assert trace.demands == (2, 0, 1)
    assert len(trace) == 3
    assert trace.total == 3
    assert trace.peak == 2


def test_demand_at_is_zero_off_trace():
    trace = DemandTrace((5, 7))
    assert trace.demand_at(0) == 0
    assert trace.demand_at(1) == 5
    assert trace.demand_at(2) == 7
    assert trace.demand_at(3) == 0
    assert trace.demand_at(-4) == 0


def test_parse_headerless():
    assert parse_trace("0\n0\n").demands == (0, 0)
    assert parse_trace(b"3\r\n1\r\n").demands == (3, 1)


def test_parse_headered():
    assert parse_trace("t,demand\n1,3\n2,0\n3,1\n").demands == (3, 0, 1)


def test_parse_bare_pairs_negative_demand():
    with pytest.raises(TraceParseError) as err:
        parse_trace("1,-2\n")
    assert err.value.line_no == 1


def test_parse_rejects_gap_and_duplicate():
    with pytest.raises(TraceParseError) as err:
        parse_trace("t,demand\n1,3\n3,1\n")
    assert "gap" in str(err.value) and err.value.line_no == 3
    with pytest.raises(TraceParseError) as err:
        parse_trace("t,demand\n1,3\n1,1\n")
    assert err.value.line_no == 3


def test_parse_rejects_non_integer_and_empty():
    with pytest.raises(TraceParseError):
        parse_trace("1.5\n")
    with pytest.raises(TraceParseError):
        parse_trace("t,demand\n1,x\n")
    with pytest.raises(TraceParseError):
        parse_trace("")
    with pytest.raises(TraceParseError):
        parse_trace("-1\n")


@given(st.lists(st.integers(0, 50), min_size=1, max_size=40), st.booleans())
@settings(max_examples=150)
def test_parse_serialize_round_trip(demands, headered):
    trace = DemandTrace(tuple(demands))
    assert parse_trace(serialize_trace(trace, headered=headered)) == trace


def test_generate_constant():
    assert generate_synthetic("constant", 5, 2, 0).demands == (2, 2, 2, 2, 2)
    assert generate_synthetic("constant", 1, 0, 99).demands == (0,)


def test_generate_pulse_spacing():
    trace = generate_synthetic("pulse", 10, 3, 1, spacing=5)
    assert trace.demands == (3, 0, 0, 0, 0, 3, 0, 0, 0, 0)


def test_generate_diurnal_period_and_range():
    trace = generate_synthetic("diurnal", 48, 6, 0)
    assert max(trace.demands) == 6
    assert min(trace.demands) == 0
    assert trace.demands[:24] == trace.demands[24:]


def test_generate_bursty_deterministic_given_seed():
    a = generate_synthetic("bursty", 200, 4, 123)
    b = generate_synthetic("bursty", 200, 4, 123)
    c = generate_synthetic("bursty", 200, 4, 124)
    assert a == b
    assert set(a.demands) <= {0, 4}
    assert a != c  # different seed, different dwell draws


def test_generate_validation():
    with pytest.raises(ValueError):
        generate_synthetic("sawtooth", 10, 1, 0)
    with pytest.raises(ValueError):
        generate_synthetic("constant", 0, 1, 0)
    with pytest.raises(ValueError):
        generate_synthetic("constant", 10, -1, 0)


def test_classify_examples():
    stats = classify(DemandTrace((2, 2, 2, 2)))
    assert stats.mean == 2 and stats.std_dev == 0
    assert stats.fluctuation == 0 and stats.group is FluctuationGroup.STABLE

    stats = classify(DemandTrace((0, 0, 0, 8)))
    assert stats.mean == pytest.approx(2.0)
    assert stats.std_dev == pytest.approx(math.sqrt(12), abs=1e-9)
    assert stats.fluctuation == pytest.approx(math.sqrt(12) / 2, abs=1e-9)
    assert stats.group is FluctuationGroup.MEDIUM

    assert classify(DemandTrace((1,) * 5)).group is FluctuationGroup.STABLE


def test_classify_all_zero_trace_is_stable_by_convention():
    stats = classify(DemandTrace((0, 0, 0)))
    assert stats.mean == 0 and stats.fluctuation == 0
    assert stats.group is FluctuationGroup.STABLE


def test_classify_group_boundaries_are_closed_below():
    # sigma/mu == 1 exactly: half zeros, half twos
    stats = classify(DemandTrace((0, 2, 0, 2)))
    assert stats.fluctuation == pytest.approx(1.0, abs=1e-12)
    assert stats.group is FluctuationGroup.MEDIUM


@given(st.lists(st.integers(0, 9), min_size=1, max_size=30), st.integers(1, 7))
@settings(max_examples=150)
def test_classify_scale_covariance(demands, k):
    base = classify(DemandTrace(tuple(demands)))
    scaled = classify(DemandTrace(tuple(k * d for d in demands)))
    assert scaled.fluctuation == pytest.approx(base.fluctuation, abs=1e-9)
    assert scaled.group is base.group
