import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from underlay_tas.model import (
    HALT,
    ChannelRealization,
    MetricEstimate,
    Method,
    ParameterError,
    SelectionOutcome,
    SystemParams,
    validate,
)

pos = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def valid_params(draw):
    return SystemParams(
        n_antennas=draw(st.integers(1, 16)),
        pt_power=draw(pos), st_power=draw(pos), noise=draw(pos),
        interference_threshold=draw(st.one_of(st.floats(0, 1e6), st.just(math.inf))),
        rate_ps=draw(pos), rate_ss=draw(pos), rate_sp=draw(pos),
        outage_threshold=draw(st.floats(0, 1e6)),
        ds_weight=draw(st.floats(0, 1)),
    )


@settings(max_examples=100)
@given(valid_params())
def test_valid_params_round_trip(p):
    assert validate(p) is p
    assert p.replace() == p


BAD_VALUES = {
    "n_antennas": [0, -1, 2.5, True],
    "pt_power": [0.0, -1.0, math.inf, math.nan],
    "st_power": [0.0, -0.5, math.inf],
    "noise": [0.0, math.nan],
    "rate_ps": [0.0, -2.0],
    "rate_ss": [math.inf],
    "rate_sp": [-1e-9],
    "interference_threshold": [-0.1, math.nan],
    "outage_threshold": [-1.0, math.nan],
    "ds_weight": [-0.01, 1.01, math.nan],
}


@pytest.mark.parametrize("name,value", [(k, v) for k, vs in BAD_VALUES.items() for v in vs])
def test_each_bad_field_rejected(name, value):
    with pytest.raises(ParameterError) as info:
        SystemParams(**{name: value})
    assert len(info.value.violations) == 1
    assert name in info.value.violations[0]


@settings(max_examples=50)
@given(st.sets(st.sampled_from(sorted(BAD_VALUES)), min_size=1))
def test_all_violations_reported(names):
    kwargs = {n: BAD_VALUES[n][0] for n in names}
    with pytest.raises(ParameterError) as info:
        SystemParams(**kwargs)
    assert len(info.value.violations) == len(names)


def test_parameter_error_is_value_error():
    with pytest.raises(ValueError):
        SystemParams(noise=-1.0)


def test_unconstrained_threshold_allowed():
    p = SystemParams(interference_threshold=math.inf)
    assert p.feasibility_level == math.inf


def test_feasibility_level():
    assert SystemParams(st_power=0.5, interference_threshold=0.1).feasibility_level == pytest.approx(0.2)


def test_params_are_frozen():
    p = SystemParams()
    with pytest.raises(AttributeError):
        p.noise = 3.0


class TestChannelRealization:
    def test_coerces_to_arrays(self):
        ch = ChannelRealization(0.1, [1.0, 2.0], [0.3, 0.4])
        assert isinstance(ch.h_sq, np.ndarray)
        assert ch.n_antennas == 2

    @pytest.mark.parametrize("h,g", [([1.0], [1.0, 2.0]), ([], []), ([[1.0]], [[1.0]])])
    def test_shape_mismatch(self, h, g):
        with pytest.raises(ValueError):
            ChannelRealization(0.1, h, g)

    @pytest.mark.parametrize("h0,h", [(-0.1, [1.0]), (0.1, [math.nan]), (math.inf, [1.0])])
    def test_bad_values(self, h0, h):
        with pytest.raises(ValueError):
            ChannelRealization(h0, h, [0.5])


class TestSelectionOutcome:
    def test_halt(self):
        assert HALT.halted
        assert HALT == SelectionOutcome()

    def test_selected(self):
        s = SelectionOutcome.selected(np.int64(3), 2)
        assert not s.halted
        assert (s.antenna, s.rank) == (3, 2)
        assert type(s.antenna) is int

    def test_half_set_rejected(self):
        with pytest.raises(ValueError):
            SelectionOutcome(antenna=1)


class TestMetricEstimate:
    def test_within(self):
        e = MetricEstimate(1.0, 0.1, Method.MONTE_CARLO, 100)
        assert e.within(1.25)
        assert not e.within(1.35)

    def test_exact_needs_zero_stderr(self):
        with pytest.raises(ValueError):
            MetricEstimate(1.0, 0.1, Method.CLOSED_FORM)

    def test_negative_stderr(self):
        with pytest.raises(ValueError):
            MetricEstimate(1.0, -0.1, Method.MONTE_CARLO)
