import math

import pytest
from hypothesis import given, strategies as st

from avatartime.params import (
    ModelParams,
    ParameterError,
    beta_from_presence_scores,
    debrief_time,
    expected_socializing_time,
    gamma_from_cues,
    zmax_from_attention,
)

pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


@pytest.mark.parametrize("horizon, fraction, expected", [
    (8760, 0.2, 1752.0),
    (8760, 0.0, 0.0),
    (100, 0.5, 50.0),
])
def test_expected_socializing_time(horizon, fraction, expected):
    assert expected_socializing_time(horizon, fraction) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("fraction", [-0.1, 1.01, math.nan])
def test_expected_socializing_time_rejects_bad_fraction(fraction):
    with pytest.raises(ParameterError):
        expected_socializing_time(8760, fraction)


@pytest.mark.parametrize("human, avatar, expected", [
    (4.182, 3.236, 1.2923362175525340),
    (5.0, 5.0, 1.0),
    (6.0, 3.0, 2.0),
])
def test_beta_from_presence_scores(human, avatar, expected):
    assert beta_from_presence_scores(human, avatar) == pytest.approx(expected, rel=1e-12)


def test_beta_rounds_to_published_value():
    assert round(beta_from_presence_scores(4.182, 3.236), 2) == 1.29


@pytest.mark.parametrize("human, avatar", [(1.0, 0.0), (1.0, -2.0), (2.0, 3.0)])
def test_beta_rejects(human, avatar):
    with pytest.raises(ParameterError):
        beta_from_presence_scores(human, avatar)


@pytest.mark.parametrize("c, delta, expected", [
    (0.54, 7 / 6, 0.63),
    (1.0, 1.0, 1.0),
    (0.5, 1.2, 0.6),
])
def test_gamma_from_cues(c, delta, expected):
    assert gamma_from_cues(c, delta) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("c, delta", [(0.0, 1.0), (-0.5, 1.0), (1.5, 1.0), (0.5, 0.0), (0.5, -1.0)])
def test_gamma_rejects(c, delta):
    with pytest.raises(ParameterError):
        gamma_from_cues(c, delta)


@pytest.mark.parametrize("y, gamma, expected", [(100, 0.63, 63.0), (0, 0.63, 0.0), (45, 0.63, 28.35)])
def test_debrief_time(y, gamma, expected):
    assert debrief_time(y, gamma) == pytest.approx(expected, abs=1e-12)


def test_debrief_time_rejects_negative():
    with pytest.raises(ParameterError):
        debrief_time(-1.0, 0.5)


@pytest.mark.parametrize("minutes, days, expected", [(50, 365, 304.1666666666667), (0, 365, 0.0), (60, 100, 100.0)])
def test_zmax_from_attention(minutes, days, expected):
    assert zmax_from_attention(minutes, days) == pytest.approx(expected, abs=1e-9)


def test_zmax_close_to_304():
    assert abs(zmax_from_attention(50, 365) - 304) < 0.2


@given(pos.filter(lambda c: c <= 1), pos)
def test_gamma_is_multiplicative(c, delta):
    assert gamma_from_cues(c, delta) == pytest.approx(gamma_from_cues(c, 1.0) * delta, rel=1e-12)


@given(pos)
def test_equal_presence_gives_unit_beta(a):
    assert beta_from_presence_scores(a, a) == 1.0


@given(st.floats(0, 1e5), st.floats(0, 1))
def test_debrief_never_exceeds_avatar_time(y, gamma):
    assert debrief_time(y, gamma) <= y


def test_params_defaults_and_derived_gamma():
    p = ModelParams()
    assert p.gamma == pytest.approx(0.63, abs=1e-12)
    assert p.x_tilde_total_expected == 1752.0
    assert p.debrief_budget_Z == p.debrief_cap_Zmax


def test_gamma_override_and_zero_gamma():
    p = ModelParams(gamma_override=0.0)
    assert p.gamma == 0.0
    assert p.debrief_limited_avatar_time == math.inf


@pytest.mark.parametrize("kwargs", [
    {"compression_c": 0.0},
    {"compression_c": 1.2},
    {"anthropomorphism_delta": 0.0},
    {"debrief_budget_Z": 400.0},
    {"debrief_budget_Z": -1.0},
    {"avatar_capacity_Y": -1.0},
    {"avatar_capacity_Y": 9000.0},
    {"default_beta": 0.9},
    {"gamma_override": -0.1},
    {"horizon_hours": math.inf},
])
def test_params_reject_invalid(kwargs):
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


def test_params_dict_roundtrip():
    p = ModelParams(avatar_capacity_Y=45, debrief_budget_Z=45, gamma_override=0.63)
    assert ModelParams.from_dict(p.to_dict()) == p
    with pytest.raises(ParameterError):
        ModelParams.from_dict({"bogus": 1})
