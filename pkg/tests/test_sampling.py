import math

import numpy as np
import pytest

from collectibility import (
    SWEEP_COLUMNS,
    McConfig,
    RangeError,
    ShapeError,
    haar_state,
    mc_average,
    mc_detect_prob,
    named_state,
    rescaled,
    sample_collectibility,
    sweep_two_qubit,
    two_qubit_detect_prob,
    two_qubit_mean,
)


def test_mc_config_validation():
    with pytest.raises(RangeError):
        McConfig(samples=0)


def test_sample_requires_qubit_parties():
    with pytest.raises(ShapeError):
        sample_collectibility(haar_state((2, 3), np.random.default_rng(0)),
                              10, np.random.default_rng(0))
    with pytest.raises(RangeError):
        sample_collectibility(named_state("bell"), 0,
                              np.random.default_rng(0))


def test_sample_deterministic_for_fixed_seed():
    a = sample_collectibility(named_state("w"), 500,
                              np.random.default_rng(42))
    b = sample_collectibility(named_state("w"), 500,
                              np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_sample_range_and_shape():
    y = sample_collectibility(named_state("ghz", (3,)), 2000,
                              np.random.default_rng(3))
    assert y.shape == (2000,)
    assert np.all(y >= 0.0)
    assert np.all(y <= 0.25 + 1e-12)


def test_sample_chunking_covers_all_draws():
    y = sample_collectibility(named_state("w"), 1001,
                              np.random.default_rng(7), chunk=100)
    assert y.shape == (1001,)
    assert np.all((0.0 <= y) & (y <= 0.25 + 1e-12))


def test_bell_is_constant_under_any_detector():
    # a maximally entangled pair gives exactly 1/4 for every setting
    y = sample_collectibility(named_state("bell"), 500,
                              np.random.default_rng(0))
    assert np.all(np.abs(y - 0.25) < 1e-12)


def test_mc_average_bell():
    e = mc_average(named_state("bell"), McConfig(samples=200, seed=0))
    assert e.mean == pytest.approx(0.25, abs=1e-12)
    assert e.stderr < 1e-12


def test_mc_average_matches_closed_form_mean():
    e = mc_average(named_state("schmidt", (0.9,)),
                   McConfig(samples=10 ** 5, seed=1))
    truth = two_qubit_mean(0.9)
    assert abs(e.mean - truth) < 4.0 * e.stderr
    assert e.stderr > 0.0


def test_mc_average_frozen_value():
    e = mc_average(named_state("ghz", (3,)), McConfig(samples=2000, seed=0))
    assert e.mean == pytest.approx(0.05244829340389784, rel=1e-12)
    assert (e.samples, e.seed) == (2000, 0)


def test_mc_average_single_sample_has_zero_stderr():
    e = mc_average(named_state("bell"), McConfig(samples=1, seed=0))
    assert e.stderr == 0.0


def test_mc_detect_prob_matches_closed_form():
    e = mc_detect_prob(named_state("schmidt", (0.3,)),
                       McConfig(samples=10 ** 5, seed=1))
    truth = two_qubit_detect_prob(0.3)
    assert abs(e.mean - truth) < 4.0 * e.stderr


def test_mc_detect_prob_saturates_for_bell():
    e = mc_detect_prob(named_state("bell"), McConfig(samples=500, seed=2))
    assert e.mean == 1.0
    assert e.stderr == 0.0


def test_mc_detect_prob_uses_party_count_in_threshold():
    # the three-party product bound is 1/64, not 1/16
    e = mc_detect_prob(named_state("ghz", (3,)),
                       McConfig(samples=2000, seed=0))
    assert e.mean == pytest.approx(0.799, abs=1e-12)


def test_mc_estimate_to_dict():
    e = mc_average(named_state("bell"), McConfig(samples=10, seed=4))
    assert set(e.to_dict()) == {"mean", "stderr", "samples", "seed"}


# ------------------------------------------------------------- the sweep

def test_sweep_shape_and_columns():
    rows = sweep_two_qubit(11)
    assert rows.shape == (11, len(SWEEP_COLUMNS))
    assert SWEEP_COLUMNS == ("psi", "r_min", "r_mean", "r_max", "p_detect")


def test_sweep_angle_grid():
    rows = sweep_two_qubit(5)
    assert np.allclose(rows[:, 0], np.linspace(0.0, math.pi, 5))


def test_sweep_product_state_row():
    row = sweep_two_qubit(3)[0]
    assert row[0] == 0.0
    assert row[1] == pytest.approx(-1.0 / 3.0, rel=1e-15)
    assert row[2] == pytest.approx(-1.0 / 9.0, rel=1e-12)
    assert row[3] == 0.0
    assert row[4] == 0.0


def test_sweep_maximally_entangled_row():
    rows = sweep_two_qubit(9)
    mid = rows[4]  # psi = pi/2
    assert mid[0] == pytest.approx(math.pi / 2, rel=1e-15)
    assert np.allclose(mid[1:], [1.0, 1.0, 1.0, 1.0], atol=1e-9)


def test_sweep_rows_are_ordered_and_symmetric():
    rows = sweep_two_qubit(101)
    assert np.all(rows[:, 1] <= rows[:, 2] + 1e-12)
    assert np.all(rows[:, 2] <= rows[:, 3] + 1e-12)
    # psi -> pi - psi reflection leaves every indicator unchanged; the
    # tolerance allows sin(pi) != 0 float residue at the endpoints
    assert np.allclose(rows[:, 1:], rows[::-1, 1:], atol=1e-7)
    assert np.allclose(rows[1:-1, 1:], rows[-2:0:-1, 1:], atol=1e-9)


def test_sweep_matches_pointwise_formulas():
    rows = sweep_two_qubit(7)
    for psi, r_min, r_mean, r_max, p in rows:
        assert r_mean == pytest.approx(rescaled(two_qubit_mean(psi)),
                                       rel=1e-12)
        assert p == pytest.approx(two_qubit_detect_prob(psi), rel=1e-12)
        assert r_min <= r_max + 1e-15


def test_sweep_needs_two_points():
    with pytest.raises(RangeError):
        sweep_two_qubit(1)
