import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collectibility import (
    ConvergenceError,
    OptimizerConfig,
    ParamError,
    RangeError,
    ScaleError,
    ShapeError,
    SizeError,
    bloch_basis,
    collectibility,
    grid_oracle,
    haar_state,
    maximize_collectibility,
    minimize_collectibility,
    named_state,
    two_qubit_extremes,
    unitary_from_params,
)

FAST8 = OptimizerConfig(restarts=8, seed=3)


# ---------------------------------------------------------------- config

def test_config_defaults():
    c = OptimizerConfig()
    assert (c.restarts, c.max_iterations, c.seed) == (32, 2000, 0)
    assert c.tolerance == 1e-10
    assert c.mode == "maximize"


def test_config_validation():
    with pytest.raises(RangeError):
        OptimizerConfig(restarts=0)
    with pytest.raises(RangeError):
        OptimizerConfig(max_iterations=0)
    with pytest.raises(RangeError):
        OptimizerConfig(tolerance=0.0)
    with pytest.raises(ParamError):
        OptimizerConfig(mode="wander")


# --------------------------------------------------- parameter decoding

def test_unitary_from_params_identity_at_zero():
    for dim in (2, 3, 4):
        u = unitary_from_params(np.zeros(dim * dim), dim)
        assert np.allclose(u, np.eye(dim), atol=1e-15)


def test_unitary_from_params_shape_errors():
    with pytest.raises(ShapeError):
        unitary_from_params(np.zeros(3), 2)
    with pytest.raises(SizeError):
        unitary_from_params(np.zeros(1), 1)


def test_unitary_matches_bloch_basis_up_to_phases():
    theta, phi = 1.234, 4.0
    u = unitary_from_params([theta / 2.0, phi, 0.0, 0.0], 2)
    b = bloch_basis(theta, phi).vectors
    for col in range(2):
        overlap = abs(np.vdot(u[:, col], b[col]))
        assert overlap == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4),
       st.lists(st.floats(-10.0, 10.0), min_size=16, max_size=16))
def test_unitary_from_params_is_unitary(dim, raw):
    u = unitary_from_params(np.array(raw[:dim * dim]), dim)
    assert np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)


# ------------------------------------------------------------- maximize

def test_maximize_bell():
    r = maximize_collectibility(named_state("bell"), FAST8)
    assert r.value == pytest.approx(0.25, abs=1e-9)
    assert r.converged
    assert r.restarts_agreeing >= 1


def test_maximize_ghz3():
    r = maximize_collectibility(named_state("ghz", (3,)), FAST8)
    assert r.value == pytest.approx(0.25, abs=1e-6)


def test_maximize_w():
    r = maximize_collectibility(named_state("w"), FAST8)
    assert r.value == pytest.approx(9.0 / 64.0, abs=1e-6)


def test_maximize_schmidt_matches_closed_form():
    for psi in (0.3, 0.8, 1.4):
        r = maximize_collectibility(named_state("schmidt", (psi,)), FAST8)
        assert r.value == pytest.approx(two_qubit_extremes(psi)[1],
                                        abs=1e-8)


def test_maximize_two_qutrits_hits_global_bound():
    r = maximize_collectibility(named_state("ghz", (2, 3)), FAST8)
    assert r.value == pytest.approx(1.0 / 27.0, abs=1e-6)


# ------------------------------------------------------------- minimize

def test_minimize_schmidt_matches_closed_form():
    for psi in (0.3, 0.8):
        r = minimize_collectibility(named_state("schmidt", (psi,)), FAST8)
        assert r.value == pytest.approx(two_qubit_extremes(psi)[0],
                                        abs=1e-8)


def test_minimize_spectator_state_reaches_zero():
    r = minimize_collectibility(named_state("bs"), FAST8)
    assert r.value == pytest.approx(0.0, abs=1e-6)


def test_config_mode_is_overridden_by_entry_point():
    cfg = OptimizerConfig(restarts=4, seed=1, mode="minimize")
    r = maximize_collectibility(named_state("bell"), cfg)
    assert r.value == pytest.approx(0.25, abs=1e-9)


# ---------------------------------------------------------- result shape

def test_result_detectors_reproduce_value_fast_path():
    s = haar_state((2, 2, 2), np.random.default_rng(17))
    r = maximize_collectibility(s, FAST8)
    check = collectibility(s, r.detectors)
    assert check.value == pytest.approx(r.value, abs=1e-10)
    assert r.detectors.parties == (1, 2)


def test_result_detectors_reproduce_value_full_path():
    s = haar_state((3, 3), np.random.default_rng(18))
    r = maximize_collectibility(s, OptimizerConfig(restarts=6, seed=5))
    check = collectibility(s, r.detectors)
    assert check.path == "full-product"
    assert check.value == pytest.approx(r.value, abs=1e-10)
    assert r.detectors.parties == (0, 1)


def test_result_params_are_canonical_and_frozen():
    r = maximize_collectibility(named_state("bell"), FAST8)
    t = r.detector_params[0::2]
    p = r.detector_params[1::2]
    assert np.all((0.0 <= t) & (t <= math.pi))
    assert np.all((0.0 <= p) & (p < 2.0 * math.pi))
    with pytest.raises(ValueError):
        r.detector_params[0] = 1.0


def test_result_to_dict_keys():
    d = maximize_collectibility(named_state("bell"), FAST8).to_dict()
    assert set(d) == {"value", "detector_params", "restarts_agreeing",
                      "converged", "detectors"}


def test_determinism():
    a = maximize_collectibility(named_state("w"), FAST8)
    b = maximize_collectibility(named_state("w"), FAST8)
    assert a.value == b.value
    assert np.array_equal(a.detector_params, b.detector_params)


def test_convergence_error_when_starved():
    with pytest.raises(ConvergenceError):
        maximize_collectibility(named_state("bell"),
                                OptimizerConfig(restarts=2,
                                                max_iterations=1))


# ------------------------------------------------------------ grid scan

def test_grid_oracle_bell_approaches_quarter_from_below():
    v = grid_oracle(named_state("bell"), 40)
    assert v <= 0.25 + 1e-12
    assert v == pytest.approx(0.25, abs=1e-3)


def test_grid_oracle_ghz3():
    v = grid_oracle(named_state("ghz", (3,)), 24)
    assert v <= 0.25 + 1e-12
    assert v == pytest.approx(0.25, abs=1e-2)


def test_grid_oracle_agrees_with_optimizer_on_random_state():
    s = haar_state((2, 2), np.random.default_rng(19))
    top = maximize_collectibility(s, FAST8).value
    grid = grid_oracle(s, 120)
    assert grid <= top + 1e-10
    assert grid == pytest.approx(top, abs=1e-3)


def test_grid_oracle_errors():
    with pytest.raises(SizeError):
        grid_oracle(haar_state((2, 2, 2, 2), np.random.default_rng(0)), 8)
    with pytest.raises(SizeError):
        grid_oracle(haar_state((2, 3), np.random.default_rng(0)), 8)
    with pytest.raises(RangeError):
        grid_oracle(named_state("bell"), 1)
    with pytest.raises(ScaleError):
        grid_oracle(named_state("ghz", (3,)), 200, budget=10 ** 6)
