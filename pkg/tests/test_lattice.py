import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from cavitywalk.lattice import ArrayModel, hopping_matrix, normal_modes, propagator, propagator_stack

J = 0.1
sizes = st.integers(min_value=1, max_value=16)
times = st.floats(min_value=0.0, max_value=100.0 / J, allow_nan=False)


def expm_propagator(model, t):
    # independent route: a(t) = exp(-i h t) a(0) for the single-photon hopping matrix
    return scipy.linalg.expm(-1j * hopping_matrix(model) * t)


@pytest.mark.parametrize("kwargs", [dict(n_cavities=0), dict(n_cavities=-3),
                                    dict(n_cavities=2, omega=math.inf),
                                    dict(n_cavities=2, hopping=math.nan)])
def test_model_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        ArrayModel(**kwargs)


def test_model_rejects_non_integer_size():
    with pytest.raises(TypeError):
        ArrayModel(2.5)


def test_normal_modes_single_cavity():
    modes = normal_modes(ArrayModel(1, 1.0, 0.1))
    np.testing.assert_allclose(modes.frequencies, [1.0], atol=1e-15)
    np.testing.assert_allclose(modes.mode_matrix, [[1.0]], atol=1e-15)


def test_normal_modes_two_cavities():
    modes = normal_modes(ArrayModel(2, 1.0, 0.1))
    np.testing.assert_allclose(modes.frequencies, [1.1, 0.9], atol=1e-15)
    h = 1 / math.sqrt(2)
    np.testing.assert_allclose(modes.mode_matrix, [[h, h], [h, -h]], atol=1e-15)


@pytest.mark.parametrize("n", range(1, 17))
def test_mode_matrix_orthogonal_and_symmetric(n):
    s = normal_modes(ArrayModel(n)).mode_matrix
    assert np.max(np.abs(s @ s.T - np.eye(n))) < 1e-12
    assert np.array_equal(s, s.T)


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_normal_modes_diagonalise_hopping_matrix(n):
    model = ArrayModel(n, 1.3, -0.4)
    modes = normal_modes(model)
    s = modes.mode_matrix
    np.testing.assert_allclose(s.T @ hopping_matrix(model) @ s, np.diag(modes.frequencies), atol=1e-12)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_propagator_identity_at_zero(n):
    g = propagator(ArrayModel(n), 0.0).matrix
    assert np.max(np.abs(g - np.eye(n))) < 1e-14


@pytest.mark.parametrize("t", [0.3, 7.0, 123.4])
def test_propagator_single_cavity(t):
    g = propagator(ArrayModel(1, 1.0, 0.1), t).matrix
    assert abs(g[0, 0] - np.exp(-1j * t)) < 1e-14


@pytest.mark.parametrize("t", [0.0, 1.0, 7.853981633974483, 250.0])
def test_propagator_two_cavities_closed_form(t):
    g = propagator(ArrayModel(2, 1.0, 0.1), t).matrix
    expected = np.exp(-1j * t) * np.array([[math.cos(0.1 * t), -1j * math.sin(0.1 * t)],
                                           [-1j * math.sin(0.1 * t), math.cos(0.1 * t)]])
    np.testing.assert_allclose(g, expected, atol=1e-13)


@settings(max_examples=100, deadline=None)
@given(n=sizes, t=times)
def test_propagator_matches_matrix_exponential(n, t):
    model = ArrayModel(n, 1.0, J)
    assert np.max(np.abs(propagator(model, t).matrix - expm_propagator(model, t))) < 1e-10


@settings(max_examples=100, deadline=None)
@given(n=sizes, t=times)
def test_propagator_unitary(n, t):
    g = propagator(ArrayModel(n, 1.0, J), t).matrix
    assert np.max(np.abs(g @ g.conj().T - np.eye(n))) < 1e-12
    assert np.max(np.abs(np.sum(np.abs(g) ** 2, axis=1) - 1.0)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(n=sizes, t1=times, t2=times)
def test_propagator_group_property(n, t1, t2):
    model = ArrayModel(n, 1.0, J)
    lhs = propagator(model, t1).matrix @ propagator(model, t2).matrix
    assert np.max(np.abs(lhs - propagator(model, t1 + t2).matrix)) < 1e-11


@settings(max_examples=50, deadline=None)
@given(n=sizes, t=times)
def test_propagator_symmetries(n, t):
    g = propagator(ArrayModel(n, 1.0, J), t).matrix
    assert np.max(np.abs(g - g.T)) < 1e-14
    assert np.max(np.abs(g - g[::-1, ::-1])) < 1e-12


def test_propagator_rejects_non_finite_time():
    with pytest.raises(ValueError):
        propagator(ArrayModel(3), math.nan)


def test_propagator_stack_matches_single_evaluations():
    model = ArrayModel(6, 0.7, 0.25)
    ts = np.array([0.0, 1.5, 40.0])
    stack = propagator_stack(model, ts)
    for g, t in zip(stack, ts):
        np.testing.assert_allclose(g, propagator(model, t).matrix, atol=1e-14)
