import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from cavitywalk.correlations import delocalization_timeseries, pair_probabilities
from cavitywalk.fock import (
    PsiFamily,
    TwoPhotonState,
    chi_state,
    evolve_amplitudes,
    evolve_oracle,
    fock_state,
    psi_state,
    sector_hamiltonian,
    sector_spectrum,
    two_photon_basis,
)
from cavitywalk.lattice import ArrayModel

SQ2 = math.sqrt(2.0)


@pytest.mark.parametrize("n", range(1, 13))
def test_basis_is_a_bijection(n):
    basis = two_photon_basis(n)
    assert basis.dim == n * (n + 1) // 2
    assert [basis.index(*p) for p in basis.pairs] == list(range(basis.dim))
    assert all(m <= k for m, k in basis.pairs)
    assert basis.pairs == tuple(sorted(basis.pairs))


def test_basis_index_is_order_free_and_checked():
    basis = two_photon_basis(4)
    assert basis.index(3, 1) == basis.index(1, 3)
    with pytest.raises(ValueError):
        basis.index(0, 2)
    with pytest.raises(ValueError):
        basis.index(2, 5)


def test_sector_hamiltonian_two_cavities():
    h = sector_hamiltonian(ArrayModel(2, 1.0, 0.1))
    c = SQ2 * 0.1
    expected = np.array([[2, c, 0], [c, 2, c], [0, c, 2]])
    np.testing.assert_allclose(h, expected, atol=1e-15)


def test_sector_hamiltonian_single_cavity():
    np.testing.assert_array_equal(sector_hamiltonian(ArrayModel(1, 1.7, 0.3)), [[3.4]])


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("omega,hopping", [(1.0, 0.1), (0.3, -1.2)])
def test_sector_hamiltonian_matches_full_fock_space(full_space_h, n, omega, hopping):
    h = sector_hamiltonian(ArrayModel(n, omega, hopping))
    np.testing.assert_allclose(h, full_space_h(n, omega, hopping), atol=1e-13)


@pytest.mark.parametrize("n", range(1, 13))
def test_sector_hamiltonian_symmetric(n):
    h = sector_hamiltonian(ArrayModel(n))
    assert np.array_equal(h, h.T)


def test_psi_state_examples():
    fam = PsiFamily(1, 2, 0.0, 1.0)
    np.testing.assert_allclose(psi_state(fam, 3).amplitudes, [1, 0, 0, 0, 0, 0])
    fam = PsiFamily(2, 3, math.pi / 2, 0.9)
    st_ = psi_state(fam, 3)
    assert abs(st_.amplitude(3, 3) - np.exp(0.9j)) < 1e-15
    assert abs(abs(st_.amplitude(3, 3)) ** 2 - 1) < 1e-15
    st_ = psi_state(PsiFamily(1, 2, math.pi / 4, math.pi), 2)
    np.testing.assert_allclose(st_.amplitudes, [1 / SQ2, 0, -1 / SQ2], atol=1e-15)


def test_psi_state_rejects_out_of_range():
    with pytest.raises(ValueError):
        psi_state(PsiFamily(2, 5, 0.3, 0.0), 4)
    with pytest.raises(ValueError):
        PsiFamily(2, 2, 0.3, 0.0)
    with pytest.raises(ValueError):
        PsiFamily(0, 2, 0.3, 0.0)


@settings(max_examples=60, deadline=None)
@given(theta=st.floats(-20, 20), phi=st.floats(-20, 20), t=st.floats(0, 300))
def test_angle_reduction_preserves_physics(theta, phi, t):
    fam = PsiFamily(1, 3, theta, phi)
    assert 0.0 <= fam.theta <= math.pi / 2
    assert 0.0 <= fam.phi < 2 * math.pi
    literal = np.zeros(10, dtype=complex)
    basis = two_photon_basis(4)
    literal[basis.index(1, 1)] = math.cos(theta)
    literal[basis.index(3, 3)] = np.exp(1j * phi) * math.sin(theta)
    model = ArrayModel(4)
    a = evolve_amplitudes(model, TwoPhotonState(basis, literal), [t])[0]
    b = evolve_amplitudes(model, psi_state(fam, 4), [t])[0]
    # equal up to a global phase
    assert abs(abs(np.vdot(a, b)) - 1.0) < 1e-10


def test_canonical_angles_untouched():
    fam = PsiFamily(1, 2, math.pi / 4, 3 * math.pi / 4)
    assert fam.theta == math.pi / 4 and fam.phi == 3 * math.pi / 4


def test_chi_state_examples():
    np.testing.assert_allclose(chi_state(1).amplitudes, [-1.0])
    np.testing.assert_allclose(chi_state(2).amplitudes, [-1 / SQ2, 0, 1 / SQ2], atol=1e-15)


@pytest.mark.parametrize("n", range(1, 17))
def test_chi_is_eigenstate(n):
    model = ArrayModel(n, 1.0, 0.1)
    chi = chi_state(n).amplitudes
    assert np.max(np.abs(sector_hamiltonian(model) @ chi - 2.0 * chi)) < 1e-12


def test_state_rejects_unnormalised():
    with pytest.raises(ValueError):
        TwoPhotonState(two_photon_basis(2), [1, 1, 0])
    with pytest.raises(ValueError):
        TwoPhotonState(two_photon_basis(2), [1, 0])


def test_pair_matrix_round_trip():
    rng = np.random.default_rng(4)
    v = rng.normal(size=10) + 1j * rng.normal(size=10)
    state = TwoPhotonState(two_photon_basis(4), v / np.linalg.norm(v))
    back = TwoPhotonState.from_pair_matrix(state.pair_matrix())
    np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-15)


def test_evolve_identity_at_zero():
    state = psi_state(PsiFamily(2, 4, 0.4, 1.1), 5)
    out = evolve_oracle(ArrayModel(5), state, 0.0)
    np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-14)


@pytest.mark.parametrize("t", [0.5, 13.0, 777.0])
def test_chi_only_acquires_phase(t):
    model = ArrayModel(6, 1.0, 0.1)
    chi = chi_state(6)
    out = evolve_oracle(model, chi, t)
    np.testing.assert_allclose(out.amplitudes, np.exp(-2j * t) * chi.amplitudes, atol=1e-12)


@pytest.mark.parametrize("t", [0.0, 2.0, 7.853981633974483, 31.0])
def test_two_cavity_beamsplitter_dynamics(full_space_h, t):
    model = ArrayModel(2, 1.0, 0.1)
    state = psi_state(PsiFamily(1, 2, math.pi / 4, 0.0), 2)
    p_mixed = evolve_oracle(model, state, t).probabilities()[1]
    assert abs(p_mixed - math.sin(0.2 * t) ** 2) < 1e-12
    # independent: Pade exponential of the full-Fock-space block
    psi_t = scipy.linalg.expm(-1j * full_space_h(2, 1.0, 0.1) * t) @ state.amplitudes
    assert abs(abs(psi_t[1]) ** 2 - p_mixed) < 1e-12


def test_eigendecomposition_cached_and_read_only():
    model = ArrayModel(5)
    assert sector_spectrum(model) is sector_spectrum(ArrayModel(5))
    with pytest.raises(ValueError):
        sector_spectrum(model).vectors[0, 0] = 1.0


random_case = st.tuples(
    st.integers(2, 12),
    st.floats(0, 2 * math.pi),
    st.floats(0, 2 * math.pi),
    st.floats(0, 4000),
    st.randoms(use_true_random=False),
)


def _family(n, theta, phi, rnd):
    r, s = rnd.sample(range(1, n + 1), 2)
    return PsiFamily(r, s, theta, phi)


@settings(max_examples=80, deadline=None)
@given(random_case)
def test_norm_and_photon_number_conserved(case):
    n, theta, phi, t, rnd = case
    model = ArrayModel(n)
    out = evolve_oracle(model, psi_state(_family(n, theta, phi, rnd), n), t)
    assert abs(np.sum(out.probabilities()) - 1.0) < 1e-12
    assert abs(out.mean_occupation().sum() - 2.0) < 1e-12


@settings(max_examples=80, deadline=None)
@given(random_case)
def test_oracle_matches_propagator_route(case):
    n, theta, phi, t, rnd = case
    model = ArrayModel(n)
    state = psi_state(_family(n, theta, phi, rnd), n)
    oracle = evolve_oracle(model, state, t).probabilities()
    assert np.max(np.abs(oracle - pair_probabilities(model, state, t))) < 1e-10


@settings(max_examples=40, deadline=None)
@given(random_case)
def test_evolution_reversible(case):
    n, theta, phi, t, rnd = case
    model = ArrayModel(n)
    state = psi_state(_family(n, theta, phi, rnd), n)
    back = evolve_oracle(model, evolve_oracle(model, state, t), -t)
    assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-10


@pytest.mark.parametrize("n", [1, 2, 7, 16])
def test_chi_never_delocalises(n):
    series = delocalization_timeseries(ArrayModel(n), chi_state(n), np.linspace(0, 4000, 200))
    assert np.max(np.abs(series[:, 1])) < 1e-12


def test_fock_state_labels():
    st_ = fock_state(3, 3, 1)
    assert st_.amplitude(1, 3) == 1.0
    np.testing.assert_allclose(st_.mean_occupation(), [1, 0, 1])
