"""Coincidence observables for two photons in the chain.

Two routes produce the same numbers. The propagator route evolves the
two-photon wavefunction as ``A(t) = G(t) A G(t)^T`` using the analytic
single-photon propagator; the oracle route evolves the full sector vector
(:func:`cavitywalk.fock.evolve_amplitudes`).

The delocalisation degree is the probability of finding the photons in
different cavities, ``S = 1 - sum_m Q_mm``, computed from unnormalised
detection probabilities. The normalised coincidence matrix ``P`` is
reported alongside it but does not enter ``S``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from .fock import (
    NORM_TOL,
    PsiFamily,
    TwoPhotonState,
    evolve_amplitudes,
    psi_state,
    two_photon_basis,
)
from .lattice import ArrayModel, normal_modes, propagator

DEGENERATE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    """Detection statistics of one two-photon state.

    Attributes:
        joint: ``Q[m, n]``, probability of one photon in each of m != n, or of
            both in m when m == n; symmetric, and the upper triangle sums to 1.
        normalized: ``P[m, n] = <a_n^+ a_m^+ a_m a_n> / (<n_m> <n_n>)``, set to 0
            where an occupation vanishes.
        degenerate: mask of entries of ``normalized`` whose denominator vanished.
        mean_occupation: ``<n_j>`` per cavity.
        s_value: delocalisation degree, ``1 - trace(Q)``.
    """

    joint: np.ndarray
    normalized: np.ndarray
    degenerate: np.ndarray
    mean_occupation: np.ndarray
    s_value: float


class CoincidenceValue(NamedTuple):
    value: float
    degenerate: bool


def report_from_state(state: TwoPhotonState) -> CorrelationReport:
    amps = state.amplitudes
    norm_err = abs(np.vdot(amps, amps).real - 1.0)
    if norm_err > NORM_TOL:
        raise ValueError(f"state is not normalised (|norm^2 - 1| = {norm_err:.3e})")
    n = state.n_cavities
    probs = np.abs(amps) ** 2
    joint = np.zeros((n, n))
    numer = np.zeros((n, n))
    for (m, k), p in zip(state.basis.pairs, probs):
        joint[m - 1, k - 1] = joint[k - 1, m - 1] = p
        # <a_m^+2 a_m^2> = 2 |c_mm|^2 ; <a_k^+ a_m^+ a_m a_k> = |c_mk|^2
        numer[m - 1, k - 1] = numer[k - 1, m - 1] = 2.0 * p if m == k else p
    occ = state.mean_occupation()
    denom = np.outer(occ, occ)
    degenerate = (occ[:, None] < DEGENERATE_TOL) | (occ[None, :] < DEGENERATE_TOL)
    normalized = np.zeros((n, n))
    np.divide(numer, denom, out=normalized, where=~degenerate)
    s_value = 1.0 - float(np.trace(joint))
    return CorrelationReport(joint, normalized, degenerate, occ, s_value)


def propagate_state(model: ArrayModel, state: TwoPhotonState, t: float) -> TwoPhotonState:
    """Evolve a two-photon state with the analytic propagator instead of the sector matrix."""
    if state.n_cavities != model.n_cavities:
        raise ValueError(
            f"state has {state.n_cavities} cavities, model has {model.n_cavities}"
        )
    g = propagator(model, t).matrix
    return TwoPhotonState.from_pair_matrix(g @ state.pair_matrix() @ g.T)


def pair_probabilities(model: ArrayModel, state: TwoPhotonState, t: float) -> np.ndarray:
    """Per-pair detection probabilities at time ``t`` via the propagator, in basis order."""
    return propagate_state(model, state, t).probabilities()


def _family_columns(model: ArrayModel, family: PsiFamily, t: float):
    family.check_fits(model.n_cavities)
    g = propagator(model, t).matrix
    return g[:, family.r - 1], g[:, family.s - 1]


def p_closed_form(model: ArrayModel, family: PsiFamily, t: float, m: int, n: int) -> CoincidenceValue:
    """Normalised coincidence ``P_mn(t)`` for the psi family, evaluated from ``G`` directly.

    Returns ``CoincidenceValue(0.0, True)`` when either occupation factor in
    the denominator is below ``DEGENERATE_TOL``.
    """
    m = model.check_site(m, "m")
    n = model.check_site(n, "n")
    g_r, g_s = _family_columns(model, family, t)
    c2 = math.cos(family.theta) ** 2
    s2 = math.sin(family.theta) ** 2
    w_r, w_s = family.weights
    amp = w_r * g_r[m - 1] * g_r[n - 1] + w_s * g_s[m - 1] * g_s[n - 1]
    occ_n = c2 * abs(g_r[n - 1]) ** 2 + s2 * abs(g_s[n - 1]) ** 2
    occ_m = c2 * abs(g_r[m - 1]) ** 2 + s2 * abs(g_s[m - 1]) ** 2
    if occ_n < DEGENERATE_TOL or occ_m < DEGENERATE_TOL:
        return CoincidenceValue(0.0, True)
    return CoincidenceValue(0.5 * abs(amp) ** 2 / (occ_n * occ_m), False)


def _kernel_inputs(model: ArrayModel, family: PsiFamily):
    family.check_fits(model.n_cavities)
    modes = normal_modes(model)
    s = modes.mode_matrix
    weight_r = np.ascontiguousarray(s * s[family.r - 1])
    weight_s = np.ascontiguousarray(s * s[family.s - 1])
    w_r, w_s = family.weights
    return modes.frequencies, weight_r, weight_s, complex(w_r), complex(w_s)


def delocalization(model: ArrayModel, family: PsiFamily, times, backend=None) -> np.ndarray:
    """``S(t)`` on the propagator route, for an array of times.

    Args:
        backend: ``"cython"`` or ``"python"``; defaults to the backend chosen at import.
    """
    times = np.ascontiguousarray(np.atleast_1d(np.asarray(times, dtype=float)))
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    kernel = kernels.delocalization_series if backend is None else kernels.available_backends()[backend]
    return kernel(*_kernel_inputs(model, family), times)


def delocalization_timeseries(
    model: ArrayModel,
    initial: Union[PsiFamily, TwoPhotonState],
    times,
) -> np.ndarray:
    """``S(t)`` from oracle-evolved states; returns rows ``(t, S)``.

    ``initial`` is either a psi-family descriptor or an explicit state.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise ValueError("times must be non-empty")
    if isinstance(initial, PsiFamily):
        initial = psi_state(initial, model.n_cavities)
    amps = evolve_amplitudes(model, initial, times)
    double = two_photon_basis(model.n_cavities).is_double
    s = 1.0 - np.sum(np.abs(amps[:, double]) ** 2, axis=1)
    return np.column_stack([times, s])


def negativity(family: PsiFamily) -> float:
    """Negativity of the psi-family state across the r | s cut.

    In the Schmidt form ``cos(theta) |2>|0> + sin(theta) |0>|2'>`` the phase
    ``exp(i phi)`` is absorbed into the local vector ``|2'>``, leaving the
    coefficients ``cos(theta)`` and ``sin(theta)``.
    """
    coeffs = (abs(math.cos(family.theta)), abs(math.sin(family.theta)))
    return schmidt_negativity(coeffs)


def schmidt_negativity(coefficients) -> float:
    """``((sum_i sqrt(lambda_i))**2 - 1) / 2`` from Schmidt coefficients ``sqrt(lambda_i)``.

    Expanded as ``sum_{i<j} a_i a_j + (sum_i a_i^2 - 1) / 2`` to avoid cancellation.
    """
    a = [float(x) for x in coefficients]
    cross = math.fsum(a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    return cross + 0.5 * (math.fsum(x * x for x in a) - 1.0)


def schmidt_coefficients(coefficient_matrix) -> np.ndarray:
    """Schmidt coefficients of a bipartite pure state ``sum_ij M_ij |i>|j>`` by SVD."""
    return np.linalg.svd(np.asarray(coefficient_matrix, dtype=complex), compute_uv=False)


def two_mode_coefficients(state: TwoPhotonState, r: int, s: int) -> np.ndarray:
    """Coefficient matrix ``M[p, q]`` of ``|p>_r |q>_s`` (p, q in 0..2) for a state
    supported on cavities r and s only."""
    m = np.zeros((3, 3), dtype=complex)
    m[2, 0] = state.amplitude(r, r)
    m[0, 2] = state.amplitude(s, s)
    m[1, 1] = state.amplitude(r, s)
    captured = np.sum(np.abs(m) ** 2)
    if abs(captured - 1.0) > NORM_TOL:
        raise ValueError(f"state has weight outside cavities {r} and {s}")
    return m
