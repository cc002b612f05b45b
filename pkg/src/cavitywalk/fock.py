"""Exact two-photon sector of the cavity chain.

The sector is spanned by ``|2_m>`` and ``|1_m 1_n>`` (m < n), indexed
lexicographically over pairs ``(m, n)`` with ``1 <= m <= n <= N``. Its
Hamiltonian is built from ladder-operator matrix elements and evolved by
direct diagonalisation; this is the brute-force reference that the
propagator route in :mod:`cavitywalk.correlations` is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lattice import ArrayModel

NORM_TOL = 1e-12


class TwoPhotonBasis:
    """Bijection between cavity pairs ``(m, n)``, ``m <= n``, and ``0..D-1``."""

    def __init__(self, n_cavities: int):
        if n_cavities < 1:
            raise ValueError(f"n_cavities must be >= 1, got {n_cavities}")
        self.n_cavities = int(n_cavities)
        n = self.n_cavities
        self.pairs = tuple((m, k) for m in range(1, n + 1) for k in range(m, n + 1))
        self._index = {p: i for i, p in enumerate(self.pairs)}
        self.dim = len(self.pairs)
        self.is_double = np.array([m == k for m, k in self.pairs])

    def __repr__(self):
        return f"TwoPhotonBasis(n_cavities={self.n_cavities})"

    def __eq__(self, other):
        return isinstance(other, TwoPhotonBasis) and other.n_cavities == self.n_cavities

    def __hash__(self):
        return hash(("TwoPhotonBasis", self.n_cavities))

    def __len__(self):
        return self.dim

    def index(self, m: int, n: int) -> int:
        """Position of ``|1_m 1_n>`` (or ``|2_m>`` when m == n); order of m, n is irrelevant."""
        key = (m, n) if m <= n else (n, m)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"pair {(m, n)} outside 1..{self.n_cavities}") from None

    def occupations(self, i: int) -> np.ndarray:
        """Photon number in each cavity for basis vector ``i``."""
        occ = np.zeros(self.n_cavities, dtype=int)
        m, n = self.pairs[i]
        occ[m - 1] += 1
        occ[n - 1] += 1
        return occ


@lru_cache(maxsize=64)
def two_photon_basis(n_cavities: int) -> TwoPhotonBasis:
    return TwoPhotonBasis(n_cavities)


@dataclass(frozen=True, eq=False)
class TwoPhotonState:
    """Normalised amplitude vector over a :class:`TwoPhotonBasis`."""

    basis: TwoPhotonBasis
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise ValueError(f"expected {self.basis.dim} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm_err = abs(np.vdot(amps, amps).real - 1.0)
        if norm_err > NORM_TOL:
            raise ValueError(f"state is not normalised (|norm^2 - 1| = {norm_err:.3e})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_cavities(self) -> int:
        return self.basis.n_cavities

    def amplitude(self, m: int, n: int) -> complex:
        return complex(self.amplitudes[self.basis.index(m, n)])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_occupation(self) -> np.ndarray:
        """``<n_j>``: weight 2 for ``|2_j>``, weight 1 for each mixed pair containing j."""
        probs = self.probabilities()
        occ = np.zeros(self.n_cavities)
        for (m, n), p in zip(self.basis.pairs, probs):
            occ[m - 1] += p
            occ[n - 1] += p
        return occ

    def pair_matrix(self) -> np.ndarray:
        """Symmetric wavefunction ``A`` with ``|psi> = 2**-0.5 sum_mn A_mn a_m^+ a_n^+ |0>``."""
        n = self.n_cavities
        a = np.zeros((n, n), dtype=complex)
        for (m, k), c in zip(self.basis.pairs, self.amplitudes):
            if m == k:
                a[m - 1, m - 1] = c
            else:
                a[m - 1, k - 1] = a[k - 1, m - 1] = c / math.sqrt(2.0)
        return a

    @classmethod
    def from_pair_matrix(cls, a: np.ndarray) -> "TwoPhotonState":
        """Inverse of :meth:`pair_matrix`; ``a`` is symmetrised first."""
        a = np.asarray(a, dtype=complex)
        n = a.shape[0]
        basis = two_photon_basis(n)
        sym = 0.5 * (a + a.T)
        amps = np.array(
            [sym[m - 1, m - 1] if m == k else math.sqrt(2.0) * sym[m - 1, k - 1]
             for m, k in basis.pairs]
        )
        return cls(basis, amps)


def fock_state(n_cavities: int, m: int, n: int) -> TwoPhotonState:
    """Basis state ``|1_m 1_n>``, or ``|2_m>`` when ``m == n``."""
    basis = two_photon_basis(n_cavities)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index(m, n)] = 1.0
    return TwoPhotonState(basis, amps)


@dataclass(frozen=True)
class PsiFamily:
    """``cos(theta) |2>_r |0>_s + exp(i phi) sin(theta) |0>_r |2>_s``.

    Angles outside ``theta in [0, pi/2]``, ``phi in [0, 2 pi)`` are mapped
    into that range; the mapped state differs from the literal one by at
    most a global phase.
    """

    r: int
    s: int
    theta: float
    phi: float

    def __post_init__(self):
        for name in ("r", "s"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.r < 1 or self.s < 1:
            raise ValueError(f"cavity labels are 1-based, got r={self.r}, s={self.s}")
        if self.r == self.s:
            raise ValueError(f"r and s must differ, got r = s = {self.r}")
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise ValueError("theta and phi must be finite")
        theta, phi = _reduce_angles(theta, phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def check_fits(self, n_cavities: int) -> None:
        if max(self.r, self.s) > n_cavities:
            raise ValueError(
                f"r={self.r}, s={self.s} do not fit in a chain of {n_cavities} cavities"
            )

    @property
    def weights(self) -> tuple[complex, complex]:
        """Amplitudes multiplying ``|2_r>`` and ``|2_s>``."""
        return math.cos(self.theta), complex(math.cos(self.phi), math.sin(self.phi)) * math.sin(self.theta)


def _reduce_angles(theta: float, phi: float) -> tuple[float, float]:
    two_pi = 2.0 * math.pi
    if not 0.0 <= theta <= 0.5 * math.pi:
        t = theta % two_pi
        if t <= 0.5 * math.pi:
            theta = t
        elif t <= math.pi:
            # cos < 0: overall sign flip moves a factor -1 onto the s term
            theta, phi = math.pi - t, phi + math.pi
        elif t <= 1.5 * math.pi:
            theta = t - math.pi
        else:
            theta, phi = two_pi - t, phi + math.pi
    if not 0.0 <= phi < two_pi:
        phi = phi % two_pi
        if phi >= two_pi:
            phi = 0.0
    return theta, phi


def psi_state(family: PsiFamily, n_cavities: int) -> TwoPhotonState:
    family.check_fits(n_cavities)
    basis = two_photon_basis(n_cavities)
    amps = np.zeros(basis.dim, dtype=complex)
    w_r, w_s = family.weights
    amps[basis.index(family.r, family.r)] = w_r
    amps[basis.index(family.s, family.s)] = w_s
    return TwoPhotonState(basis, amps)


def chi_state(n_cavities: int) -> TwoPhotonState:
    """Alternating-sign superposition of doubly occupied cavities; never delocalises."""
    basis = two_photon_basis(n_cavities)
    amps = np.zeros(basis.dim, dtype=complex)
    norm = 1.0 / math.sqrt(n_cavities)
    for n in range(1, n_cavities + 1):
        amps[basis.index(n, n)] = (-1) ** n * norm
    return TwoPhotonState(basis, amps)


def sector_hamiltonian(model: ArrayModel) -> np.ndarray:
    """Two-photon block of the chain Hamiltonian, real symmetric ``D x D``.

    Each hop ``a_i^+ a_j`` acting on occupations ``n`` contributes
    ``J sqrt(n_j) sqrt(n_i + 1)``, which gives the ``sqrt(2) J`` coupling
    between ``|2_m>`` and ``|1_m 1_{m+1}>``.
    """
    basis = two_photon_basis(model.n_cavities)
    h = np.zeros((basis.dim, basis.dim))
    for col in range(basis.dim):
        occ = basis.occupations(col)
        h[col, col] = model.omega * occ.sum()
        for j in range(model.n_cavities - 1):
            for src, dst in ((j + 1, j), (j, j + 1)):
                if occ[src] == 0:
                    continue
                amp = math.sqrt(occ[src]) * math.sqrt(occ[dst] + 1)
                new = occ.copy()
                new[src] -= 1
                new[dst] += 1
                sites = np.repeat(np.arange(1, model.n_cavities + 1), new)
                row = basis.index(int(sites[0]), int(sites[1]))
                h[row, col] += model.hopping * amp
    return h


@dataclass(frozen=True, eq=False)
class SectorSpectrum:
    energies: np.ndarray
    vectors: np.ndarray


@lru_cache(maxsize=64)
def sector_spectrum(model: ArrayModel) -> SectorSpectrum:
    """Cached eigendecomposition of :func:`sector_hamiltonian`; arrays are read-only."""
    h = sector_hamiltonian(model)
    try:
        energies, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise FloatingPointError(f"sector diagonalisation failed for {model}") from exc
    energies.flags.writeable = False
    vectors.flags.writeable = False
    return SectorSpectrum(energies, vectors)


def _check_state(model: ArrayModel, state: TwoPhotonState) -> None:
    if state.n_cavities != model.n_cavities:
        raise ValueError(
            f"state has {state.n_cavities} cavities, model has {model.n_cavities}"
        )


def evolve_amplitudes(model: ArrayModel, state0: TwoPhotonState, times) -> np.ndarray:
    """``exp(-i H t) |state0>`` for each time; returns shape ``(len(times), D)``."""
    _check_state(model, state0)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    spec = sector_spectrum(model)
    coeffs = spec.vectors.T @ state0.amplitudes
    phases = np.exp(-1j * np.multiply.outer(times, spec.energies))
    return (phases * coeffs) @ spec.vectors.T


def evolve_oracle(model: ArrayModel, state0: TwoPhotonState, t: float) -> TwoPhotonState:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    amps = evolve_amplitudes(model, state0, [t])[0]
    return TwoPhotonState(state0.basis, amps)
