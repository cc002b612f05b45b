"""Uniform coupled-cavity chain: normal modes and the single-photon propagator.

Cavity labels and mode labels are 1-based at every public boundary; arrays are
stored 0-based, so ``matrix[j - 1, l - 1]`` holds the ``(j, l)`` element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class ArrayModel:
    """Chain of ``n_cavities`` resonant cavities with nearest-neighbour hopping.

    Attributes:
        n_cavities: number of cavities N (>= 1).
        omega: common cavity frequency (hbar = 1).
        hopping: hopping strength J between adjacent cavities; any sign.
    """

    n_cavities: int
    omega: float = 1.0
    hopping: float = 0.1

    def __post_init__(self):
        n = self.n_cavities
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise TypeError(f"n_cavities must be an integer, got {n!r}")
        if n < 1:
            raise ValueError(f"n_cavities must be >= 1, got {n}")
        object.__setattr__(self, "n_cavities", int(n))
        for name in ("omega", "hopping"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)

    def check_site(self, j: int, name: str = "site") -> int:
        """Validate a 1-based cavity label and return it as an int."""
        if isinstance(j, bool) or not isinstance(j, (int, np.integer)):
            raise TypeError(f"{name} must be an integer, got {j!r}")
        if not 1 <= j <= self.n_cavities:
            raise ValueError(f"{name}={j} outside 1..{self.n_cavities}")
        return int(j)


@dataclass(frozen=True, eq=False)
class NormalModes:
    """Mode frequencies and the real orthogonal sine-transform mode matrix.

    ``frequencies[k - 1]`` is the frequency of mode k and
    ``mode_matrix[j - 1, k - 1]`` its amplitude on cavity j.
    """

    frequencies: np.ndarray
    mode_matrix: np.ndarray


@dataclass(frozen=True, eq=False)
class Propagator:
    """Heisenberg propagator ``a_j(t) = sum_l matrix[j, l] a_l(0)``.

    Creation operators evolve with the complex conjugate matrix.
    """

    time: float
    matrix: np.ndarray

    def element(self, j: int, l: int) -> complex:
        return complex(self.matrix[j - 1, l - 1])


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=256)
def normal_modes(model: ArrayModel) -> NormalModes:
    n = model.n_cavities
    k = np.arange(1, n + 1)
    frequencies = model.omega + 2.0 * model.hopping * np.cos(np.pi * k / (n + 1))
    # sin(j k pi / (N+1)) with the integer product reduced first keeps S(j,k) == S(k,j) exactly
    jk = np.outer(k, k)
    mode_matrix = math.sqrt(2.0 / (n + 1)) * np.sin(np.pi * jk / (n + 1))
    return NormalModes(_frozen(frequencies), _frozen(mode_matrix))


def _check_time(t) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    return t


def propagator(model: ArrayModel, t: float) -> Propagator:
    """Evaluate ``G_jl(t) = sum_k exp(-i Omega_k t) S(j,k) S(l,k)`` by the spectral sum."""
    t = _check_time(t)
    modes = normal_modes(model)
    s = modes.mode_matrix
    phases = np.exp(-1j * modes.frequencies * t)
    g = (s * phases) @ s.T
    return Propagator(t, _frozen(g))


def propagator_stack(model: ArrayModel, times) -> np.ndarray:
    """Propagator matrices for many times at once, shape ``(len(times), N, N)``."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise ValueError("times must be one-dimensional")
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    modes = normal_modes(model)
    s = modes.mode_matrix
    phases = np.exp(-1j * np.multiply.outer(times, modes.frequencies))
    return np.einsum("jk,tk,lk->tjl", s, phases, s)


def hopping_matrix(model: ArrayModel) -> np.ndarray:
    """Single-photon Hamiltonian: ``omega`` on the diagonal, ``J`` on the first off-diagonals."""
    n = model.n_cavities
    h = model.omega * np.eye(n)
    idx = np.arange(n - 1)
    h[idx, idx + 1] = model.hopping
    h[idx + 1, idx] = model.hopping
    return h
