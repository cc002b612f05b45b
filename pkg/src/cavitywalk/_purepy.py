"""Numpy implementation of the delocalisation kernel, used when the compiled
extension is unavailable."""

import numpy as np

_CHUNK = 2048


def delocalization_series(frequencies, weight_r, weight_s, amp_r, amp_s, times):
    """Delocalisation ``S(t) = 1 - sum_m |amp_r G_mr^2 + amp_s G_ms^2|^2`` for each time.

    ``weight_r[m, k]`` is ``S(m, k) S(r, k)`` (likewise for s), so that
    ``G_mr(t) = sum_k weight_r[m, k] exp(-i Omega_k t)``.
    """
    frequencies = np.asarray(frequencies, dtype=float)
    times = np.asarray(times, dtype=float)
    out = np.empty(times.shape[0])
    for start in range(0, times.shape[0], _CHUNK):
        tt = times[start:start + _CHUNK]
        phases = np.exp(-1j * np.multiply.outer(tt, frequencies))
        g_r = phases @ weight_r.T
        g_s = phases @ weight_s.T
        a = amp_r * g_r**2 + amp_s * g_s**2
        out[start:start + _CHUNK] = 1.0 - np.sum(a.real**2 + a.imag**2, axis=1)
    return out
