# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled delocalisation kernel.

Same contract as :func:`cavitywalk._purepy.delocalization_series`. The
weight matrices must come from the chain's sine modes: rows m and N+1-m then
differ only by the sign ``(-1)**(k+1)`` per mode, so one pass over the first
half of the rows yields both, with odd and even modes summed separately.
The frequencies must be symmetric about their midpoint; the common phase at
the midpoint cancels in ``|A|^2``, and modes k and N+1-k then carry complex
conjugate phases, so only half the phases are evaluated.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()


cdef inline double _accumulate(double gr_re, double gr_im, double gs_re, double gs_im,
                               double ar_re, double ar_im, double as_re, double as_im) nogil:
    cdef double sq_r_re = gr_re * gr_re - gr_im * gr_im
    cdef double sq_r_im = 2.0 * gr_re * gr_im
    cdef double sq_s_re = gs_re * gs_re - gs_im * gs_im
    cdef double sq_s_im = 2.0 * gs_re * gs_im
    cdef double a_re = ar_re * sq_r_re - ar_im * sq_r_im + as_re * sq_s_re - as_im * sq_s_im
    cdef double a_im = ar_re * sq_r_im + ar_im * sq_r_re + as_re * sq_s_im + as_im * sq_s_re
    return a_re * a_re + a_im * a_im


def delocalization_series(const double[::1] frequencies,
                          const double[:, ::1] weight_r,
                          const double[:, ::1] weight_s,
                          double complex amp_r,
                          double complex amp_s,
                          const double[::1] times):
    cdef Py_ssize_t n = frequencies.shape[0]
    cdef Py_ssize_t n_t = times.shape[0]
    cdef Py_ssize_t half = (n + 1) // 2
    cdef Py_ssize_t i, m, k
    cdef double t, w, c, s, acc
    # [0] odd modes (k = 1, 3, ...), [1] even modes; re/im for r and s columns
    cdef double ro_re, ro_im, re_re, re_im, so_re, so_im, se_re, se_im
    cdef double ar_re = amp_r.real, ar_im = amp_r.imag
    cdef double as_re = amp_s.real, as_im = amp_s.imag

    out_arr = np.empty(n_t, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] cs = np.empty(n, dtype=np.float64)
    cdef double[::1] sn = np.empty(n, dtype=np.float64)

    if n == 0:
        return out_arr
    cdef double[::1] detuning = np.empty(n, dtype=np.float64)
    for k in range(half):
        detuning[k] = 0.5 * (frequencies[k] - frequencies[n - 1 - k])

    with nogil:
        for i in range(n_t):
            t = times[i]
            for k in range(half):
                cs[k] = cos(detuning[k] * t)
                sn[k] = sin(detuning[k] * t)
                cs[n - 1 - k] = cs[k]
                sn[n - 1 - k] = -sn[k]
            acc = 0.0
            for m in range(half):
                ro_re = 0.0
                ro_im = 0.0
                re_re = 0.0
                re_im = 0.0
                so_re = 0.0
                so_im = 0.0
                se_re = 0.0
                se_im = 0.0
                # 0-based k even <=> 1-based mode index odd
                for k in range(0, n, 2):
                    c = cs[k]
                    s = sn[k]
                    w = weight_r[m, k]
                    ro_re += w * c
                    ro_im -= w * s
                    w = weight_s[m, k]
                    so_re += w * c
                    so_im -= w * s
                for k in range(1, n, 2):
                    c = cs[k]
                    s = sn[k]
                    w = weight_r[m, k]
                    re_re += w * c
                    re_im -= w * s
                    w = weight_s[m, k]
                    se_re += w * c
                    se_im -= w * s
                acc += _accumulate(ro_re + re_re, ro_im + re_im, so_re + se_re, so_im + se_im,
                                   ar_re, ar_im, as_re, as_im)
                if 2 * m + 1 != n:
                    acc += _accumulate(ro_re - re_re, ro_im - re_im, so_re - se_re, so_im - se_im,
                                       ar_re, ar_im, as_re, as_im)
            out[i] = 1.0 - acc
    return out_arr
