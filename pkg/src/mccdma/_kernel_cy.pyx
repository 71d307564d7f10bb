# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simulation kernel: per-symbol receiver loop for one point.

Bit-identical to ``_kernel_py`` (same operations in the same order); the
hot loop runs without the GIL so parameter sweeps can thread across
points.
"""

from libc.math cimport fabs

import numpy as np

EGC, MRC, BASC = 0, 1, 2


def run_symbols(int combiner, const double[:, ::1] chips,
                const double[:, ::1] bits, const double[:, :, ::1] amps,
                const double[:, ::1] noise, double mu, double gamma,
                double div_limit):
    """See ``_kernel_py.run_symbols``; identical contract and results."""
    cdef Py_ssize_t n_users = chips.shape[0]
    cdef Py_ssize_t n_sub = chips.shape[1]
    cdef Py_ssize_t n_symbols = bits.shape[0]

    errors_arr = np.zeros(n_users, dtype=np.int64)
    diverged_arr = np.zeros(n_users, dtype=np.uint8)
    weights_arr = np.empty((n_users, n_sub), dtype=np.float64)
    r_arr = np.empty(n_sub, dtype=np.float64)
    wtmp_arr = np.empty(n_sub, dtype=np.float64)

    cdef long long[::1] errors = errors_arr
    cdef unsigned char[::1] diverged = diverged_arr
    cdef double[:, ::1] weights = weights_arr
    cdef double[::1] r = r_arr
    cdef double[::1] wtmp = wtmp_arr

    cdef Py_ssize_t m, k, n
    cdef double acc, z, b, e, gain, w, maxabs

    with nogil:
        if combiner == 0:  # EGC: fixed 1/c
            for k in range(n_users):
                for n in range(n_sub):
                    weights[k, n] = 1.0 / chips[k, n]
        elif combiner == 2:  # BASC: start from the chip row
            for k in range(n_users):
                for n in range(n_sub):
                    weights[k, n] = chips[k, n]

        for m in range(n_symbols):
            # received samples, users accumulated in index order
            for n in range(n_sub):
                acc = 0.0
                for k in range(n_users):
                    acc += (amps[m, k, n] * bits[m, k]) * chips[k, n]
                r[n] = acc + noise[m, n]

            for k in range(n_users):
                if combiner == 1:  # MRC: genie amplitudes
                    for n in range(n_sub):
                        weights[k, n] = amps[m, k, n] * chips[k, n]
                z = 0.0
                for n in range(n_sub):
                    z += weights[k, n] * r[n]
                b = 1.0 if z >= 0.0 else -1.0
                if b != bits[m, k]:
                    errors[k] += 1
                if combiner == 2 and diverged[k] == 0:
                    e = z * (z * z - gamma)
                    gain = mu * e
                    maxabs = 0.0
                    for n in range(n_sub):
                        w = weights[k, n] - gain * r[n]
                        wtmp[n] = w
                        w = fabs(w)
                        if w > maxabs:
                            maxabs = w
                    if maxabs > div_limit:
                        diverged[k] = 1
                    else:
                        for n in range(n_sub):
                            weights[k, n] = wtmp[n]

    return errors_arr, diverged_arr, weights_arr
