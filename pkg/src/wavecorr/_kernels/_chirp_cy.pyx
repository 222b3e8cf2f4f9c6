# cython: boundscheck=False, wraparound=False, cdivision=True
"""Serial C loop for the chirp quadrature sum.

Matches the numpy fallback contract: fixed j-order accumulation per
output point, double precision throughout.
"""

from libc.math cimport cos, sin

import numpy as np


def chirp_sum(const double[::1] x_out, const double[::1] x_in,
              const double complex[::1] coeffs, double alpha):
    cdef Py_ssize_t n = x_out.shape[0]
    cdef Py_ssize_t m = x_in.shape[0]
    cdef Py_ssize_t i, j
    cdef double u, ph, c, s, cr, ci, acc_re, acc_im
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] ov = out
    for i in range(n):
        acc_re = 0.0
        acc_im = 0.0
        for j in range(m):
            u = x_out[i] - x_in[j]
            ph = alpha * u * u
            c = cos(ph)
            s = sin(ph)
            cr = coeffs[j].real
            ci = coeffs[j].imag
            acc_re += cr * c - ci * s
            acc_im += cr * s + ci * c
        ov[i] = complex(acc_re, acc_im)
    return out
