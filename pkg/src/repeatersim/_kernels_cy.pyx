# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled closed-form grid kernels.

Twin of ``_kernels_py``; the two must stay semantically identical.
"""
import numpy as np

from libc.math cimport cos, sin, sqrt, hypot

BACKEND_NAME = "compiled"

DEGENERATE_WEIGHT = 1e-28

cdef double _DEG_W = 1e-28


cdef inline double complex _phase(double theta) nogil:
    # exp(-i theta)
    return cos(theta) - 1j * sin(theta)


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def pair_unitary_elements(double g2, double g3, double delta2, double delta3, t):
    # Returns (u11, u22, u23, u32, u33) of the inner-pair propagator per time.
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0], i
    u11_arr = np.empty(n, dtype=np.complex128)
    u22_arr = np.empty(n, dtype=np.complex128)
    u23_arr = np.empty(n, dtype=np.complex128)
    u32_arr = np.empty(n, dtype=np.complex128)
    u33_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] u11 = u11_arr
    cdef double complex[::1] u22 = u22_arr
    cdef double complex[::1] u23 = u23_arr
    cdef double complex[::1] u32 = u32_arr
    cdef double complex[::1] u33 = u33_arr

    cdef double l2 = g2 * g2 / delta2
    cdef double l3 = g3 * g3 / delta3
    cdef double gp = g2 * g3 * 0.5 * (1.0 / delta2 + 1.0 / delta3)
    cdef double dd = (delta2 - delta3) + (l2 - l3)
    cdef double f = hypot(dd, 2.0 * gp)
    cdef double ti, half, c, sf
    cdef double complex e2, e3, rot

    with nogil:
        for i in range(n):
            ti = tv[i]
            half = 0.5 * f * ti
            c = cos(half)
            sf = sin(half) / f if f > 0 else 0.5 * ti
            e2 = _phase((l2 - 0.5 * dd) * ti)
            e3 = _phase((l3 + 0.5 * dd) * ti)
            rot = -2j * gp * sf
            u11[i] = _phase((l2 + l3) * ti)
            u22[i] = e2 * (c - 1j * dd * sf)
            u23[i] = e2 * rot
            u32[i] = e3 * rot
            u33[i] = e3 * (c + 1j * dd * sf)
    return u11_arr, u22_arr, u23_arr, u32_arr, u33_arr


def bsm_closed_form(cl, dl, cr, dr, int bell_code):
    # bell_code 0 -> phi_plus target (|ee>+|gg>)/sqrt2, 1 -> psi_plus.
    cdef double complex[::1] clv = np.ascontiguousarray(cl, dtype=np.complex128)
    cdef double complex[::1] dlv = np.ascontiguousarray(dl, dtype=np.complex128)
    cdef double complex[::1] crv = np.ascontiguousarray(cr, dtype=np.complex128)
    cdef double complex[::1] drv = np.ascontiguousarray(dr, dtype=np.complex128)
    cdef Py_ssize_t n = clv.shape[0], i
    conc_arr = np.zeros(n, dtype=np.float64)
    prob_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] conc = conc_arr
    cdef double[::1] prob = prob_arr
    cdef double complex p, q
    cdef double nl, nr, w

    with nogil:
        for i in range(n):
            nl = _abs2(clv[i]) + _abs2(dlv[i])
            nr = _abs2(crv[i]) + _abs2(drv[i])
            if bell_code == 0:
                p = clv[i] * drv[i]
                q = dlv[i] * crv[i]
            else:
                p = clv[i] * crv[i]
                q = dlv[i] * drv[i]
            w = _abs2(p) + _abs2(q)
            prob[i] = w / (2.0 * nl * nr)
            if w > _DEG_W:
                conc[i] = 2.0 * sqrt(_abs2(p)) * sqrt(_abs2(q)) / w
    return conc_arr, prob_arr


def qed_closed_form(cl, dl, cr, dr, double shift, t, tau, int outcome_code):
    # outcome_code 0 -> swap pair measured in |eg>, 1 -> |ge>.
    cdef double complex[::1] clv = np.ascontiguousarray(cl, dtype=np.complex128)
    cdef double complex[::1] dlv = np.ascontiguousarray(dl, dtype=np.complex128)
    cdef double complex[::1] crv = np.ascontiguousarray(cr, dtype=np.complex128)
    cdef double complex[::1] drv = np.ascontiguousarray(dr, dtype=np.complex128)
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef double[::1] tauv = np.ascontiguousarray(tau, dtype=np.float64)
    cdef Py_ssize_t n = clv.shape[0], i
    conc_arr = np.zeros(n, dtype=np.float64)
    prob_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] conc = conc_arr
    cdef double[::1] prob = prob_arr
    cdef double complex e, p, q
    cdef double nl, nr, w

    with nogil:
        for i in range(n):
            nl = _abs2(clv[i]) + _abs2(dlv[i])
            nr = _abs2(crv[i]) + _abs2(drv[i])
            e = _phase(2.0 * shift * (tauv[i] - tv[i]))
            if outcome_code == 0:
                p = clv[i] * crv[i] * (e - 1.0)
                q = dlv[i] * drv[i] * (e + 1.0)
            else:
                p = clv[i] * crv[i] * (e + 1.0)
                q = dlv[i] * drv[i] * (e - 1.0)
            w = _abs2(p) + _abs2(q)
            prob[i] = w / (4.0 * nl * nr)
            if w > _DEG_W:
                conc[i] = 2.0 * sqrt(_abs2(p)) * sqrt(_abs2(q)) / w
    return conc_arr, prob_arr
