# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the RCT simulator.

Type codes: 0 always, 1 causative, 2 preventive, 3 never.  A unit is
recognized under treatment iff ``code < 2`` and under control iff
``code`` is even.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def classify(const double[::1] u, const double[::1] thresholds):
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double t0 = thresholds[0], t1 = thresholds[1], t2 = thresholds[2], v
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] view = out
    with nogil:
        for i in range(n):
            v = u[i]
            view[i] = (v >= t0) + (v >= t1) + (v >= t2)
    return out


def type_counts(const unsigned char[::1] types):
    cdef Py_ssize_t i, n = types.shape[0]
    cdef long long c0 = 0, c1 = 0, c2 = 0, c3 = 0
    cdef unsigned char t
    with nogil:
        for i in range(n):
            t = types[i]
            if t == 0:
                c0 += 1
            elif t == 1:
                c1 += 1
            elif t == 2:
                c2 += 1
            else:
                c3 += 1
    return np.array([c0, c1, c2, c3], dtype=np.int64)


def tally(const unsigned char[::1] types, const unsigned char[::1] treated):
    cdef Py_ssize_t i, n = types.shape[0]
    cdef long long rec_t = 0, tot_t = 0, rec_c = 0
    cdef int t, tr
    if treated.shape[0] != n:
        raise ValueError("types and treated must have equal length")
    # branchless: assignment is random, so branches mispredict half the time
    with nogil:
        for i in range(n):
            t = types[i]
            tr = treated[i] != 0
            tot_t += tr
            rec_t += tr & (t < 2)
            rec_c += (tr ^ 1) & ((t & 1) == 0)
    return rec_t, tot_t, rec_c, n - tot_t


def tally_paired(const unsigned char[::1] types):
    cdef Py_ssize_t i, n = types.shape[0]
    cdef long long rec_t = 0, rec_c = 0
    cdef int t
    with nogil:
        for i in range(n):
            t = types[i]
            rec_t += t < 2
            rec_c += (t & 1) == 0
    return rec_t, n, rec_c, n


def simulate_arms(const double[::1] u_type, const double[::1] u_assign,
                  const double[::1] thresholds, double treated_fraction):
    """classify + Bernoulli assignment + tally in one pass, no temporaries."""
    cdef Py_ssize_t i, n = u_type.shape[0]
    cdef double t0 = thresholds[0], t1 = thresholds[1], t2 = thresholds[2], v
    cdef long long rec_t = 0, tot_t = 0, rec_c = 0
    cdef int code, tr
    if u_assign.shape[0] != n:
        raise ValueError("u_type and u_assign must have equal length")
    with nogil:
        for i in range(n):
            v = u_type[i]
            code = (v >= t0) + (v >= t1) + (v >= t2)
            tr = u_assign[i] < treated_fraction
            tot_t += tr
            rec_t += tr & (code < 2)
            rec_c += (tr ^ 1) & ((code & 1) == 0)
    return rec_t, tot_t, rec_c, n - tot_t
