# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics mirror ``_pykernels`` bit for bit."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX1
    z = (z ^ (z >> 27)) * MIX2
    return z ^ (z >> 31)


cdef inline double uniform(uint64_t key, uint64_t index) noexcept nogil:
    return <double>(mix64(key + GAMMA * (index + 1)) >> 11) * INV53


def pb_dp(p):
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t k = pv.shape[0]
    out_arr = np.zeros(k + 1)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double pi, qi
    out[0] = 1.0
    with nogil:
        for i in range(k):
            pi = pv[i]
            qi = 1.0 - pi
            j = i + 1
            while j >= 1:
                out[j] = out[j] * qi + out[j - 1] * pi
                j -= 1
            out[0] = out[0] * qi
    return out_arr


def simulate_sums(p, bint geometric, uint64_t seed, uint64_t row,
                  int64_t reps):
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t kn = pv.shape[0]
    sums_arr = np.zeros(reps, dtype=np.int64)
    cdef int64_t[::1] sums = sums_arr
    cdef uint64_t k1 = mix64(seed + GAMMA * (row + 1))
    cdef uint64_t key
    cdef int64_t r, s, j
    cdef Py_ssize_t k
    cdef double u, q, tail, thresh
    with nogil:
        for r in range(reps):
            key = mix64(k1 + GAMMA * <uint64_t>(r + 1))
            s = 0
            for k in range(kn):
                u = uniform(key, k)
                if geometric:
                    q = 1.0 - pv[k]
                    thresh = 1.0 - u
                    tail = q
                    j = 0
                    while tail > thresh:
                        tail = tail * q
                        j += 1
                    s += j
                elif u < pv[k]:
                    s += 1
            sums[r] = s
    return sums_arr
