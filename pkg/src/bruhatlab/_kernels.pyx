# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: F_ell echelon ops and code-matrix census scans.

Mirrors _kernels_py exactly; see that module for the conventions.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cy"

ctypedef cnp.int64_t i64
ctypedef cnp.uint8_t u8


def echelon_reduce(cnp.ndarray[i64, ndim=2] rows,
                   cnp.ndarray[u8, ndim=1] have,
                   cnp.ndarray[i64, ndim=1] vec,
                   long ell):
    cdef Py_ssize_t D = vec.shape[0]
    cdef Py_ssize_t c = 0, j
    cdef i64 x
    while c < D:
        x = vec[c]
        if x != 0:
            if have[c]:
                for j in range(c, D):
                    vec[j] = (vec[j] - x * rows[c, j]) % ell
                    if vec[j] < 0:
                        vec[j] += ell
            else:
                return c
        c += 1
    return -1


cdef long _inv_mod(long a, long ell):
    # extended Euclid; ell prime, a != 0 mod ell
    cdef long t = 0, newt = 1, r = ell, newr = a % ell, qq, tmp
    while newr != 0:
        qq = r / newr
        tmp = t - qq * newt; t = newt; newt = tmp
        tmp = r - qq * newr; r = newr; newr = tmp
    if t < 0:
        t += ell
    return t


def echelon_insert(cnp.ndarray[i64, ndim=2] rows,
                   cnp.ndarray[u8, ndim=1] have,
                   cnp.ndarray[i64, ndim=1] vec,
                   long ell):
    cdef long c = echelon_reduce(rows, have, vec, ell)
    if c < 0:
        return -1
    cdef Py_ssize_t D = vec.shape[0]
    cdef long inv = _inv_mod(<long> vec[c], ell)
    cdef Py_ssize_t j, r
    cdef i64 f
    for j in range(D):
        vec[j] = (vec[j] * inv) % ell
    for j in range(D):
        rows[c, j] = vec[j]
    have[c] = 1
    for r in range(D):
        if have[r] and r != c and rows[r, c] != 0:
            f = rows[r, c]
            for j in range(D):
                rows[r, j] = (rows[r, j] - f * vec[j]) % ell
                if rows[r, j] < 0:
                    rows[r, j] += ell
    return c


cdef inline i64 _code_add(i64 a, i64 b, i64* zech, i64 Q1) nogil:
    cdef i64 z, d
    if a == Q1:
        return b
    if b == Q1:
        return a
    d = b - a
    if d < 0:
        d += Q1  # C % would stay negative under cdivision
    z = zech[d]
    if z == Q1:
        return Q1
    return (a + z) % Q1


cdef void _mat_mul_codes(i64* out, i64* A, i64* B, Py_ssize_t m,
                         i64* zech, i64 Q1) nogil:
    cdef Py_ssize_t i, j, k
    cdef i64 acc, x, y
    for i in range(m):
        for j in range(m):
            acc = Q1
            for k in range(m):
                x = A[i * m + k]
                y = B[k * m + j]
                if x != Q1 and y != Q1:
                    acc = _code_add(acc, (x + y) % Q1, zech, Q1)
            out[i * m + j] = acc


def mat_mul_codes(cnp.ndarray[i64, ndim=1] A,
                  cnp.ndarray[i64, ndim=1] B,
                  long m,
                  cnp.ndarray[i64, ndim=1] zech,
                  long Q1):
    cdef cnp.ndarray[i64, ndim=1] out = np.empty(m * m, dtype=np.int64)
    _mat_mul_codes(&out[0], &A[0], &B[0], m, &zech[0], Q1)
    return out


cdef bint _mat_is_upper(i64* A, Py_ssize_t m, i64 Q1) nogil:
    cdef Py_ssize_t i, j
    for i in range(1, m):
        for j in range(i):
            if A[i * m + j] != Q1:
                return 0
    return 1


def mat_is_upper(cnp.ndarray[i64, ndim=1] A, long m, long Q1):
    return bool(_mat_is_upper(&A[0], m, Q1))


def scan_conj_upper(cnp.ndarray[i64, ndim=1] P,
                    cnp.ndarray[i64, ndim=2] G,
                    cnp.ndarray[i64, ndim=1] Q,
                    long m,
                    cnp.ndarray[i64, ndim=1] zech,
                    long Q1,
                    long start=0):
    cdef Py_ssize_t nG = G.shape[0]
    cdef Py_ssize_t idx
    cdef i64 tmp1[16]
    cdef i64 tmp2[16]
    if m > 4:
        raise ValueError("rank budget exceeded")
    for idx in range(start, nG):
        _mat_mul_codes(&tmp1[0], &P[0], &G[idx, 0], m, &zech[0], Q1)
        _mat_mul_codes(&tmp2[0], &tmp1[0], &Q[0], m, &zech[0], Q1)
        if _mat_is_upper(&tmp2[0], m, Q1):
            return idx
    return -1
