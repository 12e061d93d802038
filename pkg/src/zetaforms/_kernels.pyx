# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled omega kernel (same sweep as _kernels_py.omega_pq)."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, qsort

ctypedef long long i64


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef i64 x = (<i64*>a)[0]
    cdef i64 y = (<i64*>b)[0]
    return (x > y) - (x < y)


cdef int _omega_one(i64 p, i64 q, i64 M, const i64* ds, int J,
                    i64* A, i64* B, i64* C) noexcept nogil:
    # p >= 0, q > 0: every floor below is a plain truncating division
    cdef int j, k, ia = 0, ib = 0, val, best = 2 * J
    cdef i64 u, v, y, const_part = 0
    for j in range(J):
        u = ds[j] * p
        v = (M - ds[j]) * p
        const_part += ((M - 2 * ds[j]) * p) // q + u // q - v // q
        A[j] = u % q
        B[j] = v % q
        C[1 + j] = A[j]
        C[1 + J + j] = B[j]
    C[0] = 0
    qsort(A, J, sizeof(i64), _cmp)
    qsort(B, J, sizeof(i64), _cmp)
    qsort(C, 2 * J + 1, sizeof(i64), _cmp)
    for k in range(2 * J + 1):
        y = C[k]
        while ia < J and A[ia] <= y:
            ia += 1
        while ib < J and B[ib] < y:
            ib += 1
        val = (J - ia) + ib
        if val < best:
            best = val
    return <int>(const_part + best)


def omega_batch(nums, dens, i64 M, deltas):
    cdef cnp.ndarray[i64, ndim=1] P = np.ascontiguousarray(nums, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] Q = np.ascontiguousarray(dens, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] D = np.ascontiguousarray(deltas, dtype=np.int64)
    cdef Py_ssize_t n = P.shape[0], i
    cdef int J = <int>D.shape[0]
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.empty(n, dtype=np.int32)
    if n == 0:
        return []
    cdef i64* A = <i64*>malloc(J * sizeof(i64))
    cdef i64* B = <i64*>malloc(J * sizeof(i64))
    cdef i64* C = <i64*>malloc((2 * J + 1) * sizeof(i64))
    cdef i64* pp = &P[0]
    cdef i64* qq = &Q[0]
    cdef const i64* dd = &D[0]
    cdef cnp.int32_t* oo = &out[0]
    if A == NULL or B == NULL or C == NULL:
        free(A); free(B); free(C)
        raise MemoryError()
    with nogil:
        for i in range(n):
            oo[i] = _omega_one(pp[i], qq[i], M, dd, J, A, B, C)
    free(A); free(B); free(C)
    return out.tolist()
