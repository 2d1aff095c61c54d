# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled subset sweep.

For every nonempty union ``F`` of column blocks, gather the principal
submatrices ``A_F``, ``B_F`` of two Hermitian matrices and return the largest
eigenvalue of the generalized problem selected by ``itype``::

    itype 1:  A_F x = mu B_F x
    itype 2:  A_F B_F x = mu x

``B_F`` must be positive definite. The loop runs without the GIL and calls
LAPACK ``zhegv`` through scipy's Cython bindings.
"""

import numpy as np

from libc.math cimport NAN
from libc.stdlib cimport free, malloc
from scipy.linalg.cython_lapack cimport zhegv


def subset_eigmax(const double complex[:, ::1] a, const double complex[:, ::1] b,
                  const Py_ssize_t[::1] offsets, const Py_ssize_t[::1] sizes, int itype):
    cdef Py_ssize_t m = offsets.shape[0]
    cdef Py_ssize_t total = a.shape[0]
    if m < 1 or m > 30:
        raise ValueError("block count must be in [1, 30]")
    if a.shape[1] != total or b.shape[0] != total or b.shape[1] != total:
        raise ValueError("a and b must be square and of equal size")
    if sizes.shape[0] != m:
        raise ValueError("offsets and sizes differ in length")
    if itype != 1 and itype != 2:
        raise ValueError("itype must be 1 or 2")
    cdef Py_ssize_t j
    for j in range(m):
        if sizes[j] < 1 or offsets[j] < 0 or offsets[j] + sizes[j] > total:
            raise ValueError("block out of range")

    cdef Py_ssize_t nsub = (<Py_ssize_t> 1 << m) - 1
    out_arr = np.empty(nsub, dtype=np.float64)
    cdef double[::1] out = out_arr

    cdef int lwork = <int> (66 * total if total > 0 else 1)
    cdef double complex *wa = <double complex *> malloc(total * total * sizeof(double complex))
    cdef double complex *wb = <double complex *> malloc(total * total * sizeof(double complex))
    cdef double complex *work = <double complex *> malloc(lwork * sizeof(double complex))
    cdef double *w = <double *> malloc(total * sizeof(double))
    cdef double *rwork = <double *> malloc((3 * total + 1) * sizeof(double))
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(total * sizeof(Py_ssize_t))
    if wa == NULL or wb == NULL or work == NULL or w == NULL or rwork == NULL or idx == NULL:
        free(wa); free(wb); free(work); free(w); free(rwork); free(idx)
        raise MemoryError()

    cdef Py_ssize_t mask, k, r, c, t
    cdef int kk, info, it = itype
    cdef char jobz = b'N'
    cdef char uplo = b'U'
    try:
        with nogil:
            for mask in range(1, nsub + 1):
                k = 0
                for j in range(m):
                    if (mask >> j) & 1:
                        for t in range(sizes[j]):
                            idx[k] = offsets[j] + t
                            k += 1
                # column-major gather of the principal submatrices
                for c in range(k):
                    for r in range(k):
                        wa[r + c * k] = a[idx[r], idx[c]]
                        wb[r + c * k] = b[idx[r], idx[c]]
                kk = <int> k
                zhegv(&it, &jobz, &uplo, &kk, wa, &kk, wb, &kk, w, work, &lwork, rwork, &info)
                if info != 0:
                    out[mask - 1] = NAN
                else:
                    out[mask - 1] = w[k - 1]
    finally:
        free(wa); free(wb); free(work); free(w); free(rwork); free(idx)
    return out_arr
