# cython: language_level=3
"""Compiled greedy block-selection kernel.

Twin of ``_kernels_py.greedy_block_select`` with identical semantics and
tie-breaking; selected at import time by ``backend``.  Real and complex
dictionaries share one code path through a fused scalar type.

The dictionary arrives entrywise-conjugated, C-contiguous d x n (``CD``);
its memory doubles as the Fortran-order n x d adjoint, so the O(n d)
correlation scans run through the fast no-transpose BLAS gemv.  One round
costs a single Python call instead of a dozen array-op dispatches.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.math cimport sqrt
from scipy.linalg.cython_blas cimport dgemv, zgemv

cnp.import_array()

BACKEND_NAME = "compiled"

ctypedef fused scalar_t:
    double
    double complex

cdef double _BASIS_DROP = 1e-10
cdef double _CORR_SLACK = 1e-12


cdef inline double _abs2(scalar_t x) noexcept nogil:
    if scalar_t is double:
        return x * x
    else:
        return x.real * x.real + x.imag * x.imag


cdef inline scalar_t _conj(scalar_t x) noexcept nogil:
    if scalar_t is double:
        return x
    else:
        return x.conjugate()


cdef void _gemv(char trans, int m, int n, scalar_t alpha, scalar_t* a, int lda,
                scalar_t* x, scalar_t beta, scalar_t* y) noexcept nogil:
    """y = alpha * op(A) x + beta * y for column-major A (m x n)."""
    cdef int inc = 1
    if scalar_t is double:
        # real case: conjugate transpose degenerates to transpose
        if trans == c'C':
            trans = c'T'
        dgemv(&trans, &m, &n, &alpha, a, &lda, x, &inc, &beta, y, &inc)
    else:
        zgemv(&trans, &m, &n, &alpha, a, &lda, x, &inc, &beta, y, &inc)


cdef void _correlate(const scalar_t[:, ::1] CD, const scalar_t[::1] x,
                     scalar_t[::1] out) noexcept nogil:
    """out[l] = <d_l, x>.

    Row-major CD (d x n) is column-major (n x d) holding the adjoint rows,
    so this is one no-transpose gemv.
    """
    cdef int d = <int> CD.shape[0], n = <int> CD.shape[1]
    cdef scalar_t one = 1.0, zero = 0.0
    _gemv(c'N', n, d, one, <scalar_t*> <void*> &CD[0, 0], n,
          <scalar_t*> <void*> &x[0], zero, &out[0])


cdef Py_ssize_t _orthonormal_append(const scalar_t[:, ::1] CD, Py_ssize_t atom,
                                    scalar_t[::1, :] Q, Py_ssize_t q,
                                    scalar_t[::1] h) noexcept nogil:
    """Orthogonalize atom ``atom`` against Q[:, :q] (two CGS sweeps) and
    append when independent; returns the new basis size."""
    cdef int d = <int> CD.shape[0], qi = <int> q
    cdef Py_ssize_t i, sweep
    cdef double scale = 0.0, nw = 0.0
    for i in range(d):
        Q[i, q] = _conj(CD[i, atom])
        scale += _abs2(Q[i, q])
    scale = sqrt(scale)
    if scale == 0.0:
        return q
    cdef scalar_t one = 1.0, zero = 0.0, minus = -1.0
    if q > 0:
        for sweep in range(2):
            _gemv(c'C', d, qi, one, &Q[0, 0], d, &Q[0, q], zero, &h[0])
            _gemv(c'N', d, qi, minus, &Q[0, 0], d, &h[0], one, &Q[0, q])
    for i in range(d):
        nw += _abs2(Q[i, q])
    nw = sqrt(nw)
    if nw <= _BASIS_DROP * scale:
        return q
    for i in range(d):
        Q[i, q] = Q[i, q] / nw
    return q + 1


cdef void _residual(const scalar_t[::1] z, scalar_t[::1, :] Q, Py_ssize_t q,
                    scalar_t[::1] h, scalar_t[::1] r) noexcept nogil:
    """r = z - Q[:, :q] Q[:, :q]^H z."""
    cdef int d = <int> z.shape[0], qi = <int> q
    cdef Py_ssize_t i
    for i in range(d):
        r[i] = z[i]
    cdef scalar_t one = 1.0, zero = 0.0, minus = -1.0
    if q == 0:
        return
    _gemv(c'C', d, qi, one, &Q[0, 0], d, <scalar_t*> <void*> &z[0], zero, &h[0])
    _gemv(c'N', d, qi, minus, &Q[0, 0], d, &h[0], one, &r[0])


@cython.boundscheck(False)
@cython.wraparound(False)
def greedy_block_select(const scalar_t[:, ::1] CD, const double[::1] inv_col_norms,
                        const scalar_t[::1] z, Py_ssize_t k, Py_ssize_t B,
                        double eps):
    """See ``_kernels_py.greedy_block_select``; same contract."""
    cdef Py_ssize_t d = CD.shape[0], n = CD.shape[1]
    cdef Py_ssize_t n_blocks = n // B
    cdef bint use_ext = eps >= 0.0
    cdef double corr_thresh = (1.0 - eps * eps) - _CORR_SLACK
    cdef Py_ssize_t max_rank = d if d < n else n

    if scalar_t is double:
        dtype = np.float64
    else:
        dtype = np.complex128
    q_arr = np.zeros((d, max_rank), dtype=dtype, order="F")
    r_arr = np.array(z, dtype=dtype, copy=True)
    corr_arr = np.zeros(n, dtype=dtype)
    h_arr = np.zeros(max_rank, dtype=dtype)
    scratch_arr = np.zeros(d, dtype=dtype)
    scores_arr = np.zeros(n, dtype=np.float64)
    cdef scalar_t[::1, :] Q = q_arr
    cdef scalar_t[::1] r = r_arr
    cdef scalar_t[::1] corr = corr_arr
    cdef scalar_t[::1] h = h_arr
    cdef scalar_t[::1] scratch = scratch_arr
    cdef double[::1] scores = scores_arr

    ineligible_arr = np.zeros(n_blocks, dtype=np.uint8)
    extended_arr = np.zeros(n_blocks, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ineligible = ineligible_arr
    cdef cnp.uint8_t[::1] extended = extended_arr

    selected = []
    cdef bint exhausted = False
    cdef Py_ssize_t q = 0, t, b, bb, i, j, i_hat, any_ok
    cdef double best, s, corr2, inv_hat

    for t in range(k):
        any_ok = 0
        for bb in range(n_blocks):
            if not ineligible[bb]:
                any_ok = 1
                break
        if not any_ok:
            exhausted = True
            break

        with nogil:
            _correlate(CD, r, corr)
            for j in range(n):
                scores[j] = sqrt(_abs2(corr[j])) * inv_col_norms[j]
        best = -1.0
        b = -1
        for bb in range(n_blocks):
            if ineligible[bb]:
                continue
            s = 0.0
            for j in range(bb * B, (bb + 1) * B):
                s += scores[j] * scores[j]
            if s > best:
                best = s
                b = bb
        selected.append(b)

        if use_ext:
            i_hat = b * B
            for j in range(b * B + 1, (b + 1) * B):
                if scores[j] > scores[i_hat]:
                    i_hat = j
            inv_hat = inv_col_norms[i_hat]
            with nogil:
                for i in range(d):
                    scratch[i] = _conj(CD[i, i_hat])
                _correlate(CD, scratch, corr)
                for bb in range(n_blocks):
                    for j in range(bb * B, (bb + 1) * B):
                        corr2 = _abs2(corr[j]) * inv_col_norms[j] * inv_col_norms[j] * inv_hat * inv_hat
                        if corr2 >= corr_thresh:
                            extended[bb] = 1
                            ineligible[bb] = 1
                            break
        else:
            extended[b] = 1
            ineligible[b] = 1

        with nogil:
            for j in range(b * B, (b + 1) * B):
                q = _orthonormal_append(CD, j, Q, q, h)
            _residual(z, Q, q, h, r)

    if exhausted:
        for bb in range(n_blocks):
            extended[bb] = 1
    return (
        np.asarray(selected, dtype=np.int64),
        np.flatnonzero(extended_arr).astype(np.int64),
        bool(exhausted),
    )
