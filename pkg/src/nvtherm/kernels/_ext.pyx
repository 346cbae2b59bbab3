# cython: language_level=3
"""Compiled twins of the numerical kernels.

Signatures and semantics mirror ``nvtherm.kernels.pure``, which is the
reference implementation; keep the two modules in lockstep.
"""

import numpy as np

cimport cython
from libc.math cimport sqrt

from ..errors import ConvergenceError

BACKEND = "ext"


@cython.boundscheck(False)
@cython.wraparound(False)
def lorentz_mixture(x, params, int n_lorentz, int n_poly):
    """Sum of Lorentzian peaks plus a polynomial baseline.

    Parameters
    ----------
    x : ndarray
        Abscissa values.
    params : ndarray
        ``[center, fwhm, amplitude] * n_lorentz`` followed by ``n_poly``
        polynomial coefficients in increasing order.
    n_lorentz, n_poly : int
        Component counts; ``len(params) == 3 * n_lorentz + n_poly``.
    """
    arr = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(arr).ravel()
    cdef const double[::1] pv = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] yv = out
    cdef Py_ssize_t i, k, j
    cdef double c, w, a, u, d, acc, pacc, xi
    for i in range(n):
        xi = xv[i]
        acc = 0.0
        for k in range(n_lorentz):
            c = pv[3 * k]
            w = pv[3 * k + 1]
            a = pv[3 * k + 2]
            u = 0.25 * w * w
            d = xi - c
            acc += a * u / (d * d + u)
        if n_poly > 0:
            pacc = pv[3 * n_lorentz + n_poly - 1]
            for j in range(n_poly - 2, -1, -1):
                pacc = pacc * xi + pv[3 * n_lorentz + j]
            acc += pacc
        yv[i] = acc
    return out.reshape(arr.shape)


@cython.boundscheck(False)
@cython.wraparound(False)
def lorentz_mixture_jacobian(x, params, int n_lorentz, int n_poly):
    """Return ``(y, J)`` for :func:`lorentz_mixture`; ``J`` is ``(len(x), len(params))``."""
    arr = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(arr).ravel()
    cdef const double[::1] pv = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t m = 3 * n_lorentz + n_poly
    y_out = np.zeros(n, dtype=np.float64)
    j_out = np.empty((n, m), dtype=np.float64)
    cdef double[::1] yv = y_out
    cdef double[:, ::1] jv = j_out
    cdef Py_ssize_t i, k, j
    cdef double c, w, a, u, d, q, inv_q, lor, acc, pacc, pow_x, xi
    for i in range(n):
        xi = xv[i]
        acc = 0.0
        for k in range(n_lorentz):
            c = pv[3 * k]
            w = pv[3 * k + 1]
            a = pv[3 * k + 2]
            u = 0.25 * w * w
            d = xi - c
            q = d * d + u
            inv_q = 1.0 / q
            lor = u * inv_q
            acc += a * lor
            jv[i, 3 * k] = 2.0 * a * u * d * inv_q * inv_q
            jv[i, 3 * k + 1] = 0.5 * w * a * d * d * inv_q * inv_q
            jv[i, 3 * k + 2] = lor
        if n_poly > 0:
            pacc = pv[3 * n_lorentz + n_poly - 1]
            for j in range(n_poly - 2, -1, -1):
                pacc = pacc * xi + pv[3 * n_lorentz + j]
            acc += pacc
            pow_x = 1.0
            for j in range(n_poly):
                jv[i, 3 * n_lorentz + j] = pow_x
                if j + 1 < n_poly:
                    pow_x = pow_x * xi
        yv[i] = acc
    return y_out, j_out


@cython.boundscheck(False)
@cython.wraparound(False)
def odmr_profile(x, params, int n_lines):
    """Resonance-dip profile ``baseline * (1 - sum of Lorentzian dips)``.

    ``params`` is ``[baseline]`` followed by ``[center, fwhm, contrast]``
    per line; contrast is the fractional dip depth.
    """
    arr = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(arr).ravel()
    cdef const double[::1] pv = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] yv = out
    cdef double base = pv[0]
    cdef Py_ssize_t i, k
    cdef double c, w, con, u, d, dips, xi
    for i in range(n):
        xi = xv[i]
        dips = 0.0
        for k in range(n_lines):
            c = pv[1 + 3 * k]
            w = pv[2 + 3 * k]
            con = pv[3 + 3 * k]
            u = 0.25 * w * w
            d = xi - c
            dips += con * u / (d * d + u)
        yv[i] = base * (1.0 - dips)
    return out.reshape(arr.shape)


@cython.boundscheck(False)
@cython.wraparound(False)
def odmr_profile_jacobian(x, params, int n_lines):
    """Return ``(y, J)`` for :func:`odmr_profile`."""
    arr = np.asarray(x, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(arr).ravel()
    cdef const double[::1] pv = np.ascontiguousarray(params, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    y_out = np.empty(n, dtype=np.float64)
    j_out = np.empty((n, 1 + 3 * n_lines), dtype=np.float64)
    cdef double[::1] yv = y_out
    cdef double[:, ::1] jv = j_out
    cdef double base = pv[0]
    cdef Py_ssize_t i, k
    cdef double c, w, con, u, d, q, inv_q, lor, dips, xi
    for i in range(n):
        xi = xv[i]
        dips = 0.0
        for k in range(n_lines):
            c = pv[1 + 3 * k]
            w = pv[2 + 3 * k]
            con = pv[3 + 3 * k]
            u = 0.25 * w * w
            d = xi - c
            q = d * d + u
            inv_q = 1.0 / q
            lor = u * inv_q
            dips += con * lor
            jv[i, 1 + 3 * k] = -base * 2.0 * con * u * d * inv_q * inv_q
            jv[i, 2 + 3 * k] = -base * 0.5 * w * con * d * d * inv_q * inv_q
            jv[i, 3 + 3 * k] = -base * lor
        jv[i, 0] = 1.0 - dips
        yv[i] = base * (1.0 - dips)
    return y_out, j_out


@cython.boundscheck(False)
@cython.wraparound(False)
cdef double _off_diag_norm(double complex[:, ::1] m, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = m[i, j]
                s += z.real * z.real + z.imag * z.imag
    return sqrt(s / 2.0)


@cython.boundscheck(False)
@cython.wraparound(False)
def jacobi_eigh(a, double tol=1e-12, int max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : ndarray
        Hermitian matrix (the caller is responsible for Hermiticity).
    tol : float
        Convergence threshold on the off-diagonal Frobenius norm, relative
        to the Frobenius norm of the input.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    (w, v)
        Ascending eigenvalues and the matching unitary column eigenvectors.
    """
    h_arr = np.array(a, dtype=np.complex128, order="C")
    if h_arr.ndim != 2 or h_arr.shape[0] != h_arr.shape[1]:
        raise ValueError("matrix must be square")
    cdef Py_ssize_t n = h_arr.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    if n == 1:
        return h_arr.real.diagonal().copy(), v_arr
    cdef double complex[:, ::1] h = h_arr
    cdef double complex[:, ::1] v = v_arr
    cdef double norm = np.linalg.norm(h_arr)
    cdef double threshold = tol * norm
    scratch = np.empty((2, n), dtype=np.complex128)
    cdef double complex[::1] tp = scratch[0]
    cdef double complex[::1] tq = scratch[1]
    cdef Py_ssize_t sweep, p, q, i
    cdef double complex apq, phase, cphase
    cdef double r, alpha, beta, tau, t, c, s
    cdef bint done = False
    for sweep in range(max_sweeps):
        if _off_diag_norm(h, n) <= threshold:
            done = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                cphase = phase.conjugate()
                alpha = h[p, p].real
                beta = h[q, q].real
                tau = (beta - alpha) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    tp[i] = h[i, p]
                    tq[i] = h[i, q]
                for i in range(n):
                    h[i, p] = c * tp[i] - s * cphase * tq[i]
                    h[i, q] = s * tp[i] + c * cphase * tq[i]
                for i in range(n):
                    tp[i] = h[p, i]
                    tq[i] = h[q, i]
                for i in range(n):
                    h[p, i] = c * tp[i] - s * phase * tq[i]
                    h[q, i] = s * tp[i] + c * phase * tq[i]
                h[p, p] = alpha - t * r
                h[q, q] = beta + t * r
                h[p, q] = 0.0
                h[q, p] = 0.0
                for i in range(n):
                    tp[i] = v[i, p]
                    tq[i] = v[i, q]
                for i in range(n):
                    v[i, p] = c * tp[i] - s * cphase * tq[i]
                    v[i, q] = s * tp[i] + c * cphase * tq[i]
    if not done and _off_diag_norm(h, n) > threshold:
        raise ConvergenceError(
            f"Jacobi eigensolver did not reach tolerance in {max_sweeps} sweeps"
        )
    w = np.diagonal(h_arr).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v_arr[:, order]
