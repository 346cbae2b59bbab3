"""NumPy implementations of the numerical kernels.

These are the reference implementations; ``nvtherm.kernels._ext`` provides
compiled twins with identical signatures and semantics.  Hot paths are the
curve/Jacobian evaluations inside least-squares loops and the 9x9
eigenproblem of the spin Hamiltonian.
"""

import numpy as np

from ..errors import ConvergenceError

BACKEND = "pure"


def lorentz_mixture(x, params, n_lorentz, n_poly):
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

    Each peak is ``amplitude * u / ((x - center)^2 + u)`` with
    ``u = (fwhm / 2)^2``, so ``amplitude`` is the peak height and the
    analytic area is ``amplitude * pi * fwhm / 2``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.zeros_like(x)
    for k in range(n_lorentz):
        c, w, a = params[3 * k:3 * k + 3]
        u = 0.25 * w * w
        y += a * u / ((x - c) ** 2 + u)
    if n_poly:
        y += np.polynomial.polynomial.polyval(x, params[3 * n_lorentz:])
    return y


def lorentz_mixture_jacobian(x, params, n_lorentz, n_poly):
    """Return ``(y, J)`` for :func:`lorentz_mixture`; ``J`` is ``(len(x), len(params))``."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    jac = np.empty((n, 3 * n_lorentz + n_poly))
    y = np.zeros(n)
    for k in range(n_lorentz):
        c, w, a = params[3 * k:3 * k + 3]
        u = 0.25 * w * w
        d = x - c
        q = d * d + u
        inv_q = 1.0 / q
        lor = u * inv_q
        y += a * lor
        jac[:, 3 * k] = 2.0 * a * u * d * inv_q * inv_q
        jac[:, 3 * k + 1] = 0.5 * w * a * d * d * inv_q * inv_q
        jac[:, 3 * k + 2] = lor
    if n_poly:
        y += np.polynomial.polynomial.polyval(x, params[3 * n_lorentz:])
        pow_x = np.ones(n)
        for j in range(n_poly):
            jac[:, 3 * n_lorentz + j] = pow_x
            if j + 1 < n_poly:
                pow_x = pow_x * x
    return y, jac


def odmr_profile(x, params, n_lines):
    """Resonance-dip profile ``baseline * (1 - sum of Lorentzian dips)``.

    ``params`` is ``[baseline]`` followed by ``[center, fwhm, contrast]``
    per line; contrast is the fractional dip depth.
    """
    x = np.asarray(x, dtype=np.float64)
    dips = np.zeros_like(x)
    for k in range(n_lines):
        c, w, con = params[1 + 3 * k:4 + 3 * k]
        u = 0.25 * w * w
        dips += con * u / ((x - c) ** 2 + u)
    return params[0] * (1.0 - dips)


def odmr_profile_jacobian(x, params, n_lines):
    """Return ``(y, J)`` for :func:`odmr_profile`."""
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    base = params[0]
    jac = np.empty((n, 1 + 3 * n_lines))
    dips = np.zeros(n)
    for k in range(n_lines):
        c, w, con = params[1 + 3 * k:4 + 3 * k]
        u = 0.25 * w * w
        d = x - c
        q = d * d + u
        inv_q = 1.0 / q
        lor = u * inv_q
        dips += con * lor
        jac[:, 1 + 3 * k] = -base * 2.0 * con * u * d * inv_q * inv_q
        jac[:, 2 + 3 * k] = -base * 0.5 * w * con * d * d * inv_q * inv_q
        jac[:, 3 + 3 * k] = -base * lor
    jac[:, 0] = 1.0 - dips
    return base * (1.0 - dips), jac


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
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
    h = np.array(a, dtype=np.complex128)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return h.real.diagonal().copy(), v
    norm = np.linalg.norm(h)
    threshold = tol * norm

    def _off(m):
        return np.sqrt(np.sum(np.abs(m - np.diag(np.diag(m))) ** 2) / 2.0)

    def _sorted(m, vec):
        w = m.diagonal().real.copy()
        order = np.argsort(w, kind="stable")
        return w[order], vec[:, order]

    for sweep in range(max_sweeps):
        if _off(h) <= threshold:
            return _sorted(h, v)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                alpha = h[p, p].real
                beta = h[q, q].real
                tau = (beta - alpha) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = h[:, p].copy()
                col_q = h[:, q].copy()
                h[:, p] = c * col_p - s * np.conj(phase) * col_q
                h[:, q] = s * col_p + c * np.conj(phase) * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :].copy()
                h[p, :] = c * row_p - s * phase * row_q
                h[q, :] = s * row_p + c * phase * row_q
                h[p, p] = alpha - t * r
                h[q, q] = beta + t * r
                h[p, q] = 0.0
                h[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * np.conj(phase) * vec_q
                v[:, q] = s * vec_p + c * np.conj(phase) * vec_q
    if _off(h) <= threshold:
        return _sorted(h, v)
    raise ConvergenceError(
        f"Jacobi eigensolver did not reach tolerance in {max_sweeps} sweeps"
    )
