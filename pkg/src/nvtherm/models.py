"""Built-in parametric models with analytic Jacobians.

Each factory returns a :class:`nvtherm.leastsq.CurveModel`.  Parameter
orderings are documented per factory and mirrored by the fit recipes in
:mod:`nvtherm.spectra`.
"""

import numpy as np

from . import kernels
from .constants import KB_MEV_PER_K
from .leastsq import CurveModel

_TWO_THIRDS_PI2 = (2.0 / 3.0) * np.pi * np.pi


def lorentzian_mixture_model(n_components, n_baseline=2):
    """Sum of Lorentzian peaks plus a polynomial baseline.

    Parameters are ``[center, fwhm, amplitude] * n_components`` followed by
    ``n_baseline`` polynomial coefficients in increasing order (the default
    2 gives a linear baseline).
    """
    n_par = 3 * n_components + n_baseline
    return CurveModel(
        name=f"lorentzian_mixture_{n_components}_poly{n_baseline}",
        n_params=n_par,
        value=lambda x, p: kernels.lorentz_mixture(x, p, n_components, n_baseline),
        value_and_jacobian=lambda x, p: kernels.lorentz_mixture_jacobian(
            x, p, n_components, n_baseline
        ),
    )


def odmr_model(n_lines):
    """Resonance-dip profile: ``baseline``, then ``[center, fwhm, contrast]`` per line."""
    return CurveModel(
        name=f"odmr_{n_lines}",
        n_params=1 + 3 * n_lines,
        value=lambda x, p: kernels.odmr_profile(x, p, n_lines),
        value_and_jacobian=lambda x, p: kernels.odmr_profile_jacobian(x, p, n_lines),
    )


def polynomial_model(degree):
    """Polynomial in ``x``; parameters are coefficients in increasing order."""

    def value(x, p):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), p)

    def value_and_jacobian(x, p):
        x = np.asarray(x, dtype=np.float64)
        jac = np.empty((x.size, degree + 1))
        col = np.ones_like(x)
        for j in range(degree + 1):
            jac[:, j] = col
            if j < degree:
                col = col * x
        return jac @ p, jac

    return CurveModel(
        name=f"polynomial_{degree}",
        n_params=degree + 1,
        value=value,
        value_and_jacobian=value_and_jacobian,
    )


def proportional_model():
    """Single-parameter line through the origin, ``y = gamma * x``."""

    def value(x, p):
        return p[0] * np.asarray(x, dtype=np.float64)

    def value_and_jacobian(x, p):
        x = np.asarray(x, dtype=np.float64)
        return p[0] * x, x.reshape(-1, 1).copy()

    return CurveModel(
        name="proportional",
        n_params=1,
        value=value,
        value_and_jacobian=value_and_jacobian,
    )


def _dwf_curve(t, s, t_debye):
    return np.exp(-s * (1.0 + _TWO_THIRDS_PI2 * t * t / (t_debye * t_debye)))


def dwf_temperature_model():
    """Debye-Waller factor versus temperature; parameters ``(s, t_debye)``.

    Unguarded evaluation of the model curve (the physical validity window
    is enforced by :mod:`nvtherm.thermo`, not by the fitting model).
    """

    def value(t, p):
        return _dwf_curve(np.asarray(t, dtype=np.float64), p[0], p[1])

    def value_and_jacobian(t, p):
        t = np.asarray(t, dtype=np.float64)
        s, td = p
        ratio = _TWO_THIRDS_PI2 * t * t / (td * td)
        y = np.exp(-s * (1.0 + ratio))
        jac = np.empty((t.size, 2))
        jac[:, 0] = -(1.0 + ratio) * y
        jac[:, 1] = 2.0 * s * ratio / td * y
        return y, jac

    return CurveModel(
        name="dwf_temperature",
        n_params=2,
        value=value,
        value_and_jacobian=value_and_jacobian,
    )


def dwf_power_model(t0, t_debye):
    """Debye-Waller factor versus laser power; parameters ``(s, b)``.

    Temperature is the heating line ``t0 + b * P`` with ``t_debye`` held
    fixed (taken from a prior temperature calibration).
    """

    def value(p_las, p):
        t = t0 + p[1] * np.asarray(p_las, dtype=np.float64)
        return _dwf_curve(t, p[0], t_debye)

    def value_and_jacobian(p_las, p):
        p_las = np.asarray(p_las, dtype=np.float64)
        s, b = p
        t = t0 + b * p_las
        ratio = _TWO_THIRDS_PI2 * t * t / (t_debye * t_debye)
        y = np.exp(-s * (1.0 + ratio))
        jac = np.empty((p_las.size, 2))
        jac[:, 0] = -(1.0 + ratio) * y
        jac[:, 1] = -s * 2.0 * _TWO_THIRDS_PI2 * t / (t_debye * t_debye) * p_las * y
        return y, jac

    return CurveModel(
        name="dwf_power",
        n_params=2,
        value=value,
        value_and_jacobian=value_and_jacobian,
    )


def strain_energy_model(d_perp, a_par):
    """Excited-state average splitting versus temperature; parameter ``(strain_energy,)``.

    Composes the orbital reduction factor with the hyperfine-weighted
    average splitting; the lone parameter is the strain energy in meV.
    """

    def _parts(t, xi):
        u = xi / (2.0 * KB_MEV_PER_K * t)
        th = np.tanh(u)
        e = d_perp * th
        root = np.sqrt(a_par * a_par + e * e)
        return th, e, root

    def value(t, p):
        t = np.asarray(t, dtype=np.float64)
        _, e, root = _parts(t, p[0])
        return e / 3.0 + (2.0 / 3.0) * root

    def value_and_jacobian(t, p):
        t = np.asarray(t, dtype=np.float64)
        th, e, root = _parts(t, p[0])
        de_dxi = d_perp * (1.0 - th * th) / (2.0 * KB_MEV_PER_K * t)
        deps_de = 1.0 / 3.0 + (2.0 / 3.0) * e / root
        y = e / 3.0 + (2.0 / 3.0) * root
        return y, (deps_de * de_dxi).reshape(-1, 1)

    return CurveModel(
        name="strain_energy",
        n_params=1,
        value=value,
        value_and_jacobian=value_and_jacobian,
    )
