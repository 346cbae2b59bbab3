"""Closed-form temperature models: Debye-Waller factor, sensitivity,
thermal-expansion pressure, phonon occupation, and the excited-state
strain-splitting temperature dependence.

Temperatures are in K, energies in meV, frequencies in MHz, pressures in
GPa.  All models are immutable value objects and all operations are pure.
"""

from dataclasses import dataclass

import numpy as np

from .constants import KB_MEV_PER_K, QUAD_T_MAX_K, QUAD_T_MIN_K
from .errors import (
    ExtrapolationWarning,
    InvalidParameterError,
    QuadratureError,
    RangeError,
)
from .spin import average_splitting

_TWO_THIRDS_PI2 = (2.0 / 3.0) * np.pi * np.pi


@dataclass(frozen=True)
class DwfModel:
    """Debye-model parameterization of the Debye-Waller factor.

    Attributes
    ----------
    s : float
        Electron-phonon coupling strength (dimensionless, > 0).
    t_debye : float
        Debye temperature in K (> 0).

    The model is a low-temperature expansion; operations reject
    ``t > 0.5 * t_debye``.
    """

    s: float
    t_debye: float

    def __post_init__(self):
        if not (np.isfinite(self.s) and self.s > 0):
            raise InvalidParameterError(f"s must be positive, got {self.s!r}")
        if not (np.isfinite(self.t_debye) and self.t_debye > 0):
            raise InvalidParameterError(
                f"t_debye must be positive, got {self.t_debye!r}"
            )


def _check_dwf_range(t, m):
    t = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > 0.5 * m.t_debye):
        raise RangeError(
            f"temperature must lie in [0, {0.5 * m.t_debye}] K for this model"
        )
    return t


def dwf(t, m):
    """Debye-Waller factor ``exp(-s * (1 + (2/3) pi^2 t^2 / t_debye^2))``.

    Strictly decreasing in ``t``; valid for ``0 <= t <= 0.5 * t_debye``
    (raises :class:`RangeError` outside).  Accepts scalars or arrays.
    """
    ta = _check_dwf_range(t, m)
    out = np.exp(-m.s * (1.0 + _TWO_THIRDS_PI2 * ta * ta / (m.t_debye * m.t_debye)))
    return out if np.ndim(t) else float(out)


def dwf_derivative(t, m):
    """Analytic temperature derivative of :func:`dwf`, in 1/K (negative for t > 0)."""
    ta = _check_dwf_range(t, m)
    value = np.exp(-m.s * (1.0 + _TWO_THIRDS_PI2 * ta * ta / (m.t_debye * m.t_debye)))
    out = -value * m.s * 2.0 * _TWO_THIRDS_PI2 * ta / (m.t_debye * m.t_debye)
    return out if np.ndim(t) else float(out)


def temperature_from_dwf(dwf_value, m):
    """Invert :func:`dwf` in closed form.

    ``t = t_debye * sqrt((3 / (2 pi^2)) * (-ln(value)/s - 1))``.  The value
    must lie in the attainable range ``[dwf(0.5 t_debye), dwf(0)]``
    (:class:`RangeError` otherwise); round-trips :func:`dwf` to better than
    1e-10 relative.
    """
    if not np.isfinite(dwf_value) or dwf_value <= 0:
        raise RangeError(f"dwf_value must be positive and finite, got {dwf_value!r}")
    arg = -np.log(dwf_value) / m.s - 1.0
    # Tiny negative arguments arise from round-trip roundoff at t = 0.
    if arg < 0.0:
        if arg > -1e-12:
            arg = 0.0
        else:
            raise RangeError("dwf_value exceeds the zero-temperature limit")
    t = m.t_debye * np.sqrt(arg / _TWO_THIRDS_PI2)
    if t > 0.5 * m.t_debye * (1.0 + 1e-12):
        raise RangeError("dwf_value below the model validity range")
    return float(t)


def phi(t, m):
    """Thermometry scale factor ``|dwf / (d dwf / dT)| = 3 t_debye^2 / (4 pi^2 s t)`` in K."""
    _check_dwf_range(t, m)
    if np.any(np.asarray(t) <= 0):
        raise RangeError("phi diverges at t = 0; t must be positive")
    out = 3.0 * m.t_debye * m.t_debye / (4.0 * np.pi * np.pi * m.s * np.asarray(t, dtype=np.float64))
    return out if np.ndim(t) else float(out)


def delta_t_min_from_values(n_photons, r, dwf_value, phi_value, exact=True):
    """Shot-noise temperature uncertainty from explicit DWF and Phi values.

    Exact form ``sqrt(1+3r) * (dwf + sqrt(dwf)) / sqrt(N) * phi / dwf``;
    the approximate form drops the ``dwf`` term in the numerator, giving
    ``sqrt(1+3r) * phi / sqrt(N * dwf)``.
    """
    if not n_photons > 0:
        raise InvalidParameterError(f"n_photons must be positive, got {n_photons!r}")
    if r < 0:
        raise InvalidParameterError(f"background ratio must be >= 0, got {r!r}")
    scale = np.sqrt(1.0 + 3.0 * r)
    if exact:
        return float(
            scale * (dwf_value + np.sqrt(dwf_value)) / np.sqrt(n_photons)
            * phi_value / dwf_value
        )
    return float(scale * phi_value / np.sqrt(n_photons * dwf_value))


def delta_t_min(n_photons, r, t, m, exact=True):
    """Shot-noise temperature uncertainty of an N-photon measurement at ``t``.

    ``n_photons`` is the total detected photon count of the measurement
    (ZPL and sideband together).  See :func:`delta_t_min_from_values`.
    """
    return delta_t_min_from_values(n_photons, r, dwf(t, m), phi(t, m), exact=exact)


@dataclass(frozen=True)
class SensitivityInput:
    """Photophysical inputs of the noise-floor formula.

    Attributes
    ----------
    n_centers : float
        Number of emitting centers.
    collection_eff : float
        Photon collection efficiency in [0, 1].
    emission_rate : float
        Photon emission rate per center, photons/s.
    background_ratio : float
        Uniform-background to ZPL-peak intensity ratio r.
    dwf : float
        Debye-Waller factor at the operating point.
    """

    n_centers: float
    collection_eff: float
    emission_rate: float
    background_ratio: float
    dwf: float

    def __post_init__(self):
        for name in ("n_centers", "collection_eff", "emission_rate",
                     "background_ratio", "dwf"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {value!r}")
        if self.collection_eff > 1.0:
            raise InvalidParameterError("collection_eff must be <= 1")

    @property
    def c_zpl(self):
        """ZPL count rate ``n * mu * gamma * dwf`` in photons/s."""
        return self.n_centers * self.collection_eff * self.emission_rate * self.dwf


def noise_floor_from_values(c_zpl, r, phi_value):
    """Noise floor ``sqrt(1+3r) * phi / sqrt(c_zpl)`` in K/sqrt(Hz)."""
    if not c_zpl > 0:
        raise InvalidParameterError(f"c_zpl must be positive, got {c_zpl!r}")
    if r < 0:
        raise InvalidParameterError(f"background ratio must be >= 0, got {r!r}")
    return float(np.sqrt(1.0 + 3.0 * r) * phi_value / np.sqrt(c_zpl))


def noise_floor(inp, t, m):
    """Temperature noise floor of continuous DWF thermometry, K/sqrt(Hz)."""
    return noise_floor_from_values(inp.c_zpl, inp.background_ratio, phi(t, m))


@dataclass(frozen=True)
class CalibrationLine:
    """Linear laser-power heating calibration ``T = t0 + b * P``."""

    t0: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.t0) and self.t0 > 0):
            raise InvalidParameterError(f"t0 must be positive, got {self.t0!r}")
        if not np.isfinite(self.b):
            raise InvalidParameterError(f"b must be finite, got {self.b!r}")


def laser_to_temperature(p_las, c):
    """Temperature reached at laser power ``p_las`` (mW), per the linear calibration."""
    p = np.asarray(p_las, dtype=np.float64)
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise InvalidParameterError("laser power must be finite and >= 0")
    out = c.t0 + c.b * p
    return out if np.ndim(p_las) else float(out)


# 7-point Gauss-Legendre rule: exact for polynomials up to degree 13
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(7)


def _gl_fixed(f, edges):
    lo = edges[:-1]
    hi = edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=np.float64).reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand evaluated to a non-finite value")
    return float(np.sum(vals * _GL_WEIGHTS[None, :] * half[:, None]))


def adaptive_gauss_legendre(f, a, b, rtol=1e-8, knots=(), max_refinements=10):
    """Adaptive composite Gauss-Legendre integral of ``f`` over ``[a, b]``.

    Panels are refined by interval halving until two successive levels agree
    to ``rtol`` relative; ``knots`` seeds panel boundaries (used to keep the
    rule exact across breakpoints of piecewise integrands).  Raises
    :class:`QuadratureError` when the refinement budget is exhausted.
    """
    if not (np.isfinite(a) and np.isfinite(b)) or b < a:
        raise InvalidParameterError(f"bad integration range [{a}, {b}]")
    if a == b:
        return 0.0
    interior = [k for k in knots if a < k < b]
    base = np.unique(np.concatenate([[a, b], interior])) if interior else np.array([a, b])
    prev = None
    for level in range(max_refinements + 1):
        splits = 2 ** level
        pieces = [
            np.linspace(base[i], base[i + 1], splits + 1)[:-1]
            for i in range(base.size - 1)
        ]
        edges = np.concatenate(pieces + [[b]])
        val = _gl_fixed(f, edges)
        if prev is not None and abs(val - prev) <= rtol * max(abs(val), abs(prev), 1e-300):
            return val
        prev = val
    raise QuadratureError(
        f"quadrature did not converge to {rtol} relative after {max_refinements} refinements"
    )


@dataclass(frozen=True)
class ExpansionModel:
    """Volumetric thermal expansion coefficient e(T) with the bulk modulus.

    Exactly one representation must be supplied: a piecewise-linear table
    (``table_t`` strictly increasing, ``table_e`` >= 0) or polynomial
    coefficients (``poly``, increasing order).  ``e(T)`` must be
    non-negative wherever it is integrated.
    """

    bulk_modulus_gpa: float
    table_t: np.ndarray = None
    table_e: np.ndarray = None
    poly: np.ndarray = None

    def __post_init__(self):
        if not (np.isfinite(self.bulk_modulus_gpa) and self.bulk_modulus_gpa > 0):
            raise InvalidParameterError("bulk_modulus_gpa must be positive")
        has_table = self.table_t is not None or self.table_e is not None
        has_poly = self.poly is not None
        if has_table == has_poly:
            raise InvalidParameterError(
                "provide exactly one of (table_t, table_e) or poly"
            )
        if has_table:
            t = np.asarray(self.table_t, dtype=np.float64)
            e = np.asarray(self.table_e, dtype=np.float64)
            if t.ndim != 1 or t.shape != e.shape or t.size < 2:
                raise InvalidParameterError("table arrays must be 1-d, equal length >= 2")
            if np.any(~np.isfinite(t)) or np.any(~np.isfinite(e)):
                raise InvalidParameterError("table values must be finite")
            if np.any(np.diff(t) <= 0):
                raise InvalidParameterError("table temperatures must be strictly increasing")
            if np.any(e < 0):
                raise InvalidParameterError("expansion coefficients must be >= 0")
            t.setflags(write=False)
            e.setflags(write=False)
            object.__setattr__(self, "table_t", t)
            object.__setattr__(self, "table_e", e)
        else:
            p = np.asarray(self.poly, dtype=np.float64)
            if p.ndim != 1 or p.size == 0 or np.any(~np.isfinite(p)):
                raise InvalidParameterError("poly must be a finite 1-d coefficient array")
            p.setflags(write=False)
            object.__setattr__(self, "poly", p)

    @classmethod
    def from_csv(cls, path, bulk_modulus_gpa):
        """Load a ``temperature_K,e_per_K`` table (see the packaged default)."""
        import csv

        temps = []
        coeffs = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if row[0].strip() == "temperature_K":
                    continue
                temps.append(float(row[0]))
                coeffs.append(float(row[1]))
        if len(temps) < 2:
            raise InvalidParameterError(f"expansion table {path} has fewer than 2 rows")
        return cls(bulk_modulus_gpa, table_t=np.array(temps), table_e=np.array(coeffs))

    def e_of(self, t):
        """Evaluate e(T) in 1/K; table form raises :class:`RangeError` off-table."""
        ta = np.asarray(t, dtype=np.float64)
        if self.poly is not None:
            out = np.polynomial.polynomial.polyval(ta, self.poly)
        else:
            if np.any(ta < self.table_t[0]) or np.any(ta > self.table_t[-1]):
                raise RangeError(
                    f"temperature outside table range "
                    f"[{self.table_t[0]}, {self.table_t[-1]}] K"
                )
            out = np.interp(ta, self.table_t, self.table_e)
        return out if np.ndim(t) else float(out)


def thermal_pressure(t, em):
    """Thermal-expansion pressure ``B * integral_0^t e(T') dT'`` in GPa."""
    if not np.isfinite(t) or t < 0:
        raise InvalidParameterError(f"temperature must be finite and >= 0, got {t!r}")
    if t == 0.0:
        return 0.0
    if em.table_t is not None:
        if em.table_t[0] > 0.0 or em.table_t[-1] < t:
            raise RangeError(f"expansion table does not cover [0, {t}] K")
        knots = em.table_t
    else:
        knots = ()

    def integrand(x):
        vals = np.asarray(em.e_of(x), dtype=np.float64)
        if np.any(vals < 0):
            raise InvalidParameterError("e(T) must be >= 0 over the integration range")
        return vals

    return em.bulk_modulus_gpa * adaptive_gauss_legendre(integrand, 0.0, t, knots=knots)


def shift_expansion(t, gamma, em):
    """Thermal-expansion frequency shift ``gamma * P(t)`` in MHz."""
    if not np.isfinite(gamma):
        raise InvalidParameterError(f"gamma must be finite, got {gamma!r}")
    return gamma * thermal_pressure(t, em)


def bose_einstein(omega_mev, t_k):
    """Bose-Einstein occupation ``1 / (exp(omega / kB T) - 1)``; 0 at t = 0."""
    omega = np.asarray(omega_mev, dtype=np.float64)
    if np.any(~np.isfinite(omega)) or np.any(omega <= 0):
        raise InvalidParameterError("omega must be positive and finite")
    if not np.isfinite(t_k) or t_k < 0:
        raise RangeError(f"temperature must be finite and >= 0, got {t_k!r}")
    if t_k == 0.0:
        out = np.zeros_like(omega)
        return out if np.ndim(omega_mev) else 0.0
    with np.errstate(over="ignore"):
        out = 1.0 / np.expm1(omega / (KB_MEV_PER_K * t_k))
    return out if np.ndim(omega_mev) else float(out)


@dataclass(frozen=True)
class ElectronPhononSpectral:
    """Combined electron-phonon spectral function as a polynomial with support.

    ``coeffs`` are polynomial coefficients (increasing order, MHz per meV of
    frequency measure); the function is integrated over
    ``[omega_min, omega_max]`` (meV).  A narrow support interval expresses
    box-like spectral densities.  The default zero polynomial makes the
    electron-phonon shift vanish.
    """

    coeffs: tuple = (0.0,)
    omega_max: float = 168.0
    omega_min: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.omega_max) and self.omega_max > 0):
            raise InvalidParameterError("omega_max must be positive")
        if not (np.isfinite(self.omega_min) and 0.0 <= self.omega_min < self.omega_max):
            raise InvalidParameterError("omega_min must lie in [0, omega_max)")
        if len(self.coeffs) == 0 or not all(np.isfinite(c) for c in self.coeffs):
            raise InvalidParameterError("coeffs must be finite and non-empty")


def shift_electron_phonon(t, sf):
    """Bose-weighted spectral integral ``int n(omega, t) * f(omega) d omega`` in MHz.

    Returns 0 at ``t = 0`` (no occupation).  Non-convergent quadrature (for
    instance, a spectral function finite at omega = 0, where the occupation
    diverges) raises :class:`QuadratureError`.
    """
    if not np.isfinite(t) or t < 0:
        raise RangeError(f"temperature must be finite and >= 0, got {t!r}")
    if t == 0.0 or all(c == 0.0 for c in sf.coeffs):
        return 0.0
    coeffs = np.asarray(sf.coeffs, dtype=np.float64)

    def integrand(omega):
        return bose_einstein(omega, t) * np.polynomial.polynomial.polyval(omega, coeffs)

    return adaptive_gauss_legendre(integrand, sf.omega_min, sf.omega_max)


@dataclass(frozen=True)
class OrbitalStrainModel:
    """Excited-state transverse splitting model: low-T value and strain energy.

    Attributes
    ----------
    d_perp_es : float
        Low-temperature transverse spin-spin splitting, MHz (> 0).
    strain_energy : float
        Phonon energy scale of the thermal averaging, meV (> 0).
    """

    d_perp_es: float
    strain_energy: float

    def __post_init__(self):
        if not (np.isfinite(self.d_perp_es) and self.d_perp_es > 0):
            raise InvalidParameterError("d_perp_es must be positive")
        if not (np.isfinite(self.strain_energy) and self.strain_energy > 0):
            raise InvalidParameterError("strain_energy must be positive")


def reduction_factor(t, strain_energy):
    """Thermal orbital-averaging factor ``tanh(strain_energy / (2 kB t))``.

    Lies in (0, 1] and decreases with temperature; the ``t = 0`` limit is 1.
    """
    if not (np.isfinite(strain_energy) and strain_energy > 0):
        raise InvalidParameterError("strain_energy must be positive")
    ta = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(ta)) or np.any(ta < 0):
        raise RangeError(f"temperature must be finite and >= 0, got {t!r}")
    with np.errstate(divide="ignore"):
        out = np.where(ta > 0, np.tanh(strain_energy / (2.0 * KB_MEV_PER_K
                                                        * np.maximum(ta, 1e-300))), 1.0)
    return out if np.ndim(t) else float(out)


def e_es_of_t(t, osm):
    """Excited-state transverse splitting ``d_perp_es * reduction_factor(t)`` in MHz."""
    return osm.d_perp_es * reduction_factor(t, osm.strain_energy)


def epsilon_es_of_t(t, osm, a_par):
    """Thermally averaged excited-state half-splitting (MHz).

    Composes :func:`e_es_of_t` with the hyperfine-weighted average
    :func:`nvtherm.spin.average_splitting`.
    """
    e_es = e_es_of_t(t, osm)
    if np.ndim(t):
        return np.array([average_splitting(e, a_par) for e in np.atleast_1d(e_es)])
    return average_splitting(e_es, a_par)


@dataclass(frozen=True)
class QuadraticShift:
    """Quadratic parameterization ``a + b t + c t^2`` of the ground-state D(T) (MHz)."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.a, self.b, self.c)):
            raise InvalidParameterError("quadratic coefficients must be finite")


def dgs_quadratic(t, q):
    """Evaluate the quadratic D(T) model; warns outside its 294-600 K fit range."""
    ta = np.asarray(t, dtype=np.float64)
    if np.any(~np.isfinite(ta)):
        raise InvalidParameterError("temperature must be finite")
    if np.any(ta < QUAD_T_MIN_K) or np.any(ta > QUAD_T_MAX_K):
        import warnings

        warnings.warn(
            f"quadratic D(T) evaluated outside its [{QUAD_T_MIN_K}, {QUAD_T_MAX_K}] K fit range",
            ExtrapolationWarning,
            stacklevel=2,
        )
    out = q.a + q.b * ta + q.c * ta * ta
    return out if np.ndim(t) else float(out)
