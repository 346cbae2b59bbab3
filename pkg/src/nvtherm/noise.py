"""Synthetic Poisson sources, Monte-Carlo noise floors, and time series.

Everything here is deterministic given a seed: each trial draws from an
independent counter-based stream derived from ``(seed, trial)``, so serial
and parallel execution produce identical statistics.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spectra, thermo
from .errors import (
    InvalidParameterError,
    NvthermError,
    PipelineInstabilityError,
    RankDeficiencyError,
)

ZPL_CENTERS_NM = (636.3, 637.7)
ZPL_FWHM_NM = 0.7
# Phonon sideband support: Stokes-shifted fully to the red of the ZPL fit
# window, so an r=0 source really has no background under the line.
SIDEBAND_RANGE_NM = (650.0, 695.0, 800.0)
# Wider-than-default fit window: enough pure-baseline bins on both sides to
# pin the linear baseline, which keeps the fitted-area variance within a few
# percent of the photon-counting limit.
PL_FIT_WINDOW_NM = (626.0, 650.0)


@dataclass(frozen=True)
class SyntheticSource:
    """Photon source defined by per-bin emission rates and its true shape.

    Parameters
    ----------
    axis : ndarray
        Bin positions, strictly increasing.
    rates : ndarray
        Expected photons/s per bin, non-negative.
    true_shape : dict
        Parameter record the rates were built from (kept for reporting and
        for analytic noise-floor predictions).
    seed : int
        Base RNG seed; trial ``k`` uses the independent child stream ``k``.
    """

    axis: np.ndarray
    rates: np.ndarray
    true_shape: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        axis = np.array(self.axis, dtype=np.float64)
        rates = np.array(self.rates, dtype=np.float64)
        if axis.ndim != 1 or rates.shape != axis.shape:
            raise InvalidParameterError("axis and rates must be equal-length 1-d arrays")
        if axis.size < 2 or np.any(np.diff(axis) <= 0.0):
            raise InvalidParameterError("axis must be strictly increasing with >= 2 bins")
        if not np.all(np.isfinite(rates)) or np.any(rates < 0.0):
            raise InvalidParameterError("rates must be finite and >= 0")
        axis.setflags(write=False)
        rates.setflags(write=False)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "rates", rates)


def _tent_density(lam, lo, peak, hi):
    """Triangular density on [lo, hi] with apex at ``peak``, unit integral."""
    lam = np.asarray(lam, dtype=np.float64)
    up = (lam - lo) / (peak - lo)
    down = (hi - lam) / (hi - peak)
    shape = np.clip(np.where(lam < peak, up, down), 0.0, None)
    return shape * (2.0 / (hi - lo))


def _lorentzian_density(lam, center, fwhm):
    """Unit-area Lorentzian density."""
    half = fwhm / 2.0
    return (half / np.pi) / ((lam - center) ** 2 + half * half)


def pl_source(t, m, seed, n_centers=1.0, collection_eff=0.021,
              emission_rate_hz=4.0e7, r=0.0, lam_min=600.0, lam_max=800.0,
              bin_nm=0.1, window=PL_FIT_WINDOW_NM):
    """Build the photoluminescence source for a crystal at temperature ``t``.

    The total collected rate ``n_centers * collection_eff * emission_rate_hz``
    is split by the Debye-Waller factor of ``m`` between a two-component ZPL
    doublet and a triangular phonon sideband red-shifted past the fit window.
    A uniform background of ``r`` times the ZPL peak bin rate is added on a
    strip one nm wider than the fit window on each side, which is where a
    background at that level competes with the line.

    Parameters
    ----------
    t : float
        True temperature in K.
    m : DwfModel
        Debye-Waller model used both to build and (downstream) to invert.
    seed : int
        Base RNG seed stored on the source.
    r : float
        Background-to-ZPL-peak intensity ratio, >= 0.
    """
    if not np.isfinite(r) or r < 0.0:
        raise InvalidParameterError(f"background ratio r must be >= 0, got {r!r}")
    if bin_nm <= 0.0 or lam_min >= lam_max:
        raise InvalidParameterError("need bin_nm > 0 and lam_min < lam_max")
    inp = thermo.SensitivityInput(n_centers, collection_eff, emission_rate_hz, r, 1.0)
    total_rate = inp.n_centers * inp.collection_eff * inp.emission_rate
    d = thermo.dwf(t, m)

    n_bins = int(round((lam_max - lam_min) / bin_nm)) + 1
    lam = lam_min + bin_nm * np.arange(n_bins)
    zpl_density = 0.5 * (
        _lorentzian_density(lam, ZPL_CENTERS_NM[0], ZPL_FWHM_NM)
        + _lorentzian_density(lam, ZPL_CENTERS_NM[1], ZPL_FWHM_NM)
    )
    side_density = _tent_density(lam, *SIDEBAND_RANGE_NM)
    zpl_rates = d * total_rate * zpl_density * bin_nm
    rates = zpl_rates + (1.0 - d) * total_rate * side_density * bin_nm

    zpl_peak = float(zpl_rates.max())
    strip = (lam >= window[0] - 1.0) & (lam <= window[1] + 1.0)
    rates = rates + np.where(strip, r * zpl_peak, 0.0)

    shape = {
        "kind": "pl",
        "t_k": float(t),
        "s": float(m.s),
        "t_debye_k": float(m.t_debye),
        "dwf": float(d),
        "n_centers": float(n_centers),
        "collection_eff": float(collection_eff),
        "emission_rate_hz": float(emission_rate_hz),
        "c_zpl_rate_hz": float(d * total_rate),
        "r": float(r),
        "zpl_centers_nm": list(ZPL_CENTERS_NM),
        "zpl_fwhm_nm": ZPL_FWHM_NM,
        "window_nm": [float(window[0]), float(window[1])],
    }
    return SyntheticSource(axis=lam, rates=rates, true_shape=shape, seed=int(seed))


def _trial_rng(seed, trial):
    """Independent counter-based stream for one trial."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(ss))


def synthesize_spectrum(src, exposure, trial=0):
    """Draw one Poisson spectrum: ``counts_i ~ Poisson(rate_i * exposure)``.

    The draw is reproducible: the same ``(src.seed, trial)`` always yields
    the same spectrum, independent of any other trial.
    """
    if not np.isfinite(exposure) or exposure <= 0.0:
        raise InvalidParameterError(f"exposure must be > 0, got {exposure!r}")
    rng = _trial_rng(src.seed, trial)
    counts = rng.poisson(src.rates * exposure).astype(np.float64)
    return spectra.Spectrum(src.axis, counts, float(exposure))


def poisson_normality_check(spectra_list, reference):
    """Standard deviation of ``(N_i - M_i)/sqrt(M_i)`` pooled over spectra.

    ``reference`` is a much longer exposure of the same source; its counts
    are rescaled to each spectrum's exposure to form the per-bin means
    ``M_i``.  Bins with ``M_i <= 10`` are excluded (the Gaussian limit of
    the Poisson law is not yet reliable there); pure Poisson data pool to a
    statistic of 1.

    Returns
    -------
    float
        Sample standard deviation of the pooled normalized residuals.
    """
    if not spectra_list:
        raise InvalidParameterError("need at least one spectrum to check")
    pooled = []
    for s in spectra_list:
        if s.axis.shape != reference.axis.shape or not np.allclose(s.axis, reference.axis):
            raise InvalidParameterError("spectra and reference must share one axis")
        m = reference.counts * (s.exposure / reference.exposure)
        mask = m > 10.0
        if np.any(mask):
            pooled.append((s.counts[mask] - m[mask]) / np.sqrt(m[mask]))
    if not pooled:
        raise InvalidParameterError(
            "all bins fall at or below the 10-count mean threshold"
        )
    residuals = np.concatenate(pooled)
    ddof = 1 if residuals.size > 1 else 0
    return float(np.std(residuals, ddof=ddof))


@dataclass(frozen=True)
class NoiseReport:
    """Monte-Carlo noise-floor measurement against the analytic prediction.

    ``implied_noise_floor`` is the trial standard deviation scaled by the
    square root of the exposure, in K/sqrt(Hz); ``ratio`` is implied over
    predicted.
    """

    empirical_std: float
    implied_noise_floor: float
    predicted_noise_floor: float
    ratio: float
    n_trials: int
    n_failures: int
    mean_temperature: float

    def __post_init__(self):
        for name in ("empirical_std", "implied_noise_floor",
                     "predicted_noise_floor", "ratio"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0.0:
                raise InvalidParameterError(f"{name} must be positive, got {value!r}")


def monte_carlo_noise_floor(src, m, trials, exposure, window=None):
    """Measure the thermometry noise floor by repeated full-pipeline trials.

    Each trial draws a spectrum from ``src``, fits the ZPL doublet, extracts
    the Debye-Waller factor over the emission band, and inverts it to a
    temperature through ``m``.  The standard deviation of the recovered
    temperatures, scaled to 1 s, is compared against the analytic prediction
    evaluated at the source's true parameters.

    Raises
    ------
    PipelineInstabilityError
        If more than 5% of trials fail to produce a temperature.
    """
    if trials < 100:
        raise InvalidParameterError(f"need at least 100 trials, got {trials}")
    if window is None:
        window = tuple(src.true_shape.get("window_nm", spectra.ZPL_WINDOW_NM))
    temps = []
    failures = 0
    for trial in range(int(trials)):
        try:
            s = synthesize_spectrum(src, exposure, trial=trial)
            zpl = spectra.fit_zpl(s, window=window)
            if not zpl.fit.converged:
                failures += 1
                continue
            d = spectra.compute_dwf(s, zpl, band=(src.axis[0], src.axis[-1]))
            temps.append(thermo.temperature_from_dwf(d.value, m))
        except NvthermError:
            failures += 1
    if failures > 0.05 * trials:
        raise PipelineInstabilityError(
            f"{failures}/{trials} trials failed; the fit pipeline is unstable "
            "at these rates"
        )
    temps = np.asarray(temps)
    empirical_std = float(np.std(temps, ddof=1))
    implied = empirical_std * np.sqrt(exposure)

    shape = src.true_shape
    c_zpl = shape.get("c_zpl_rate_hz")
    r = shape.get("r", 0.0)
    t_true = shape.get("t_k")
    if c_zpl is None or t_true is None:
        raise InvalidParameterError(
            "source true_shape lacks c_zpl_rate_hz/t_k; cannot predict a floor"
        )
    predicted = thermo.noise_floor_from_values(c_zpl, r, thermo.phi(t_true, m))
    return NoiseReport(
        empirical_std=empirical_std,
        implied_noise_floor=implied,
        predicted_noise_floor=float(predicted),
        ratio=implied / float(predicted),
        n_trials=int(trials),
        n_failures=int(failures),
        mean_temperature=float(np.mean(temps)),
    )


@dataclass(frozen=True)
class TimeSeries:
    """Sampled series: times in seconds, values in K or dimensionless.

    ``cadence`` is the median sampling interval when not given explicitly.
    """

    times: np.ndarray
    values: np.ndarray
    cadence: float = None

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if times.ndim != 1 or values.shape != times.shape:
            raise InvalidParameterError("times and values must be equal-length 1-d arrays")
        if times.size < 2:
            raise InvalidParameterError("a series needs at least two samples")
        if not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
            raise InvalidParameterError("times and values must be finite")
        if np.any(np.diff(times) <= 0.0):
            raise InvalidParameterError("times must be strictly increasing")
        cadence = self.cadence
        if cadence is None:
            cadence = float(np.median(np.diff(times)))
        if not np.isfinite(cadence) or cadence <= 0.0:
            raise InvalidParameterError(f"cadence must be > 0, got {cadence!r}")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "cadence", float(cadence))


def synthesize_timeseries(n_points, cadence, base, seed, step_at=None,
                          step_size=0.0, noise_std=0.0, drift=()):
    """Generate a step-plus-drift series with white Gaussian noise.

    ``drift`` holds polynomial coefficients in increasing order evaluated on
    the time axis; the step adds ``step_size`` to every point at index
    ``step_at`` and later.
    """
    if n_points < 2:
        raise InvalidParameterError(f"need at least 2 points, got {n_points}")
    if cadence <= 0.0 or noise_std < 0.0:
        raise InvalidParameterError("cadence must be > 0 and noise_std >= 0")
    times = cadence * np.arange(int(n_points), dtype=np.float64)
    values = np.full(times.shape, float(base))
    if drift:
        values = values + np.polynomial.polynomial.polyval(times, np.asarray(drift, dtype=np.float64))
    if step_at is not None:
        step_at = int(step_at)
        if not (0 <= step_at < n_points):
            raise InvalidParameterError(f"step_at must be in [0, {n_points}), got {step_at}")
        values[step_at:] += float(step_size)
    if noise_std > 0.0:
        values = values + _trial_rng(seed, 0).normal(0.0, noise_std, size=times.shape)
    return TimeSeries(times=times, values=values, cadence=float(cadence))


@dataclass(frozen=True)
class CubicTrend:
    """Cubic trend coefficients (increasing order) and the residual spread."""

    coefficients: np.ndarray
    residual_std: float


def detrend_cubic(ts):
    """Ordinary least-squares cubic trend of a series.

    The regression runs on a shifted/scaled time variable for conditioning
    and the coefficients are mapped back to the raw time axis.  The residual
    standard deviation uses ``n - 4`` degrees of freedom.
    """
    t = ts.times
    y = ts.values
    if t.size < 8:
        raise InvalidParameterError(f"need at least 8 points, got {t.size}")
    shift = float(np.mean(t))
    scale = float(np.std(t))
    if scale == 0.0:
        raise RankDeficiencyError("all sample times coincide")
    u = (t - shift) / scale
    basis = np.column_stack([np.ones_like(u), u, u * u, u ** 3])
    if np.linalg.matrix_rank(basis) < 4:
        raise RankDeficiencyError("times do not span a cubic; need 4 distinct values")
    coeffs_u, *_ = np.linalg.lstsq(basis, y, rcond=None)
    residuals = y - basis @ coeffs_u
    dof = t.size - 4
    residual_std = float(np.sqrt(residuals @ residuals / dof)) if dof > 0 else 0.0
    # Map c0 + c1 u + c2 u^2 + c3 u^3 with u = (t - shift)/scale back to
    # powers of t by expanding the binomials.
    c = coeffs_u / scale ** np.arange(4)
    a, b = -shift, 1.0
    raw = np.zeros(4)
    raw[0] = c[0] + c[1] * a + c[2] * a * a + c[3] * a ** 3
    raw[1] = c[1] * b + 2.0 * c[2] * a * b + 3.0 * c[3] * a * a * b
    raw[2] = c[2] * b * b + 3.0 * c[3] * a * b * b
    raw[3] = c[3] * b ** 3
    return CubicTrend(coefficients=raw, residual_std=residual_std)


@dataclass(frozen=True)
class StepDetection:
    """Best two-plateau split of a series; ``found`` is False for no step."""

    found: bool
    index: int = None
    time_s: float = None
    size: float = None
    uncertainty: float = None


def detect_step(ts):
    """Exhaustive two-plateau changepoint scan.

    Every split is scored by the summed squared deviation from the two
    plateau means.  The globally best split must leave at least 3 points on
    each side (a shorter plateau cannot be estimated, so evidence pointing
    at the series boundary is an explicit no-step) and must improve on the
    single-plateau fit by more than 5% to count as a detection.  The step
    uncertainty is the pooled-variance standard error of the difference of
    plateau means.
    """
    y = ts.values
    n = y.size
    if n < 10:
        raise InvalidParameterError(f"need at least 10 points, got {n}")
    sse0 = float(np.sum((y - np.mean(y)) ** 2))

    # Prefix sums make each candidate split O(1); the scan stays O(n).
    csum = np.cumsum(y)
    csq = np.cumsum(y * y)
    best_k, best_sse = None, np.inf
    for k in range(1, n):
        n1, n2 = k, n - k
        s1, s2 = csum[k - 1], csum[-1] - csum[k - 1]
        q1, q2 = csq[k - 1], csq[-1] - csq[k - 1]
        sse = (q1 - s1 * s1 / n1) + (q2 - s2 * s2 / n2)
        if sse < best_sse:
            best_sse, best_k = sse, k
    if best_k is None or best_k < 3 or best_k > n - 3:
        return StepDetection(found=False)
    if sse0 <= 0.0 or (sse0 - best_sse) / sse0 <= 0.05:
        return StepDetection(found=False)

    left = y[:best_k]
    right = y[best_k:]
    size = float(np.mean(right) - np.mean(left))
    pooled = best_sse / (n - 2)
    unc = float(np.sqrt(pooled * (1.0 / left.size + 1.0 / right.size)))
    return StepDetection(
        found=True,
        index=int(best_k),
        time_s=float(ts.times[best_k]),
        size=size,
        uncertainty=unc,
    )
