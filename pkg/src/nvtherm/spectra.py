"""Spectrum containers and the concrete fit recipes.

Binds the least-squares engine to the measurement pipeline: zero-phonon-line
(ZPL) double-Lorentzian fits, Debye-Waller-factor (DWF) extraction with
Poisson error propagation, resonance-dip (ODMR) fits, and the calibration
regressions that map spectra onto the thermometry models in
:mod:`nvtherm.thermo`.
"""

from dataclasses import dataclass

import numpy as np

from . import models, thermo
from .errors import (
    IllConditionedError,
    InvalidParameterError,
    InvalidWindowError,
    NvthermError,
    RankDeficiencyError,
)
from .leastsq import FitResult, fit_least_squares

ZPL_WINDOW_NM = (630.0, 645.0)
EMISSION_BAND_NM = (600.0, 800.0)


@dataclass(frozen=True)
class Spectrum:
    """One recorded spectrum: counts per bin over a strictly increasing axis.

    Parameters
    ----------
    axis : ndarray
        Bin positions, strictly increasing (nm for PL, MHz for ODMR).
    counts : ndarray
        Photons per bin, non-negative, same length as ``axis``.
    exposure : float
        Integration time in seconds, > 0.
    axis_unit : str
        Axis unit tag, ``"nm"`` or ``"MHz"``.
    """

    axis: np.ndarray
    counts: np.ndarray
    exposure: float
    axis_unit: str = "nm"

    def __post_init__(self):
        axis = np.array(self.axis, dtype=np.float64)
        counts = np.array(self.counts, dtype=np.float64)
        if axis.ndim != 1 or counts.shape != axis.shape:
            raise InvalidParameterError("axis and counts must be equal-length 1-d arrays")
        if axis.size < 2:
            raise InvalidParameterError("a spectrum needs at least two bins")
        if not np.all(np.isfinite(axis)) or not np.all(np.isfinite(counts)):
            raise InvalidParameterError("axis and counts must be finite")
        if np.any(np.diff(axis) <= 0.0):
            raise InvalidParameterError("axis must be strictly increasing")
        if np.any(counts < 0.0):
            raise InvalidParameterError("counts must be non-negative")
        if not (np.isfinite(self.exposure) and self.exposure > 0.0):
            raise InvalidParameterError(f"exposure must be positive, got {self.exposure}")
        axis.flags.writeable = False
        counts.flags.writeable = False
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "exposure", float(self.exposure))

    def slice_mask(self, lo, hi):
        """Boolean mask of bins with ``lo <= axis <= hi``."""
        return (self.axis >= lo) & (self.axis <= hi)

    def bin_width(self):
        """Median bin spacing; bins must be uniform to 1% for area/count conversion."""
        spacing = np.diff(self.axis)
        width = float(np.median(spacing))
        if np.max(np.abs(spacing - width)) > 0.01 * width:
            raise InvalidParameterError(
                "bin spacing varies by more than 1%; area-to-count conversion "
                "needs a near-uniform axis"
            )
        return width


@dataclass(frozen=True)
class ZplFit:
    """Two-Lorentzian + linear-baseline decomposition of a ZPL window.

    ``centers``, ``fwhms``, ``amplitudes`` hold the two components in fitted
    parameter order; the baseline is ``intercept + slope * axis``.  The areas
    are analytic (``amplitude * pi * fwhm / 2``), in counts times axis units.
    """

    centers: np.ndarray
    fwhms: np.ndarray
    amplitudes: np.ndarray
    slope: float
    intercept: float
    covariance: np.ndarray
    window: tuple
    fit: FitResult

    @property
    def areas(self):
        """Analytic area of each component."""
        return self.amplitudes * np.pi * self.fwhms / 2.0

    @property
    def area(self):
        """Total analytic ZPL area (both components)."""
        return float(np.sum(self.areas))

    def area_uncertainty(self):
        """Propagated 1-sigma uncertainty of the total area."""
        grad = np.zeros(8)
        for k in range(2):
            grad[3 * k + 1] = np.pi * self.amplitudes[k] / 2.0
            grad[3 * k + 2] = np.pi * self.fwhms[k] / 2.0
        if not np.all(np.isfinite(self.covariance)):
            return float("nan")
        return float(np.sqrt(max(grad @ self.covariance @ grad, 0.0)))

    def baseline(self, x):
        """Fitted linear baseline evaluated at ``x``."""
        return self.intercept + self.slope * np.asarray(x, dtype=np.float64)


@dataclass(frozen=True)
class DwfMeasurement:
    """One Debye-Waller-factor value with Poisson-propagated uncertainty."""

    value: float
    uncertainty: float
    kind: str = "DWF"

    def __post_init__(self):
        if self.kind not in ("DWF", "DWF*"):
            raise InvalidParameterError(f"kind must be 'DWF' or 'DWF*', got {self.kind!r}")
        if not np.isfinite(self.value) or not (-0.01 <= self.value <= 1.0 + 1e-9):
            raise InvalidParameterError(f"value must lie in [0, 1], got {self.value}")


def _moving_average(y, window=5):
    if y.size < window:
        return y.copy()
    kernel = np.ones(window)
    # Normalize by the per-bin kernel coverage so edge bins average only the
    # samples that exist instead of being dragged toward zero.
    coverage = np.convolve(np.ones_like(y), kernel, mode="same")
    return np.convolve(y, kernel, mode="same") / coverage


def _edge_line(x, y, n_edge=3):
    """Line through the mean of the first and last ``n_edge`` samples."""
    n_edge = min(n_edge, x.size // 2)
    x0, y0 = np.mean(x[:n_edge]), np.mean(y[:n_edge])
    x1, y1 = np.mean(x[-n_edge:]), np.mean(y[-n_edge:])
    slope = (y1 - y0) / (x1 - x0) if x1 != x0 else 0.0
    return slope, y0 - slope * x0


def _fwhm_estimate(x, y_above):
    """Full width at half maximum of a background-subtracted profile."""
    peak = int(np.argmax(y_above))
    half = y_above[peak] / 2.0
    if half <= 0.0:
        return 0.0
    left = peak
    while left > 0 and y_above[left] > half:
        left -= 1
    right = peak
    while right < y_above.size - 1 and y_above[right] > half:
        right += 1
    return float(x[right] - x[left])


def _fit_zpl_linear(model, x, y, init, weights):
    """Amplitude/baseline-only solve with centers and widths frozen at seeds."""
    params = init.copy()
    shapes = np.empty((x.size, 4))
    for k in range(2):
        only = params.copy()
        only[2], only[5] = 0.0, 0.0
        only[3 * k + 2] = 1.0
        only[6], only[7] = 0.0, 0.0
        shapes[:, k] = model.value(x, only)
    shapes[:, 2] = 1.0
    shapes[:, 3] = x
    sw = np.sqrt(weights)
    coef, *_ = np.linalg.lstsq(shapes * sw[:, None], y * sw, rcond=None)
    params[2], params[5] = coef[0], coef[1]
    params[6], params[7] = coef[2], coef[3]
    residuals = (y - shapes @ coef) * sw
    cov = np.zeros((8, 8))
    gram = (shapes * weights[:, None]).T @ shapes
    dof = x.size - 4
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
    sub = sigma2 * np.linalg.pinv(gram)
    lin_idx = [2, 5, 6, 7]
    for a, ia in enumerate(lin_idx):
        for b, ib in enumerate(lin_idx):
            cov[ia, ib] = sub[a, b]
    return FitResult(
        params=params,
        covariance=cov,
        residual_norm=float(np.sqrt(residuals @ residuals)),
        n_iterations=1,
        converged=True,
        model_name=model.name,
        warnings=[
            "no significant line in the window; centers and widths held at "
            "their seeds and only amplitudes and baseline were solved"
        ],
    )


def _fit_zpl_staged(model, x, y, init, weights, spacing):
    """Fit the doublet in two stages: one line anchors the shape, then the pair.

    Seeding both components on top of each other invites a degenerate local
    minimum where two near-identical Lorentzians with opposite amplitudes
    cancel; anchoring on a single-component solution and splitting it over a
    short ladder of center displacements avoids that valley.
    """
    single = models.lorentzian_mixture_model(1, n_baseline=2)
    seed1 = np.array([
        0.5 * (init[0] + init[3]), init[1], init[2] + init[5], init[6], init[7],
    ])
    try:
        base = fit_least_squares(single, x, y, seed1, weights=weights)
    except NvthermError:
        base = None
    if base is not None and base.converged and np.all(np.isfinite(base.params)):
        c_s, w_s, a_s, b0_s, b1_s = base.params
        w_s = abs(w_s)
    else:
        c_s = 0.5 * (init[0] + init[3])
        w_s, a_s = init[1], init[2] + init[5]
        b0_s, b1_s = init[6], init[7]
    w_s = max(w_s, 2.0 * spacing)
    scale = max(abs(a_s), 1.0)
    best = None
    for factor in (0.5, 1.0, 0.25):
        delta = max(factor * w_s, spacing)
        seed = np.array([
            c_s - delta, w_s, 0.6 * a_s,
            c_s + delta, w_s, 0.6 * a_s,
            b0_s, b1_s,
        ])
        try:
            fit = fit_least_squares(model, x, y, seed, weights=weights)
        except NvthermError:
            continue
        if not np.all(np.isfinite(fit.params)):
            continue
        a1, a2 = fit.params[2], fit.params[5]
        canceling = a1 * a2 < 0.0 and min(abs(a1), abs(a2)) > 2.0 * scale
        if fit.converged and not canceling:
            return fit
        if best is None or fit.residual_norm < best.residual_norm:
            best = fit
    if best is None:
        raise IllConditionedError("doublet fit failed from every seed")
    return best


def fit_zpl(s, window=ZPL_WINDOW_NM):
    """Fit two Lorentzians plus a linear baseline inside a wavelength window.

    Seeds the line shape from a single-component fit, splits it into a pair,
    and fits all eight parameters with Poisson weights.  The window must lie
    inside the axis, hold enough bins for the parameter count, and span at
    least three times the estimated line width.
    """
    lo, hi = float(window[0]), float(window[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise InvalidWindowError(f"window must satisfy lo < hi, got ({lo}, {hi})")
    if lo < s.axis[0] or hi > s.axis[-1]:
        raise InvalidWindowError(
            f"window ({lo}, {hi}) extends beyond the axis "
            f"({s.axis[0]}, {s.axis[-1]})"
        )
    mask = s.slice_mask(lo, hi)
    x = s.axis[mask]
    y = s.counts[mask]
    if x.size < 10:
        raise InvalidWindowError(f"window holds {x.size} bins; need at least 10")

    smooth = _moving_average(y)
    slope0, icept0 = _edge_line(x, smooth)
    above = smooth - (icept0 + slope0 * x)
    est_fwhm = _fwhm_estimate(x, above)
    # A peak must stand above the Poisson scale of the window before its
    # width estimate means anything or the nonlinear fit is identifiable.
    peak_height = float(np.max(above))
    significant = peak_height > 3.0 * np.sqrt(max(float(np.max(smooth)), 1.0))
    if significant and est_fwhm > 0.0 and (hi - lo) < 3.0 * est_fwhm:
        raise InvalidWindowError(
            f"window span {hi - lo:.3g} is narrower than 3x the estimated "
            f"line width {est_fwhm:.3g}"
        )

    peak_idx = int(np.argmax(above))
    center0 = x[peak_idx]
    spacing = x[1] - x[0]
    width0 = max(est_fwhm / 2.0, 2.0 * spacing)
    # Re-fit the baseline seed on peak-free bins; the edge-only line can sit
    # well under a sloped sideband pedestal, which sends one component off
    # to absorb the offset as an ever-wider Lorentzian.
    free = np.abs(x - center0) > max(1.5 * est_fwhm, 5.0 * spacing)
    if np.count_nonzero(free) >= 6:
        basis = np.column_stack([np.ones(np.count_nonzero(free)), x[free]])
        (icept0, slope0), *_ = np.linalg.lstsq(basis, smooth[free], rcond=None)
        above = smooth - (icept0 + slope0 * x)
    height = max(above[peak_idx], 1.0)
    init = np.array([
        center0 - 0.5, width0, 0.7 * height,
        center0 + 0.5, width0, 0.7 * height,
        icept0, slope0,
    ])
    weights = 1.0 / np.maximum(y, 1.0)
    model = models.lorentzian_mixture_model(2, n_baseline=2)
    if significant:
        fit = _fit_zpl_staged(model, x, y, init, weights, spacing)
    else:
        # No identifiable line: centers and widths stay at their seeds and
        # only the linear parameters (amplitudes, baseline) are solved, so
        # featureless input yields exactly zero areas instead of a random
        # walk through the degenerate shape parameters.
        fit = _fit_zpl_linear(model, x, y, init, weights)
    params = fit.params.copy()
    # A Lorentzian depends on fwhm only through its square; normalize sign.
    params[1] = abs(params[1])
    params[4] = abs(params[4])
    warnings = list(fit.warnings)
    for k, c in ((0, params[0]), (1, params[3])):
        if not (lo <= c <= hi):
            warnings.append(f"component {k} center {c:.4g} left the window")
    fit = FitResult(
        params=params,
        covariance=fit.covariance,
        residual_norm=fit.residual_norm,
        n_iterations=fit.n_iterations,
        converged=fit.converged,
        model_name=fit.model_name,
        warnings=warnings,
    )
    return ZplFit(
        centers=params[[0, 3]],
        fwhms=params[[1, 4]],
        amplitudes=params[[2, 5]],
        slope=float(params[7]),
        intercept=float(params[6]),
        covariance=fit.covariance,
        window=(lo, hi),
        fit=fit,
    )


def _dwf_ratio(s, zpl, band):
    """Shared numerator/denominator assembly for the two DWF estimators."""
    lo, hi = float(band[0]), float(band[1])
    band_mask = s.slice_mask(lo, hi)
    if not np.any(band_mask):
        raise InvalidParameterError(f"band ({lo}, {hi}) holds no bins")
    width = s.bin_width()
    win_lo, win_hi = zpl.window
    window_mask = s.slice_mask(win_lo, win_hi)

    n_zpl = zpl.area / width
    baseline_counts = float(np.sum(zpl.baseline(s.axis[band_mask & window_mask])))
    outside_counts = float(np.sum(s.counts[band_mask & ~window_mask]))
    n_band = outside_counts + baseline_counts + n_zpl
    if n_band <= 0.0:
        raise InvalidParameterError("band counts are zero; cannot normalize")
    value = n_zpl / n_band
    if n_zpl > 0.0:
        uncertainty = value * np.sqrt(1.0 / n_zpl + 1.0 / n_band)
    else:
        uncertainty = 1.0 / n_band
    return value, uncertainty


def compute_dwf(s, zpl, band=EMISSION_BAND_NM):
    """DWF: analytic ZPL area over the emission-band total.

    The denominator integrates the band with the fitted window counts
    replaced by the linear baseline plus the analytic ZPL area, so the
    sideband contribution under the ZPL stays in the denominator only.
    Uncertainty is Poisson: ``value * sqrt(1/N_zpl + 1/N_band)``.
    """
    value, uncertainty = _dwf_ratio(s, zpl, band)
    return DwfMeasurement(value=value, uncertainty=uncertainty, kind="DWF")


def compute_dwf_star(s, zpl):
    """DWF*: analytic ZPL area over the whole recorded spectrum.

    Same assembly as :func:`compute_dwf` with the denominator extended to
    the full axis, so any broadband background enters the normalization.
    For a temperature-independent background this rescales the DWF by a
    constant and leaves the thermometry slope ratio unchanged.
    """
    value, uncertainty = _dwf_ratio(s, zpl, (s.axis[0], s.axis[-1]))
    return DwfMeasurement(value=value, uncertainty=uncertainty, kind="DWF*")


@dataclass(frozen=True)
class OdmrFit:
    """Multi-dip resonance fit with derived zero-field parameters.

    ``d_mhz`` is the mean of the fitted line centers; for exactly two lines
    ``splitting_mhz`` is half their separation (the strain or averaged
    hyperfine half-splitting), otherwise it is None.
    """

    fit: FitResult
    baseline: float
    centers: np.ndarray
    widths: np.ndarray
    contrasts: np.ndarray
    d_mhz: float
    d_uncertainty: float
    splitting_mhz: object = None
    splitting_uncertainty: object = None


def _local_minima(y):
    idx = []
    for i in range(1, y.size - 1):
        if y[i] <= y[i - 1] and y[i] <= y[i + 1]:
            idx.append(i)
    return idx


def fit_odmr(s, n_lines, init=None):
    """Fit ``n_lines`` Lorentzian dips on a flat baseline.

    Line centers are seeded at the ``n_lines`` lowest local minima of the
    5-bin moving average (leftmost wins ties) unless ``init`` provides a
    line model.  Carries a degeneracy warning when two fitted lines sit
    closer than a tenth of their mean width.
    """
    if not (1 <= int(n_lines) <= 6):
        raise InvalidParameterError(f"n_lines must be in 1..6, got {n_lines}")
    n_lines = int(n_lines)
    x = s.axis
    y = s.counts
    if init is not None:
        packed = init.packed()
        if packed.size != 1 + 3 * n_lines:
            raise InvalidParameterError(
                f"init holds {(packed.size - 1) // 3} lines, expected {n_lines}"
            )
    else:
        smooth = _moving_average(y)
        base0 = float(np.percentile(smooth, 90))
        minima = _local_minima(smooth)
        minima.sort(key=lambda i: (smooth[i], i))
        spacing = float(np.median(np.diff(x)))
        # Non-maximum suppression: the floor of one noisy dip easily holds
        # several of the deepest local minima, so enforce a minimum spacing
        # first and fall back to raw depth order only when lines really are
        # that close.
        radius = max(3.0 * spacing, float(x[-1] - x[0]) / (8.0 * n_lines))
        picks = []
        for i in minima:
            if len(picks) == n_lines:
                break
            if all(abs(x[i] - x[j]) >= radius for j in picks):
                picks.append(i)
        for i in minima:
            if len(picks) == n_lines:
                break
            if i not in picks:
                picks.append(i)
        picks = sorted(picks)
        while len(picks) < n_lines:
            picks.append(int(np.argmin(smooth)))
        packed = [base0]
        for i in picks:
            depth = max(1.0 - smooth[i] / base0, 1e-3)
            half = base0 * (1.0 - depth / 2.0)
            left = i
            while left > 0 and smooth[left] < half:
                left -= 1
            right = i
            while right < smooth.size - 1 and smooth[right] < half:
                right += 1
            width0 = max(float(x[right] - x[left]), 3.0 * spacing)
            packed.extend([float(x[i]), width0, min(depth, 0.9)])
        packed = np.array(packed)

    weights = 1.0 / np.maximum(y, 1.0)
    model = models.odmr_model(n_lines)
    fit = fit_least_squares(model, x, y, packed, weights=weights)
    params = fit.params.copy()
    warnings = list(fit.warnings)
    centers = params[1::3].copy()
    widths = np.abs(params[2::3])
    contrasts = params[3::3].copy()
    order = np.argsort(centers)
    centers, widths, contrasts = centers[order], widths[order], contrasts[order]
    for k in range(n_lines - 1):
        mean_width = 0.5 * (widths[k] + widths[k + 1])
        if centers[k + 1] - centers[k] < mean_width / 10.0:
            warnings.append(
                f"lines at {centers[k]:.6g} and {centers[k + 1]:.6g} MHz overlap "
                "within a tenth of their width; parameters are degenerate"
            )
    for c in centers:
        if c < x[0] or c > x[-1]:
            warnings.append(f"line center {c:.6g} MHz left the scanned range")
    fit = FitResult(
        params=fit.params,
        covariance=fit.covariance,
        residual_norm=fit.residual_norm,
        n_iterations=fit.n_iterations,
        converged=fit.converged,
        model_name=fit.model_name,
        warnings=warnings,
    )

    cov = fit.covariance
    center_idx = [1 + 3 * int(k) for k in order]
    d_mhz = float(np.mean(centers))
    d_var = 0.0
    if np.all(np.isfinite(cov)):
        for a in center_idx:
            for b in center_idx:
                d_var += cov[a, b]
        d_var /= n_lines ** 2
    else:
        d_var = float("nan")
    splitting = splitting_unc = None
    if n_lines == 2:
        splitting = float((centers[1] - centers[0]) / 2.0)
        ia, ib = center_idx
        if np.all(np.isfinite(cov)):
            splitting_unc = float(
                np.sqrt(max(cov[ia, ia] + cov[ib, ib] - 2.0 * cov[ia, ib], 0.0)) / 2.0
            )
        else:
            splitting_unc = float("nan")
    return OdmrFit(
        fit=fit,
        baseline=float(params[0]),
        centers=centers,
        widths=widths,
        contrasts=contrasts,
        d_mhz=d_mhz,
        d_uncertainty=float(np.sqrt(d_var)) if d_var == d_var else float("nan"),
        splitting_mhz=splitting,
        splitting_uncertainty=splitting_unc,
    )


@dataclass(frozen=True)
class DwfCalibration:
    """Debye-Waller temperature calibration: model, covariance, fit record."""

    model: thermo.DwfModel
    covariance: np.ndarray
    fit: FitResult


def _as_points(points, names):
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidParameterError(f"points must be (n, 2) pairs of {names}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError("points must be finite")
    return arr[:, 0], arr[:, 1]


def fit_dwf_calibration(points):
    """Calibrate (huang_rhys, t_debye) from (temperature K, DWF) pairs.

    Linear regression of ``ln(DWF)`` on ``T^2``: the intercept is ``-S`` and
    the slope ``-(2/3) pi^2 S / T_D^2``; the parameters and covariance are
    transformed back to (S, T_D) space analytically.
    """
    t, dwf_values = _as_points(points, "(temperature_K, dwf)")
    if t.size < 3:
        raise InvalidParameterError(f"need at least 3 points, got {t.size}")
    if np.any(dwf_values <= 0.0):
        raise InvalidParameterError("DWF values must be positive for the log transform")
    span = float(t.max() - t.min())
    if span < 100.0:
        raise IllConditionedError(
            f"temperature span {span:.3g} K is below the 100 K minimum for "
            "separating S from T_D"
        )
    basis = np.column_stack([np.ones_like(t), t * t])
    target = np.log(dwf_values)
    gram = basis.T @ basis
    coeffs = np.linalg.solve(gram, basis.T @ target)
    c0, c1 = coeffs
    if c0 >= 0.0 or c1 >= 0.0:
        raise IllConditionedError(
            "regression gave non-negative intercept or slope; data are not "
            "a decaying Debye-Waller curve"
        )
    s_hat = -c0
    t_debye = float(np.sqrt((2.0 / 3.0) * np.pi * np.pi * s_hat / (-c1)))

    residuals = target - basis @ coeffs
    dof = t.size - 2
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
    cov_lin = sigma2 * np.linalg.inv(gram)
    jac = np.array([
        [-1.0, 0.0],
        [t_debye / (2.0 * c0), -t_debye / (2.0 * c1)],
    ])
    cov = jac @ cov_lin @ jac.T
    fit = FitResult(
        params=np.array([s_hat, t_debye]),
        covariance=cov,
        residual_norm=float(np.sqrt(residuals @ residuals)),
        n_iterations=1,
        converged=True,
        model_name="dwf_calibration",
        warnings=[],
    )
    return DwfCalibration(model=thermo.DwfModel(s_hat, t_debye), covariance=cov, fit=fit)


@dataclass(frozen=True)
class LaserCalibration:
    """Laser-power heating calibration: (S, b) with their covariance."""

    huang_rhys: float
    slope_k_per_mw: float
    covariance: np.ndarray
    fit: FitResult


def fit_laser_calibration(points, t0, t_debye):
    """Fit (S, b) to (laser power mW, DWF) pairs at fixed ``t_debye``.

    The temperature model is ``T = t0 + b * P``; ``t_debye`` comes from a
    prior temperature calibration.  Initialized by inverting the endpoint
    DWF values.
    """
    p_las, dwf_values = _as_points(points, "(power_mW, dwf)")
    if p_las.size < 3:
        raise InvalidParameterError(f"need at least 3 points, got {p_las.size}")
    if np.any(dwf_values <= 0.0):
        raise InvalidParameterError("DWF values must be positive")
    if t0 < 0.0 or t_debye <= 0.0:
        raise InvalidParameterError("t0 must be >= 0 and t_debye > 0")

    a = (2.0 / 3.0) * np.pi * np.pi / (t_debye * t_debye)
    order = np.argsort(p_las)
    p_lo, p_hi = p_las[order[0]], p_las[order[-1]]
    dwf_lo, dwf_hi = dwf_values[order[0]], dwf_values[order[-1]]
    s0 = -np.log(dwf_lo) / (1.0 + a * (t0 + 0.0 * p_lo) ** 2)
    b0 = 0.5
    if p_hi > p_lo:
        t_sq = (-np.log(dwf_hi) / s0 - 1.0) / a
        if t_sq > 0.0:
            b0 = max((np.sqrt(t_sq) - t0) / p_hi, 0.0)
    model = models.dwf_power_model(t0, t_debye)
    fit = fit_least_squares(model, p_las, dwf_values, np.array([s0, b0]))
    return LaserCalibration(
        huang_rhys=float(fit.params[0]),
        slope_k_per_mw=float(fit.params[1]),
        covariance=fit.covariance,
        fit=fit,
    )


@dataclass(frozen=True)
class QuadraticShiftFit:
    """Quadratic resonance-shift calibration with coefficient covariance."""

    model: thermo.QuadraticShift
    covariance: np.ndarray
    fit: FitResult


def fit_quadratic_shift(points):
    """Ordinary least squares of resonance frequency on (1, T, T^2).

    The regression runs in a centered variable for conditioning and the
    coefficients and covariance are mapped back to the raw basis.
    """
    t, freq = _as_points(points, "(temperature_K, frequency_MHz)")
    if t.size < 4:
        raise InvalidParameterError(f"need at least 4 points, got {t.size}")
    t_bar = float(np.mean(t))
    tau = t - t_bar
    basis = np.column_stack([np.ones_like(tau), tau, tau * tau])
    gram = basis.T @ basis
    if np.linalg.matrix_rank(basis) < 3:
        raise RankDeficiencyError(
            "temperatures do not span a quadratic; need 3 distinct values"
        )
    coeffs = np.linalg.solve(gram, basis.T @ freq)
    residuals = freq - basis @ coeffs
    dof = t.size - 3
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
    cov_c = sigma2 * np.linalg.inv(gram)
    # (1, tau, tau^2) -> (1, T, T^2) coefficient map.
    back = np.array([
        [1.0, -t_bar, t_bar * t_bar],
        [0.0, 1.0, -2.0 * t_bar],
        [0.0, 0.0, 1.0],
    ])
    params = back @ coeffs
    cov = back @ cov_c @ back.T
    fit = FitResult(
        params=params,
        covariance=cov,
        residual_norm=float(np.sqrt(residuals @ residuals)),
        n_iterations=1,
        converged=True,
        model_name="quadratic_shift",
        warnings=[],
    )
    model = thermo.QuadraticShift(float(params[0]), float(params[1]), float(params[2]))
    return QuadraticShiftFit(model=model, covariance=cov, fit=fit)


@dataclass(frozen=True)
class ExpansionShiftFit:
    """Hydrostatic-shift coefficient fitted to a resonance-shift series."""

    gamma_mhz_per_gpa: float
    uncertainty: float
    fit: FitResult


def fit_expansion_shift(points, em):
    """One-parameter fit of ``shift = gamma * P(T)`` to (T K, shift MHz) pairs.

    ``P(T)`` is the thermal expansion pressure from ``em``; the closed-form
    least-squares slope through the origin is returned with its standard
    error.
    """
    t, shift = _as_points(points, "(temperature_K, shift_MHz)")
    if t.size < 2:
        raise InvalidParameterError(f"need at least 2 points, got {t.size}")
    pressures = np.array([thermo.thermal_pressure(ti, em) for ti in t])
    denom = float(pressures @ pressures)
    if denom == 0.0:
        raise IllConditionedError(
            "all thermal pressures vanish; the shift coefficient is unidentifiable"
        )
    gamma = float(pressures @ shift) / denom
    residuals = shift - gamma * pressures
    dof = t.size - 1
    sigma2 = float(residuals @ residuals) / dof if dof > 0 else 0.0
    unc = float(np.sqrt(sigma2 / denom))
    fit = FitResult(
        params=np.array([gamma]),
        covariance=np.array([[sigma2 / denom]]),
        residual_norm=float(np.sqrt(residuals @ residuals)),
        n_iterations=1,
        converged=True,
        model_name="expansion_shift",
        warnings=[],
    )
    return ExpansionShiftFit(gamma_mhz_per_gpa=gamma, uncertainty=unc, fit=fit)


@dataclass(frozen=True)
class StrainEnergyFit:
    """Transverse strain energy fitted to a splitting-vs-temperature series."""

    strain_energy_mev: float
    uncertainty: float
    fit: FitResult


def _invert_epsilon(eps, a_par):
    """Strain splitting e solving ``eps = e/3 + (2/3) sqrt(a_par^2 + e^2)``."""
    disc = 3.0 * eps * eps - a_par * a_par
    if disc <= 0.0:
        return None
    e = -eps + 2.0 / np.sqrt(3.0) * np.sqrt(disc)
    return e if e > 0.0 else None


def fit_strain_energy(points, d_perp, a_par, init_mev=None):
    """One-parameter fit of the averaged splitting curve to (T K, eps MHz).

    The free parameter is the transverse strain energy (meV) entering the
    two-level thermal reduction factor; ``d_perp`` and ``a_par`` stay fixed.
    Initialization inverts the first data point through the splitting
    average and the reduction factor.
    """
    t, eps = _as_points(points, "(temperature_K, epsilon_MHz)")
    if t.size < 2:
        raise InvalidParameterError(f"need at least 2 points, got {t.size}")
    if init_mev is None:
        init_mev = 4.7
        e0 = _invert_epsilon(eps[0], a_par)
        if e0 is not None and d_perp > 0.0:
            ratio = e0 / d_perp
            if 0.0 < ratio < 1.0:
                init_mev = float(
                    2.0 * thermo.KB_MEV_PER_K * t[0] * np.arctanh(ratio)
                )
    model = models.strain_energy_model(d_perp, a_par)
    fit = fit_least_squares(model, t, eps, np.array([float(init_mev)]))
    unc = float(np.sqrt(fit.covariance[0, 0])) if np.all(np.isfinite(fit.covariance)) else float("nan")
    return StrainEnergyFit(
        strain_energy_mev=float(fit.params[0]),
        uncertainty=unc,
        fit=fit,
    )
