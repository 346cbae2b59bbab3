"""Tests for the closed-form temperature models."""

import numpy as np
import pytest

from nvtherm import thermo
from nvtherm.constants import (
    BULK_MODULUS_GPA,
    COLLECTION_EFF,
    D_PERP_ES_MHZ,
    DWF_TYPICAL,
    EMISSION_RATE_HZ,
    GAMMA_GS_MHZ_PER_GPA,
    KB_MEV_PER_K,
    PHI_MEASURED_K,
    QUAD_A_MHZ,
    QUAD_B_MHZ_PER_K,
    QUAD_C_MHZ_PER_K2,
    S_HUANG_RHYS,
    STRAIN_ENERGY_MEV,
    T0_K,
    T_DEBYE_K,
)
from nvtherm.errors import (
    ExtrapolationWarning,
    InvalidParameterError,
    QuadratureError,
    RangeError,
)

M = thermo.DwfModel(S_HUANG_RHYS, T_DEBYE_K)

# Frozen values of the closed forms at s=4.57, t_debye=1614, t=294:
# dwf = exp(-s (1 + (2/3) pi^2 t^2/t_debye^2)), its analytic derivative,
# and phi = 3 t_debye^2 / (4 pi^2 s t).
DWF_294 = 3.819146579761082e-3
DDWF_294 = -2.592156860801013e-5
PHI_294 = 147.33470175029882


class TestDwfModel:
    def test_parameter_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.DwfModel(0.0, 1614.0)
        with pytest.raises(InvalidParameterError):
            thermo.DwfModel(-1.0, 1614.0)
        with pytest.raises(InvalidParameterError):
            thermo.DwfModel(4.57, 0.0)
        with pytest.raises(InvalidParameterError):
            thermo.DwfModel(np.nan, 1614.0)

    def test_zero_temperature_value(self):
        assert thermo.dwf(0.0, M) == pytest.approx(np.exp(-S_HUANG_RHYS), rel=1e-14)

    def test_ambient_value(self):
        assert thermo.dwf(T0_K, M) == pytest.approx(DWF_294, rel=1e-12)

    def test_strictly_decreasing(self):
        t = np.linspace(0.0, 0.5 * T_DEBYE_K, 200)
        vals = thermo.dwf(t, M)
        assert np.all(np.diff(vals) < 0)

    def test_array_matches_scalar(self):
        t = np.array([10.0, 100.0, 500.0])
        vals = thermo.dwf(t, M)
        for ti, vi in zip(t, vals):
            assert vi == thermo.dwf(float(ti), M)

    def test_range_errors(self):
        with pytest.raises(RangeError):
            thermo.dwf(-1.0, M)
        with pytest.raises(RangeError):
            thermo.dwf(0.5 * T_DEBYE_K + 1.0, M)
        with pytest.raises(RangeError):
            thermo.dwf(np.nan, M)

    def test_derivative_value(self):
        assert thermo.dwf_derivative(T0_K, M) == pytest.approx(DDWF_294, rel=1e-12)

    def test_derivative_negative_for_positive_t(self):
        t = np.linspace(1.0, 0.5 * T_DEBYE_K, 50)
        assert np.all(thermo.dwf_derivative(t, M) < 0)
        assert thermo.dwf_derivative(0.0, M) == 0.0

    def test_derivative_matches_finite_difference(self):
        h = 1e-4
        for t in (50.0, 150.0, 294.0, 450.0, 600.0):
            fd = (thermo.dwf(t + h, M) - thermo.dwf(t - h, M)) / (2.0 * h)
            assert thermo.dwf_derivative(t, M) == pytest.approx(fd, rel=1e-6)


class TestTemperatureFromDwf:
    def test_round_trip(self):
        for t in np.linspace(1.0, 0.5 * T_DEBYE_K, 37):
            back = thermo.temperature_from_dwf(thermo.dwf(t, M), M)
            assert back == pytest.approx(t, rel=1e-8)

    def test_round_trip_at_zero(self):
        assert thermo.temperature_from_dwf(thermo.dwf(0.0, M), M) == pytest.approx(
            0.0, abs=1e-6
        )

    def test_value_above_zero_temperature_limit(self):
        with pytest.raises(RangeError):
            thermo.temperature_from_dwf(np.exp(-S_HUANG_RHYS) * 1.01, M)

    def test_value_below_validity_range(self):
        low = thermo.dwf(0.5 * T_DEBYE_K, M)
        with pytest.raises(RangeError):
            thermo.temperature_from_dwf(low * 0.9, M)

    def test_nonpositive_value(self):
        with pytest.raises(RangeError):
            thermo.temperature_from_dwf(0.0, M)
        with pytest.raises(RangeError):
            thermo.temperature_from_dwf(-0.1, M)
        with pytest.raises(RangeError):
            thermo.temperature_from_dwf(np.nan, M)


class TestPhi:
    def test_ambient_value(self):
        assert thermo.phi(T0_K, M) == pytest.approx(PHI_294, rel=1e-12)

    def test_ratio_identity(self):
        # phi is the inverse log-derivative: phi = -dwf / (d dwf / dT)
        for t in (20.0, 294.0, 700.0):
            ratio = -thermo.dwf(t, M) / thermo.dwf_derivative(t, M)
            assert thermo.phi(t, M) == pytest.approx(ratio, rel=1e-10)

    def test_diverges_at_zero(self):
        with pytest.raises(RangeError):
            thermo.phi(0.0, M)
        with pytest.raises(RangeError):
            thermo.phi(-5.0, M)

    def test_range_checked(self):
        with pytest.raises(RangeError):
            thermo.phi(T_DEBYE_K, M)


class TestDeltaTMin:
    def test_approximate_value(self):
        # 840000 detected photons at DWF 0.005: phi / sqrt(N * dwf)
        v = thermo.delta_t_min_from_values(
            840000.0, 0.0, 0.005, PHI_294, exact=False
        )
        assert v == pytest.approx(PHI_294 / np.sqrt(4200.0), rel=1e-12)

    def test_exact_vs_approximate_factor(self):
        # exact / approximate = 1 + sqrt(dwf), for any inputs
        for d in (0.005, DWF_294, 0.05):
            exact = thermo.delta_t_min_from_values(1e6, 0.5, d, PHI_294, exact=True)
            approx = thermo.delta_t_min_from_values(1e6, 0.5, d, PHI_294, exact=False)
            assert exact / approx == pytest.approx(1.0 + np.sqrt(d), rel=1e-12)

    def test_model_form_consistent(self):
        a = thermo.delta_t_min(1e5, 0.0, T0_K, M)
        b = thermo.delta_t_min_from_values(
            1e5, 0.0, thermo.dwf(T0_K, M), thermo.phi(T0_K, M)
        )
        assert a == b

    def test_background_scaling(self):
        base = thermo.delta_t_min(1e6, 0.0, T0_K, M)
        assert thermo.delta_t_min(1e6, 1.0, T0_K, M) == pytest.approx(
            2.0 * base, rel=1e-12
        )

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.delta_t_min_from_values(0.0, 0.0, 0.005, 150.0)
        with pytest.raises(InvalidParameterError):
            thermo.delta_t_min_from_values(1e5, -0.1, 0.005, 150.0)


class TestNoiseFloor:
    def test_measured_scale_anchor(self):
        # phi = 154 K with a 4200 Hz ZPL rate: 2.376 K/sqrt(Hz)
        v = thermo.noise_floor_from_values(4200.0, 0.0, PHI_MEASURED_K)
        assert v == pytest.approx(2.3762715894162154, rel=1e-12)
        assert v == pytest.approx(2.3, rel=0.05)

    def test_ensemble_anchor(self):
        # 500 centers: c_zpl = 500 * 0.021 * 4e7 * 0.005 = 2.1e6 Hz
        inp = thermo.SensitivityInput(
            500.0, COLLECTION_EFF, EMISSION_RATE_HZ, 0.0, DWF_TYPICAL
        )
        assert inp.c_zpl == pytest.approx(2.1e6, rel=1e-12)
        v = thermo.noise_floor_from_values(inp.c_zpl, 0.0, PHI_MEASURED_K)
        assert v == pytest.approx(0.10627009613872254, rel=1e-12)
        assert v == pytest.approx(0.1, rel=0.10)

    def test_background_anchor(self):
        v = thermo.noise_floor_from_values(14000.0, 3.7, PHI_MEASURED_K)
        assert v == pytest.approx(4.527405437996469, rel=1e-12)

    def test_background_scaling_identity(self):
        base = thermo.noise_floor_from_values(4200.0, 0.0, PHI_MEASURED_K)
        for r in (0.5, 1.0, 3.7):
            v = thermo.noise_floor_from_values(4200.0, r, PHI_MEASURED_K)
            assert v == pytest.approx(base * np.sqrt(1.0 + 3.0 * r), rel=1e-12)

    def test_consistent_with_delta_t_min(self):
        # An integration time tau collects c_zpl * tau / dwf total photons;
        # the approximate uncertainty times sqrt(tau) is the noise floor.
        c_zpl, r, tau = 4200.0, 0.7, 3.5
        d = thermo.dwf(T0_K, M)
        p = thermo.phi(T0_K, M)
        dt = thermo.delta_t_min_from_values(c_zpl * tau / d, r, d, p, exact=False)
        nf = thermo.noise_floor_from_values(c_zpl, r, p)
        assert dt * np.sqrt(tau) == pytest.approx(nf, rel=1e-12)

    def test_sensitivity_input_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.SensitivityInput(1.0, 1.5, 4e7, 0.0, 0.005)
        with pytest.raises(InvalidParameterError):
            thermo.SensitivityInput(1.0, 0.021, -1.0, 0.0, 0.005)
        with pytest.raises(InvalidParameterError):
            thermo.SensitivityInput(1.0, 0.021, 4e7, -0.1, 0.005)

    def test_noise_floor_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.noise_floor_from_values(0.0, 0.0, 150.0)
        with pytest.raises(InvalidParameterError):
            thermo.noise_floor_from_values(4200.0, -1.0, 150.0)


class TestCalibrationLine:
    def test_zero_power(self):
        line = thermo.CalibrationLine(T0_K, 0.51)
        assert thermo.laser_to_temperature(0.0, line) == T0_K

    def test_heating_slope(self):
        line = thermo.CalibrationLine(T0_K, 0.51)
        assert thermo.laser_to_temperature(100.0, line) == pytest.approx(
            345.0, rel=1e-12
        )

    def test_array_input(self):
        line = thermo.CalibrationLine(300.0, 0.5)
        out = thermo.laser_to_temperature(np.array([0.0, 10.0, 20.0]), line)
        assert np.allclose(out, [300.0, 305.0, 310.0], rtol=1e-14)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.CalibrationLine(0.0, 0.5)
        with pytest.raises(InvalidParameterError):
            thermo.CalibrationLine(300.0, np.inf)
        line = thermo.CalibrationLine(300.0, 0.5)
        with pytest.raises(InvalidParameterError):
            thermo.laser_to_temperature(-1.0, line)


class TestQuadrature:
    def test_polynomial_exactness_through_degree_13(self):
        coef = np.arange(1.0, 15.0)  # degrees 0..13
        f = lambda x: np.polynomial.polynomial.polyval(x, coef)
        exact = sum(
            coef[k] * (2.0 ** (k + 1) - (-1.0) ** (k + 1)) / (k + 1)
            for k in range(14)
        )
        v = thermo.adaptive_gauss_legendre(f, -1.0, 2.0)
        assert v == pytest.approx(exact, rel=1e-13)

    def test_smooth_integrand(self):
        v = thermo.adaptive_gauss_legendre(np.exp, 0.0, 1.0)
        assert v == pytest.approx(np.e - 1.0, rel=1e-8)
        v = thermo.adaptive_gauss_legendre(np.sin, 0.0, np.pi)
        assert v == pytest.approx(2.0, rel=1e-8)

    def test_knots_make_piecewise_linear_exact(self):
        def tent(x):
            x = np.asarray(x)
            return np.where(x < 1.0, x, 2.0 - x)

        v = thermo.adaptive_gauss_legendre(tent, 0.0, 2.0, knots=(1.0,))
        assert v == pytest.approx(1.0, rel=1e-13)

    def test_empty_interval(self):
        assert thermo.adaptive_gauss_legendre(np.exp, 2.0, 2.0) == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(InvalidParameterError):
            thermo.adaptive_gauss_legendre(np.exp, 1.0, 0.0)

    def test_divergent_integrand_raises(self):
        with pytest.raises(QuadratureError):
            thermo.adaptive_gauss_legendre(lambda x: 1.0 / x, 0.0, 1.0)

    def test_nonfinite_integrand_raises(self):
        with pytest.raises(QuadratureError):
            thermo.adaptive_gauss_legendre(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


class TestExpansionModel:
    def test_requires_exactly_one_representation(self):
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(442.0)
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(
                442.0,
                table_t=np.array([0.0, 1.0]),
                table_e=np.array([0.0, 0.0]),
                poly=np.array([1e-6]),
            )

    def test_table_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(
                442.0, table_t=np.array([0.0, 0.0]), table_e=np.array([1e-6, 1e-6])
            )
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(
                442.0, table_t=np.array([0.0, 1.0]), table_e=np.array([-1e-6, 1e-6])
            )
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(442.0, table_t=np.array([0.0]), table_e=np.array([1e-6]))
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel(0.0, poly=np.array([1e-6]))

    def test_table_interpolation_and_range(self):
        em = thermo.ExpansionModel(
            442.0, table_t=np.array([0.0, 100.0]), table_e=np.array([0.0, 2e-6])
        )
        assert em.e_of(50.0) == pytest.approx(1e-6, rel=1e-12)
        with pytest.raises(RangeError):
            em.e_of(101.0)
        with pytest.raises(RangeError):
            em.e_of(-1.0)

    def test_polynomial_evaluation(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([1e-7, 2e-9]))
        assert em.e_of(100.0) == pytest.approx(1e-7 + 2e-7, rel=1e-12)

    def test_from_csv_round_trip(self, tmp_path):
        path = tmp_path / "table.csv"
        path.write_text(
            "# comment line\n"
            "temperature_K,e_per_K\n"
            "0.0,0.0\n"
            "100.0,1.5e-7\n"
            "600.0,9.0e-6\n"
        )
        em = thermo.ExpansionModel.from_csv(path, 442.0)
        assert np.array_equal(em.table_t, [0.0, 100.0, 600.0])
        assert np.array_equal(em.table_e, [0.0, 1.5e-7, 9.0e-6])

    def test_from_csv_too_short(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("temperature_K,e_per_K\n0.0,0.0\n")
        with pytest.raises(InvalidParameterError):
            thermo.ExpansionModel.from_csv(path, 442.0)

    def test_packaged_table_loads_and_covers_range(self):
        from importlib import resources

        ref = resources.files("nvtherm").joinpath("data/diamond_expansion.csv")
        with resources.as_file(ref) as path:
            em = thermo.ExpansionModel.from_csv(path, BULK_MODULUS_GPA)
        assert em.table_t[0] == 0.0
        assert em.table_t[-1] >= 600.0
        assert np.all(em.table_e >= 0.0)
        # Pressure is finite and increasing over the thermometry range.
        p = [thermo.thermal_pressure(t, em) for t in (100.0, 300.0, 600.0)]
        assert p[0] < p[1] < p[2]


class TestThermalPressure:
    def test_constant_table(self):
        em = thermo.ExpansionModel(
            442.0, table_t=np.array([0.0, 700.0]), table_e=np.array([1e-6, 1e-6])
        )
        assert thermo.thermal_pressure(300.0, em) == pytest.approx(
            442.0 * 1e-6 * 300.0, rel=1e-12
        )

    def test_linear_polynomial(self):
        # e(T) = alpha T integrates to alpha t^2 / 2
        em = thermo.ExpansionModel(442.0, poly=np.array([0.0, 2e-9]))
        t = 500.0
        assert thermo.thermal_pressure(t, em) == pytest.approx(
            442.0 * 2e-9 * t * t / 2.0, rel=1e-10
        )

    def test_zero_temperature(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([1e-6]))
        assert thermo.thermal_pressure(0.0, em) == 0.0

    def test_table_must_cover_range(self):
        em = thermo.ExpansionModel(
            442.0, table_t=np.array([0.0, 200.0]), table_e=np.array([1e-6, 1e-6])
        )
        with pytest.raises(RangeError):
            thermo.thermal_pressure(300.0, em)
        em2 = thermo.ExpansionModel(
            442.0, table_t=np.array([50.0, 700.0]), table_e=np.array([1e-6, 1e-6])
        )
        with pytest.raises(RangeError):
            thermo.thermal_pressure(300.0, em2)

    def test_negative_coefficient_rejected_at_integration(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([-1e-6]))
        with pytest.raises(InvalidParameterError):
            thermo.thermal_pressure(100.0, em)

    def test_validation(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([1e-6]))
        with pytest.raises(InvalidParameterError):
            thermo.thermal_pressure(-1.0, em)


class TestShiftExpansion:
    def test_constant_coefficient_value(self):
        em = thermo.ExpansionModel(
            BULK_MODULUS_GPA,
            table_t=np.array([0.0, 700.0]),
            table_e=np.array([1e-6, 1e-6]),
        )
        v = thermo.shift_expansion(300.0, GAMMA_GS_MHZ_PER_GPA, em)
        assert v == pytest.approx(14.58 * 442.0 * 1e-6 * 300.0, rel=1e-12)

    def test_monotone_nondecreasing(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([0.0, 0.0, 3e-12]))
        vals = [thermo.shift_expansion(t, 14.58, em) for t in np.linspace(0.0, 600.0, 25)]
        assert np.all(np.diff(vals) >= 0.0)

    def test_gamma_validation(self):
        em = thermo.ExpansionModel(442.0, poly=np.array([1e-6]))
        with pytest.raises(InvalidParameterError):
            thermo.shift_expansion(300.0, np.nan, em)


class TestBoseEinstein:
    def test_half_occupation_point(self):
        # exp(omega / kB t) = 2 gives occupation exactly 1
        t = 300.0
        omega = KB_MEV_PER_K * t * np.log(2.0)
        assert thermo.bose_einstein(omega, t) == pytest.approx(1.0, rel=1e-12)

    def test_zero_temperature(self):
        assert thermo.bose_einstein(10.0, 0.0) == 0.0

    def test_classical_limit(self):
        # n * x -> 1 with x = omega / kB t small; x = 0.02 gives 0.99003
        t = 300.0
        x = 0.02
        omega = x * KB_MEV_PER_K * t
        assert thermo.bose_einstein(omega, t) * x == pytest.approx(
            0.9900333331111132, rel=1e-10
        )

    def test_decreasing_in_omega(self):
        omega = np.linspace(1.0, 150.0, 40)
        vals = thermo.bose_einstein(omega, 300.0)
        assert np.all(np.diff(vals) < 0)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.bose_einstein(0.0, 300.0)
        with pytest.raises(InvalidParameterError):
            thermo.bose_einstein(-1.0, 300.0)
        with pytest.raises(RangeError):
            thermo.bose_einstein(10.0, -1.0)


class TestElectronPhononShift:
    def test_zero_at_zero_temperature(self):
        sf = thermo.ElectronPhononSpectral(coeffs=(0.0, 1e-3))
        assert thermo.shift_electron_phonon(0.0, sf) == 0.0

    def test_zero_spectral_function(self):
        sf = thermo.ElectronPhononSpectral()
        assert thermo.shift_electron_phonon(300.0, sf) == 0.0

    def test_narrow_box_matches_occupation(self):
        # A box of width w << omega_0 integrates to c * w * n(omega_0, t).
        omega0, width, c, t = 60.0, 0.5, 2.0, 300.0
        sf = thermo.ElectronPhononSpectral(
            coeffs=(c,), omega_min=omega0 - width / 2.0, omega_max=omega0 + width / 2.0
        )
        v = thermo.shift_electron_phonon(t, sf)
        ref = c * width * thermo.bose_einstein(omega0, t)
        assert v == pytest.approx(ref, rel=0.01)

    def test_increasing_with_temperature(self):
        sf = thermo.ElectronPhononSpectral(coeffs=(0.0, 1e-3))
        vals = [thermo.shift_electron_phonon(t, sf) for t in (100.0, 300.0, 600.0)]
        assert vals[0] < vals[1] < vals[2]

    def test_divergent_occupation_raises(self):
        # A spectral function finite at omega = 0 makes the integrand ~ 1/omega.
        sf = thermo.ElectronPhononSpectral(coeffs=(1.0,))
        with pytest.raises(QuadratureError):
            thermo.shift_electron_phonon(300.0, sf)

    def test_spectral_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.ElectronPhononSpectral(coeffs=(1.0,), omega_max=0.0)
        with pytest.raises(InvalidParameterError):
            thermo.ElectronPhononSpectral(coeffs=(1.0,), omega_min=200.0)
        with pytest.raises(InvalidParameterError):
            thermo.ElectronPhononSpectral(coeffs=())


class TestOrbitalStrain:
    def test_reduction_factor_value(self):
        v = thermo.reduction_factor(T0_K, STRAIN_ENERGY_MEV)
        assert v == pytest.approx(0.09249209330821066, rel=1e-12)

    def test_reduction_factor_is_tanh(self):
        for t in (50.0, 294.0, 800.0):
            ref = np.tanh(STRAIN_ENERGY_MEV / (2.0 * KB_MEV_PER_K * t))
            assert thermo.reduction_factor(t, STRAIN_ENERGY_MEV) == pytest.approx(
                ref, rel=1e-12
            )

    def test_zero_temperature_limit(self):
        assert thermo.reduction_factor(0.0, STRAIN_ENERGY_MEV) == 1.0

    def test_bounded_and_decreasing(self):
        t = np.linspace(0.0, 1000.0, 60)
        vals = thermo.reduction_factor(t, STRAIN_ENERGY_MEV)
        assert np.all(vals > 0.0) and np.all(vals <= 1.0)
        assert np.all(np.diff(vals) < 0)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.reduction_factor(300.0, 0.0)
        with pytest.raises(RangeError):
            thermo.reduction_factor(-1.0, 4.7)

    def test_transverse_splitting_at_ambient(self):
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, STRAIN_ENERGY_MEV)
        assert thermo.e_es_of_t(T0_K, osm) == pytest.approx(
            71.68137231386326, rel=1e-12
        )

    def test_transverse_splitting_low_t_limit(self):
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, STRAIN_ENERGY_MEV)
        assert thermo.e_es_of_t(0.0, osm) == D_PERP_ES_MHZ

    def test_average_splitting_at_ambient(self):
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, STRAIN_ENERGY_MEV)
        v = thermo.epsilon_es_of_t(T0_K, osm, 40.0)
        assert v == pytest.approx(78.61822828141128, rel=1e-10)

    def test_average_splitting_high_t_limit(self):
        # e_es -> 0, leaving the pure hyperfine average 2 a_par / 3.
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, STRAIN_ENERGY_MEV)
        v = thermo.epsilon_es_of_t(1e10, osm, 40.0)
        assert v == pytest.approx(80.0 / 3.0, rel=1e-6)

    def test_average_splitting_stiff_limit(self):
        # A huge strain energy freezes the orbital average at d_perp_es.
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, 1e6)
        v = thermo.epsilon_es_of_t(T0_K, osm, 40.0)
        assert v == pytest.approx(775.6877143484703, rel=1e-12)

    def test_average_splitting_monotone_decreasing(self):
        osm = thermo.OrbitalStrainModel(D_PERP_ES_MHZ, STRAIN_ENERGY_MEV)
        t = np.linspace(1.0, 1000.0, 40)
        vals = thermo.epsilon_es_of_t(t, osm, 40.0)
        assert np.all(np.diff(vals) < 0)

    def test_model_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.OrbitalStrainModel(0.0, 4.7)
        with pytest.raises(InvalidParameterError):
            thermo.OrbitalStrainModel(775.0, -1.0)


class TestQuadraticShift:
    Q = thermo.QuadraticShift(QUAD_A_MHZ, QUAD_B_MHZ_PER_K, QUAD_C_MHZ_PER_K2)

    def test_ambient_value(self):
        assert thermo.dgs_quadratic(294.0, self.Q) == pytest.approx(
            2867.75972, abs=1e-9
        )

    def test_upper_end_value(self):
        assert thermo.dgs_quadratic(600.0, self.Q) == pytest.approx(2823.2, abs=1e-9)

    def test_no_warning_inside_range(self, recwarn):
        thermo.dgs_quadratic(450.0, self.Q)
        assert len(recwarn) == 0

    def test_warns_outside_range(self):
        with pytest.warns(ExtrapolationWarning):
            thermo.dgs_quadratic(200.0, self.Q)
        with pytest.warns(ExtrapolationWarning):
            thermo.dgs_quadratic(650.0, self.Q)

    def test_array_evaluation(self):
        t = np.array([300.0, 400.0, 500.0])
        vals = thermo.dgs_quadratic(t, self.Q)
        ref = 2870.0 + 0.06 * t - 2.3e-4 * t * t
        assert np.allclose(vals, ref, rtol=1e-14)

    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            thermo.QuadraticShift(np.nan, 0.06, -2.3e-4)
        with pytest.raises(InvalidParameterError):
            thermo.dgs_quadratic(np.inf, self.Q)
