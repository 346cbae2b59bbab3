"""Spin Hamiltonian construction, diagonalization, and transition labeling."""

import numpy as np
import pytest

from nvtherm import spin
from nvtherm.errors import (
    ContractViolationError,
    InvalidParameterError,
    LabeledDegeneracyError,
)

GS = spin.SpinParams(2870.0, 10.0, -2.14, -2.70)
ES_SECULAR = spin.SpinParams(1420.0, 71.7, 40.0, 0.0)


def _independent_hamiltonian(d, e, a_par, a_perp):
    """Reference 9x9 built from ladder operators, independent of spin.py."""
    sp = np.array([[0, np.sqrt(2), 0], [0, 0, np.sqrt(2)], [0, 0, 0]],
                  dtype=np.complex128)
    sm = sp.T.conj()
    sx = 0.5 * (sp + sm)
    sy = -0.5j * (sp - sm)
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)
    eye = np.eye(3, dtype=np.complex128)
    h = d * np.kron(sz @ sz - (2.0 / 3.0) * eye, eye)
    h = h + e * np.kron(sy @ sy - sx @ sx, eye)
    h = h + a_par * np.kron(sz, sz)
    h = h + a_perp * (np.kron(sx, sx) + np.kron(sy, sy))
    return h


class TestSpinOperators:
    def test_casimir_identity(self):
        sx, sy, sz = spin.spin_operators()
        total = sx @ sx + sy @ sy + sz @ sz
        np.testing.assert_allclose(total, 2.0 * np.eye(3), atol=1e-15)

    def test_spin_one_spectrum(self):
        sx, sy, sz = spin.spin_operators()
        for op in (sx, sy, sz):
            np.testing.assert_allclose(np.linalg.eigvalsh(op), [-1.0, 0.0, 1.0],
                                       atol=1e-15)

    def test_commutation_relation(self):
        sx, sy, sz = spin.spin_operators()
        np.testing.assert_allclose(sx @ sy - sy @ sx, 1j * sz, atol=1e-15)

    def test_sz_annihilates_m0(self):
        _, _, sz = spin.spin_operators()
        np.testing.assert_array_equal(sz @ np.array([0.0, 1.0, 0.0]), np.zeros(3))

    def test_operators_read_only(self):
        sx, _, _ = spin.spin_operators()
        with pytest.raises(ValueError):
            sx[0, 0] = 1.0


class TestBuildHamiltonian:
    def test_matches_independent_construction(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            d, e, a_par, a_perp = rng.uniform(-100.0, 3000.0, size=4)
            h = spin.build_hamiltonian(spin.SpinParams(d, e, a_par, a_perp))
            ref = _independent_hamiltonian(d, e, a_par, a_perp)
            np.testing.assert_allclose(h, ref, atol=1e-12 * max(abs(d), 1.0))

    def test_exactly_hermitian(self):
        for p in (GS, ES_SECULAR, spin.SpinParams(1420.0, 775.0, 40.0, 40.0)):
            h = spin.build_hamiltonian(p)
            assert np.array_equal(h, h.conj().T)

    def test_traceless(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            p = spin.SpinParams(*rng.uniform(-500.0, 3000.0, size=4))
            h = spin.build_hamiltonian(p)
            scale = max(np.abs(h).max(), 1.0)
            assert abs(np.trace(h)) <= 1e-12 * scale

    def test_axial_case_eigenvalues(self):
        h = spin.build_hamiltonian(spin.SpinParams(2870.0, 0.0, 0.0, 0.0))
        w = np.sort(np.linalg.eigvalsh(h))
        expected = np.array([-2.0 * 2870.0 / 3.0] * 3 + [2870.0 / 3.0] * 6)
        np.testing.assert_allclose(w, expected, rtol=1e-14)

    def test_zero_params_zero_matrix(self):
        h = spin.build_hamiltonian(spin.SpinParams(0.0, 0.0, 0.0, 0.0))
        assert np.abs(h).max() == 0.0

    def test_strain_splits_pm_manifold_by_2e(self):
        h = spin.build_hamiltonian(spin.SpinParams(2870.0, 10.0, 0.0, 0.0))
        w = np.sort(np.linalg.eigvalsh(h))
        # Upper six levels sit at d/3 +- e, three each.
        np.testing.assert_allclose(w[3:6] - w[3:6] + (w[6:] - w[3:6]), 20.0,
                                   atol=1e-10)

    def test_strain_sign_is_a_relabeling(self):
        rng = np.random.default_rng(33)
        for _ in range(5):
            d, e, a_par, a_perp = rng.uniform(0.0, 2000.0, size=4)
            w_pos = np.linalg.eigvalsh(
                spin.build_hamiltonian(spin.SpinParams(d, e, a_par, a_perp)))
            w_neg = np.linalg.eigvalsh(
                spin.build_hamiltonian(spin.SpinParams(d, -e, a_par, a_perp)))
            np.testing.assert_allclose(np.sort(w_pos), np.sort(w_neg),
                                       atol=1e-9 * max(d, 1.0))

    def test_output_read_only(self):
        h = spin.build_hamiltonian(GS)
        with pytest.raises(ValueError):
            h[0, 0] = 1.0

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidParameterError):
            spin.SpinParams(np.nan, 0.0, 0.0, 0.0)
        with pytest.raises(InvalidParameterError):
            spin.SpinParams(2870.0, np.inf, 0.0, 0.0)


class TestEigh:
    def test_diag_case(self):
        w = spin.eigenvalues(np.diag(np.arange(1.0, 10.0)))
        np.testing.assert_array_equal(w, np.arange(1.0, 10.0))

    def test_zero_matrix(self):
        np.testing.assert_array_equal(spin.eigenvalues(np.zeros((9, 9))),
                                      np.zeros(9))

    def test_ground_state_vs_reference_solver(self):
        h = spin.build_hamiltonian(GS)
        w = spin.eigenvalues(h)
        w_ref = np.linalg.eigvalsh(h)
        np.testing.assert_allclose(w, w_ref, rtol=1e-9, atol=1e-9)

    def test_reconstruction_residual(self):
        h = spin.build_hamiltonian(spin.SpinParams(1420.0, 71.7, 40.0, 40.0))
        w, v = spin.eigh(h)
        assert np.linalg.norm(h @ v - v * w) <= 1e-10 * np.linalg.norm(h)

    def test_rejects_non_hermitian(self):
        bad = np.eye(4)
        bad[0, 1] = 1.0
        with pytest.raises(ContractViolationError):
            spin.eigh(bad)

    def test_rejects_non_square(self):
        with pytest.raises(ContractViolationError):
            spin.eigh(np.zeros((3, 4)))


class TestTransitionFrequencies:
    def test_pure_axial_six_lines_at_d(self):
        ts = spin.transition_frequencies(spin.SpinParams(2870.0, 0.0, 0.0, 0.0))
        assert len(ts.lines) == 6
        np.testing.assert_allclose(ts.frequencies(), 2870.0, rtol=1e-12)

    def test_strain_only_d_plus_minus_e(self):
        ts = spin.transition_frequencies(spin.SpinParams(2870.0, 10.0, 0.0, 0.0))
        np.testing.assert_allclose(ts.frequencies(),
                                   [2860.0] * 3 + [2880.0] * 3, rtol=1e-12)
        for mi in (-1, 0, 1):
            assert ts.splitting(mi) == pytest.approx(20.0, abs=1e-9)

    def test_labels_are_complete(self):
        ts = spin.transition_frequencies(GS)
        labels = sorted((ln.m_i, ln.branch) for ln in ts.lines)
        assert labels == sorted(
            (mi, br) for mi in (-1, 0, 1) for br in ("lower", "upper"))
        assert all(ln.frequency_mhz > 0.0 for ln in ts.lines)

    def test_secular_manifold_splittings(self):
        # Within each nuclear manifold the m_s = +-1 block reduces to a
        # 2x2 with off-diagonal e and diagonal +-a_par*m_I, so the
        # upper-lower gap is 2e at m_I=0 and 2*sqrt(a_par^2+e^2) at m_I=+-1.
        ts = spin.transition_frequencies(ES_SECULAR)
        assert ts.splitting(0) == pytest.approx(2.0 * 71.7, rel=1e-9)
        expected = 2.0 * np.sqrt(40.0 ** 2 + 71.7 ** 2)
        assert ts.splitting(1) == pytest.approx(expected, rel=1e-9)
        assert ts.splitting(-1) == pytest.approx(expected, rel=1e-9)

    def test_transverse_hyperfine_mixing_raises(self):
        # With both strain and transverse hyperfine on, four eigenstates are
        # exact 50/50 nuclear mixtures at distinct energies: no m_I label
        # exists and the error carries the raw eigenvalues.
        with pytest.raises(LabeledDegeneracyError) as info:
            spin.transition_frequencies(spin.SpinParams(1420.0, 71.7, 40.0, 40.0))
        assert info.value.eigenvalues is not None
        assert len(info.value.eigenvalues) == 9

    def test_flip_flop_only_mixing_raises(self):
        with pytest.raises(LabeledDegeneracyError):
            spin.transition_frequencies(spin.SpinParams(2870.0, 0.0, 0.0, 40.0))

    def test_inverted_level_ordering_rejected(self):
        with pytest.raises(ContractViolationError):
            spin.transition_frequencies(spin.SpinParams(10.0, 50.0, 0.0, 0.0))

    def test_continuity_under_small_perturbations(self):
        # A 1% change of any parameter moves every labeled frequency by at
        # most twice the spectral-norm change of the Hamiltonian (Weyl).
        base = GS
        ts0 = spin.transition_frequencies(base)
        f0 = {(ln.m_i, ln.branch): ln.frequency_mhz for ln in ts0.lines}
        h0 = spin.build_hamiltonian(base)
        for field in ("d", "e", "a_par", "a_perp"):
            values = {k: getattr(base, k) for k in ("d", "e", "a_par", "a_perp")}
            values[field] = values[field] * 1.01
            p1 = spin.SpinParams(**values)
            bound = 2.0 * np.linalg.norm(spin.build_hamiltonian(p1) - h0, 2)
            ts1 = spin.transition_frequencies(p1)
            for ln in ts1.lines:
                assert abs(ln.frequency_mhz - f0[(ln.m_i, ln.branch)]) <= bound + 1e-9


class TestAverageSplitting:
    def test_pure_hyperfine(self):
        assert spin.average_splitting(0.0, 40.0) == pytest.approx(80.0 / 3.0,
                                                                  rel=1e-14)

    def test_pure_strain(self):
        for e in (1.0, 71.68, 775.0):
            assert spin.average_splitting(e, 0.0) == pytest.approx(e, rel=1e-14)

    def test_room_temperature_value(self):
        assert spin.average_splitting(71.68, 40.0) == pytest.approx(78.62, abs=0.005)

    def test_negative_strain_rejected(self):
        with pytest.raises(InvalidParameterError):
            spin.average_splitting(-1.0, 40.0)
        with pytest.raises(InvalidParameterError):
            spin.average_splitting(np.nan, 40.0)

    def test_oracle_equivalence_grid(self):
        # Secular oracle: the analytic weighted average must match the full
        # 9x9 diagonalization with the transverse hyperfine off, where the
        # per-manifold 2x2 reduction that produced the formula is exact.
        for e in (0.0, 1.0, 10.0, 50.0, 100.0, 775.0):
            for a_par in (0.0, 2.14, 40.0):
                analytic = spin.average_splitting(e, a_par)
                brute = spin.brute_force_average_splitting(1420.0, e, a_par, 0.0)
                if analytic == 0.0:
                    assert abs(brute) <= 1e-12
                else:
                    assert brute == pytest.approx(analytic, rel=1e-6)

    def test_transverse_hyperfine_shifts_oracle(self):
        # With a_perp = a_par the secular reduction is no longer exact: the
        # full spectrum deviates at order a_perp^2/d, well above 1e-6 but
        # bounded.  Pins the documented accuracy limit of the formula.
        analytic = spin.average_splitting(10.0, 2.14)
        brute = spin.brute_force_average_splitting(1420.0, 10.0, 2.14, 2.14)
        deviation = abs(brute - analytic) / analytic
        assert 1e-6 < deviation < 1e-3


class TestOdmrSynthesis:
    def test_line_model_validation(self):
        with pytest.raises(InvalidParameterError):
            spin.OdmrLineModel((2870.0,), (0.0,), (0.02,), 100.0)
        with pytest.raises(InvalidParameterError):
            spin.OdmrLineModel((2870.0,), (2.0,), (1.5,), 100.0)
        with pytest.raises(InvalidParameterError):
            spin.OdmrLineModel((2870.0,), (2.0,), (0.02,), 0.0)
        with pytest.raises(InvalidParameterError):
            spin.OdmrLineModel((2870.0, 2880.0), (2.0,), (0.02, 0.02), 100.0)

    def test_packed_order(self):
        lines = spin.OdmrLineModel((2860.0, 2880.0), (2.0, 3.0), (0.02, 0.03),
                                   100.0)
        np.testing.assert_array_equal(
            lines.packed(),
            [100.0, 2860.0, 2.0, 0.02, 2880.0, 3.0, 0.03])

    def test_lines_from_transitions_sorted(self):
        ts = spin.transition_frequencies(GS)
        lines = spin.lines_from_transitions(ts, 2.0, 0.02, 100.0)
        assert list(lines.centers) == sorted(lines.centers)
        assert len(lines.centers) == 6

    def test_on_resonance_depth(self):
        lines = spin.OdmrLineModel((2870.0,), (10.0,), (0.04,), 200.0)
        s = spin.synthesize_odmr(lines, np.array([2865.0, 2870.0, 2875.0]))
        assert s.counts[1] == pytest.approx(200.0 * 0.96, rel=1e-12)
        # Half depth half a width from the center.
        assert s.counts[0] == pytest.approx(200.0 * 0.98, rel=1e-12)
        assert s.counts[2] == pytest.approx(200.0 * 0.98, rel=1e-12)

    def test_zero_contrast_flat(self):
        lines = spin.OdmrLineModel((2870.0,), (10.0,), (0.0,), 150.0)
        s = spin.synthesize_odmr(lines, np.linspace(2800.0, 2940.0, 51))
        np.testing.assert_array_equal(s.counts, 150.0)

    def test_exposure_scales_counts(self):
        lines = spin.OdmrLineModel((2870.0,), (10.0,), (0.1,), 100.0)
        grid = np.linspace(2850.0, 2890.0, 21)
        s1 = spin.synthesize_odmr(lines, grid, exposure=1.0)
        s5 = spin.synthesize_odmr(lines, grid, exposure=5.0)
        np.testing.assert_allclose(s5.counts, 5.0 * s1.counts, rtol=1e-14)
        assert s5.exposure == 5.0
        assert s5.axis_unit == "MHz"

    def test_bad_grid_rejected(self):
        lines = spin.OdmrLineModel((2870.0,), (10.0,), (0.1,), 100.0)
        with pytest.raises(InvalidParameterError):
            spin.synthesize_odmr(lines, np.array([2870.0]))
        with pytest.raises(InvalidParameterError):
            spin.synthesize_odmr(lines, np.array([2880.0, 2870.0]))
