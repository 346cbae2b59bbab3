"""Regenerate the packaged reference datasets.

Writes the thermal-expansion table and the reconstructed reference
datasets under ``src/nvtherm/data/``.  Every dataset is deterministic
(fixed seeds), and each reconstruction is verified on the spot: the
corresponding fit recipe must recover the published parameters within
their quoted uncertainties, otherwise this script fails loudly.

Run from anywhere: paths resolve relative to the repository root.
"""

import pathlib
import zlib

import numpy as np

from nvtherm import models, noise, spectra, thermo

ROOT = pathlib.Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "nvtherm" / "data"
PAPER = DATA / "paper"

MASTER_SEED = 20260822


def rng_for(name):
    key = zlib.crc32(name.encode())
    ss = np.random.SeedSequence(entropy=MASTER_SEED, spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))


def write_csv(path, header_lines, columns, rows, fmt):
    lines = [f"# {h}" for h in header_lines]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(f % v for f, v in zip(fmt, row)))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path.relative_to(ROOT)} ({len(rows)} rows)")


def expansion_table():
    # Linear thermal-expansion coefficient anchors for diamond, 1e-6/K,
    # following the standard low-temperature suppression and the gradual
    # high-temperature rise; volumetric coefficient is three times linear.
    anchor_t = np.array([0, 50, 100, 150, 200, 250, 293, 350, 400,
                         450, 500, 550, 600, 650, 700], dtype=float)
    anchor_a = np.array([0.0, 0.0025, 0.05, 0.15, 0.40, 0.70, 1.07, 1.50,
                         1.85, 2.30, 2.70, 3.05, 3.40, 3.70, 4.00]) * 1e-6
    t = np.arange(0.0, 700.0 + 1e-9, 10.0)
    e_vol = 3.0 * np.interp(t, anchor_t, anchor_a)
    write_csv(
        DATA / "diamond_expansion.csv",
        ["diamond volumetric thermal expansion coefficient e(T)",
         "piecewise-linear table; override with any temperature_K,e_per_K file",
         "sources: standard diamond linear-expansion anchors, volumetric = 3x linear"],
        ["temperature_K", "e_per_K"],
        list(zip(t, e_vol)),
        ["%.1f", "%.6e"],
    )
    return thermo.ExpansionModel(442.0, table_t=t, table_e=e_vol)


def fig2b():
    m = thermo.DwfModel(4.57, 1614.0)
    t = np.linspace(300.0, 600.0, 13)
    rng = rng_for("fig2b")
    d = np.array([thermo.dwf(tk, m) for tk in t]) * (1.0 + 0.005 * rng.standard_normal(t.size))
    cal = spectra.fit_dwf_calibration(np.column_stack([t, d]))
    assert abs(cal.model.s - 4.57) <= 0.07, cal.model
    assert abs(cal.model.t_debye - 1614.0) <= 23.0, cal.model
    write_csv(
        PAPER / "fig2b_dwf_vs_temperature.csv",
        ["figure: 2b", "dataset: Debye-Waller factor vs temperature",
         "method: reconstruction from the published fit parameters "
         "S=4.57, T_D=1614 K (no digitization)",
         f"scatter: multiplicative gaussian 0.5%, seed {MASTER_SEED}",
         "estimated reconstruction error: within the quoted parameter uncertainties"],
        ["temperature_K", "dwf"],
        list(zip(t, d)),
        ["%.2f", "%.8e"],
    )
    print(f"  fit check: S={cal.model.s:.4f} T_D={cal.model.t_debye:.2f}")


def fig2c():
    m = thermo.DwfModel(4.79, 1614.0)
    p = np.linspace(0.0, 580.0, 15)
    rng = rng_for("fig2c")
    d = np.array([thermo.dwf(294.0 + 0.51 * pi, m) for pi in p])
    d = d * (1.0 + 0.005 * rng.standard_normal(p.size))
    cal = spectra.fit_laser_calibration(np.column_stack([p, d]), 294.0, 1614.0)
    assert abs(cal.huang_rhys - 4.79) <= 0.06, cal
    assert abs(cal.slope_k_per_mw - 0.51) <= 0.03, cal
    write_csv(
        PAPER / "fig2c_dwf_vs_power.csv",
        ["figure: 2c", "dataset: Debye-Waller factor vs laser power",
         "method: reconstruction from the published fit parameters "
         "S=4.79, b=0.51 K/mW at T0=294 K, T_D=1614 K (no digitization)",
         f"scatter: multiplicative gaussian 0.5%, seed {MASTER_SEED}",
         "estimated reconstruction error: within the quoted parameter uncertainties"],
        ["power_mW", "dwf"],
        list(zip(p, d)),
        ["%.2f", "%.8e"],
    )
    print(f"  fit check: S={cal.huang_rhys:.4f} b={cal.slope_k_per_mw:.4f}")


def fig3a():
    t = np.linspace(294.0, 600.0, 13)
    rng = rng_for("fig3a")
    freq = 2870.0 + 0.06 * t - 2.3e-4 * t * t + 0.3 * rng.standard_normal(t.size)
    fit = spectra.fit_quadratic_shift(np.column_stack([t, freq]))
    a, b, c = fit.fit.params
    assert abs(a - 2870.0) <= 3.0 and abs(b - 0.06) <= 0.01 and abs(c + 2.3e-4) <= 2e-5, fit.fit.params
    write_csv(
        PAPER / "fig3a_quadratic_shift.csv",
        ["figure: 3a", "dataset: ground-state resonance frequency vs temperature",
         "method: reconstruction from the published quadratic coefficients "
         "a=2870 MHz, b=6e-2 MHz/K, c=-2.3e-4 MHz/K^2 (no digitization)",
         f"scatter: additive gaussian 0.3 MHz, seed {MASTER_SEED}",
         "estimated reconstruction error: within the quoted coefficient uncertainties"],
        ["temperature_K", "frequency_MHz"],
        list(zip(t, freq)),
        ["%.2f", "%.5f"],
    )
    print(f"  fit check: a={a:.2f} b={b:.4f} c={c:.3e}")


def fig3b():
    ts_up = noise.synthesize_timeseries(40, 1.0, 294.0, seed=MASTER_SEED + 1,
                                        step_at=23, step_size=17.0, noise_std=4.0)
    det = noise.detect_step(ts_up)
    assert det.found and abs(det.size - 17.0) <= 2.5, det
    write_csv(
        PAPER / "fig3b_timeseries_step.csv",
        ["figure: 3b (upper)", "dataset: recovered temperature vs time across a heating step",
         "method: reconstruction of the published scenario, 17 K step with "
         "4 K single-sample noise at 1 s cadence (no digitization)",
         f"scatter: additive gaussian 4 K, seed {MASTER_SEED + 1}",
         "estimated reconstruction error: step size within the quoted 2 K uncertainty"],
        ["time_s", "value"],
        list(zip(ts_up.times, ts_up.values)),
        ["%.1f", "%.5f"],
    )
    print(f"  step check: size={det.size:.2f} at index {det.index}")

    # Long-time stability series: slow cubic drift under 0.3 K residual noise.
    ts_lo = noise.synthesize_timeseries(
        28, 1.0, 294.0, seed=MASTER_SEED + 2, noise_std=0.3,
        drift=(0.0, 0.05, -1.0e-3, -2.0e-5))
    trend = noise.detrend_cubic(ts_lo)
    assert 0.15 <= trend.residual_std <= 0.45, trend
    write_csv(
        PAPER / "fig3b_timeseries_drift.csv",
        ["figure: 3b (lower)", "dataset: recovered temperature vs time, drifting baseline",
         "method: reconstruction of the published scenario, slow cubic drift "
         "with 0.3 K residual scatter (no digitization)",
         f"scatter: additive gaussian 0.3 K, seed {MASTER_SEED + 2}",
         "estimated reconstruction error: residual scatter matches the quoted 0.3 K"],
        ["time_s", "value"],
        list(zip(ts_lo.times, ts_lo.values)),
        ["%.1f", "%.5f"],
    )
    print(f"  drift check: residual std={trend.residual_std:.3f}")


def fig4b(em):
    t = np.linspace(294.0, 600.0, 10)
    rng = rng_for("fig4b")
    shift = np.array([11.0 * thermo.thermal_pressure(tk, em) for tk in t])
    shift = shift + 0.5 * rng.standard_normal(t.size)
    fit = spectra.fit_expansion_shift(np.column_stack([t, shift]), em)
    assert abs(fit.gamma_mhz_per_gpa - 11.0) <= 1.0, fit
    write_csv(
        PAPER / "fig4b_shift_vs_temperature.csv",
        ["figure: 4b", "dataset: excited-state resonance shift vs temperature",
         "method: reconstruction from the published coefficient "
         "Gamma=11 MHz/GPa through the packaged expansion table; shift "
         "referenced to the zero-pressure value (no digitization)",
         f"scatter: additive gaussian 0.5 MHz, seed {MASTER_SEED}",
         "estimated reconstruction error: within the quoted 1 MHz/GPa uncertainty"],
        ["temperature_K", "shift_MHz"],
        list(zip(t, shift)),
        ["%.2f", "%.5f"],
    )
    print(f"  fit check: gamma={fit.gamma_mhz_per_gpa:.3f}")


def fig4c():
    model = models.strain_energy_model(775.0, 40.0)
    t = np.linspace(294.0, 600.0, 12)
    rng = rng_for("fig4c")
    eps = model.value(t, np.array([4.7])) + 2.0 * rng.standard_normal(t.size)
    fit = spectra.fit_strain_energy(np.column_stack([t, eps]), 775.0, 40.0)
    assert abs(fit.strain_energy_mev - 4.7) <= 0.3, fit
    write_csv(
        PAPER / "fig4c_epsilon_vs_temperature.csv",
        ["figure: 4c", "dataset: excited-state splitting parameter vs temperature",
         "method: reconstruction from the published strain energy 4.7 meV "
         "with D_perp=775 MHz, A_par=40 MHz (no digitization)",
         f"scatter: additive gaussian 2 MHz, seed {MASTER_SEED}",
         "estimated reconstruction error: within the quoted 0.3 meV uncertainty"],
        ["temperature_K", "epsilon_MHz"],
        list(zip(t, eps)),
        ["%.2f", "%.5f"],
    )
    print(f"  fit check: strain energy={fit.strain_energy_mev:.4f}")


def main():
    em = expansion_table()
    fig2b()
    fig2c()
    fig3a()
    fig3b()
    fig4b(em)
    fig4c()
    print("all reconstruction checks passed")


if __name__ == "__main__":
    main()
