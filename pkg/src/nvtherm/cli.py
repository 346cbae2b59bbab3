"""Command-line interface.

Subcommands: ``simulate`` (odmr, pl, timeseries), ``fit`` (one recipe per
calibration curve), ``sensitivity`` (noise-floor tables), and ``reproduce``
(reference-figure recipes).  Every command writes its outputs plus a run
manifest into ``--out``.  Exit codes: 0 success, 1 usage, 2 validation or
parse failure, 3 numerical failure (a diagnostic report is still written
when a fit fails to converge).
"""

import argparse
import json
import pathlib
import shutil
import sys
from importlib import resources

import numpy as np

from . import __version__, models, noise, spectra, spin, thermo
from . import config as configlib
from . import dataio
from .errors import (
    ConfigError,
    ContractViolationError,
    ConvergenceError,
    IllConditionedError,
    InvalidParameterError,
    InvalidWindowError,
    LabeledDegeneracyError,
    PipelineInstabilityError,
    QuadratureError,
    RangeError,
    RankDeficiencyError,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

_VALIDATION_ERRORS = (
    ConfigError,
    ContractViolationError,
    InvalidParameterError,
    InvalidWindowError,
    RangeError,
)
# Failures that emerge from computation rather than from input checking.
_NUMERICAL_ERRORS = (
    ConvergenceError,
    IllConditionedError,
    LabeledDegeneracyError,
    PipelineInstabilityError,
    QuadratureError,
    RankDeficiencyError,
)

FIGURE_DATA = {
    "2b": "fig2b_dwf_vs_temperature.csv",
    "2c": "fig2c_dwf_vs_power.csv",
    "3a": "fig3a_quadratic_shift.csv",
    "3b": "fig3b_timeseries_step.csv",
    "3b2": "fig3b_timeseries_drift.csv",
    "4b": "fig4b_shift_vs_temperature.csv",
    "4c": "fig4c_epsilon_vs_temperature.csv",
}


class UsageError(Exception):
    """Raised instead of SystemExit for malformed command lines."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma-separated number list")
    if not values:
        raise argparse.ArgumentTypeError("empty number list")
    return values


def _pair(text):
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"{text!r} must be exactly two numbers")
    return values[0], values[1]


def build_parser():
    p = _Parser(prog="nvtherm",
                description="Spin-resonance and emission-spectrum thermometry toolkit.")
    p.add_argument("--config", metavar="PATH", help="configuration file (INI sections)")
    p.add_argument("--seed", type=int, help="override the configured RNG seed")
    p.add_argument("--out", default=".", metavar="DIR", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="tabular report format (sensitivity)")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    sim = sub.add_parser("simulate", help="synthesize spectra and time series")
    simsub = sim.add_subparsers(dest="kind", metavar="KIND")

    odmr = simsub.add_parser("odmr", help="resonance-dip spectrum from the spin model")
    odmr.add_argument("--level", choices=("gs", "es"), default="gs")
    odmr.add_argument("--d", type=float, help="axial zero-field splitting, MHz")
    odmr.add_argument("--e", type=float, help="transverse splitting, MHz")
    odmr.add_argument("--a-par", type=float, help="axial hyperfine constant, MHz")
    odmr.add_argument("--a-perp", type=float, help="transverse hyperfine constant, MHz")
    odmr.add_argument("--width", type=float, default=2.0, help="line FWHM, MHz")
    odmr.add_argument("--contrast", type=float, default=0.02, help="dip contrast per line")
    odmr.add_argument("--baseline", type=float, default=1.0, help="off-resonance level")
    odmr.add_argument("--f-min", type=float, help="scan start, MHz")
    odmr.add_argument("--f-max", type=float, help="scan end, MHz")
    odmr.add_argument("--points", type=int, default=1201)
    odmr.add_argument("--exposure", type=float, default=1.0, help="seconds per bin")

    pl = simsub.add_parser("pl", help="emission spectrum at a set temperature")
    pl.add_argument("--temp", type=float, default=294.0, help="sample temperature, K")
    pl.add_argument("--exposure", type=float, default=1.0, help="integration time, s")
    pl.add_argument("--r", type=float, help="background-to-peak intensity ratio")
    pl.add_argument("--n-centers", type=float, help="number of emitters")
    pl.add_argument("--collection-eff", type=float, help="photon collection efficiency")
    pl.add_argument("--emission-rate", type=float, help="per-emitter emission rate, Hz")
    pl.add_argument("--trial", type=int, default=0, help="shot-noise realization index")
    pl.add_argument("--noiseless", action="store_true",
                    help="write expected counts instead of a Poisson draw")

    tsp = simsub.add_parser("timeseries", help="temperature record with optional step/drift")
    tsp.add_argument("--points", type=int, default=40)
    tsp.add_argument("--cadence", type=float, default=1.0, help="sample spacing, s")
    tsp.add_argument("--base", type=float, default=294.0, help="baseline value, K")
    tsp.add_argument("--step-at", type=int, help="index where the step lands")
    tsp.add_argument("--step-size", type=float, default=0.0, help="step height, K")
    tsp.add_argument("--noise-std", type=float, default=0.0, help="white noise sigma, K")
    tsp.add_argument("--drift", type=_float_list,
                     help="polynomial drift coefficients, constant first")

    fit = sub.add_parser("fit", help="run one fit recipe on an input file")
    fitsub = fit.add_subparsers(dest="recipe", metavar="RECIPE")

    def fit_parser(name, help_text):
        fp = fitsub.add_parser(name, help=help_text)
        fp.add_argument("--in", dest="infile", required=True, metavar="PATH")
        return fp

    fzpl = fit_parser("zpl", "two-component line + baseline over the emission window")
    fzpl.add_argument("--window", type=_pair, help="fit window, nm (lo,hi)")
    fzpl.add_argument("--band", type=_pair, help="emission band for the area ratio, nm")
    fodmr = fit_parser("odmr", "resonance dips: centers, widths, splitting")
    fodmr.add_argument("--n-lines", type=int, default=2)
    fit_parser("dwf-cal", "coupling strength and Debye temperature from (T, ratio) points")
    flaser = fit_parser("laser-cal", "coupling strength and heating slope from (power, ratio)")
    flaser.add_argument("--t0", type=float, help="base temperature, K")
    flaser.add_argument("--t-debye", type=float, help="fixed Debye temperature, K")
    fit_parser("quad-shift", "quadratic resonance-shift coefficients from (T, MHz)")
    fit_parser("gamma", "pressure-shift coefficient from (T, MHz) with the expansion table")
    fse = fit_parser("strain-energy", "orbital strain energy from (T, MHz) splitting data")
    fse.add_argument("--d-perp", type=float, help="transverse splitting scale, MHz")
    fse.add_argument("--a-par", type=float, help="axial hyperfine constant, MHz")

    sens = sub.add_parser("sensitivity", help="tabulate the temperature noise floor")
    sens.add_argument("--n", type=_float_list, default=[1.0], help="emitter counts")
    sens.add_argument("--r", type=_float_list, help="background ratios")
    sens.add_argument("--c-zpl", type=_float_list,
                      help="explicit line photon rates, Hz (overrides --n)")
    sens.add_argument("--phi", type=float, help="temperature conversion scale, K")
    sens.add_argument("--dwf", type=float, help="line area fraction")
    sens.add_argument("--collection-eff", type=float)
    sens.add_argument("--emission-rate", type=float)

    rep = sub.add_parser("reproduce", help="rebuild one reference figure's plot data")
    rep.add_argument("figure", choices=("2b", "2c", "3a", "3b", "4b", "4c"))
    rep.add_argument("--data", metavar="PATH", help="override the packaged data file")
    rep.add_argument("--data2", metavar="PATH",
                     help="override the second data file (figure 3b drift panel)")

    return p


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version paths
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    command_line = ["nvtherm"] + list(argv)
    try:
        cfg = configlib.load_config(args.config)
        out_dir = pathlib.Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        seed = args.seed if args.seed is not None else cfg.seed()
        if args.command == "simulate":
            if getattr(args, "kind", None) is None:
                parser.print_usage(sys.stderr)
                return EXIT_USAGE
            return cmd_simulate(args, cfg, out_dir, seed, command_line)
        if args.command == "fit":
            if getattr(args, "recipe", None) is None:
                parser.print_usage(sys.stderr)
                return EXIT_USAGE
            return cmd_fit(args, cfg, out_dir, command_line)
        if args.command == "sensitivity":
            return cmd_sensitivity(args, cfg, out_dir, command_line)
        if args.command == "reproduce":
            return cmd_reproduce(args, cfg, out_dir, command_line)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _emit_manifest(out_dir, stem, command_line, cfg, input_paths=()):
    manifest = dataio.RunManifest.create(command_line, cfg.digest(), input_paths,
                                         tool_version=__version__)
    manifest.write(out_dir / f"{stem}.manifest.json")


def cmd_simulate(args, cfg, out_dir, seed, command_line):
    if args.kind == "odmr":
        base = cfg.spin_params(args.level)
        params = spin.SpinParams(
            d=args.d if args.d is not None else base.d,
            e=args.e if args.e is not None else base.e,
            a_par=args.a_par if args.a_par is not None else base.a_par,
            a_perp=args.a_perp if args.a_perp is not None else base.a_perp,
        )
        transitions = spin.transition_frequencies(params)
        lines = spin.lines_from_transitions(transitions, args.width, args.contrast,
                                            args.baseline)
        freqs = transitions.frequencies()
        lo = args.f_min if args.f_min is not None else freqs[0] - 10.0 * args.width
        hi = args.f_max if args.f_max is not None else freqs[-1] + 10.0 * args.width
        if not lo < hi:
            raise InvalidParameterError(f"scan start {lo} must be below scan end {hi}")
        if args.points < 2:
            raise InvalidParameterError("need at least 2 scan points")
        grid = np.linspace(lo, hi, args.points)
        s = spin.synthesize_odmr(lines, grid, args.exposure)
        dataio.write_spectrum(out_dir / "odmr.csv", s)
        _emit_manifest(out_dir, "odmr", command_line, cfg)
        print(f"wrote {out_dir / 'odmr.csv'}: {args.points} bins, "
              f"{len(transitions.lines)} lines over {lo:.1f}-{hi:.1f} MHz")
        return EXIT_OK

    if args.kind == "pl":
        m = cfg.dwf_model()
        band = cfg.emission_band()
        src = noise.pl_source(
            args.temp, m, seed=seed,
            n_centers=args.n_centers if args.n_centers is not None
            else cfg.get_float("sensitivity", "n_centers"),
            collection_eff=args.collection_eff if args.collection_eff is not None
            else cfg.get_float("sensitivity", "collection_eff"),
            emission_rate_hz=args.emission_rate if args.emission_rate is not None
            else cfg.get_float("sensitivity", "emission_rate_hz"),
            r=args.r if args.r is not None
            else cfg.get_float("sensitivity", "background_ratio"),
            lam_min=band[0], lam_max=band[1],
        )
        if args.noiseless:
            s = spectra.Spectrum(src.axis, src.rates * args.exposure,
                                 args.exposure, "nm")
        else:
            s = noise.synthesize_spectrum(src, args.exposure, trial=args.trial)
        dataio.write_spectrum(out_dir / "pl.csv", s)
        _emit_manifest(out_dir, "pl", command_line, cfg)
        rate = src.true_shape["c_zpl_rate_hz"]
        print(f"wrote {out_dir / 'pl.csv'}: T={args.temp} K, "
              f"line rate {rate:.4g} photons/s, exposure {args.exposure} s")
        return EXIT_OK

    if args.kind == "timeseries":
        drift = tuple(args.drift) if args.drift else ()
        ts = noise.synthesize_timeseries(
            args.points, args.cadence, args.base, seed=seed,
            step_at=args.step_at, step_size=args.step_size,
            noise_std=args.noise_std, drift=drift)
        dataio.write_timeseries(out_dir / "timeseries.csv", ts)
        _emit_manifest(out_dir, "timeseries", command_line, cfg)
        print(f"wrote {out_dir / 'timeseries.csv'}: {args.points} points, "
              f"cadence {args.cadence} s")
        return EXIT_OK

    raise InvalidParameterError(f"unknown simulate kind {args.kind!r}")


def _run_fit_recipe(args, cfg):
    """Run one recipe; returns (FitResult, extras dict, summary lines)."""
    recipe = args.recipe
    if recipe == "zpl":
        s = dataio.read_spectrum(args.infile)
        window = args.window if args.window else cfg.zpl_window()
        band = args.band if args.band else cfg.emission_band()
        z = spectra.fit_zpl(s, window)
        extras = {
            "window_nm": list(window),
            "centers_nm": [float(v) for v in z.centers],
            "fwhms_nm": [float(v) for v in z.fwhms],
            "areas": [float(v) for v in z.areas],
            "area_total": z.area,
            "area_uncertainty": z.area_uncertainty(),
        }
        summary = [f"centers: {z.centers[0]:.4f}, {z.centers[1]:.4f} nm",
                   f"total line area: {z.area:.6g} counts*nm"]
        if s.axis[0] <= band[0] and band[1] <= s.axis[-1]:
            d = spectra.compute_dwf(s, z, band)
            extras["dwf"] = d.value
            extras["dwf_uncertainty"] = d.uncertainty
            summary.append(f"line area fraction: {d.value:.6g} +/- {d.uncertainty:.2g}")
            try:
                t_hat = thermo.temperature_from_dwf(d.value, cfg.dwf_model())
                extras["temperature_k"] = t_hat
                summary.append(f"temperature: {t_hat:.2f} K")
            except RangeError:
                pass
        return z.fit, extras, summary

    if recipe == "odmr":
        s = dataio.read_spectrum(args.infile)
        if args.n_lines < 1:
            raise InvalidParameterError("need at least one line")
        o = spectra.fit_odmr(s, args.n_lines)
        extras = {
            "baseline": o.baseline,
            "centers_mhz": [float(v) for v in o.centers],
            "widths_mhz": [float(v) for v in o.widths],
            "contrasts": [float(v) for v in o.contrasts],
            "d_mhz": o.d_mhz,
            "d_uncertainty_mhz": o.d_uncertainty,
        }
        summary = [f"centers: {', '.join(f'{c:.3f}' for c in o.centers)} MHz",
                   f"axial splitting parameter: {o.d_mhz:.3f} "
                   f"+/- {o.d_uncertainty:.3f} MHz"]
        if o.splitting_mhz is not None:
            extras["splitting_mhz"] = o.splitting_mhz
            extras["splitting_uncertainty_mhz"] = o.splitting_uncertainty
            summary.append(f"half-splitting: {o.splitting_mhz:.3f} "
                           f"+/- {o.splitting_uncertainty:.3f} MHz")
        return o.fit, extras, summary

    if recipe == "dwf-cal":
        pts = dataio.read_points(args.infile)
        cal = spectra.fit_dwf_calibration(pts)
        extras = {"huang_rhys": cal.model.s, "t_debye_k": cal.model.t_debye}
        summary = [f"coupling strength: {cal.model.s:.4f}",
                   f"Debye temperature: {cal.model.t_debye:.2f} K"]
        return cal.fit, extras, summary

    if recipe == "laser-cal":
        pts = dataio.read_points(args.infile)
        t0 = args.t0 if args.t0 is not None else cfg.get_float("thermo", "t0_k")
        t_debye = (args.t_debye if args.t_debye is not None
                   else cfg.get_float("thermo", "t_debye_k"))
        cal = spectra.fit_laser_calibration(pts, t0, t_debye)
        extras = {"huang_rhys": cal.huang_rhys,
                  "slope_k_per_mw": cal.slope_k_per_mw,
                  "t0_k": t0, "t_debye_k": t_debye}
        summary = [f"coupling strength: {cal.huang_rhys:.4f}",
                   f"heating slope: {cal.slope_k_per_mw:.4f} K/mW"]
        return cal.fit, extras, summary

    if recipe == "quad-shift":
        pts = dataio.read_points(args.infile)
        q = spectra.fit_quadratic_shift(pts)
        a, b, c = q.fit.params
        extras = {"a_mhz": float(a), "b_mhz_per_k": float(b),
                  "c_mhz_per_k2": float(c)}
        summary = [f"constant term: {a:.3f} MHz",
                   f"linear term: {b:.5f} MHz/K",
                   f"quadratic term: {c:.4e} MHz/K^2"]
        return q.fit, extras, summary

    if recipe == "gamma":
        pts = dataio.read_points(args.infile)
        em = cfg.expansion_model()
        f = spectra.fit_expansion_shift(pts, em)
        extras = {"gamma_mhz_per_gpa": f.gamma_mhz_per_gpa,
                  "gamma_uncertainty": f.uncertainty}
        summary = [f"pressure shift coefficient: {f.gamma_mhz_per_gpa:.3f} "
                   f"+/- {f.uncertainty:.3f} MHz/GPa"]
        return f.fit, extras, summary

    if recipe == "strain-energy":
        pts = dataio.read_points(args.infile)
        d_perp = (args.d_perp if args.d_perp is not None
                  else cfg.get_float("spin", "d_perp_es_mhz"))
        a_par = (args.a_par if args.a_par is not None
                 else cfg.get_float("spin", "a_par_es_mhz"))
        f = spectra.fit_strain_energy(pts, d_perp, a_par)
        extras = {"strain_energy_mev": f.strain_energy_mev,
                  "strain_energy_uncertainty": f.uncertainty,
                  "d_perp_mhz": d_perp, "a_par_mhz": a_par}
        summary = [f"strain energy: {f.strain_energy_mev:.4f} "
                   f"+/- {f.uncertainty:.4f} meV"]
        return f.fit, extras, summary

    raise InvalidParameterError(f"unknown fit recipe {args.recipe!r}")


def cmd_fit(args, cfg, out_dir, command_line):
    stem = f"fit_{args.recipe.replace('-', '_')}"
    report_path = out_dir / f"{stem}.json"
    try:
        fit, extras, summary = _run_fit_recipe(args, cfg)
    except _NUMERICAL_ERRORS as exc:
        # The fit blew up before producing a result; leave a diagnostic
        # report so the failure is inspectable offline.
        payload = {"recipe": args.recipe, "input": str(args.infile),
                   "converged": False, "error": str(exc)}
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _emit_manifest(out_dir, stem, command_line, cfg, [args.infile])
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    dataio.write_fit_report(report_path, fit, recipe=args.recipe,
                            input=str(args.infile), **extras)
    _emit_manifest(out_dir, stem, command_line, cfg, [args.infile])
    print(f"recipe: {args.recipe}")
    print(f"input: {args.infile}")
    print(f"converged: {fit.converged} ({fit.n_iterations} iterations, "
          f"residual norm {fit.residual_norm:.6g})")
    for line in summary:
        print(line)
    for warning in fit.warnings:
        print(f"warning: {warning}")
    print(f"report: {report_path}")
    if not fit.converged:
        print("error: fit did not converge", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_sensitivity(args, cfg, out_dir, command_line):
    phi_value = args.phi if args.phi is not None else cfg.get_float("sensitivity", "phi_k")
    dwf_value = args.dwf if args.dwf is not None else cfg.get_float("sensitivity", "dwf")
    mu = (args.collection_eff if args.collection_eff is not None
          else cfg.get_float("sensitivity", "collection_eff"))
    gamma = (args.emission_rate if args.emission_rate is not None
             else cfg.get_float("sensitivity", "emission_rate_hz"))
    r_list = args.r if args.r is not None else [cfg.get_float("sensitivity",
                                                              "background_ratio")]
    if phi_value <= 0 or not 0 < dwf_value < 1 or mu <= 0 or gamma <= 0:
        raise InvalidParameterError("sensitivity parameters must be positive "
                                    "with line fraction in (0, 1)")
    if any(r < 0 for r in r_list):
        raise InvalidParameterError("background ratio must be non-negative")
    rows = []
    if args.c_zpl is not None:
        for c_zpl in args.c_zpl:
            for r in r_list:
                rows.append({"n_centers": None, "background_ratio": r,
                             "c_zpl_hz": c_zpl,
                             "noise_floor_k_rthz":
                             thermo.noise_floor_from_values(c_zpl, r, phi_value)})
    else:
        for n in args.n:
            if n <= 0:
                raise InvalidParameterError("emitter count must be positive")
            c_zpl = n * mu * gamma * dwf_value
            for r in r_list:
                rows.append({"n_centers": n, "background_ratio": r,
                             "c_zpl_hz": c_zpl,
                             "noise_floor_k_rthz":
                             thermo.noise_floor_from_values(c_zpl, r, phi_value)})
    columns = ["n_centers", "background_ratio", "c_zpl_hz", "noise_floor_k_rthz"]
    if args.format == "json":
        table_path = out_dir / "sensitivity.json"
        with open(table_path, "w", encoding="utf-8") as fh:
            json.dump({"phi_k": phi_value, "rows": rows}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        table_path = out_dir / "sensitivity.csv"
        lines = [f"# temperature noise floor table, phi={phi_value!r} K",
                 ",".join(columns)]
        for row in rows:
            cells = ["" if row["n_centers"] is None else repr(float(row["n_centers"])),
                     repr(float(row["background_ratio"])),
                     repr(float(row["c_zpl_hz"])),
                     repr(float(row["noise_floor_k_rthz"]))]
            lines.append(",".join(cells))
        with open(table_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    _emit_manifest(out_dir, "sensitivity", command_line, cfg)
    print("  ".join(f"{c:>18}" for c in columns))
    for row in rows:
        n_str = "-" if row["n_centers"] is None else f"{row['n_centers']:g}"
        print(f"{n_str:>18}  {row['background_ratio']:>18g}  "
              f"{row['c_zpl_hz']:>18.6g}  {row['noise_floor_k_rthz']:>18.4g}")
    print(f"wrote {table_path}")
    return EXIT_OK


def _check(name, value, target, tolerance):
    return {"name": name, "value": float(value), "target": float(target),
            "tolerance": float(tolerance),
            "pass": bool(abs(float(value) - float(target)) <= float(tolerance))}


def _stage_figure_data(key, override, out_dir, dest_name):
    """Copy one figure data file into out_dir; None when unavailable."""
    if override is not None:
        src = pathlib.Path(override)
        if not src.is_file():
            return None
        dest = out_dir / dest_name
        shutil.copyfile(src, dest)
        return dest
    ref = resources.files("nvtherm").joinpath(f"data/paper/{FIGURE_DATA[key]}")
    if not ref.is_file():
        return None
    dest = out_dir / dest_name
    with resources.as_file(ref) as path:
        shutil.copyfile(path, dest)
    return dest


def _write_skip(out_dir, figure, reason, command_line, cfg):
    payload = {"figure": figure, "status": "skipped", "reason": reason}
    path = out_dir / f"reproduce_{figure}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _emit_manifest(out_dir, f"reproduce_{figure}", command_line, cfg)
    print(f"figure {figure} skipped: {reason}")
    return EXIT_OK


def cmd_reproduce(args, cfg, out_dir, command_line):
    figure = args.figure
    stem = f"reproduce_{figure}"
    if figure == "3b":
        step_path = _stage_figure_data("3b", args.data, out_dir,
                                       f"{stem}_step_data.csv")
        drift_path = _stage_figure_data("3b2", args.data2, out_dir,
                                        f"{stem}_drift_data.csv")
        if step_path is None or drift_path is None:
            return _write_skip(out_dir, figure, "reference data not found",
                               command_line, cfg)
        result = _reproduce_3b(step_path, drift_path, out_dir, stem)
        inputs = [step_path, drift_path]
    else:
        data_path = _stage_figure_data(figure, args.data, out_dir,
                                       f"{stem}_data.csv")
        if data_path is None:
            return _write_skip(out_dir, figure, "reference data not found",
                               command_line, cfg)
        handler = {"2b": _reproduce_2b, "2c": _reproduce_2c, "3a": _reproduce_3a,
                   "4b": _reproduce_4b, "4c": _reproduce_4c}[figure]
        result = handler(cfg, data_path, out_dir, stem)
        inputs = [data_path]
    result["figure"] = figure
    result["status"] = "ok"
    result["all_passed"] = all(c["pass"] for c in result["checks"])
    report_path = out_dir / f"{stem}.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    _emit_manifest(out_dir, stem, command_line, cfg, inputs)
    for c in result["checks"]:
        verdict = "pass" if c["pass"] else "FAIL"
        print(f"{c['name']}: {c['value']:.6g} vs {c['target']:g} "
              f"+/- {c['tolerance']:g} -> {verdict}")
    print(f"report: {report_path}")
    return EXIT_OK


def _reproduce_2b(cfg, data_path, out_dir, stem):
    pts = dataio.read_points(data_path)
    cal = spectra.fit_dwf_calibration(pts)
    t = np.linspace(min(295.0, pts[:, 0].min()) - 5.0, pts[:, 0].max() + 20.0, 200)
    curve = np.array([thermo.dwf(tk, cal.model) for tk in t])
    dataio.write_points(out_dir / f"{stem}_curve.csv",
                        np.column_stack([t, curve]),
                        ["temperature_K", "dwf_fit"],
                        ["fitted line-fraction curve"])
    dataio.write_points(out_dir / f"{stem}_line.csv",
                        np.column_stack([t ** 2, np.log(curve)]),
                        ["t_squared_K2", "log_dwf"],
                        ["straight-line form: log of the fitted curve vs T^2"])
    return {
        "report": dataio.fit_report_dict(cal.fit, huang_rhys=cal.model.s,
                                         t_debye_k=cal.model.t_debye),
        "checks": [_check("huang_rhys", cal.model.s, 4.57, 0.07),
                   _check("t_debye_k", cal.model.t_debye, 1614.0, 23.0)],
    }


def _reproduce_2c(cfg, data_path, out_dir, stem):
    pts = dataio.read_points(data_path)
    t0 = cfg.get_float("thermo", "t0_k")
    t_debye = cfg.get_float("thermo", "t_debye_k")
    cal = spectra.fit_laser_calibration(pts, t0, t_debye)
    model = thermo.DwfModel(cal.huang_rhys, t_debye)
    p = np.linspace(pts[:, 0].min(), pts[:, 0].max() + 20.0, 200)
    curve = np.array([thermo.dwf(t0 + cal.slope_k_per_mw * pk, model) for pk in p])
    dataio.write_points(out_dir / f"{stem}_curve.csv",
                        np.column_stack([p, curve]),
                        ["power_mW", "dwf_fit"],
                        ["fitted line-fraction vs laser power"])
    return {
        "report": dataio.fit_report_dict(cal.fit, huang_rhys=cal.huang_rhys,
                                         slope_k_per_mw=cal.slope_k_per_mw),
        "checks": [_check("huang_rhys", cal.huang_rhys, 4.79, 0.06),
                   _check("slope_k_per_mw", cal.slope_k_per_mw, 0.51, 0.03)],
    }


def _reproduce_3a(cfg, data_path, out_dir, stem):
    pts = dataio.read_points(data_path)
    q = spectra.fit_quadratic_shift(pts)
    a, b, c = q.fit.params
    t = np.linspace(pts[:, 0].min() - 5.0, pts[:, 0].max() + 5.0, 200)
    curve = a + b * t + c * t * t
    dataio.write_points(out_dir / f"{stem}_curve.csv",
                        np.column_stack([t, curve]),
                        ["temperature_K", "frequency_MHz"],
                        ["fitted quadratic resonance shift"])
    model_at_data = a + b * pts[:, 0] + c * pts[:, 0] ** 2
    residuals = pts[:, 1] - model_at_data
    dof = pts.shape[0] - 3
    sigma = float(np.sqrt(np.sum(residuals ** 2) / dof))
    normalized = residuals / sigma
    counts, edges = np.histogram(normalized, bins=np.linspace(-3.0, 3.0, 13))
    centers = 0.5 * (edges[:-1] + edges[1:])
    dataio.write_points(out_dir / f"{stem}_residuals.csv",
                        np.column_stack([centers, counts.astype(float)]),
                        ["normalized_residual", "count"],
                        ["histogram of fit residuals over their fitted sigma"])
    norm_std = float(np.sqrt(np.sum(normalized ** 2) / dof))
    return {
        "report": dataio.fit_report_dict(q.fit, a_mhz=float(a), b_mhz_per_k=float(b),
                                         c_mhz_per_k2=float(c),
                                         residual_sigma_mhz=sigma,
                                         normalized_residual_std=norm_std),
        "checks": [_check("a_mhz", a, 2870.0, 3.0),
                   _check("b_mhz_per_k", b, 0.06, 0.01),
                   _check("c_mhz_per_k2", c, -2.3e-4, 2.0e-5),
                   _check("normalized_residual_std", norm_std, 1.0, 0.25)],
    }


def _reproduce_3b(step_path, drift_path, out_dir, stem):
    ts_step = dataio.read_timeseries(step_path)
    det = noise.detect_step(ts_step)
    checks = []
    if det.found:
        left_mean = float(np.mean(ts_step.values[:det.index]))
        right_mean = float(np.mean(ts_step.values[det.index:]))
        model = np.where(np.arange(ts_step.times.size) < det.index,
                         left_mean, right_mean)
        dataio.write_points(out_dir / f"{stem}_step_curve.csv",
                            np.column_stack([ts_step.times, model]),
                            ["time_s", "value"],
                            ["two-plateau step model"])
        checks.append(_check("step_size_k", det.size, 17.0, 2.0))
        step_report = {"found": True, "index": det.index, "time_s": det.time_s,
                       "size_k": det.size, "uncertainty_k": det.uncertainty}
    else:
        checks.append({"name": "step_size_k", "value": float("nan"),
                       "target": 17.0, "tolerance": 2.0, "pass": False})
        step_report = {"found": False}
    ts_drift = dataio.read_timeseries(drift_path)
    trend = noise.detrend_cubic(ts_drift)
    fitted = np.polynomial.polynomial.polyval(ts_drift.times, trend.coefficients)
    dataio.write_points(out_dir / f"{stem}_drift_curve.csv",
                        np.column_stack([ts_drift.times, fitted]),
                        ["time_s", "value"],
                        ["cubic trend of the drifting record"])
    checks.append(_check("drift_residual_std_k", trend.residual_std, 0.3, 0.15))
    return {
        "report": {"step": step_report,
                   "drift": {"coefficients": [float(v) for v in trend.coefficients],
                             "residual_std_k": trend.residual_std}},
        "checks": checks,
    }


def _reproduce_4b(cfg, data_path, out_dir, stem):
    pts = dataio.read_points(data_path)
    em = cfg.expansion_model()
    f = spectra.fit_expansion_shift(pts, em)
    t = np.linspace(pts[:, 0].min(), pts[:, 0].max(), 150)
    curve = np.array([f.gamma_mhz_per_gpa * thermo.thermal_pressure(tk, em)
                      for tk in t])
    dataio.write_points(out_dir / f"{stem}_curve.csv",
                        np.column_stack([t, curve]),
                        ["temperature_K", "shift_MHz"],
                        ["fitted thermal-expansion shift"])
    return {
        "report": dataio.fit_report_dict(f.fit, gamma_mhz_per_gpa=f.gamma_mhz_per_gpa,
                                         gamma_uncertainty=f.uncertainty),
        "checks": [_check("gamma_mhz_per_gpa", f.gamma_mhz_per_gpa, 11.0, 1.0)],
    }


def _reproduce_4c(cfg, data_path, out_dir, stem):
    pts = dataio.read_points(data_path)
    d_perp = cfg.get_float("spin", "d_perp_es_mhz")
    a_par = cfg.get_float("spin", "a_par_es_mhz")
    f = spectra.fit_strain_energy(pts, d_perp, a_par)
    model = models.strain_energy_model(d_perp, a_par)
    t = np.linspace(pts[:, 0].min(), pts[:, 0].max(), 150)
    curve = model.value(t, np.array([f.strain_energy_mev]))
    dataio.write_points(out_dir / f"{stem}_curve.csv",
                        np.column_stack([t, curve]),
                        ["temperature_K", "epsilon_MHz"],
                        ["fitted averaged-splitting curve"])
    return {
        "report": dataio.fit_report_dict(f.fit,
                                         strain_energy_mev=f.strain_energy_mev,
                                         strain_energy_uncertainty=f.uncertainty),
        "checks": [_check("strain_energy_mev", f.strain_energy_mev, 4.7, 0.3)],
    }


if __name__ == "__main__":
    sys.exit(main())
