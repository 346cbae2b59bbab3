"""Configuration loading and validation.

Configuration is a flat INI-style text file with sections; every key
carries its unit in its name so files stay diff-friendly and unambiguous.
Unknown sections or keys are rejected rather than ignored, and every
referenced file must exist and parse at load time.
"""

import configparser
import hashlib
from dataclasses import dataclass
from importlib import resources

from . import spin, thermo
from .errors import ConfigError

# Every recognized key with its default value (as written in a file).
DEFAULTS = {
    "spin": {
        "d_gs_mhz": "2870.0",
        "e_gs_mhz": "10.0",
        "a_par_gs_mhz": "-2.14",
        "a_perp_gs_mhz": "-2.70",
        "d_es_mhz": "1420.0",
        "e_es_mhz": "0.0",
        "a_par_es_mhz": "40.0",
        "a_perp_es_mhz": "0.0",
        "d_perp_es_mhz": "775.0",
    },
    "thermo": {
        "huang_rhys": "4.57",
        "t_debye_k": "1614.0",
        "t0_k": "294.0",
        "b_k_per_mw": "0.51",
        "strain_energy_mev": "4.7",
        "gamma_mhz_per_gpa": "11.0",
        "bulk_modulus_gpa": "442.0",
        "expansion_table": "builtin",
    },
    "sensitivity": {
        "n_centers": "1.0",
        "collection_eff": "0.021",
        "emission_rate_hz": "4.0e7",
        "background_ratio": "0.0",
        "dwf": "0.005",
        "phi_k": "154.0",
    },
    "windows": {
        "zpl_window_nm": "630.0, 645.0",
        "emission_band_nm": "600.0, 800.0",
    },
    "rng": {
        "seed": "12345",
    },
}


@dataclass(frozen=True)
class Config:
    """Resolved configuration: defaults overlaid with one optional file.

    ``sections`` maps section name to {key: raw string value}; the typed
    accessors below convert on demand.  Instances are validated on
    construction through load_config, so accessors do not re-check.
    """

    sections: dict
    source: str

    def raw(self, section, key):
        return self.sections[section][key]

    def get_float(self, section, key):
        try:
            return float(self.sections[section][key])
        except ValueError:
            raise ConfigError(
                f"[{section}] {key} = {self.sections[section][key]!r} is not a number")

    def get_int(self, section, key):
        try:
            return int(self.sections[section][key])
        except ValueError:
            raise ConfigError(
                f"[{section}] {key} = {self.sections[section][key]!r} is not an integer")

    def get_pair(self, section, key):
        parts = [p.strip() for p in self.sections[section][key].split(",")]
        if len(parts) != 2:
            raise ConfigError(
                f"[{section}] {key} must be two comma-separated numbers")
        try:
            lo, hi = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(
                f"[{section}] {key} = {self.sections[section][key]!r} is not a number pair")
        if not lo < hi:
            raise ConfigError(f"[{section}] {key}: {lo} must be below {hi}")
        return lo, hi

    def spin_params(self, level):
        if level not in ("gs", "es"):
            raise ConfigError(f"unknown spin level {level!r}; expected 'gs' or 'es'")
        return spin.SpinParams(
            d=self.get_float("spin", f"d_{level}_mhz"),
            e=self.get_float("spin", f"e_{level}_mhz"),
            a_par=self.get_float("spin", f"a_par_{level}_mhz"),
            a_perp=self.get_float("spin", f"a_perp_{level}_mhz"),
        )

    def dwf_model(self):
        return thermo.DwfModel(
            self.get_float("thermo", "huang_rhys"),
            self.get_float("thermo", "t_debye_k"),
        )

    def expansion_model(self):
        b = self.get_float("thermo", "bulk_modulus_gpa")
        table = self.sections["thermo"]["expansion_table"]
        if table == "builtin":
            ref = resources.files("nvtherm").joinpath("data/diamond_expansion.csv")
            with resources.as_file(ref) as path:
                return thermo.ExpansionModel.from_csv(path, b)
        return thermo.ExpansionModel.from_csv(table, b)

    def zpl_window(self):
        return self.get_pair("windows", "zpl_window_nm")

    def emission_band(self):
        return self.get_pair("windows", "emission_band_nm")

    def seed(self):
        return self.get_int("rng", "seed")

    def digest(self):
        """Stable hash of the resolved configuration (hex sha256)."""
        lines = []
        for section in sorted(self.sections):
            for key in sorted(self.sections[section]):
                lines.append(f"{section}.{key}={self.sections[section][key]}")
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()


def default_config():
    """The built-in configuration with no file applied."""
    return load_config(None)


def load_config(path=None):
    """Load configuration, overlaying ``path`` (if given) on the defaults.

    Raises ConfigError for unreadable files, unknown sections or keys,
    malformed values, or referenced files that do not exist or parse.
    """
    sections = {name: dict(keys) for name, keys in DEFAULTS.items()}
    source = "builtin defaults"
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}")
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config file {path}: {exc}")
        for name in parser.sections():
            if name not in sections:
                raise ConfigError(f"unknown config section [{name}]")
            for key, value in parser.items(name):
                if key not in sections[name]:
                    raise ConfigError(f"unknown config key [{name}] {key}")
                sections[name][key] = value.strip()
        source = str(path)
    cfg = Config(sections=sections, source=source)
    _validate(cfg)
    return cfg


def _validate(cfg):
    # Every numeric key must parse; a handful carry sign/range constraints.
    for section, keys in cfg.sections.items():
        for key in keys:
            if (section, key) == ("thermo", "expansion_table"):
                continue
            if section == "windows":
                cfg.get_pair(section, key)
            elif (section, key) == ("rng", "seed"):
                cfg.get_int(section, key)
            else:
                cfg.get_float(section, key)
    positive = [
        ("spin", "d_gs_mhz"), ("spin", "d_es_mhz"), ("spin", "d_perp_es_mhz"),
        ("thermo", "huang_rhys"), ("thermo", "t_debye_k"), ("thermo", "t0_k"),
        ("thermo", "strain_energy_mev"), ("thermo", "bulk_modulus_gpa"),
        ("sensitivity", "n_centers"), ("sensitivity", "collection_eff"),
        ("sensitivity", "emission_rate_hz"), ("sensitivity", "phi_k"),
    ]
    for section, key in positive:
        if not cfg.get_float(section, key) > 0.0:
            raise ConfigError(f"[{section}] {key} must be positive")
    if cfg.get_float("spin", "e_gs_mhz") < 0.0:
        raise ConfigError("[spin] e_gs_mhz must be non-negative")
    if cfg.get_float("sensitivity", "background_ratio") < 0.0:
        raise ConfigError("[sensitivity] background_ratio must be non-negative")
    dwf = cfg.get_float("sensitivity", "dwf")
    if not 0.0 < dwf < 1.0:
        raise ConfigError("[sensitivity] dwf must lie in (0, 1)")
    if cfg.get_float("sensitivity", "collection_eff") > 1.0:
        raise ConfigError("[sensitivity] collection_eff must not exceed 1")
    # The expansion table must exist and parse now, not at first use.
    try:
        cfg.expansion_model()
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"expansion table failed to load: {exc}")
