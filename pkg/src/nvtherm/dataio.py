"""File formats: CSV for spectra, time series, and point sets; JSON reports.

CSV files are two columns with an optional block of ``#`` comment lines on
top.  Spectrum files carry ``# exposure_s`` and ``# axis_unit`` metadata
comments; unrecognized comments are preserved on read as plain skips, so
annotated reference files load with the same reader.  Floats are written
with ``repr``, which round-trips ``float64`` exactly while staying short.
"""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import InvalidParameterError
from .noise import TimeSeries
from .spectra import Spectrum


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_table(path):
    """Read a two-column CSV: (metadata dict, column names, (n, 2) array)."""
    meta = {}
    columns = None
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise InvalidParameterError(f"cannot read {path}: {exc}")
    for lineno, line in enumerate(raw, start=1):
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            parts = text[1:].strip().split(None, 1)
            if len(parts) == 2:
                meta[parts[0].rstrip(":")] = parts[1]
            continue
        cells = [c.strip() for c in text.split(",")]
        if len(cells) != 2:
            raise InvalidParameterError(
                f"{path}:{lineno}: expected two comma-separated columns")
        try:
            rows.append((float(cells[0]), float(cells[1])))
        except ValueError:
            if columns is None and not rows:
                columns = cells
                continue
            raise InvalidParameterError(
                f"{path}:{lineno}: non-numeric data row {text!r}")
    if not rows:
        raise InvalidParameterError(f"{path}: no data rows")
    return meta, columns, np.array(rows, dtype=np.float64)


def write_spectrum(path, s):
    """Write a Spectrum as CSV with exposure and axis-unit metadata."""
    lines = [f"# exposure_s {float(s.exposure)!r}", f"# axis_unit {s.axis_unit}",
             "axis,counts"]
    lines.extend(f"{float(a)!r},{float(c)!r}" for a, c in zip(s.axis, s.counts))
    _write_lines(path, lines)


def read_spectrum(path):
    """Read a Spectrum written by write_spectrum (metadata defaults: 1 s, nm)."""
    meta, _, data = _parse_table(path)
    try:
        exposure = float(meta.get("exposure_s", 1.0))
    except ValueError:
        raise InvalidParameterError(
            f"{path}: exposure_s metadata {meta['exposure_s']!r} is not a number")
    return Spectrum(axis=data[:, 0], counts=data[:, 1], exposure=exposure,
                    axis_unit=meta.get("axis_unit", "nm"))


def write_timeseries(path, ts):
    """Write a TimeSeries as time_s,value CSV."""
    lines = ["time_s,value"]
    lines.extend(f"{float(t)!r},{float(v)!r}" for t, v in zip(ts.times, ts.values))
    _write_lines(path, lines)


def read_timeseries(path):
    """Read a TimeSeries written by write_timeseries."""
    _, _, data = _parse_table(path)
    return TimeSeries(times=data[:, 0], values=data[:, 1])


def write_points(path, points, columns, header_lines=()):
    """Write an (n, 2) array as CSV with named columns and comment headers."""
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise InvalidParameterError("points must be an (n, 2) array")
    lines = [f"# {h}" for h in header_lines]
    lines.append(",".join(columns))
    lines.extend(f"{float(a)!r},{float(b)!r}" for a, b in points)
    _write_lines(path, lines)


def read_points(path):
    """Read a two-column CSV into an (n, 2) float array (comments skipped)."""
    _, _, data = _parse_table(path)
    return data


def fit_report_dict(fit, **extras):
    """JSON-ready dict for a FitResult: params, flat row-major covariance."""
    n = len(fit.params)
    report = {
        "model": fit.model_name,
        "n_params": n,
        "params": [float(p) for p in fit.params],
        "covariance": [float(v) for v in np.asarray(fit.covariance).reshape(-1)],
        "residual_norm": float(fit.residual_norm),
        "converged": bool(fit.converged),
        "n_iterations": int(fit.n_iterations),
        "warnings": list(fit.warnings),
    }
    report.update(extras)
    return report


def write_fit_report(path, fit, **extras):
    """Write a FitResult as a JSON report; extras become extra keys."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fit_report_dict(fit, **extras), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path):
    """Load a JSON file (fit reports, manifests)."""
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidParameterError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f"{path}: invalid JSON: {exc}")


def sha256_file(path):
    """Hex sha256 of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Provenance record emitted next to every command output."""

    command: list
    config_hash: str
    inputs: dict = field(default_factory=dict)
    tool_version: str = ""
    timestamp: str = ""

    @classmethod
    def create(cls, command, config_hash, input_paths=(), tool_version=""):
        inputs = {str(p): sha256_file(p) for p in input_paths}
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(command=list(command), config_hash=config_hash,
                   inputs=inputs, tool_version=tool_version, timestamp=stamp)

    def write(self, path):
        payload = {
            "command": self.command,
            "config_hash": self.config_hash,
            "inputs": self.inputs,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
