"""Text formats for farfield matrices, indicator curves, spectra and reports.

Farfield files are self-describing::

    ARTBG-FARFIELD 1
    k = 2.7
    n_incident = 64
    n_observation = 64
    convention = 2d-ikr-sqrt-r
    source = data
    ---
    <re> <im>          one line per entry, row-major over (s, i)

Floats are written with 17 significant digits, which round-trips binary64
exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import FarfieldFormatError
from .forward import FarfieldMatrix
from .geometry import DirectionGrid
from .indicator import IndicatorCurve, PeakList

MAGIC = "ARTBG-FARFIELD"
VERSION = 1
_REQUIRED = ("k", "n_incident", "n_observation", "convention", "source")


def _f(x):
    return format(float(x), ".17g")


def write_farfield(path, M, extra=None):
    path = Path(path)
    header = {
        "k": _f(M.k),
        "n_incident": M.incident.count,
        "n_observation": M.observation.count,
        "convention": M.convention,
        "source": M.source,
        "created_by": f"artbg {__version__}",
    }
    header.update(extra or {})
    lines = [f"{MAGIC} {VERSION}"]
    lines += [f"{key} = {value}" for key, value in header.items()]
    lines.append("---")
    flat = M.values.reshape(-1)
    lines += [f"{_f(z.real)} {_f(z.imag)}" for z in flat]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_farfield(path, k=None):
    """Read a farfield file; if ``k`` is given it must match the header."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise FarfieldFormatError("empty file", 1)
    first = text[0].split()
    if len(first) != 2 or first[0] != MAGIC:
        raise FarfieldFormatError(f"expected '{MAGIC} <version>'", 1)
    if first[1] != str(VERSION):
        raise FarfieldFormatError(f"unsupported format version {first[1]}", 1)
    header = {}
    lineno = 1
    body_start = None
    for lineno, line in enumerate(text[1:], start=2):
        if line.strip() == "---":
            body_start = lineno
            break
        key, sep, value = line.partition("=")
        if not sep:
            raise FarfieldFormatError(f"malformed header line {line!r}", lineno)
        header[key.strip()] = value.strip()
    if body_start is None:
        raise FarfieldFormatError("header is not terminated by '---'", lineno)
    missing = [key for key in _REQUIRED if key not in header]
    if missing:
        raise FarfieldFormatError(f"missing header keys {missing}", body_start)
    try:
        kk = float(header["k"])
        ni = int(header["n_incident"])
        ns = int(header["n_observation"])
    except ValueError as exc:
        raise FarfieldFormatError(f"bad numeric header value: {exc}", body_start) from exc
    body = text[body_start:]
    if len(body) != ni * ns:
        raise FarfieldFormatError(
            f"expected {ni * ns} entries, found {len(body)}", body_start + len(body)
        )
    values = np.empty(ni * ns, dtype=complex)
    for j, line in enumerate(body):
        parts = line.split()
        if len(parts) != 2:
            raise FarfieldFormatError(f"expected 're im', got {line!r}", body_start + j + 1)
        try:
            values[j] = complex(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise FarfieldFormatError(str(exc), body_start + j + 1) from exc
    if k is not None and kk != float(k):
        raise FarfieldFormatError(f"file holds k={kk!r}, requested k={float(k)!r}")
    return FarfieldMatrix(
        kk,
        DirectionGrid(ni),
        DirectionGrid(ns),
        values.reshape(ns, ni),
        convention=header["convention"],
        source=header["source"],
    )


def write_curve(path, curve):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "I", "alpha"])
        for k, v, a in zip(curve.k, curve.values, curve.alpha):
            w.writerow([_f(k), _f(v), _f(a)])
    return Path(path)


def read_curve(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return IndicatorCurve(
        [float(r["k"]) for r in rows],
        [float(r["I"]) for r in rows],
        [float(r["alpha"]) for r in rows],
    )


def write_peaks(path, peaks):
    lines = [f"peak k={_f(k)} prominence={_f(p)} width={_f(w)}" for k, p, w in zip(peaks.k, peaks.prominence, peaks.width)]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return Path(path)


def read_peaks(path):
    ks, ps, ws = [], [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        fields = dict(item.split("=") for item in line.split()[1:])
        ks.append(float(fields["k"]))
        ps.append(float(fields["prominence"]))
        ws.append(float(fields["width"]))
    return PeakList(np.array(ks), np.array(ps), np.array(ws))


def write_spectrum(path, spectrum):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "lambda", "sqrt_lambda"])
        for p, v in enumerate(spectrum.values):
            w.writerow([p, _f(v), _f(np.sqrt(v))])
    return Path(path)


def read_spectrum_values(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return np.array([float(r["lambda"]) for r in csv.DictReader(fh)])


def write_report(path, report, extra=None):
    lines = [
        f"n_hat = {_f(report.n_hat)}",
        f"ess_inf_upper_bound = {_f(report.ess_inf_upper)}",
        f"ess_sup_lower_bound = {_f(report.ess_sup_lower)}",
        f"pairs = {len(report.peaks)}",
    ]
    for j, (k, p, lam, est) in enumerate(report.pairs()):
        lines.append(f"pair.{j} = k={_f(k)} p={int(p)} lambda_ref={_f(lam)} n_est={_f(est)}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return Path(path)


def read_report(path):
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
