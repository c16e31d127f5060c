"""Stage orchestration: simulate -> background -> indicator -> spectrum -> recover.

Every stage reads its inputs from, and writes its outputs to, one run
directory, so stages can be rerun individually. ``run_pipeline`` runs them
all and writes ``manifest.json`` last, with the effective parameters and a
SHA-256 checksum of every artifact.
"""

from __future__ import annotations

import hashlib
import json
import logging
import warnings
from pathlib import Path

import numpy as np

from . import __version__, io
from .background import background_farfield
from .exceptions import InvalidArgumentError
from .forward import farfield_matrix
from .geometry import Disk, DirectionGrid, GeneralRhoBackground, MediumSpec, ObstacleBackground, make_sampling_grid
from .indicator import AlphaRule, detect_peaks, indicator_curve
from .spectra import (
    Spectrum,
    cavity_spectrum,
    disk_buckling_reference,
    disk_cavity_wavenumbers,
    extrapolated_buckling_spectrum,
    recover_index,
)

logger = logging.getLogger(__name__)

STAGES = ("simulate", "background", "indicator", "spectrum", "recover")


def inject_noise(M, delta, seed):
    """M + E with complex Gaussian E scaled to ||E||_F = delta ||M||_F."""
    if delta < 0:
        raise InvalidArgumentError("noise level must be non-negative")
    if delta == 0:
        return M
    rng = np.random.default_rng(seed)
    E = rng.standard_normal(M.shape) + 1j * rng.standard_normal(M.shape)
    E *= delta * np.linalg.norm(M.values) / np.linalg.norm(E)
    return M.replace(values=M.values + E)


def _data_path(out, i):
    return Path(out) / "farfield" / f"data_{i:04d}.txt"


def _background_path(out, i):
    return Path(out) / "farfield" / f"background_{i:04d}.txt"


def _map(fn, items, jobs):
    if jobs == 1:
        return [fn(x) for x in items]
    from joblib import Parallel, delayed

    return Parallel(n_jobs=jobs)(delayed(fn)(x) for x in items)


def stage_simulate(cfg, out, jobs=1):
    grid = DirectionGrid(cfg.directions)
    (Path(out) / "farfield").mkdir(parents=True, exist_ok=True)

    def one(item):
        i, k = item
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            F = farfield_matrix(cfg.medium, k, grid, grid, cfg.h)
        # per-k seed keeps the noise independent of scheduling
        F = inject_noise(F, cfg.delta, [cfg.seed, i])
        io.write_farfield(_data_path(out, i), F, {"noise_delta": repr(cfg.delta), "seed": cfg.seed})
        return [str(w.message) for w in caught]

    msgs = _map(one, list(enumerate(cfg.ks)), jobs)
    return sorted({m for batch in msgs for m in batch})


def stage_background(cfg, out, jobs=1):
    grid = DirectionGrid(cfg.directions)
    (Path(out) / "farfield").mkdir(parents=True, exist_ok=True)

    def one(item):
        i, k = item
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            Ft = background_farfield(cfg.background, k, grid, grid, cfg.h)
        io.write_farfield(_background_path(out, i), Ft.farfield, {"background": cfg.background.describe()})
        return [str(w.message) for w in caught]

    msgs = _map(one, list(enumerate(cfg.ks)), jobs)
    return sorted({m for batch in msgs for m in batch})


def stage_indicator(cfg, out, jobs=1, alpha0=None):
    ks = cfg.ks
    index = {float(k): i for i, k in enumerate(ks)}
    sampling = make_sampling_grid(_sampling_domain(cfg), cfg.sampling_step)
    curve = indicator_curve(
        ks,
        lambda k: io.read_farfield(_data_path(out, index[float(k)]), k=k),
        lambda k: io.read_farfield(_background_path(out, index[float(k)]), k=k),
        sampling,
        AlphaRule(cfg.alpha0 if alpha0 is None else alpha0),
        sign=cfg.sign,
        jobs=jobs,
    )
    io.write_curve(Path(out) / "indicator.csv", curve)
    peaks = detect_peaks(curve, cfg.prominence)
    io.write_peaks(Path(out) / "peaks.txt", peaks)
    return [f"indicator failed at k={k}: {e}" for k, e in curve.metadata.get("failures", {}).items()]


def _sampling_domain(cfg):
    domain = cfg.background.domain
    if domain is None:
        domain = cfg.medium.support()
    return domain


def reference_spectrum(cfg):
    """n = 1 spectrum of the eigenproblem matching the background."""
    bg = cfg.background
    count = cfg.reference_count
    if isinstance(bg, GeneralRhoBackground):
        raise InvalidArgumentError("no reference eigenproblem is implemented for general rho backgrounds")
    domain = bg.domain
    one = MediumSpec.constant(domain, 1.0)
    analytic = cfg.reference_method in ("auto", "analytic") and isinstance(domain, Disk)
    if cfg.reference_method == "analytic" and not analytic:
        raise InvalidArgumentError("analytic references exist only for disks")
    if isinstance(bg, ObstacleBackground):
        gamma = None if bg.bc.kind == "dirichlet" else bg.bc.gamma
        if analytic:
            ks = disk_cavity_wavenumbers(1.0, domain.radius, gamma, count)
            return Spectrum(f"cavity({bg.bc.describe()})", ks**2, domain, "n=1", None)
        return cavity_spectrum(domain, one, bg.bc, min(cfg.reference_hs), count)
    if analytic:
        return disk_buckling_reference(count, domain.radius)
    return extrapolated_buckling_spectrum(domain, one, cfg.reference_hs, count)


def stage_spectrum(cfg, out, jobs=1):
    spec = reference_spectrum(cfg)
    io.write_spectrum(Path(out) / "spectrum.csv", spec)
    notes = []
    if isinstance(cfg.background, ObstacleBackground):
        # the identification needs k^2 away from the n = 1 cavity spectrum
        hits = [k for k in spec.wavenumbers if cfg.k_min <= k <= cfg.k_max]
        for k in hits:
            msg = f"k={k:.6g} is an n=1 cavity eigenvalue inside the scanned range"
            logger.warning(msg)
            notes.append(msg)
    return notes


def stage_recover(cfg, out, jobs=1):
    values = io.read_spectrum_values(Path(out) / "spectrum.csv")
    reference = Spectrum("reference", values)
    peaks = io.read_peaks(Path(out) / "peaks.txt")
    report = recover_index(peaks, reference, cfg.first_index)
    io.write_report(Path(out) / "report.txt", report)
    return []


_RUNNERS = {
    "simulate": stage_simulate,
    "background": stage_background,
    "indicator": stage_indicator,
    "spectrum": stage_spectrum,
    "recover": stage_recover,
}


def run_stage(name, cfg, out, jobs=1, alpha0=None):
    Path(out).mkdir(parents=True, exist_ok=True)
    if name == "indicator":
        return stage_indicator(cfg, out, jobs, alpha0)
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise InvalidArgumentError(f"unknown stage {name!r}") from None
    return runner(cfg, out, jobs)


def checksums(out):
    out = Path(out)
    sums = {}
    for p in sorted(out.rglob("*")):
        if p.is_file() and p.name != "manifest.json":
            sums[p.relative_to(out).as_posix()] = hashlib.sha256(p.read_bytes()).hexdigest()
    return sums


def run_pipeline(cfg, out=None, jobs=1, alpha0=None):
    """Run every stage; returns (run directory, success flag)."""
    out = Path(out or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    status, notes, ok = {}, [], True
    for name in STAGES:
        if not ok:
            status[name] = "skipped"
            continue
        try:
            notes += run_stage(name, cfg, out, jobs, alpha0)
            status[name] = "ok"
        except Exception as exc:
            logger.exception("stage %s failed", name)
            status[name] = f"error: {type(exc).__name__}: {exc}"
            ok = False
    params = cfg.effective()
    params["output_dir"] = str(out)
    if alpha0 is not None:
        params["alpha0"] = alpha0
    manifest = {
        "artbg_version": __version__,
        "parameters": params,
        "stages": status,
        "notes": notes,
        "checksums": checksums(out),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return out, ok
