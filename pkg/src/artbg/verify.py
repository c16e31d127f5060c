"""Fast oracle and property checks, each reporting PASS or FAIL.

These run in seconds at coarse resolution; the full-resolution versions
live in the test suite.
"""

from __future__ import annotations

import numpy as np
from scipy import special as sp

from .forward import farfield_matrix, mie_disk_farfield, scattering_matrix
from .geometry import DirectionGrid, Disk, Kite, MediumSpec, make_direction_grid
from .special import bessel_j_zero, bessel_y
from .spectra import PlateLattice, buckling_spectrum, cavity_spectrum, disk_buckling_reference
from .geometry import Dirichlet


def _bessel_zeros():
    ours = np.array([bessel_j_zero(m, s) for m in range(3) for s in range(1, 4)])
    ref = np.concatenate([sp.jn_zeros(m, 3) for m in range(3)])
    err = np.max(np.abs(ours - ref))
    return err < 1e-10, f"max |j_ms - reference| = {err:.2e}"


def _wronskian():
    x = np.linspace(0.5, 20, 40)
    m = 3
    w = sp.jv(m + 1, x) * bessel_y(m, x) - sp.jv(m, x) * bessel_y(m + 1, x)
    err = np.max(np.abs(w - 2 / (np.pi * x)))
    return err < 1e-12, f"Wronskian residual {err:.2e}"


def _mie_unitary():
    grid = DirectionGrid(32)
    S = scattering_matrix(mie_disk_farfield(2.0, 1.0, 3.0, grid))
    err = np.max(np.abs(S.conj().T @ S - np.eye(grid.count)))
    return err < 1e-10, f"|S*S - I|_max = {err:.2e}"


def _ls_vs_mie():
    grid = DirectionGrid(16)
    F = farfield_matrix(MediumSpec.constant(Disk((0, 0), 1.0), 2.0), 2.0, grid, grid, h=0.1)
    ref = mie_disk_farfield(2.0, 1.0, 2.0, grid)
    err = np.max(np.abs(F.values - ref.values)) / np.max(np.abs(ref.values))
    return err < 2e-2, f"relative sup error {err:.2e} at h=0.1, k=2"


def _zero_contrast():
    grid = DirectionGrid(16)
    F = farfield_matrix(MediumSpec.constant(Disk((0, 0), 1.0), 1.0), 2.0, grid, grid, h=0.1)
    err = np.max(np.abs(F.values)) if F.values.size else 0.0
    return err <= 1e-12, f"|F|_max = {err:.2e}"


def _reciprocity():
    grid = make_direction_grid(16)
    F = farfield_matrix(MediumSpec.constant(Kite.inscribed(), 2.0), 3.0, grid, grid, h=0.1)
    U = F.values
    N = grid.count
    flip = (np.arange(N) + N // 2) % N  # index of -theta
    err = np.max(np.abs(U - U[np.ix_(flip, flip)].T)) / np.max(np.abs(U))
    return err < 1e-3, f"relative reciprocity defect {err:.2e}"


def _buckling_scaling():
    lat = PlateLattice(Disk((0, 0), 1.0), 1 / 12)
    base = buckling_spectrum(lat.domain, MediumSpec.constant(lat.domain, 2.0), lat.h, 4, lat=lat).values
    scaled = buckling_spectrum(lat.domain, MediumSpec.constant(lat.domain, 6.0), lat.h, 4, lat=lat).values
    err = np.max(np.abs(scaled * 3 - base) / base)
    return err < 1e-10, f"scaling defect {err:.2e}"


def _cavity_reference():
    d = Disk((0, 0), 1.0)
    lam = cavity_spectrum(d, MediumSpec.constant(d, 1.0), Dirichlet(), 1 / 24, 1).values[0]
    ref = sp.jn_zeros(0, 1)[0] ** 2
    err = abs(lam - ref) / ref
    return err < 1e-2, f"Dirichlet lambda_0 relative error {err:.2e}"


def _buckling_reference():
    lam = disk_buckling_reference(1)
    ref = sp.jn_zeros(1, 1)[0] ** 2
    err = abs(lam.values[0] - ref)
    return err < 1e-10, f"analytic buckling lambda_0 = {lam.values[0]:.6f}"


CHECKS = {
    "bessel zeros": _bessel_zeros,
    "bessel Wronskian": _wronskian,
    "Mie scattering matrix unitary": _mie_unitary,
    "LS farfield matches Mie": _ls_vs_mie,
    "zero contrast gives F = 0": _zero_contrast,
    "kite reciprocity": _reciprocity,
    "buckling constant scaling": _buckling_scaling,
    "disk Dirichlet cavity": _cavity_reference,
    "disk buckling reference": _buckling_reference,
}


def run_checks(echo=print):
    """Run every check; returns True when all pass."""
    ok = True
    for name, check in CHECKS.items():
        try:
            passed, detail = check()
        except Exception as exc:  # a crash counts as a failure
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        ok &= bool(passed)
        echo(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return ok
