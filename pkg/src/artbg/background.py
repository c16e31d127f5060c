"""Artificial backgrounds: computed farfields F~, F_art = F - F~ and F~_sharp."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import InvalidArgumentError, UnsupportedShapeError
from .forward import FarfieldMatrix, ls_farfield, make_volume_grid, obstacle_disk_series
from .geometry import Disk, GeneralRhoBackground, ObstacleBackground, ZIMBackground


@dataclass(frozen=True, eq=False)
class BackgroundFarfield:
    farfield: FarfieldMatrix
    spec: object

    @property
    def k(self):
        return self.farfield.k

    @property
    def values(self):
        return self.farfield.values


def zim_farfield(domain, k, incident, observation=None, h=0.05, box=None):
    """F~ for rho = 0 in ``domain`` (volume solver with contrast -1)."""
    return rho_farfield(ZIMBackground(domain), k, incident, observation, h, box)


def rho_farfield(spec, k, incident, observation=None, h=0.05, box=None):
    """F~ for a penetrable background (ZIM or general piecewise-constant rho)."""
    observation = incident if observation is None else observation
    domain = spec.domain
    if box is None and domain is not None:
        box = domain.bounding_box()
    if box is None:
        values = np.zeros((observation.count, incident.count), dtype=complex)
        F = FarfieldMatrix(k, incident, observation, values, source=spec.describe())
        return BackgroundFarfield(F, spec)
    grid = make_volume_grid(spec.rho, box, h)
    F = ls_farfield(grid, k, incident, observation, source=spec.describe())
    return BackgroundFarfield(F, spec)


def obstacle_farfield(domain, bc, k, incident, observation=None):
    """F~ for a Dirichlet or Robin disk, by separation of variables."""
    if not isinstance(domain, Disk):
        raise UnsupportedShapeError("obstacle backgrounds are only implemented for disks")
    observation = incident if observation is None else observation
    spec = ObstacleBackground(domain, bc)
    series = obstacle_disk_series(bc, domain.radius, k, domain.center)
    F = series.farfield(incident, observation, source=spec.describe())
    return BackgroundFarfield(F, spec)


def background_farfield(spec, k, incident, observation=None, h=0.05):
    if isinstance(spec, ObstacleBackground):
        return obstacle_farfield(spec.domain, spec.bc, k, incident, observation)
    if isinstance(spec, (ZIMBackground, GeneralRhoBackground)):
        return rho_farfield(spec, k, incident, observation, h)
    raise InvalidArgumentError(f"unknown background {spec!r}")


def artificial_farfield(F, background):
    """F_art = F - F~ entrywise, after checking k, grids and convention agree."""
    Ft = background.farfield if isinstance(background, BackgroundFarfield) else background
    F.check_compatible(Ft)
    return F.replace(values=F.values - Ft.values, source="artificial")


@dataclass(frozen=True, eq=False)
class SharpOperator:
    """Hermitian PSD matrix |F~ + F~*| + |F~ - F~*| acting on L^2(S^1) samples."""

    matrix: np.ndarray = field(repr=False)
    source: str = ""

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix, 2))


def sharp_operator(background):
    Ft = background.farfield if isinstance(background, BackgroundFarfield) else background
    if Ft.incident != Ft.observation:
        raise InvalidArgumentError("F~_sharp needs a square farfield operator on one grid")
    A = Ft.operator()
    real_part = linalg.operator_abs(A + A.conj().T)
    # F~ - F~* is skew-Hermitian; multiplying by i leaves |.| unchanged
    imag_part = linalg.operator_abs(1j * (A.conj().T - A))
    T = real_part + imag_part
    return SharpOperator(0.5 * (T + T.conj().T), Ft.source)

