"""Synthetic farfield data: Lippmann-Schwinger volume solver and disk series.

The volume solver discretises

    u(x) = u_i(x) + k^2 \\int Phi_k(x, y) m(y) u(y) dy,   Phi_k = (i/4) H_0^(1)(k|x - y|)

by midpoint collocation on a square lattice of step ``h``. The singular
self-cell integral is replaced by the integral over the disk of equal area,
which has a closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import IncompatibleOperandsError, InvalidArgumentError
from .geometry import CONVENTION, DirectionGrid, lattice
from .special import bessel_j, bessel_jp, hankel1, hankel1p

CELLS_PER_WAVELENGTH = 10


class ResolutionWarning(UserWarning):
    """The volume grid has fewer than 10 cells per interior wavelength."""


@dataclass(frozen=True, eq=False)
class FarfieldMatrix:
    """Samples U[s, i] of u_s^inf(theta_s, theta_i) at one wavenumber.

    ``source`` is ``"data"`` for measured/synthetic data and the background
    description for computed background farfields.
    """

    k: float
    incident: DirectionGrid
    observation: DirectionGrid
    values: np.ndarray = field(repr=False)
    convention: str = CONVENTION.tag
    source: str = "data"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.observation.count, self.incident.count):
            raise InvalidArgumentError(
                f"values have shape {v.shape}, grids need "
                f"({self.observation.count}, {self.incident.count})"
            )
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("farfield entries must be finite")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "values", v)

    @property
    def shape(self):
        return self.values.shape

    def operator(self):
        """Matrix of the farfield operator on L^2(S^1) (quadrature weight included)."""
        return self.incident.weight * self.values

    def check_compatible(self, other):
        if self.k != other.k:
            raise IncompatibleOperandsError(f"wavenumbers differ: {self.k} vs {other.k}")
        if self.incident != other.incident or self.observation != other.observation:
            raise IncompatibleOperandsError("direction grids differ")
        if self.convention != other.convention:
            raise IncompatibleOperandsError(
                f"farfield conventions differ: {self.convention} vs {other.convention}"
            )

    def replace(self, values=None, source=None):
        return FarfieldMatrix(
            self.k,
            self.incident,
            self.observation,
            self.values if values is None else values,
            self.convention,
            self.source if source is None else source,
        )


@dataclass(frozen=True, eq=False)
class VolumeGrid:
    """Square cells of side ``h``; ``index`` holds integer lattice coordinates.

    Only the cells listed are unknowns. Grids built by ``make_volume_grid``
    drop cells with zero contrast, which leaves the farfield unchanged.
    """

    h: float
    index: np.ndarray = field(repr=False)
    contrast: np.ndarray = field(repr=False)

    def __post_init__(self):
        idx = np.asarray(self.index, dtype=np.int64).reshape(-1, 2)
        m = np.asarray(self.contrast, dtype=float).reshape(-1)
        if len(idx) != len(m):
            raise InvalidArgumentError("index and contrast lengths differ")
        object.__setattr__(self, "index", idx)
        object.__setattr__(self, "contrast", m)

    @property
    def centers(self):
        return self.h * (self.index + 0.5)

    @property
    def cell_area(self):
        return self.h * self.h

    def __len__(self):
        return len(self.contrast)


def make_volume_grid(coefficient, box, h, active_only=True):
    """Sample ``coefficient(points) - 1`` at the cell centres covering ``box``.

    ``coefficient`` is n (data) or rho (background); a callable on point
    arrays. Cells with zero contrast are dropped unless ``active_only`` is
    False.
    """
    if not h > 0:
        raise InvalidArgumentError("cell size must be positive")
    pts = lattice(box, h).reshape(-1, 2)
    m = coefficient(pts) - 1.0
    idx = np.rint(pts / h - 0.5).astype(np.int64)
    if active_only:
        keep = m != 0
        idx, m = idx[keep], m[keep]
    return VolumeGrid(h, idx, m)


def self_cell_integral(k, h):
    """Integral of (i/4) H_0^(1)(k|y|) over the disk of area h^2 centred at 0."""
    R = h / math.sqrt(math.pi)
    radial = (R / k) * hankel1(1, k * R) + 2j / (math.pi * k * k)
    return 0.5j * math.pi * radial


def check_resolution(k, h, n_max):
    limit = 2 * math.pi / (k * math.sqrt(max(n_max, 1.0))) / CELLS_PER_WAVELENGTH
    if h > limit:
        warnings.warn(
            f"h={h:g} gives fewer than {CELLS_PER_WAVELENGTH} cells per wavelength "
            f"at k={k:g}, n_max={n_max:g} (need h <= {limit:.4g})",
            ResolutionWarning,
            stacklevel=3,
        )
        return False
    return True


def _kernel_table(k, h, span):
    di, dj = np.meshgrid(np.arange(span + 1), np.arange(span + 1), indexing="ij")
    r = h * np.hypot(di, dj)
    r[0, 0] = 1.0
    table = 0.25j * hankel1(0, k * r) * h * h
    table[0, 0] = self_cell_integral(k, h)
    return table


def assemble_ls_matrix(grid, k, n_max=None):
    """Dense collocation matrix I - k^2 V diag(m).

    The lattice structure means V_jl depends only on |i_j - i_l|, |j_j - j_l|,
    so the kernel is tabulated once per offset.
    """
    if not k > 0:
        raise InvalidArgumentError("wavenumber must be positive")
    if n_max is None:
        n_max = 1.0 + max(0.0, float(grid.contrast.max(initial=0.0)))
    check_resolution(k, grid.h, n_max)
    N = len(grid)
    A = np.eye(N, dtype=complex)
    if N == 0:
        return A
    idx = grid.index
    span = int(np.max(idx.max(axis=0) - idx.min(axis=0)))
    table = _kernel_table(k, grid.h, span)
    scaled = -(k * k) * grid.contrast
    # row blocks keep the integer offset arrays small
    block = max(1, 4_000_000 // N)
    for a in range(0, N, block):
        di = np.abs(idx[a : a + block, None, 0] - idx[None, :, 0])
        dj = np.abs(idx[a : a + block, None, 1] - idx[None, :, 1])
        A[a : a + block] += table[di, dj] * scaled[None, :]
    return A


@dataclass(frozen=True, eq=False)
class FieldSolution:
    k: float
    grid: VolumeGrid
    u: np.ndarray = field(repr=False)


def plane_waves(k, directions, points):
    """Matrix E[j, i] = exp(i k theta_i . y_j)."""
    return np.exp(1j * k * (np.asarray(points) @ np.asarray(directions).T))


def solve_total_field(A, k, grid, theta, factor=None):
    """Total field at the cell centres for the plane wave of angle(s) ``theta``.

    ``theta`` may be a scalar angle or an array of angles; for an array the
    solution has one column per angle.
    """
    theta = np.asarray(theta, dtype=float)
    d = np.stack([np.cos(theta), np.sin(theta)], axis=-1).reshape(-1, 2)
    ui = plane_waves(k, d, grid.centers)
    if len(grid) == 0:
        u = ui
    else:
        u = linalg.lu_solve(A, ui, factor=factor)
    if theta.ndim == 0:
        u = u[:, 0]
    return FieldSolution(float(k), grid, u)


def farfield_from_field(sol, observation):
    """u_s^inf(theta_s) = gamma k^2 h^2 sum_j exp(-ik theta_s.y_j) m_j u_j."""
    k, grid = sol.k, sol.grid
    E = plane_waves(k, observation.directions, grid.centers)
    weights = CONVENTION.gamma(k) * k * k * grid.cell_area * grid.contrast
    u = sol.u
    if u.ndim == 1:
        return E.conj().T @ (weights * u)
    return E.conj().T @ (weights[:, None] * u)


def ls_farfield(grid, k, incident, observation, source="data"):
    """Farfield matrix of the volume problem on ``grid``; one LU for all directions."""
    A = assemble_ls_matrix(grid, k)
    if len(grid) == 0:
        values = np.zeros((observation.count, incident.count), dtype=complex)
    else:
        factor = linalg.lu_factor(A)
        sol = solve_total_field(A, k, grid, incident.angles, factor=factor)
        values = farfield_from_field(sol, observation)
    return FarfieldMatrix(k, incident, observation, values, source=source)


def medium_volume_grid(medium, h, box=None):
    if box is None:
        support = medium.support()
        if support is None:
            return VolumeGrid(h, np.zeros((0, 2)), np.zeros(0))
        box = support.bounding_box()
    return make_volume_grid(medium.index, box, h)


def farfield_matrix(medium, k, incident, observation=None, h=0.05):
    """Synthetic data F for ``medium`` at wavenumber ``k``."""
    observation = incident if observation is None else observation
    grid = medium_volume_grid(medium, h)
    return ls_farfield(grid, k, incident, observation)


def herglotz_field(g, k, points, grid):
    """u_i(g)(x) = sum_i g_i exp(ik theta_i . x) (2 pi / N)."""
    g = np.asarray(g, dtype=complex)
    if g.shape[0] != grid.count:
        raise InvalidArgumentError("density length does not match the direction grid")
    pts = np.asarray(points, dtype=float)
    flat = pts.reshape(-1, 2)
    out = plane_waves(k, grid.directions, flat) @ g * grid.weight
    return out.reshape(pts.shape[:-1] + g.shape[1:])


# --- separation of variables on a disk -------------------------------------


def series_order(kr, extra=20):
    return int(math.ceil(kr)) + extra


@dataclass(frozen=True, eq=False)
class DiskSeries:
    """Scattering by a disk written mode by mode.

    For each order m the total field outside is
    i^m (J_m(kr) + b_m H_m(kr)) e^{im(phi - theta)}. ``interior`` holds the
    interior radial function as ``(a_m, f)`` with f(m, r) vectorised, or None
    for impenetrable obstacles.
    """

    k: float
    radius: float
    center: tuple
    orders: np.ndarray
    b: np.ndarray
    a: np.ndarray = None
    interior: object = None

    def _polar(self, points):
        d = np.asarray(points, dtype=float) - np.asarray(self.center)
        return np.hypot(d[..., 0], d[..., 1]), np.arctan2(d[..., 1], d[..., 0])

    def scattered(self, points, theta):
        r, phi = self._polar(points)
        m = self.orders
        phase = (1j**m) * np.exp(1j * m * (phi[..., None] - theta)) * _hsign(m)
        terms = self.b * hankel1(np.abs(m), self.k * r[..., None]) * phase
        return self._shift(theta) * np.sum(terms, axis=-1)

    def _shift(self, theta):
        return np.exp(1j * self.k * np.dot(self.center, [np.cos(theta), np.sin(theta)]))

    def incident(self, points, theta):
        d = np.array([np.cos(theta), np.sin(theta)])
        return np.exp(1j * self.k * np.asarray(points, dtype=float) @ d)

    def total(self, points, theta):
        """Total field; inside the disk only defined for penetrable media."""
        pts = np.asarray(points, dtype=float)
        r, phi = self._polar(pts)
        out = np.empty(r.shape, dtype=complex)
        outside = r >= self.radius
        out[outside] = self.incident(pts[outside], theta) + self.scattered(pts[outside], theta)
        if np.any(~outside):
            if self.interior is None:
                raise InvalidArgumentError("no interior field for an impenetrable obstacle")
            m = self.orders
            ri, phii = r[~outside], phi[~outside]
            phase = (1j**m) * np.exp(1j * m * (phii[:, None] - theta)) * _hsign(m)
            out[~outside] = self._shift(theta) * np.sum(self.a * self.interior(m, ri[:, None]) * phase, axis=-1)
        return out

    def farfield(self, incident, observation, source="data"):
        """U[s, i] = -4i gamma sum_m b_m e^{im(phi_s - theta_i)}, translated to the centre."""
        k = self.k
        diff = observation.angles[:, None] - incident.angles[None, :]
        vals = np.exp(1j * np.multiply.outer(diff, self.orders)) @ self.b
        c = np.asarray(self.center)
        shift = np.exp(
            1j * k * ((incident.directions @ c)[None, :] - (observation.directions @ c)[:, None])
        )
        vals = -4j * CONVENTION.gamma(k) * vals * shift
        return FarfieldMatrix(k, incident, observation, vals, source=source)


def _hsign(m):
    # H_{-m} = (-1)^m H_m and likewise for J
    return np.where((m < 0) & (m % 2 == 1), -1.0, 1.0)


def _coefficients(k, R, orders, f, fp):
    """b_m from matching exterior J_m + b_m H_m to an interior radial (f, f')."""
    ma = np.abs(orders)
    J, Jp = bessel_j(ma, k * R), bessel_jp(ma, k * R)
    H, Hp = hankel1(ma, k * R), hankel1p(ma, k * R)
    with np.errstate(invalid="ignore", divide="ignore"):
        b = (k * Jp * f - J * fp) / (H * fp - k * Hp * f)
    return b, J, H


def penetrable_disk_series(n, R, k, center=(0.0, 0.0), m_max=None):
    if not n > 0 or not R > 0:
        raise InvalidArgumentError("index and radius must be positive")
    kn = k * math.sqrt(n)
    if m_max is None:
        m_max = series_order(max(k, kn) * R)
    orders = np.arange(-m_max, m_max + 1)
    ma = np.abs(orders)
    f = bessel_j(ma, kn * R)
    fp = kn * bessel_jp(ma, kn * R)
    b, J, H = _coefficients(k, R, orders, f, fp)
    a = (J + b * H) / f
    interior = lambda m, r: bessel_j(np.abs(m), kn * r)
    return DiskSeries(float(k), float(R), tuple(center), orders, b, a, interior)


def zero_index_disk_series(R, k, center=(0.0, 0.0), m_max=None):
    """Disk of index 0: interior solutions are harmonic, r^|m| e^{im phi}."""
    if m_max is None:
        m_max = series_order(k * R)
    orders = np.arange(-m_max, m_max + 1)
    ma = np.abs(orders)
    f = R**ma
    fp = ma * R ** np.maximum(ma - 1, 0) * (ma > 0)
    b, J, H = _coefficients(k, R, orders, f, fp)
    a = (J + b * H) / f
    interior = lambda m, r: r ** np.abs(m)
    return DiskSeries(float(k), float(R), tuple(center), orders, b, a, interior)


def obstacle_disk_series(bc, R, k, center=(0.0, 0.0), m_max=None):
    """Sound-soft (Dirichlet) or Robin du/dnu + gamma u = 0 disk."""
    if m_max is None:
        m_max = series_order(k * R)
    orders = np.arange(-m_max, m_max + 1)
    one = np.ones(len(orders))
    if bc.kind == "dirichlet":
        f, fp = 0 * one, one
    elif bc.kind == "robin":
        f, fp = one, -bc.gamma * one
    else:
        raise InvalidArgumentError(f"unknown boundary condition {bc!r}")
    b, _, _ = _coefficients(k, R, orders, f, fp)
    return DiskSeries(float(k), float(R), tuple(center), orders, b)


def mie_disk_farfield(n, R, k, incident, observation=None, center=(0.0, 0.0)):
    """Series farfield of a homogeneous disk of index ``n``; independent of the volume solver."""
    observation = incident if observation is None else observation
    return penetrable_disk_series(n, R, k, center).farfield(incident, observation)


def scattering_matrix(F):
    """S = I + 2ik conj(gamma) (2 pi / N) U, unitary for lossless scatterers."""
    if F.incident != F.observation:
        raise IncompatibleOperandsError("the scattering matrix needs identical grids")
    g = CONVENTION.gamma(F.k)
    return np.eye(F.incident.count) + 2j * F.k * np.conj(g) * F.operator()
