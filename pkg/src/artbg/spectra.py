"""Reference spectra for the artificial-background eigenproblems and index recovery.

Two eigenproblems are solved on a square lattice over the background
domain:

* buckling (ZIM background):  div(n^-1 grad) form  Delta(n^-1 Delta w) = -k^2 Delta w,
  clamped by extending w by zero outside the domain;
* cavity (obstacle background): Delta w + k^2 n w = 0 with a boundary condition.

Both are discretised with the 5-point Laplacian so that their discrete
versions keep the min-max structure: scaling and monotonicity in n hold
exactly on a fixed lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sps

from . import linalg
from .exceptions import InvalidArgumentError, NoPeaksError, UnsupportedShapeError
from .geometry import Disk, lattice
from .special import bessel_j, bessel_j_zero, bessel_jp, find_roots

MIN_CELLS_ACROSS = 20
DEFAULT_COUNT = 8
# below this many unknowns the dense generalized solver is used
DENSE_LIMIT = 2500


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues lambda_p (k^2 for the cavity problem)."""

    problem: str
    values: np.ndarray
    domain: object = None
    medium: str = ""
    h: float = None
    vectors: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if np.any(np.diff(v) < 0):
            raise InvalidArgumentError("spectrum must be ascending")
        object.__setattr__(self, "values", v)

    @property
    def wavenumbers(self):
        return np.sqrt(self.values)

    def __len__(self):
        return len(self.values)

    def distinct(self, rtol=1e-6):
        """Eigenvalues with repeated (multiple) entries collapsed."""
        out = []
        for v in self.values:
            if not out or abs(v - out[-1]) > rtol * abs(v):
                out.append(v)
        return np.array(out)


class PlateLattice:
    """Lattice nodes strictly inside ``domain`` plus the ring of outside neighbours.

    ``interior`` holds node coordinates; ``ring`` the outside nodes that have
    at least one interior 4-neighbour. Functions on the lattice are vectors
    over ``interior`` and vanish everywhere else.
    """

    def __init__(self, domain, h):
        if not h > 0:
            raise InvalidArgumentError("lattice step must be positive")
        x0, x1, y0, y1 = domain.bounding_box()
        if min(x1 - x0, y1 - y0) / h < MIN_CELLS_ACROSS:
            raise InvalidArgumentError(
                f"h={h:g} resolves the domain with fewer than {MIN_CELLS_ACROSS} cells across"
            )
        self.domain, self.h = domain, float(h)
        grid = lattice(domain.bounding_box(), h)
        nx, ny = grid.shape[:2]
        inside = domain.contains(grid)
        self.shape = (nx, ny)
        self._number = -np.ones((nx, ny), dtype=np.int64)
        self._number[inside] = np.arange(np.count_nonzero(inside))
        self.interior = grid[inside]
        self._ij = np.argwhere(inside)
        # the bounding lattice is padded, so neighbours never leave the array
        ring = np.zeros_like(inside)
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ring |= np.roll(inside, (di, dj), axis=(0, 1))
        ring &= ~inside
        self._ring_ij = np.argwhere(ring)
        self.ring = grid[ring]

    def __len__(self):
        return len(self.interior)

    @cached_property
    def laplacian(self):
        """5-point Laplacian on interior nodes (rows) acting on interior values."""
        return self._laplacian_rows(self._ij)

    @cached_property
    def ring_laplacian(self):
        """Laplacian evaluated at the ring nodes of a zero-extended function."""
        return self._laplacian_rows(self._ring_ij)

    def _laplacian_rows(self, rows_ij):
        h2 = self.h * self.h
        r, c, v = [], [], []
        nx, ny = self.shape
        for row, (i, j) in enumerate(rows_ij):
            me = self._number[i, j]
            if me >= 0:
                r.append(row), c.append(me), v.append(-4.0 / h2)
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < nx and 0 <= b < ny and self._number[a, b] >= 0:
                    r.append(row), c.append(self._number[a, b]), v.append(1.0 / h2)
        return sps.csr_matrix((v, (r, c)), shape=(len(rows_ij), len(self)))

    @cached_property
    def dirichlet_laplacian(self):
        """Laplacian with w = 0 imposed on the true boundary, not on the ring.

        Each link from an interior node to an outside node is cut by the
        boundary at a fraction theta of its length; the linear ghost value
        -(1 - theta)/theta * w_p only changes the diagonal, so the matrix
        stays symmetric (the ghost-fluid construction of Gibou et al.).
        """
        h2 = self.h * self.h
        extra = np.zeros(len(self))
        nx, ny = self.shape
        starts, ends, owners = [], [], []
        for n_, (i, j) in enumerate(self._ij):
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if self._number[a, b] < 0:
                    owners.append(n_)
                    starts.append(self.interior[n_])
                    ends.append(self.interior[n_] + self.h * np.array([di, dj]))
        if owners:
            theta = boundary_fraction(self.domain, np.array(starts), np.array(ends))
            np.add.at(extra, owners, (1.0 - theta) / theta)
        return (self.laplacian - sps.diags(extra / h2)).tocsr()

    def ring_inverse_index(self, medium):
        """1/n at ring nodes: mean of 1/n over the interior neighbours.

        The ring lies outside the domain; borrowing interior values keeps the
        discrete problem a function of n restricted to the domain only.
        """
        inv = 1.0 / medium.index(self.interior)
        L = self.ring_laplacian.copy()
        L.data[:] = 1.0
        counts = np.asarray(L.sum(axis=1)).ravel()
        return (L @ inv) / counts

    def buckling_matrices(self, medium):
        inv_n = 1.0 / medium.index(self.interior)
        inv_ring = self.ring_inverse_index(medium)
        Li, Lr = self.laplacian, self.ring_laplacian
        A = Li.T @ sps.diags(inv_n) @ Li + Lr.T @ sps.diags(inv_ring) @ Lr
        B = -Li
        return A.tocsc(), B.tocsc()


def boundary_fraction(domain, inside_pts, outside_pts, iters=40, floor=1e-6):
    """Fraction along each segment (inside -> outside) where it leaves ``domain``."""
    lo = np.zeros(len(inside_pts))
    hi = np.ones(len(inside_pts))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        p = inside_pts + mid[:, None] * (outside_pts - inside_pts)
        inside = domain.contains(p)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return np.maximum(0.5 * (lo + hi), floor)


def _solve(A, B, count):
    if A.shape[0] <= DENSE_LIMIT:
        res = linalg.gen_symdef_eig(A.toarray(), B.toarray(), count)
    else:
        res = linalg.gen_symdef_eig(A, B, count)
    return res


def _check_medium(medium, points):
    n = medium.index(points)
    if np.any(n <= 0):
        raise InvalidArgumentError("refractive index must be positive on the domain")


def buckling_spectrum(domain, medium, h, count=DEFAULT_COUNT, lat=None):
    """Smallest eigenvalues of Delta(n^-1 Delta w) = -lambda Delta w, w clamped on the boundary."""
    lat = lat or PlateLattice(domain, h)
    _check_medium(medium, lat.interior)
    A, B = lat.buckling_matrices(medium)
    res = _solve(A, B, count)
    return Spectrum("buckling", res.values, domain, _describe(medium), h, res.vectors)


def _describe(medium):
    if hasattr(medium, "pieces"):
        return "; ".join(f"{s.describe()}: {v!r}" for s, v in medium.pieces) or "n=1"
    return str(medium)


def rayleigh_quotient(w, medium, lat):
    """(n^-1 Delta w, Delta w) / ||grad w||^2 with the buckling stencils."""
    w = np.asarray(w)
    A, B = lat.buckling_matrices(medium)
    den = np.real(np.vdot(w, B @ w))
    if den <= 0:
        raise InvalidArgumentError("w has zero discrete gradient")
    return float(np.real(np.vdot(w, A @ w)) / den)


def cavity_spectrum(domain, medium, bc, h=None, count=DEFAULT_COUNT, lat=None):
    """k^2 values with Delta w + k^2 n w = 0 in the domain and B(w) = 0.

    Dirichlet uses the masked lattice on any shape. Robin is only available
    for a disk with constant n, by radial root finding.
    """
    if bc.kind == "dirichlet":
        lat = lat or PlateLattice(domain, h)
        _check_medium(medium, lat.interior)
        n = medium.index(lat.interior)
        A = -lat.dirichlet_laplacian.tocsc()
        B = sps.diags(n).tocsc()
        res = _solve(A, B, count)
        return Spectrum("cavity(dirichlet)", res.values, domain, _describe(medium), h, res.vectors)
    if bc.kind == "robin":
        if not isinstance(domain, Disk):
            raise UnsupportedShapeError("Robin cavity spectra need a disk")
        n = _constant_on_disk(medium, domain)
        ks = disk_cavity_wavenumbers(n, domain.radius, bc.gamma, count)
        return Spectrum(f"cavity(robin {bc.gamma!r})", ks**2, domain, _describe(medium), None)
    raise InvalidArgumentError(f"unsupported boundary condition {bc!r}")


def _constant_on_disk(medium, disk):
    r, t = np.meshgrid(np.linspace(0, 0.999, 40), np.linspace(0, 2 * np.pi, 64, endpoint=False))
    pts = np.asarray(disk.center) + disk.radius * np.stack([r * np.cos(t), r * np.sin(t)], -1)
    vals = np.unique(medium.index(pts))
    if len(vals) != 1:
        raise UnsupportedShapeError("Robin cavity spectra need a constant index on the disk")
    return float(vals[0])


def disk_cavity_wavenumbers(n, R, gamma, count, step=0.02):
    """Smallest k > 0 with sqrt(n) k J_m'(sqrt(n) k R) + gamma J_m(sqrt(n) k R) = 0.

    ``gamma=None`` means Dirichlet, J_m(sqrt(n) k R) = 0. Orders m >= 1
    are double (cos and sin modes).
    """
    s = math.sqrt(n)
    kmax = 4.0 / (s * R)
    while True:
        vals = []
        # no root of order m lies below about m / (sR)
        for m in range(int(s * kmax * R) + 6):
            if gamma is None:
                f = lambda k, m=m: float(bessel_j(m, s * k * R))
            else:
                f = lambda k, m=m: float(s * k * bessel_jp(m, s * k * R) + gamma * bessel_j(m, s * k * R))
            roots = [r for r in find_roots(f, step / 10, kmax, step / (s * R)) if r > 1e-8]
            vals += [r for r in roots for _ in range(1 if m == 0 else 2)]
        if len(vals) >= count:
            return np.sort(vals)[:count]
        kmax *= 2


def disk_buckling_reference(count=DEFAULT_COUNT, radius=1.0):
    """Clamped buckling eigenvalues of the disk of ``radius`` with n = 1.

    With radial solutions J_m(sqrt(lambda) r) and r^m, the clamped conditions
    reduce to J_{m+1}(sqrt(lambda) R) = 0, so sqrt(lambda) R = j_{m+1,s}.
    Orders m >= 1 are double.
    """
    vals = []
    m_cap = count + 2
    for m in range(0, m_cap):
        for s in range(1, count + 2):
            z = bessel_j_zero(m + 1, s)
            vals += [z * z] * (1 if m == 0 else 2)
    vals = np.sort(np.array(vals))[:count] / radius**2
    return Spectrum("buckling", vals, Disk(radius=radius), "n=1", None)


def disk_buckling_residual(m, s):
    """Determinant of the clamped radial system for order m at sqrt(lambda) = s.

    Independent check of the reduction used in disk_buckling_reference.
    """
    # rows: w(1) = 0 and w'(1) = 0 for w = a J_m(s r) + b r^m
    return float(bessel_j(m, s) * m - s * bessel_jp(m, s))


def richardson(hs, values, order=1.0):
    """Extrapolate to h = 0 by a least-squares fit of lambda* + C h^order.

    The clamped zero extension converges at first order with a
    staircase-dependent constant, so the order is fixed rather than
    estimated from the data; a least-squares fit over three or more grids
    damps the staircase oscillation.
    """
    hs = np.asarray(hs, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(hs) < 2 or len(hs) != len(values):
        raise InvalidArgumentError("need at least two (h, value) pairs")
    A = np.stack([np.ones_like(hs), hs**order], axis=1)
    coef, *_ = np.linalg.lstsq(A, values, rcond=None)
    return float(coef[0])


def extrapolated_buckling_spectrum(domain, medium, hs, count=DEFAULT_COUNT):
    """Buckling spectrum on several grids, extrapolated eigenvalue by eigenvalue."""
    vals = np.array([buckling_spectrum(domain, medium, h, count).values for h in hs])
    ext = np.array([richardson(hs, vals[:, p]) for p in range(vals.shape[1])])
    return Spectrum("buckling", np.sort(ext), domain, _describe(medium), 0.0)


@dataclass(frozen=True, eq=False)
class RecoveryReport:
    peaks: np.ndarray
    reference_index: np.ndarray
    reference_values: np.ndarray
    estimates: np.ndarray
    n_hat: float
    ess_inf_upper: float
    ess_sup_lower: float

    def pairs(self):
        return list(zip(self.peaks, self.reference_index, self.reference_values, self.estimates))


def recover_index(peaks, reference, first_index=0):
    """Match peaks to the n = 1 reference spectrum and estimate n.

    The first peak is assigned to ``reference.values[first_index]``; each
    later peak goes to the nearest unused later reference eigenvalue under
    the running estimate. n_hat is the median of lambda_p(1) / k_j^2.
    """
    k = np.asarray(getattr(peaks, "k", peaks), dtype=float)
    if k.size == 0:
        raise NoPeaksError("no peaks to match")
    lam = np.asarray(reference.values, dtype=float)
    if first_index >= len(lam):
        raise InvalidArgumentError("reference spectrum too short")
    idx = [first_index]
    n_hat = lam[first_index] / k[0] ** 2
    for kj in k[1:]:
        start = idx[-1] + 1
        if start >= len(lam):
            break
        predicted = kj**2 * n_hat
        p = start + int(np.argmin(np.abs(lam[start:] - predicted)))
        idx.append(p)
        n_hat = float(np.median(lam[idx] / k[: len(idx)] ** 2))
    used = np.array(idx)
    ratios = lam[used] / k[: len(used)] ** 2
    return RecoveryReport(
        peaks=k[: len(used)],
        reference_index=used,
        reference_values=lam[used],
        estimates=ratios,
        n_hat=float(np.median(ratios)),
        ess_inf_upper=float(ratios.min()),
        ess_sup_lower=float(ratios.max()),
    )
