"""GLSM indicator: Tikhonov densities, the curve k -> I(k, n), peak detection.

For each sampling point z the density g_z minimises

    J(g) = alpha (T g, g) + ||F_art g - phi_z||^2

on L^2(S^1) with T = F~_sharp. The indicator integrates the penalty
(T g_z, g_z) over the sampling grid; it peaks at transmission eigenvalues of
the artificial background.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.signal import find_peaks

from .background import artificial_farfield, sharp_operator
from .exceptions import InvalidArgumentError
from .geometry import CONVENTION

logger = logging.getLogger(__name__)

RIDGE = 1e-12


def point_source_rhs(z, k, observation, sign="derived", scale=1.0):
    """Farfield of a point source at z, one column per point.

    ``sign="derived"`` gives gamma * exp(-ik theta.z), the farfield of
    (i/4) H_0^(1)(k|x - z|) under the solver's convention; ``sign="bare"``
    gives the bare exp(+ik theta.z).
    """
    z = np.asarray(z, dtype=float)
    single = z.ndim == 1
    z = z.reshape(-1, 2)
    phase = observation.directions @ z.T
    if sign == "derived":
        phi = CONVENTION.gamma(k) * np.exp(-1j * k * phase)
    elif sign == "bare":
        phi = np.exp(1j * k * phase)
    else:
        raise InvalidArgumentError(f"unknown point-source sign {sign!r}")
    phi = scale * phi
    return phi[:, 0] if single else phi


@dataclass(frozen=True, eq=False)
class TikhonovSolveResult:
    g: np.ndarray = field(repr=False)
    penalty: np.ndarray
    misfit: np.ndarray
    alpha: float


class TikhonovGLSM:
    """Normal-equation solver for one wavenumber, factorised once.

    ``F`` and ``T`` are matrices of operators on L^2(S^1) sampled at N
    equispaced directions; ``weight`` is the quadrature weight 2 pi / N
    that defines the inner product.
    """

    def __init__(self, F, T, alpha, weight):
        if not alpha > 0:
            raise InvalidArgumentError("alpha must be positive")
        F = np.asarray(F, dtype=complex)
        T = np.asarray(T, dtype=complex)
        if T.shape[0] != T.shape[1] or F.shape[1] != T.shape[0]:
            raise InvalidArgumentError(f"incompatible shapes F {F.shape}, T {T.shape}")
        n = T.shape[0]
        self.F, self.T, self.alpha, self.weight = F, T, float(alpha), float(weight)
        eps = RIDGE * max(np.trace(T).real, 0.0) / n
        M = alpha * T + F.conj().T @ F + eps * np.eye(n)
        M = 0.5 * (M + M.conj().T)
        try:
            self._chol = sla.cho_factor(M, lower=True, check_finite=False)
            self._lu = None
        except np.linalg.LinAlgError:
            logger.warning("normal matrix not numerically positive definite, using LU")
            self._chol = None
            self._lu = sla.lu_factor(M, check_finite=False)

    def solve(self, phi):
        phi = np.asarray(phi, dtype=complex)
        rhs = self.F.conj().T @ phi
        if self._chol is not None:
            g = sla.cho_solve(self._chol, rhs, check_finite=False)
        else:
            g = sla.lu_solve(self._lu, rhs, check_finite=False)
        return g

    def penalty(self, g):
        return self.weight * np.real(np.sum(g.conj() * (self.T @ g), axis=0))

    def misfit(self, g, phi):
        r = self.F @ g - phi
        return self.weight * np.sum(np.abs(r) ** 2, axis=0)

    def objective(self, g, phi):
        return self.alpha * self.penalty(g) + self.misfit(g, phi)

    def __call__(self, phi):
        g = self.solve(phi)
        return TikhonovSolveResult(g, self.penalty(g), self.misfit(g, phi), self.alpha)


def tikhonov_density(F_art, T, phi, alpha):
    """Exact minimiser of J for one (or several, as columns) right-hand sides."""
    F = F_art.operator()
    Tm = T.matrix if hasattr(T, "matrix") else np.asarray(T)
    return TikhonovGLSM(F, Tm, alpha, F_art.incident.weight)(phi)


@dataclass(frozen=True)
class AlphaRule:
    """alpha = alpha0 * ||F_art||^2 / ||T|| (relative) or alpha = alpha0 (absolute)."""

    alpha0: float = 1e-5
    relative: bool = True

    def __call__(self, F_op, T):
        if not self.relative:
            return self.alpha0
        tn = np.linalg.norm(T, 2)
        fn = np.linalg.norm(F_op, 2)
        if tn == 0 or fn == 0:
            return self.alpha0
        return self.alpha0 * fn * fn / tn


def indicator_at_k(F, background, sampling, alpha_rule=AlphaRule(), sign="derived", scale=1.0):
    """I(k) = cell_area * sum_z (T g_z, g_z) and a diagnostics dict."""
    F_art = artificial_farfield(F, background)
    T = sharp_operator(background)
    F_op = F_art.operator()
    alpha = alpha_rule(F_op, T.matrix)
    if not np.any(F_op):
        # F_art = 0: the minimiser is g = 0 for every z
        return 0.0, {"alpha": alpha, "penalty": np.zeros(len(sampling)), "misfit": None}
    solver = TikhonovGLSM(F_op, T.matrix, alpha, F.incident.weight)
    phi = point_source_rhs(sampling.points, F.k, F.observation, sign, scale)
    res = solver(phi)
    value = float(sampling.cell_area * np.sum(res.penalty))
    return max(value, 0.0), {"alpha": alpha, "penalty": res.penalty, "misfit": res.misfit}


@dataclass(frozen=True, eq=False)
class IndicatorCurve:
    k: np.ndarray
    values: np.ndarray
    alpha: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        v = np.asarray(self.values, dtype=float)
        a = np.asarray(self.alpha, dtype=float)
        if not (k.shape == v.shape == a.shape) or k.ndim != 1:
            raise InvalidArgumentError("k, values and alpha must be 1-D of equal length")
        if np.any(np.diff(k) <= 0):
            raise InvalidArgumentError("k samples must be strictly increasing")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "alpha", a)

    def __len__(self):
        return len(self.k)


def _evaluate_k(k, data_source, background_source, sampling, alpha_rule, sign, scale):
    F = data_source(k)
    Ft = background_source(k)
    return indicator_at_k(F, Ft, sampling, alpha_rule, sign, scale)


def indicator_curve(
    ks,
    data_source,
    background_source,
    sampling,
    alpha_rule=AlphaRule(),
    sign="derived",
    scale=1.0,
    jobs=1,
    metadata=None,
):
    """Evaluate the indicator on an ascending k grid.

    ``data_source(k)`` returns the data FarfieldMatrix and
    ``background_source(k)`` the matching BackgroundFarfield. A failure at
    one k is logged and stored as NaN instead of aborting the scan.
    """
    ks = np.asarray(ks, dtype=float)
    if ks.size == 0:
        raise InvalidArgumentError("empty k grid")
    if np.any(np.diff(ks) <= 0):
        raise InvalidArgumentError("k grid must be strictly increasing")

    def one(k):
        try:
            value, diag = _evaluate_k(k, data_source, background_source, sampling, alpha_rule, sign, scale)
            return value, diag["alpha"], None
        except Exception as exc:  # recorded as a gap
            logger.error("indicator failed at k=%g: %s", k, exc)
            return np.nan, np.nan, f"{type(exc).__name__}: {exc}"

    if jobs == 1:
        results = [one(k) for k in ks]
    else:
        from joblib import Parallel, delayed

        results = Parallel(n_jobs=jobs)(delayed(one)(k) for k in ks)
    meta = dict(metadata or {})
    failures = {float(k): err for k, (_, _, err) in zip(ks, results) if err is not None}
    if failures:
        meta["failures"] = failures
    return IndicatorCurve(
        ks, [r[0] for r in results], [r[1] for r in results], meta
    )


@dataclass(frozen=True, eq=False)
class PeakList:
    k: np.ndarray
    prominence: np.ndarray
    width: np.ndarray

    def __len__(self):
        return len(self.k)


def _mad(x):
    return float(np.median(np.abs(x - np.median(x))))


def detect_peaks(curve, prominence_factor=3.0):
    """Local maxima of log I whose prominence exceeds factor * MAD(log I).

    Abscissas are refined by a parabola through the three samples around
    each maximum (in log ordinate). NaN gaps are skipped by interpolation.
    """
    k = np.asarray(curve.k, dtype=float)
    v = np.asarray(curve.values, dtype=float)
    ok = np.isfinite(v) & (v > 0)
    if np.count_nonzero(ok) < 3:
        return PeakList(np.zeros(0), np.zeros(0), np.zeros(0))
    k, y = k[ok], np.log(v[ok])
    threshold = prominence_factor * _mad(y)
    idx, props = find_peaks(y, prominence=threshold, width=0)
    kk, prom, wid = [], [], []
    for i, p, w in zip(idx, props["prominences"], props["widths"]):
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        k0, k1, k2 = k[i - 1], k[i], k[i + 1]
        # vertex of the parabola through three (possibly uneven) points
        denom = (k0 - k1) * (k0 - k2) * (k1 - k2)
        A = (k2 * (y1 - y0) + k1 * (y0 - y2) + k0 * (y2 - y1)) / denom
        B = (k2 * k2 * (y0 - y1) + k1 * k1 * (y2 - y0) + k0 * k0 * (y1 - y2)) / denom
        kv = -B / (2 * A) if A < 0 else k1
        kv = float(np.clip(kv, k0, k2))
        kk.append(kv)
        prom.append(p)
        wid.append(w * np.mean(np.diff(k)))
    return PeakList(np.array(kk), np.array(prom), np.array(wid))
