"""Integer-order cylinder functions of real argument and Bessel zeros."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .exceptions import InvalidArgumentError


@dataclass(frozen=True)
class CylFunValue:
    J: float
    Y: float

    @property
    def H1(self):
        return complex(self.J, self.Y)


def _check_order(m):
    m = np.asarray(m)
    if np.any(m < 0) or np.any(m != np.floor(m)):
        raise InvalidArgumentError("order must be a non-negative integer")
    return m


def bessel_j(m, x):
    """J_m(x) for integer m >= 0, broadcasting over ``m`` and ``x``."""
    _check_order(m)
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise InvalidArgumentError("argument must be finite and non-negative")
    return sp.jv(m, x)


def bessel_y(m, x):
    _check_order(m)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidArgumentError("Y_m is singular for x <= 0")
    return sp.yv(m, x)


def hankel1(m, x):
    """H_m^(1)(x) = J_m(x) + i Y_m(x); raises for x <= 0."""
    _check_order(m)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidArgumentError("H_m^(1) is singular for x <= 0")
    return sp.hankel1(m, x)


def cylfun(m, x):
    return CylFunValue(float(bessel_j(m, x)), float(bessel_y(m, x)))


def bessel_jp(m, x):
    """Derivative J_m'(x); the order may be negative here (J_{-m} = (-1)^m J_m)."""
    return sp.jvp(m, np.asarray(x, dtype=float))


def hankel1p(m, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise InvalidArgumentError("H_m^(1)' is singular for x <= 0")
    return sp.h1vp(m, x)


def _mcmahon(m, s):
    # McMahon expansion of j_{m,s}; good to a few 1e-3 already for s = 1
    mu = 4.0 * m * m
    b = (s + 0.5 * m - 0.25) * np.pi
    return b - (mu - 1) / (8 * b) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * b) ** 3)


def _bisect(f, a, b, tol=1e-13, maxiter=200):
    fa = f(a)
    for _ in range(maxiter):
        c = 0.5 * (a + b)
        fc = f(c)
        if fc == 0 or (b - a) < tol * max(1.0, abs(c)):
            return c
        if np.sign(fc) == np.sign(fa):
            a, fa = c, fc
        else:
            b = c
    return 0.5 * (a + b)


def bessel_j_zero(m, s):
    """s-th positive zero of J_m by bracketing and bisection.

    The zeros of J_m interlace with those of J_{m+1} and are spaced by about
    pi, so scanning in steps of 0.1 from just above zero cannot skip a root.
    """
    _check_order(m)
    if int(s) != s or s < 1:
        raise InvalidArgumentError("zero index must be a positive integer")
    m, s = int(m), int(s)
    f = lambda x: float(sp.jv(m, x))
    guess = _mcmahon(m, s)
    # count sign changes from the origin so the index is exact
    step = 0.1
    x = max(m, 1e-3) * 0.5 + 1e-3
    hi = guess + 4.0
    grid = np.arange(x, hi + step, step)
    vals = sp.jv(m, grid)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    while len(idx) < s:
        hi += 10.0
        grid = np.arange(x, hi + step, step)
        vals = sp.jv(m, grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    i = idx[s - 1]
    return _bisect(f, grid[i], grid[i + 1])


def find_roots(f, a, b, step):
    """All sign-change roots of a scalar function on [a, b], refined by bisection."""
    xs = np.arange(a, b + step, step)
    vals = np.array([f(x) for x in xs])
    roots = []
    for i in range(len(xs) - 1):
        if vals[i] == 0:
            roots.append(xs[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(_bisect(f, xs[i], xs[i + 1]))
    return roots
