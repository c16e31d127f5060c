"""Shapes, media, background descriptors and direction/sampling grids.

Everything here is an immutable value object. Point arrays follow the
``(..., 2)`` convention: the last axis holds the ``(x, y)`` coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .exceptions import InvalidArgumentError, UnsupportedShapeError

# Points used to polygonise curved boundaries for membership tests.
_BOUNDARY_SAMPLES = 2048


def _as_points(p):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise InvalidArgumentError(f"points must have a trailing axis of size 2, got {p.shape}")
    return p


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidArgumentError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, p):
        p = _as_points(p)
        d = p - np.asarray(self.center)
        return np.hypot(d[..., 0], d[..., 1]) < self.radius

    def bounding_box(self):
        cx, cy = self.center
        r = self.radius
        return (cx - r, cx + r, cy - r, cy + r)

    @property
    def area(self):
        return np.pi * self.radius**2

    def boundary(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack(
            [self.center[0] + self.radius * np.cos(t), self.center[1] + self.radius * np.sin(t)],
            axis=-1,
        )

    def describe(self):
        return f"disk(center=({self.center[0]!r}, {self.center[1]!r}), radius={self.radius!r})"


def kite_curve(t):
    """Unscaled kite boundary ``(cos t + 0.65 cos 2t - 0.65, 1.5 sin t)``."""
    t = np.asarray(t, dtype=float)
    return np.stack([np.cos(t) + 0.65 * np.cos(2 * t) - 0.65, 1.5 * np.sin(t)], axis=-1)


# max |kite_curve(t)| over t, needed to inscribe the kite in a disk
_KITE_MAX_RADIUS = float(np.max(np.hypot(*kite_curve(np.linspace(0, 2 * np.pi, 200001)).T)))


@dataclass(frozen=True)
class Kite:
    center: tuple[float, float] = (0.0, 0.0)
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidArgumentError(f"kite scale must be positive, got {self.scale}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "scale", float(self.scale))

    @classmethod
    def inscribed(cls, radius=1.0, center=(0.0, 0.0)):
        """Kite whose boundary touches the circle of ``radius`` about ``center``."""
        return cls(center=center, scale=radius / _KITE_MAX_RADIUS)

    def boundary(self, t):
        return np.asarray(self.center) + self.scale * kite_curve(t)

    @cached_property
    def _polygon(self):
        t = np.linspace(0.0, 2 * np.pi, _BOUNDARY_SAMPLES, endpoint=False)
        return self.boundary(t)

    def contains(self, p):
        p = _as_points(p)
        return _polygon_contains(self._polygon, p)

    def bounding_box(self):
        poly = self._polygon
        # pad by the chord sagitta so the box encloses the true curve
        pad = self.scale * 1e-3
        return (
            poly[:, 0].min() - pad,
            poly[:, 0].max() + pad,
            poly[:, 1].min() - pad,
            poly[:, 1].max() + pad,
        )

    @property
    def area(self):
        x, y = self._polygon.T
        return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def describe(self):
        return f"kite(center=({self.center[0]!r}, {self.center[1]!r}), scale={self.scale!r})"


@dataclass(frozen=True)
class Union_:
    parts: tuple = ()

    def __post_init__(self):
        if not self.parts:
            raise InvalidArgumentError("a union needs at least one shape")
        object.__setattr__(self, "parts", tuple(self.parts))

    def contains(self, p):
        p = _as_points(p)
        out = np.zeros(p.shape[:-1], dtype=bool)
        for s in self.parts:
            out |= s.contains(p)
        return out

    def bounding_box(self):
        boxes = np.array([s.bounding_box() for s in self.parts])
        return (boxes[:, 0].min(), boxes[:, 1].max(), boxes[:, 2].min(), boxes[:, 3].max())

    def describe(self):
        return "union(" + ", ".join(s.describe() for s in self.parts) + ")"


Shape = Union[Disk, Kite, Union_]


def _polygon_contains(poly, p):
    """Even-odd ray casting against a closed polygon, vectorised over points."""
    flat = p.reshape(-1, 2)
    x, y = flat[:, 0:1], flat[:, 1:2]
    x0, y0 = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    inside = np.zeros(len(flat), dtype=bool)
    # chunk to bound memory at (points x edges)
    step = max(1, 2_000_000 // len(poly))
    for a in range(0, len(flat), step):
        xs, ys = x[a : a + step], y[a : a + step]
        crosses = (y0 > ys) != (y1 > ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x0 + (ys - y0) * (x1 - x0) / (y1 - y0)
        inside[a : a + step] = np.count_nonzero(crosses & (xs < xint), axis=1) % 2 == 1
    return inside.reshape(p.shape[:-1])


def shape_contains(shape, p):
    """True where ``p`` lies strictly inside ``shape``."""
    return shape.contains(p)


@dataclass(frozen=True)
class MediumSpec:
    """Piecewise-constant refractive index; later pieces override earlier ones."""

    pieces: tuple = ()

    def __post_init__(self):
        pieces = tuple((s, float(v)) for s, v in self.pieces)
        for _, v in pieces:
            if not v > 0:
                raise InvalidArgumentError(f"refractive index values must be positive, got {v}")
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def constant(cls, shape, n):
        return cls(((shape, n),))

    def index(self, p):
        p = _as_points(p)
        n = np.ones(p.shape[:-1])
        for s, v in self.pieces:
            n[s.contains(p)] = v
        return n

    def contrast(self, p):
        return self.index(p) - 1.0

    def support(self):
        if not self.pieces:
            return None
        return Union_(tuple(s for s, _ in self.pieces))

    def scaled(self, c):
        """Medium whose index is multiplied by ``c`` inside every piece."""
        return MediumSpec(tuple((s, c * v) for s, v in self.pieces))

    @property
    def values(self):
        return [v for _, v in self.pieces]


@dataclass(frozen=True)
class Dirichlet:
    kind = "dirichlet"

    def describe(self):
        return "dirichlet"


@dataclass(frozen=True)
class Robin:
    """Robin condition du/dnu + gamma*u = 0 with nu the outward normal."""

    gamma: float = 0.0
    kind = "robin"

    def __post_init__(self):
        if not np.isfinite(self.gamma):
            raise InvalidArgumentError("Robin impedance must be finite")
        object.__setattr__(self, "gamma", float(self.gamma))

    def describe(self):
        return f"robin(gamma={self.gamma!r})"


BoundaryCondition = Union[Dirichlet, Robin]


@dataclass(frozen=True)
class ZIMBackground:
    """Zero-index material: rho = 0 inside ``domain``, 1 outside."""

    domain: Shape
    kind = "zim"

    def rho(self, p):
        p = _as_points(p)
        return np.where(self.domain.contains(p), 0.0, 1.0)

    def describe(self):
        return f"zim({self.domain.describe()})"


@dataclass(frozen=True)
class ObstacleBackground:
    domain: Disk
    bc: BoundaryCondition = field(default_factory=Dirichlet)
    kind = "obstacle"

    def __post_init__(self):
        if not isinstance(self.domain, Disk):
            raise UnsupportedShapeError("obstacle backgrounds are only available for disks")

    def describe(self):
        return f"obstacle({self.domain.describe()}, {self.bc.describe()})"


@dataclass(frozen=True)
class GeneralRhoBackground:
    """Real piecewise-constant rho with compact support of rho - 1."""

    pieces: tuple = ()
    kind = "general_rho"

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple((s, float(v)) for s, v in self.pieces))

    def rho(self, p):
        p = _as_points(p)
        r = np.ones(p.shape[:-1])
        for s, v in self.pieces:
            r[s.contains(p)] = v
        return r

    @property
    def domain(self):
        return Union_(tuple(s for s, _ in self.pieces)) if self.pieces else None

    def describe(self):
        inner = ", ".join(f"({s.describe()}, {v!r})" for s, v in self.pieces)
        return f"general_rho({inner})"


BackgroundSpec = Union[ZIMBackground, ObstacleBackground, GeneralRhoBackground]


@dataclass(frozen=True)
class DirectionGrid:
    """``count`` equispaced unit directions with angles 2*pi*j/count."""

    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise InvalidArgumentError(f"a direction grid needs N >= 2, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    @property
    def angles(self):
        return 2 * np.pi * np.arange(self.count) / self.count

    @property
    def directions(self):
        a = self.angles
        return np.stack([np.cos(a), np.sin(a)], axis=-1)

    @property
    def weight(self):
        return 2 * np.pi / self.count


def make_direction_grid(n):
    return DirectionGrid(n)


@dataclass(frozen=True)
class FarfieldConvention:
    """2D farfield normalisation u_s ~ e^{ikr} r^{-1/2} u_inf.

    Under this expansion the point source (i/4) H_0^(1)(k|x - z|) has the
    farfield ``gamma(k) * exp(-ik theta.z)``.
    """

    tag: str = "2d-ikr-sqrt-r"
    dim: int = 2

    @staticmethod
    def gamma(k):
        return np.exp(1j * np.pi / 4) / np.sqrt(8 * np.pi * k)


CONVENTION = FarfieldConvention()


@dataclass(frozen=True, eq=False)
class SamplingGrid:
    points: np.ndarray
    cell_area: float
    domain: Shape = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise InvalidArgumentError("sampling grid is empty")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


def lattice(box, h):
    """Cell-centred lattice covering ``box`` with step ``h``.

    Nodes sit at ``(i + 1/2) h`` for integer ``i``, the centres of the cells
    ``[ih, (i+1)h]``, so grids built for different shapes with the same ``h``
    coincide wherever they overlap.
    """
    x0, x1, y0, y1 = box
    i0, i1 = int(np.floor(x0 / h)) - 1, int(np.ceil(x1 / h)) + 1
    j0, j1 = int(np.floor(y0 / h)) - 1, int(np.ceil(y1 / h)) + 1
    xs = h * (np.arange(i0, i1) + 0.5)
    ys = h * (np.arange(j0, j1) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([X, Y], axis=-1)


def make_sampling_grid(domain, h):
    if not h > 0:
        raise InvalidArgumentError(f"sampling step must be positive, got {h}")
    pts = lattice(domain.bounding_box(), h).reshape(-1, 2)
    pts = pts[domain.contains(pts)]
    if len(pts) == 0:
        raise InvalidArgumentError(f"no lattice point of step {h} falls inside {domain.describe()}")
    return SamplingGrid(pts, h * h, domain)
