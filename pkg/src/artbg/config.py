"""Run configuration: an INI-style sectioned text file.

Example::

    [medium]
    shape = kite
    radius = 1.0          ; kite inscribed in this circle (or give scale)
    n = 2.0

    [background]
    type = zim            ; zim | dirichlet | robin | general_rho
    shape = same          ; reuse the first medium shape

    [scan]
    directions = 64
    k_min = 3.5
    k_max = 7.0
    k_step = 0.01
    h = 0.05

Further medium pieces go in sections ``[medium.2]``, ``[medium.3]``...
"""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import InvalidArgumentError
from .geometry import (
    Dirichlet,
    Disk,
    GeneralRhoBackground,
    Kite,
    MediumSpec,
    ObstacleBackground,
    Robin,
    ZIMBackground,
)


def _floats(text):
    return [float(parse_number(t)) for t in text.replace(",", " ").split()]


def parse_number(token):
    """Parse '0.5' or '1/64'."""
    token = token.strip()
    if "/" in token:
        num, den = token.split("/")
        return float(num) / float(den)
    return float(token)


def parse_shape(section):
    kind = section.get("shape", "disk").strip().lower()
    center = tuple(_floats(section.get("center", "0, 0")))
    if len(center) != 2:
        raise InvalidArgumentError("center needs two coordinates")
    if kind == "disk":
        return Disk(center, parse_number(section.get("radius", "1.0")))
    if kind == "kite":
        if "scale" in section:
            return Kite(center, parse_number(section["scale"]))
        return Kite.inscribed(parse_number(section.get("radius", "1.0")), center)
    raise InvalidArgumentError(f"unknown shape {kind!r}")


@dataclass
class RunConfig:
    medium: MediumSpec
    background: object
    directions: int = 64
    k_min: float = 2.2
    k_max: float = 3.2
    k_step: float = 0.01
    h: float = 0.05
    sampling_step: float = 0.1
    alpha0: float = 1e-5
    sign: str = "derived"
    prominence: float = 3.0
    reference_method: str = "auto"
    reference_hs: tuple = (1 / 32, 1 / 48, 1 / 64)
    reference_count: int = 8
    first_index: int = 0
    delta: float = 0.0
    seed: int = 0
    output_dir: str = "run"
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.k_min > 0:
            raise InvalidArgumentError("k_min must be positive")
        if not self.k_step > 0:
            raise InvalidArgumentError("k_step must be positive")
        if self.k_max < self.k_min:
            raise InvalidArgumentError("k_max must not be below k_min")
        if self.delta < 0:
            raise InvalidArgumentError("noise level must be non-negative")

    @property
    def ks(self):
        count = int(np.floor((self.k_max - self.k_min) / self.k_step + 1e-9)) + 1
        return self.k_min + self.k_step * np.arange(count)

    def effective(self):
        """Plain dict of every effective parameter, for the manifest."""
        d = {
            key: value
            for key, value in asdict(self).items()
            if key not in ("medium", "background", "source")
        }
        d["reference_hs"] = list(self.reference_hs)
        d["medium"] = [[s.describe(), v] for s, v in self.medium.pieces]
        d["background"] = self.background.describe()
        d["k_count"] = len(self.ks)
        return d


def load_config(path):
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    text = Path(path).read_text(encoding="utf-8")
    cp.read_string(text)
    return config_from_parser(cp)


def config_from_string(text):
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.read_string(text)
    return config_from_parser(cp)


def config_from_parser(cp):
    if "medium" not in cp:
        raise InvalidArgumentError("config needs a [medium] section")
    names = ["medium"] + sorted(
        (s for s in cp.sections() if s.startswith("medium.")), key=lambda s: int(s.split(".")[1])
    )
    pieces = [(parse_shape(cp[s]), parse_number(cp[s].get("n", "1.0"))) for s in names]
    medium = MediumSpec(tuple(pieces))

    bsec = cp["background"] if "background" in cp else {}
    btype = bsec.get("type", "zim").strip().lower()
    if bsec.get("shape", "same").strip().lower() == "same":
        bshape = pieces[0][0]
    else:
        bshape = parse_shape(bsec)
    if btype == "zim":
        background = ZIMBackground(bshape)
    elif btype == "dirichlet":
        background = ObstacleBackground(bshape, Dirichlet())
    elif btype == "robin":
        background = ObstacleBackground(bshape, Robin(parse_number(bsec.get("gamma", "0.0"))))
    elif btype == "general_rho":
        background = GeneralRhoBackground(((bshape, parse_number(bsec.get("rho", "0.0"))),))
    else:
        raise InvalidArgumentError(f"unknown background type {btype!r}")

    def get(section, key, default, conv=float):
        if section in cp and key in cp[section]:
            return conv(cp[section][key])
        return default

    return RunConfig(
        medium=medium,
        background=background,
        directions=get("scan", "directions", 64, int),
        k_min=get("scan", "k_min", 2.2, parse_number),
        k_max=get("scan", "k_max", 3.2, parse_number),
        k_step=get("scan", "k_step", 0.01, parse_number),
        h=get("scan", "h", 0.05, parse_number),
        sampling_step=get("sampling", "step", 0.1, parse_number),
        alpha0=get("glsm", "alpha0", 1e-5),
        sign=get("glsm", "sign", "derived", str.strip),
        prominence=get("glsm", "prominence", 3.0),
        reference_method=get("reference", "method", "auto", str.strip),
        reference_hs=get("reference", "hs", (1 / 32, 1 / 48, 1 / 64), lambda t: tuple(_floats(t))),
        reference_count=get("reference", "count", 8, int),
        first_index=get("reference", "first_index", 0, int),
        delta=get("noise", "delta", 0.0),
        seed=get("noise", "seed", 0, int),
        output_dir=get("output", "dir", "run", str.strip),
        source={s: dict(cp[s]) for s in cp.sections()},
    )
