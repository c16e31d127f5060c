"""Transmission eigenvalues with artificial backgrounds, in 2D.

Synthesise farfield data for a penetrable inclusion, subtract the computed
farfield of an artificial background, scan the GLSM indicator over k and
recover a constant refractive index from the detected peaks.
"""

__version__ = "0.1.0"

from .background import (
    BackgroundFarfield,
    SharpOperator,
    artificial_farfield,
    background_farfield,
    obstacle_farfield,
    sharp_operator,
    zim_farfield,
)
from .estimators import ArtificialBackgroundIndicator, IndexRecovery
from .forward import FarfieldMatrix, farfield_matrix, herglotz_field, mie_disk_farfield
from .geometry import (
    Dirichlet,
    DirectionGrid,
    Disk,
    GeneralRhoBackground,
    Kite,
    MediumSpec,
    ObstacleBackground,
    Robin,
    ZIMBackground,
    make_direction_grid,
    make_sampling_grid,
)
from .indicator import AlphaRule, IndicatorCurve, PeakList, detect_peaks, indicator_curve
from .spectra import (
    RecoveryReport,
    Spectrum,
    buckling_spectrum,
    cavity_spectrum,
    disk_buckling_reference,
    extrapolated_buckling_spectrum,
    recover_index,
)

__all__ = [
    "__version__",
    "BackgroundFarfield",
    "SharpOperator",
    "artificial_farfield",
    "background_farfield",
    "obstacle_farfield",
    "sharp_operator",
    "zim_farfield",
    "ArtificialBackgroundIndicator",
    "IndexRecovery",
    "FarfieldMatrix",
    "farfield_matrix",
    "herglotz_field",
    "mie_disk_farfield",
    "Dirichlet",
    "DirectionGrid",
    "Disk",
    "GeneralRhoBackground",
    "Kite",
    "MediumSpec",
    "ObstacleBackground",
    "Robin",
    "ZIMBackground",
    "make_direction_grid",
    "make_sampling_grid",
    "AlphaRule",
    "IndicatorCurve",
    "PeakList",
    "detect_peaks",
    "indicator_curve",
    "RecoveryReport",
    "Spectrum",
    "buckling_spectrum",
    "cavity_spectrum",
    "disk_buckling_reference",
    "extrapolated_buckling_spectrum",
    "recover_index",
]
