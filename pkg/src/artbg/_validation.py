"""Input checks shared by the estimators."""

import numpy as np

from .exceptions import IncompatibleOperandsError, InvalidArgumentError
from .forward import FarfieldMatrix
from .indicator import IndicatorCurve, PeakList


def check_farfields(X):
    """A non-empty sequence of FarfieldMatrix on one grid pair, with strictly increasing k."""
    if isinstance(X, FarfieldMatrix):
        X = [X]
    X = list(X)
    if not X:
        raise InvalidArgumentError("expected at least one farfield matrix")
    for M in X:
        if not isinstance(M, FarfieldMatrix):
            raise InvalidArgumentError(f"expected FarfieldMatrix, got {type(M).__name__}")
    first = X[0]
    for M in X[1:]:
        if M.incident != first.incident or M.observation != first.observation:
            raise IncompatibleOperandsError("all farfield matrices must share direction grids")
    ks = np.array([M.k for M in X])
    if np.any(np.diff(ks) <= 0):
        raise InvalidArgumentError("farfield matrices must be ordered by strictly increasing k")
    return X


def check_peaks_input(X):
    """Accept an IndicatorCurve, a PeakList or an array of peak abscissas."""
    if isinstance(X, (IndicatorCurve, PeakList)):
        return X
    k = np.sort(np.asarray(X, dtype=float).ravel())
    return PeakList(k, np.full(k.shape, np.nan), np.full(k.shape, np.nan))
