"""scikit-learn style front end.

``ArtificialBackgroundIndicator`` turns a sequence of data farfield
matrices (one per wavenumber) into an indicator curve; ``IndexRecovery``
turns a curve into an index estimate. Both follow the estimator API, so
they chain in a ``sklearn.pipeline.Pipeline``::

    pipe = make_pipeline(
        ArtificialBackgroundIndicator(background=ZIMBackground(Disk())),
        IndexRecovery(reference=disk_buckling_reference()),
    )
    n_hat = pipe.fit(farfields).predict(farfields)
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_farfields, check_peaks_input
from .background import background_farfield
from .exceptions import InvalidArgumentError
from .geometry import make_sampling_grid
from .indicator import AlphaRule, IndicatorCurve, detect_peaks, indicator_curve
from .spectra import recover_index


class ArtificialBackgroundIndicator(TransformerMixin, BaseEstimator):
    """GLSM indicator of F_art = F - F~ for one artificial background.

    Parameters
    ----------
    background : ZIMBackground, ObstacleBackground or GeneralRhoBackground
    h : float
        Cell size of the volume solver used for penetrable backgrounds.
    sampling_domain : shape, optional
        Where the point sources are placed; defaults to the background domain.
    sampling_step : float
    alpha0 : float
        Relative Tikhonov parameter, alpha = alpha0 ||F_art||^2 / ||F~_sharp||.
    sign : {"derived", "bare"}
        Point-source farfield convention, see ``point_source_rhs``.
    prominence_factor : float
        Passed to ``detect_peaks`` when fitting.
    n_jobs : int
    """

    def __init__(
        self,
        background=None,
        h=0.05,
        sampling_domain=None,
        sampling_step=0.1,
        alpha0=1e-5,
        sign="derived",
        prominence_factor=3.0,
        n_jobs=1,
    ):
        self.background = background
        self.h = h
        self.sampling_domain = sampling_domain
        self.sampling_step = sampling_step
        self.alpha0 = alpha0
        self.sign = sign
        self.prominence_factor = prominence_factor
        self.n_jobs = n_jobs

    def _sampling(self):
        domain = self.sampling_domain or self.background.domain
        if domain is None:
            raise InvalidArgumentError("no sampling domain: give sampling_domain explicitly")
        return make_sampling_grid(domain, self.sampling_step)

    def _curve(self, X):
        if self.background is None:
            raise InvalidArgumentError("background must be set")
        by_k = {M.k: M for M in X}
        first = X[0]
        sampling = self._sampling()
        return indicator_curve(
            [M.k for M in X],
            lambda k: by_k[k],
            lambda k: background_farfield(self.background, k, first.incident, first.observation, self.h),
            sampling,
            AlphaRule(self.alpha0),
            sign=self.sign,
            jobs=self.n_jobs,
            metadata={"background": self.background.describe(), "sampling_points": len(sampling)},
        )

    def fit(self, X, y=None):
        X = check_farfields(X)
        self.curve_ = self._curve(X)
        self.peaks_ = detect_peaks(self.curve_, self.prominence_factor)
        self.n_features_in_ = X[0].incident.count
        return self

    def transform(self, X):
        """Indicator curve over the wavenumbers of ``X``."""
        check_is_fitted(self, "curve_")
        X = check_farfields(X)
        ks = np.array([M.k for M in X])
        if np.array_equal(ks, self.curve_.k):
            return self.curve_
        return self._curve(X)

    def fit_transform(self, X, y=None):
        return self.fit(X).curve_


class IndexRecovery(RegressorMixin, BaseEstimator):
    """Constant-index estimate n = lambda_p(1) / k_p^2 from indicator peaks.

    Parameters
    ----------
    reference : Spectrum
        n = 1 spectrum of the eigenproblem matching the background.
    prominence_factor : float
    first_index : int
        Reference eigenvalue assigned to the first detected peak.
    """

    def __init__(self, reference=None, prominence_factor=3.0, first_index=0):
        self.reference = reference
        self.prominence_factor = prominence_factor
        self.first_index = first_index

    def _peaks(self, X):
        X = check_peaks_input(X)
        if isinstance(X, IndicatorCurve):
            return detect_peaks(X, self.prominence_factor)
        return X

    def fit(self, X, y=None):
        if self.reference is None:
            raise InvalidArgumentError("reference spectrum must be set")
        self.peaks_ = self._peaks(X)
        self.report_ = recover_index(self.peaks_, self.reference, self.first_index)
        self.n_hat_ = self.report_.n_hat
        return self

    def predict(self, X=None):
        """Estimated index, as a length-1 array; re-derived when ``X`` is given."""
        check_is_fitted(self, "report_")
        if X is None:
            return np.array([self.n_hat_])
        return np.array([recover_index(self._peaks(X), self.reference, self.first_index).n_hat])

    def score(self, X, y, sample_weight=None):
        """Negative relative error of the estimate against the true index ``y``."""
        y = float(np.ravel(y)[0])
        return -abs(self.predict(X)[0] - y) / y
