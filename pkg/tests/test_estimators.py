import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from artbg.estimators import ArtificialBackgroundIndicator, IndexRecovery
from artbg.exceptions import IncompatibleOperandsError, InvalidArgumentError
from artbg.forward import mie_disk_farfield
from artbg.geometry import DirectionGrid, Dirichlet, Disk, ObstacleBackground
from artbg.indicator import IndicatorCurve
from artbg.spectra import Spectrum, disk_cavity_wavenumbers

DISK = Disk((0.0, 0.0), 1.0)
G = DirectionGrid(32)
KS = np.round(np.arange(1.6, 1.81, 0.01), 2)


@pytest.fixture(scope="module")
def data():
    return [mie_disk_farfield(2.0, 1.0, k, G) for k in KS]


@pytest.fixture(scope="module")
def reference():
    ks = disk_cavity_wavenumbers(1.0, 1.0, None, 6)
    return Spectrum("cavity(dirichlet)", ks**2)


def indicator():
    return ArtificialBackgroundIndicator(ObstacleBackground(DISK, Dirichlet()), sampling_step=0.25)


def test_get_set_params_and_clone():
    est = indicator()
    params = est.get_params()
    assert params["alpha0"] == 1e-5 and params["sampling_step"] == 0.25
    est.set_params(alpha0=1e-6)
    assert clone(est).alpha0 == 1e-6


def test_indicator_fit_transform(data):
    est = indicator().fit(data)
    assert isinstance(est.curve_, IndicatorCurve)
    np.testing.assert_array_equal(est.curve_.k, KS)
    assert est.n_features_in_ == 32
    assert est.transform(data) is est.curve_
    assert len(est.transform(data[:3])) == 3
    assert len(est.peaks_) >= 1


def test_indicator_input_checks(data):
    with pytest.raises(InvalidArgumentError):
        indicator().fit([])
    with pytest.raises(InvalidArgumentError):
        indicator().fit(data[::-1])
    with pytest.raises(IncompatibleOperandsError):
        indicator().fit([data[0], mie_disk_farfield(2.0, 1.0, 1.9, DirectionGrid(16))])
    with pytest.raises(InvalidArgumentError):
        ArtificialBackgroundIndicator().fit(data)


def test_pipeline_recovers_index(data, reference):
    pipe = make_pipeline(indicator(), IndexRecovery(reference=reference))
    pipe.fit(data)
    n_hat = pipe.predict(data)[0]
    assert n_hat == pytest.approx(2.0, rel=2.5e-2)
    assert pipe.score(data, [2.0]) > -2.5e-2


def test_recovery_from_peak_array(reference):
    k = np.sqrt(reference.values[0] / 3.0)
    est = IndexRecovery(reference=reference).fit([k])
    assert est.predict()[0] == pytest.approx(3.0)
    with pytest.raises(InvalidArgumentError):
        IndexRecovery().fit([k])
