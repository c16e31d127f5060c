import numpy as np
import pytest
from scipy.special import jn_zeros, jnp_zeros

from artbg.exceptions import InvalidArgumentError, NoPeaksError, UnsupportedShapeError
from artbg.geometry import Dirichlet, Disk, Kite, MediumSpec, Robin
from artbg.indicator import PeakList
from artbg.spectra import (
    PlateLattice,
    Spectrum,
    buckling_spectrum,
    cavity_spectrum,
    disk_buckling_reference,
    disk_buckling_residual,
    disk_cavity_wavenumbers,
    extrapolated_buckling_spectrum,
    rayleigh_quotient,
    recover_index,
    richardson,
)

DISK = Disk((0.0, 0.0), 1.0)
H = 1 / 16
J11 = jn_zeros(1, 1)[0]
J01 = jn_zeros(0, 1)[0]


@pytest.fixture(scope="module")
def lat():
    return PlateLattice(DISK, H)


def layered(n_outer, n_inner):
    return MediumSpec(((DISK, n_outer), (Disk((0.2, 0.1), 0.5), n_inner)))


def both_spectra(medium, lat, count=5):
    b = buckling_spectrum(DISK, medium, H, count, lat=lat).values
    c = cavity_spectrum(DISK, medium, Dirichlet(), H, count, lat=lat).values
    return b, c


def test_lattice_needs_resolution():
    with pytest.raises(InvalidArgumentError):
        PlateLattice(DISK, 0.5)


def test_constant_scaling_exact(lat):
    b1, c1 = both_spectra(MediumSpec.constant(DISK, 1.0), lat)
    b3, c3 = both_spectra(MediumSpec.constant(DISK, 3.0), lat)
    np.testing.assert_allclose(b3, b1 / 3.0, rtol=1e-12)
    np.testing.assert_allclose(c3, c1 / 3.0, rtol=1e-12)


def test_piecewise_scaling_exact(lat):
    b, c = both_spectra(layered(2.0, 4.0), lat)
    b2, c2 = both_spectra(layered(5.0, 10.0), lat)
    np.testing.assert_allclose(b2, b * 2.0 / 5.0, rtol=1e-12)
    np.testing.assert_allclose(c2, c * 2.0 / 5.0, rtol=1e-12)


def test_monotonicity(lat):
    lo_b, lo_c = both_spectra(layered(2.0, 2.0), lat)
    hi_b, hi_c = both_spectra(layered(2.0, 5.0), lat)
    assert np.all(hi_b <= lo_b * (1 + 1e-12))
    assert np.all(hi_c <= lo_c * (1 + 1e-12))


def test_ess_bounds(lat):
    one_b, one_c = both_spectra(MediumSpec.constant(DISK, 1.0), lat)
    b, c = both_spectra(layered(1.5, 4.0), lat)
    for ratio in (one_b / b, one_c / c):
        assert np.all(ratio >= 1.5 * (1 - 1e-12))
        assert np.all(ratio <= 4.0 * (1 + 1e-12))


def test_non_positive_index_rejected(lat):
    with pytest.raises(InvalidArgumentError):
        buckling_spectrum(DISK, GeneralLike(), H, 2, lat=lat)


class GeneralLike:
    pieces = ()

    def index(self, p):
        return np.full(len(p), -1.0)


def test_rayleigh_quotient(lat, rng):
    med = layered(2.0, 3.0)
    spec = buckling_spectrum(DISK, med, H, 3, lat=lat)
    for p in range(3):
        assert rayleigh_quotient(spec.vectors[:, p], med, lat) == pytest.approx(spec.values[p], rel=1e-9)
    for _ in range(5):
        w = rng.standard_normal(len(lat))
        assert rayleigh_quotient(w, med, lat) >= spec.values[0] - 1e-9
    w = rng.standard_normal(len(lat))
    one = MediumSpec.constant(DISK, 1.0)
    four = MediumSpec.constant(DISK, 4.0)
    assert rayleigh_quotient(w, four, lat) == pytest.approx(rayleigh_quotient(w, one, lat) / 4, rel=1e-12)


def test_buckling_converges_under_refinement():
    errs = []
    for h in (1 / 16, 1 / 32, 1 / 48):
        lam = buckling_spectrum(DISK, MediumSpec.constant(DISK, 1.0), h, 1).values[0]
        errs.append(abs(lam - J11**2))
    assert errs[0] > errs[1] > errs[2]


def test_extrapolated_buckling_agrees_with_reference():
    ext = extrapolated_buckling_spectrum(DISK, MediumSpec.constant(DISK, 1.0), (1 / 16, 1 / 24, 1 / 32), 4)
    ref = disk_buckling_reference(4)
    np.testing.assert_allclose(ext.values, ref.values, rtol=2e-2)


def test_richardson_exact_on_linear_data():
    hs = np.array([0.1, 0.05, 0.025])
    assert richardson(hs, 3.0 + 7.0 * hs) == pytest.approx(3.0)
    with pytest.raises(InvalidArgumentError):
        richardson([0.1], [1.0])


def test_disk_buckling_reference():
    ref = disk_buckling_reference(8)
    assert ref.values[0] == pytest.approx(J11**2, abs=1e-8)
    assert np.all(np.diff(ref.values) >= 0)
    # m >= 1 modes come in pairs
    assert ref.values[1] == pytest.approx(ref.values[2])
    assert disk_buckling_reference(2, radius=2.0).values[0] == pytest.approx(J11**2 / 4)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_buckling_reduction_residual(m):
    # sqrt(lambda) = j_{m+1,s} solves the clamped radial system for order m
    for s in jn_zeros(m + 1, 3):
        assert abs(disk_buckling_residual(m, s)) < 1e-10


def test_cavity_dirichlet_disk_n2():
    lam = cavity_spectrum(DISK, MediumSpec.constant(DISK, 2.0), Dirichlet(), 1 / 64, 1).values[0]
    assert lam == pytest.approx(J01**2 / 2, rel=1e-2)


def test_cavity_converges_under_refinement():
    errs = []
    for h in (1 / 16, 1 / 32, 1 / 48):
        lam = cavity_spectrum(DISK, MediumSpec.constant(DISK, 1.0), Dirichlet(), h, 1).values[0]
        errs.append(abs(lam - J01**2))
    assert errs[0] > errs[1] > errs[2]


def test_cavity_dirichlet_kite_runs():
    k = Kite.inscribed()
    s = cavity_spectrum(k, MediumSpec.constant(k, 1.0), Dirichlet(), 1 / 32, 3)
    assert len(s) == 3 and np.all(s.values > 0)


def test_robin_limits():
    dirichlet = disk_cavity_wavenumbers(2.0, 1.0, None, 6)
    stiff = disk_cavity_wavenumbers(2.0, 1.0, 1e6, 6)
    np.testing.assert_allclose(stiff, dirichlet, atol=1e-3)
    neumann = disk_cavity_wavenumbers(1.0, 1.0, 0.0, 3)
    n1, n2 = jnp_zeros(1, 1)[0], jnp_zeros(2, 1)[0]
    np.testing.assert_allclose(neumann, [n1, n1, n2], rtol=1e-8)


def test_robin_cavity_spectrum_scaling():
    one = cavity_spectrum(DISK, MediumSpec.constant(DISK, 1.0), Robin(0.7), count=4).values
    two = cavity_spectrum(DISK, MediumSpec.constant(DISK, 2.0), Robin(0.7), count=4).values
    np.testing.assert_allclose(two, one / 2, rtol=1e-10)


def test_robin_cavity_needs_disk():
    with pytest.raises(UnsupportedShapeError):
        cavity_spectrum(Kite(), MediumSpec.constant(Kite(), 1.0), Robin(0.0), count=2)


def test_recover_exact_peaks():
    ref = disk_buckling_reference(8)
    lam = ref.distinct()[:4]
    report = recover_index(np.sqrt(lam / 2), ref)
    assert report.n_hat == pytest.approx(2.0, abs=1e-6)
    assert report.ess_inf_upper == pytest.approx(2.0) and report.ess_sup_lower == pytest.approx(2.0)
    assert len(report.pairs()) == 4


def test_recover_skips_missing_modes():
    ref = disk_buckling_reference(8)
    lam = ref.distinct()
    peaks = np.sqrt(lam[[0, 2, 3]] / 3.0) * np.array([1.0, 1.004, 0.997])
    report = recover_index(PeakList(peaks, np.ones(3), np.ones(3)), Spectrum("buckling", lam))
    assert list(report.reference_index) == [0, 2, 3]
    assert report.n_hat == pytest.approx(3.0, rel=1e-2)


def test_recover_errors():
    ref = disk_buckling_reference(2)
    with pytest.raises(NoPeaksError):
        recover_index([], ref)
    with pytest.raises(InvalidArgumentError):
        recover_index([1.0], ref, first_index=5)


def test_spectrum_must_ascend():
    with pytest.raises(InvalidArgumentError):
        Spectrum("x", [2.0, 1.0])
