import numpy as np
import pytest

from artbg.background import artificial_farfield, obstacle_farfield, sharp_operator
from artbg.exceptions import InvalidArgumentError
from artbg.forward import mie_disk_farfield
from artbg.geometry import CONVENTION, DirectionGrid, Dirichlet, Disk, make_sampling_grid
from artbg.indicator import (
    AlphaRule,
    IndicatorCurve,
    TikhonovGLSM,
    detect_peaks,
    indicator_at_k,
    indicator_curve,
    point_source_rhs,
    tikhonov_density,
)

DISK = Disk((0.0, 0.0), 1.0)
G = DirectionGrid(32)
SAMPLING = make_sampling_grid(DISK, 0.25)


def mie_data(k):
    return mie_disk_farfield(2.0, 1.0, k, G)


def dirichlet_bg(k):
    return obstacle_farfield(DISK, Dirichlet(), k, G)


@pytest.fixture(scope="module")
def glsm_k2():
    F = artificial_farfield(mie_data(2.0), dirichlet_bg(2.0))
    T = sharp_operator(dirichlet_bg(2.0))
    return F, T


def test_point_source_origin_and_modulus():
    phi = point_source_rhs((0.0, 0.0), 3.0, G)
    np.testing.assert_allclose(phi, CONVENTION.gamma(3.0) * np.ones(32), rtol=1e-15)
    phi = point_source_rhs((0.3, -0.4), 3.0, G)
    np.testing.assert_allclose(np.abs(phi), abs(CONVENTION.gamma(3.0)), rtol=1e-14)


def test_point_source_translation():
    z, t, k = np.array([0.1, 0.2]), np.array([-0.3, 0.25]), 2.5
    shifted = point_source_rhs(z + t, k, G)
    np.testing.assert_allclose(shifted, point_source_rhs(z, k, G) * np.exp(-1j * k * G.directions @ t), rtol=1e-13)


def test_point_source_columns_and_sign():
    pts = np.array([[0.0, 0.0], [0.2, 0.1]])
    assert point_source_rhs(pts, 2.0, G).shape == (32, 2)
    np.testing.assert_allclose(point_source_rhs((0.2, 0.1), 2.0, G, sign="bare"), np.exp(2j * G.directions @ [0.2, 0.1]))
    with pytest.raises(InvalidArgumentError):
        point_source_rhs((0, 0), 2.0, G, sign="other")


def test_zero_rhs_gives_zero(glsm_k2):
    F, T = glsm_k2
    res = tikhonov_density(F, T, np.zeros(32), 1e-3)
    assert np.all(res.g == 0) and res.penalty == 0 and res.misfit == 0


def test_large_alpha_limit(glsm_k2):
    F, T = glsm_k2
    phi = point_source_rhs((0.2, 0.1), 2.0, G)
    res = tikhonov_density(F, T, phi, 1e12)
    assert np.linalg.norm(res.g) < 1e-8
    assert res.misfit == pytest.approx(G.weight * np.sum(np.abs(phi) ** 2), rel=1e-6)


def test_optimality_under_perturbations(glsm_k2, rng):
    F, T = glsm_k2
    phi = point_source_rhs((0.2, 0.1), 2.0, G)
    solver = TikhonovGLSM(F.operator(), T.matrix, 1e-4, G.weight)
    res = solver(phi)
    J0 = solver.objective(res.g, phi)
    for _ in range(100):
        d = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        d *= 1e-3 / np.linalg.norm(d)
        assert solver.objective(res.g + d, phi) >= J0 - 1e-12


def test_misfit_non_increasing_in_alpha(glsm_k2):
    F, T = glsm_k2
    phi = point_source_rhs(SAMPLING.points, 2.0, G)
    misfits = [tikhonov_density(F, T, phi, a).misfit for a in np.logspace(-3, -4, 6)]
    for a, b in zip(misfits, misfits[1:]):
        assert np.all(b <= a * (1 + 1e-9))


def test_alpha_must_be_positive(glsm_k2):
    F, T = glsm_k2
    with pytest.raises(InvalidArgumentError):
        tikhonov_density(F, T, np.ones(32), 0.0)


def test_alpha_rule():
    F = np.diag([3.0, 1.0])
    T = np.diag([2.0, 0.5])
    assert AlphaRule(1e-2)(F, T) == pytest.approx(1e-2 * 9 / 2)
    assert AlphaRule(1e-2, relative=False)(F, T) == 1e-2


def test_indicator_zero_when_data_equals_background():
    bg = dirichlet_bg(2.0)
    value, diag = indicator_at_k(bg.farfield, bg, SAMPLING)
    assert value == 0.0
    assert np.all(diag["penalty"] == 0)


def test_indicator_non_negative_and_scaling():
    ks = np.linspace(1.5, 2.0, 11)
    base = indicator_curve(ks, mie_data, dirichlet_bg, SAMPLING)
    assert np.all(base.values >= 0)
    scaled = indicator_curve(ks, mie_data, dirichlet_bg, SAMPLING, scale=3.0)
    np.testing.assert_allclose(scaled.values, 9.0 * base.values, rtol=1e-8)
    np.testing.assert_allclose(detect_peaks(scaled).k, detect_peaks(base).k, atol=1e-10)


def test_dirichlet_peak_near_cavity_eigenvalue():
    # series data: the peak sits at the first Dirichlet cavity eigenvalue of n = 2
    ks = np.round(np.arange(1.55, 1.86, 0.01), 2)
    peaks = detect_peaks(indicator_curve(ks, mie_data, dirichlet_bg, SAMPLING))
    assert len(peaks) >= 1
    assert peaks.k[np.argmax(peaks.prominence)] == pytest.approx(2.404826 / np.sqrt(2), rel=5e-3)


def test_curve_single_point_and_empty():
    c = indicator_curve([2.0], mie_data, dirichlet_bg, SAMPLING)
    assert len(c) == 1
    with pytest.raises(InvalidArgumentError):
        indicator_curve([], mie_data, dirichlet_bg, SAMPLING)
    with pytest.raises(InvalidArgumentError):
        indicator_curve([2.0, 1.0], mie_data, dirichlet_bg, SAMPLING)


def test_curve_records_failures():
    def broken(k):
        if k > 1.9:
            raise RuntimeError("no data")
        return mie_data(k)

    c = indicator_curve([1.8, 1.85, 1.95], broken, dirichlet_bg, SAMPLING)
    assert np.isnan(c.values[2]) and np.isfinite(c.values[:2]).all()
    assert 1.95 in c.metadata["failures"]


def test_parallel_curve_matches_serial():
    ks = [1.6, 1.7, 1.8]
    a = indicator_curve(ks, mie_data, dirichlet_bg, SAMPLING)
    b = indicator_curve(ks, mie_data, dirichlet_bg, SAMPLING, jobs=2)
    np.testing.assert_array_equal(a.values, b.values)


def lorentz(k, k0, w=0.03, height=50.0):
    return height / (1 + ((k - k0) / w) ** 2)


def synthetic_curve(centres):
    k = np.round(np.arange(3.0, 7.0001, 0.01), 2)
    v = 1.0 + sum(lorentz(k, c) for c in centres)
    return IndicatorCurve(k, v, np.full(k.shape, 1e-5))


def test_detect_monotone():
    k = np.linspace(1, 2, 50)
    assert len(detect_peaks(IndicatorCurve(k, np.exp(k), np.ones(50)))) == 0


def test_detect_single_lorentzian():
    p = detect_peaks(synthetic_curve([5.0]))
    assert len(p) == 1
    assert abs(p.k[0] - 5.0) <= 0.01


def test_detect_two_lorentzians():
    p = detect_peaks(synthetic_curve([4.2, 4.3]))
    assert len(p) == 2
    np.testing.assert_allclose(p.k, [4.2, 4.3], atol=0.01)


def test_detect_off_grid_refinement():
    p = detect_peaks(synthetic_curve([5.003]))
    assert abs(p.k[0] - 5.003) < 0.003


def test_curve_validation():
    with pytest.raises(InvalidArgumentError):
        IndicatorCurve([1.0, 1.0], [1.0, 2.0], [1.0, 1.0])
