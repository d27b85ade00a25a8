import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cslfermi.noise import (
    ExtrapolationWarning,
    GaussianCutoff,
    Lorentzian,
    Tabulated,
    UnderResolvedError,
    White,
    empirical_spectrum,
    gamma_at,
    kernel_g_fourier,
    kernel_integral,
    load_tabulated_csv,
    periodogram_psd,
    smearing_kernel_F,
    smearing_kernel_g,
    synthesize_noise,
    verify_correlator,
)

SPECTRA = [
    White(4.4547e-36),
    GaussianCutoff(1e6, 1.0),
    Lorentzian(2e3, 3.0),
    Tabulated(np.array([0.0, 1.0, 5.0, 10.0]), np.array([2.0, 1.5, 0.5, 0.0])),
]


def test_gamma_at_examples():
    assert gamma_at(White(4.4547e-36), 1e9) == 4.4547e-36
    assert gamma_at(GaussianCutoff(1e6, 1.0), 0.0) == 1.0
    assert gamma_at(GaussianCutoff(1e6, 1.0), 1e6) == pytest.approx(math.exp(-1), rel=1e-15)
    assert gamma_at(Lorentzian(1e3, 2.0), 1e3) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("spec", SPECTRA, ids=lambda s: type(s).__name__)
def test_spectrum_even_and_nonnegative(spec):
    rng = np.random.default_rng(1)
    w = rng.uniform(-10, 10, 1000) * (spec.scale or 1.0)
    if isinstance(spec, Tabulated):
        w = rng.uniform(-10, 10, 1000)
    assert np.array_equal(spec(w), spec(-w))
    assert np.all(spec(w) >= 0)


def test_tabulated_interpolates_in_abs_omega():
    tab = SPECTRA[-1]
    assert gamma_at(tab, 0.5) == pytest.approx(1.75)
    assert gamma_at(tab, -3.0) == pytest.approx(1.0)


def test_tabulated_extrapolation_is_flagged():
    tab = SPECTRA[-1]
    with pytest.warns(ExtrapolationWarning):
        assert gamma_at(tab, 11.0) == 0.0
    assert not tab.in_range(-11.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gamma_at(tab, 9.0)


@pytest.mark.parametrize("omega, values", [
    ([0.0, 0.0], [1.0, 1.0]),
    ([-1.0, 2.0], [1.0, 1.0]),
    ([0.0, 1.0], [1.0, -1.0]),
])
def test_tabulated_rejects_bad_grids(omega, values):
    with pytest.raises(ValueError):
        Tabulated(np.array(omega), np.array(values))


def test_load_tabulated_csv(tmp_path):
    path = tmp_path / "spec.csv"
    path.write_text("omega_rad_per_s,gamma_m3_per_s\n0,2.0\n10,1.0\n20,0.5\n")
    tab = load_tabulated_csv(path)
    assert gamma_at(tab, -15.0) == pytest.approx(0.75)


@pytest.mark.parametrize("text, msg", [
    ("0,1\n1,2\n", "header"),
    ("omega_rad_per_s,gamma_m3_per_s\n0,1\n0,2\n", "line 3"),
    ("omega_rad_per_s,gamma_m3_per_s\n0,1\n1,x\n", "line 3"),
    ("omega_rad_per_s,gamma_m3_per_s\n0,1,2\n", "line 2"),
])
def test_load_tabulated_csv_errors(tmp_path, text, msg):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ValueError, match=msg):
        load_tabulated_csv(path)


def test_kernel_peaks():
    assert smearing_kernel_g(0.0, 1.0) == pytest.approx((2 * math.pi) ** -1.5, rel=1e-15)
    assert smearing_kernel_F(0.0, 1.0) == pytest.approx((4 * math.pi) ** -1.5, rel=1e-15)
    assert smearing_kernel_g(0.0, 1.0) == pytest.approx(0.063494, rel=1e-5)
    assert smearing_kernel_F(0.0, 1.0) == pytest.approx(0.022443, rel=1e-3)


@pytest.mark.parametrize("kernel", [smearing_kernel_g, smearing_kernel_F])
@pytest.mark.parametrize("rC", [1.0, 1e-7])
def test_kernel_normalization(kernel, rC):
    assert kernel_integral(kernel, rC) == pytest.approx(1.0, abs=1e-6)


def test_F_is_self_convolution_of_g():
    # radial convolution at separation d via 3-d Gauss-Hermite-free brute force on a grid
    rC, d = 1.0, 0.7
    x = np.linspace(-7, 7, 141)
    h = x[1] - x[0]
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    conv = np.sum(smearing_kernel_g(np.sqrt(X**2 + Y**2 + Z**2), rC)
                  * smearing_kernel_g(np.sqrt((X - d) ** 2 + Y**2 + Z**2), rC)) * h**3
    assert conv == pytest.approx(float(smearing_kernel_F(d, rC)), rel=1e-6)


@pytest.mark.parametrize("rC", [1.0, 2e-7])
def test_kernel_fourier_pair(rC):
    q = np.linspace(0, 5 / rC, 21)
    num = np.array([kernel_g_fourier(qi, rC) for qi in q])
    assert np.max(np.abs(num - np.exp(-(q * rC) ** 2 / 2))) < 1e-4


def test_synthesis_deterministic():
    a = synthesize_noise(GaussianCutoff(1e3), 1e-5, 1024, seed=7)
    b = synthesize_noise(GaussianCutoff(1e3), 1e-5, 1024, seed=7)
    c = synthesize_noise(GaussianCutoff(1e3), 1e-5, 1024, seed=8)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)
    assert "Philox" in a.rng_algorithm


def test_synthesis_rejects_underresolved():
    with pytest.raises(UnderResolvedError):
        synthesize_noise(GaussianCutoff(1e3), 1e-4, 1024, seed=0)
    with pytest.raises(ValueError):
        synthesize_noise(White(1.0), 1e-3, 1, seed=0)


def _autocov(x, lag):
    x = x - x.mean()
    return np.mean(x[:-lag] * x[lag:]) if lag else np.mean(x * x)


def test_white_noise_uncorrelated():
    x = synthesize_noise(White(1.0), 1e-3, 2**16, seed=3).samples
    var = _autocov(x, 0)
    # variance of discretized white noise is gamma/dt
    assert var == pytest.approx(1e3, rel=0.02)
    se = var / math.sqrt(x.size)
    for lag in (1, 2, 5, 17):
        assert abs(_autocov(x, lag)) < 3 * se


def test_colored_noise_positively_correlated():
    x = synthesize_noise(GaussianCutoff(1e3), 1e-5, 2**16, seed=3).samples
    assert _autocov(x, 1) / _autocov(x, 0) > 0.9


def test_zero_mean():
    x = synthesize_noise(Lorentzian(1e3), 1e-5, 2**18, seed=11).samples
    sd = x.std()
    # correlated samples: allow for ~ (correlation time / dt) effective reduction
    assert abs(x.mean()) < 5 * sd * math.sqrt(100 / x.size)


def test_empirical_spectrum_independent_of_chunking():
    args = (GaussianCutoff(1e3), [0.0, 800.0], 0.05, 5e-5, 40, 5)
    a = empirical_spectrum(*args, chunk=7)
    b = empirical_spectrum(*args, chunk=256)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-12)


def test_verify_correlator_white():
    r = verify_correlator(White(1.0), 0.0, t=1.0, n_realizations=2000, seed=1)
    assert r.rel_error < 0.05
    assert r.consistent


def test_verify_correlator_far_beyond_cutoff():
    r = verify_correlator(GaussianCutoff(1e3, 1.0), 1e4, t=1.0, n_realizations=1000, seed=2)
    assert r.target < 1e-40
    assert r.empirical < 1e-3
    assert r.consistent


def test_verify_correlator_flags_wrong_target():
    # a trajectory built from one spectrum cannot match another's value at omega = Omega
    r = verify_correlator(GaussianCutoff(1e3, 1.0), 1e3, t=0.5, n_realizations=1000, seed=4)
    assert r.empirical == pytest.approx(math.exp(-1), rel=0.1)
    assert abs(r.empirical - 0.5) > 5 * r.stderr


@pytest.mark.parametrize("spec", [White(2.0), GaussianCutoff(1e3), Lorentzian(1e3)],
                         ids=lambda s: type(s).__name__)
def test_generator_fidelity(spec):
    omegas = np.linspace(0.0, 2e3, 10)
    est = periodogram_psd(spec, omegas, 5e-5, 2**16, 1000, seed=3)
    np.testing.assert_allclose(est, spec(omegas), rtol=0.05)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.0, 1e9), st.floats(0.0, 1e10))
def test_first_moment_matches_quadrature(omega_c, w):
    from scipy import integrate
    for spec in (GaussianCutoff(omega_c), Lorentzian(omega_c)):
        w_eff = min(w, 50 * omega_c)
        ref, _ = integrate.quad(lambda x: x * float(spec(x)), 0, w_eff, epsrel=1e-11, limit=200)
        assert spec.first_moment(w_eff) == pytest.approx(ref, rel=1e-8, abs=1e-300)
