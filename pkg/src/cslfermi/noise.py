"""Collapse-noise spectra, smearing kernels and a colored-noise generator.

The noise spectrum ``gamma(omega)`` is the frequency-dependent collapse
strength [m^3/s]. It is even in ``omega`` and enters the time correlator as

    E[w(t) w(s)] = (1/2pi) int dw gamma(w) exp(-i w (t - s)),

so for a single spatial mode ``E |int_0^t exp(i w s) w(s) ds|^2 / t``
tends to ``gamma(w)`` at long times. :func:`verify_correlator` checks that
relation by Monte Carlo on trajectories from :func:`synthesize_noise`.
"""

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

__all__ = [
    "ExtrapolationWarning",
    "UnderResolvedError",
    "NoiseSpectrum",
    "White",
    "GaussianCutoff",
    "Lorentzian",
    "Tabulated",
    "load_tabulated_csv",
    "gamma_at",
    "smearing_kernel_g",
    "smearing_kernel_F",
    "kernel_integral",
    "kernel_g_fourier",
    "RNG_ALGORITHM",
    "NoiseTrajectory",
    "synthesize_noise",
    "empirical_spectrum",
    "periodogram_psd",
    "CorrelatorReport",
    "verify_correlator",
]


class ExtrapolationWarning(UserWarning):
    """A tabulated spectrum was queried outside its grid and returned 0."""


class UnderResolvedError(ValueError):
    """The time step is too coarse to resolve the spectrum."""


class NoiseSpectrum:
    """Base class for even, non-negative spectra ``gamma(omega)``."""

    gamma0: float
    #: characteristic frequency [rad/s] or None for flat spectra
    scale = None

    def __call__(self, omega):
        return self._eval(np.abs(np.asarray(omega, dtype=float)))

    def _eval(self, w):
        raise NotImplementedError

    @property
    def peak(self):
        """Maximum of ``gamma`` over all frequencies."""
        return self.gamma0

    def first_moment(self, omega):
        """``int_0^omega w gamma(w) dw`` in closed form, or None if unavailable.

        Even in ``omega``. Used by the heating quadrature to integrate over
        the scattering angle analytically.
        """
        return None


@dataclass(frozen=True)
class White(NoiseSpectrum):
    gamma0: float

    def __post_init__(self):
        if not self.gamma0 >= 0:
            raise ValueError("gamma0 must be >= 0")

    def _eval(self, w):
        return np.full_like(w, self.gamma0)

    def first_moment(self, omega):
        return 0.5 * self.gamma0 * np.square(omega)


@dataclass(frozen=True)
class GaussianCutoff(NoiseSpectrum):
    """``gamma0 * exp(-omega^2 / Omega^2)``."""

    Omega: float
    gamma0: float = 1.0

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError("cutoff frequency must be > 0")
        if not self.gamma0 >= 0:
            raise ValueError("gamma0 must be >= 0")

    @property
    def scale(self):
        return self.Omega

    def _eval(self, w):
        return self.gamma0 * np.exp(-((w / self.Omega) ** 2))

    def first_moment(self, omega):
        return -0.5 * self.gamma0 * self.Omega**2 * np.expm1(-np.square(omega / self.Omega))


@dataclass(frozen=True)
class Lorentzian(NoiseSpectrum):
    """``gamma0 * Omega^2 / (omega^2 + Omega^2)``."""

    Omega: float
    gamma0: float = 1.0

    def __post_init__(self):
        if not self.Omega > 0:
            raise ValueError("cutoff frequency must be > 0")
        if not self.gamma0 >= 0:
            raise ValueError("gamma0 must be >= 0")

    @property
    def scale(self):
        return self.Omega

    def _eval(self, w):
        return self.gamma0 / (1.0 + (w / self.Omega) ** 2)

    def first_moment(self, omega):
        return 0.5 * self.gamma0 * self.Omega**2 * np.log1p(np.square(omega / self.Omega))


@dataclass(frozen=True, eq=False)
class Tabulated(NoiseSpectrum):
    """Spectrum interpolated linearly in ``|omega|`` on a non-negative grid.

    Queries with ``|omega|`` outside ``[omega[0], omega[-1]]`` return 0 and
    raise an :class:`ExtrapolationWarning`.
    """

    omega: np.ndarray
    values: np.ndarray
    gamma0: float = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        g = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or w.shape != g.shape or w.size < 2:
            raise ValueError("need matching 1-d omega and gamma arrays with at least 2 points")
        if w[0] < 0 or np.any(np.diff(w) <= 0):
            raise ValueError("omega grid must be >= 0 and strictly increasing")
        if np.any(g < 0):
            raise ValueError("tabulated gamma must be non-negative")
        object.__setattr__(self, "omega", w)
        object.__setattr__(self, "values", g)
        object.__setattr__(self, "gamma0", float(g.max()))

    def in_range(self, omega):
        w = np.abs(np.asarray(omega, dtype=float))
        return (w >= self.omega[0]) & (w <= self.omega[-1])

    def _eval(self, w):
        inside = (w >= self.omega[0]) & (w <= self.omega[-1])
        if not np.all(inside):
            warnings.warn(
                f"tabulated spectrum queried outside [{self.omega[0]:g}, {self.omega[-1]:g}] rad/s; "
                "returning 0 there",
                ExtrapolationWarning,
                stacklevel=3,
            )
        return np.where(inside, np.interp(w, self.omega, self.values), 0.0)


def load_tabulated_csv(path):
    """Read a two-column CSV ``omega_rad_per_s,gamma_m3_per_s`` (header required)."""
    omega, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["omega_rad_per_s", "gamma_m3_per_s"]:
            raise ValueError(f"{path}: line 1: expected header 'omega_rad_per_s,gamma_m3_per_s'")
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            if len(row) != 2:
                raise ValueError(f"{path}: line {reader.line_num}: expected 2 columns, got {len(row)}")
            try:
                w, g = float(row[0]), float(row[1])
            except ValueError:
                raise ValueError(f"{path}: line {reader.line_num}: non-numeric value") from None
            if w < 0 or (omega and w <= omega[-1]):
                raise ValueError(f"{path}: line {reader.line_num}: omega must be >= 0 and strictly increasing")
            omega.append(w)
            values.append(g)
    return Tabulated(np.array(omega), np.array(values))


def gamma_at(spec, omega):
    """Evaluate ``gamma(omega)`` [m^3/s]; scalar in, scalar out."""
    out = spec(omega)
    return out if np.ndim(out) else float(out)


def smearing_kernel_g(x, rC):
    """Gaussian ``exp(-x^2/2rC^2) / (sqrt(2pi) rC)^3`` at distance ``x``."""
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (2 * rC**2)) / (np.sqrt(2 * np.pi) * rC) ** 3


def smearing_kernel_F(x, rC):
    """Gaussian ``exp(-x^2/4rC^2) / (sqrt(4pi) rC)^3``, the self-convolution of g."""
    x = np.asarray(x, dtype=float)
    return np.exp(-(x**2) / (4 * rC**2)) / (np.sqrt(4 * np.pi) * rC) ** 3


def kernel_integral(kernel, rC, half_width=8.0, n_nodes=96):
    """Integrate a radial kernel over the cube ``[-h rC, h rC]^3``.

    Tensor-product Gauss-Legendre rule with ``n_nodes`` per axis.
    """
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    h = half_width * rC
    x, w = x * h, w * h
    r2 = x[:, None, None] ** 2 + x[None, :, None] ** 2 + x[None, None, :] ** 2
    return float(np.einsum("i,j,k,ijk->", w, w, w, kernel(np.sqrt(r2), rC)))


def kernel_g_fourier(q, rC):
    """Numerical 3-d Fourier transform of ``g`` at wavenumber ``q`` [1/m].

    Uses the radial form ``4 pi int r^2 g(r) sin(q r)/(q r) dr``.
    """
    def f(r):
        return 4 * np.pi * r * r * smearing_kernel_g(r, rC) * np.sinc(q * r / np.pi)

    val, _ = integrate.quad(f, 0.0, 12 * rC, epsabs=1e-13, epsrel=1e-10, limit=200)
    return val


RNG_ALGORITHM = "numpy Philox4x64-10, key from SeedSequence([seed, realization])"


def _rng(seed, realization):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, realization])))


@dataclass(frozen=True, eq=False)
class NoiseTrajectory:
    """One real noise mode ``w(s)`` sampled every ``dt`` seconds."""

    dt: float
    samples: np.ndarray
    seed: int
    realization: int = 0
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def t(self):
        return self.dt * np.arange(self.samples.size)


def _check_resolution(spec, dt):
    if spec.scale is not None and dt * spec.scale >= 0.1:
        raise UnderResolvedError(
            f"dt * Omega = {dt * spec.scale:.3g} >= 0.1; reduce dt below {0.1 / spec.scale:.3g} s"
        )


def _spectral_filter(spec, dt, n):
    w = 2 * np.pi * np.fft.rfftfreq(n, dt)
    return np.sqrt(spec(w) / dt)


def _synthesize(filt, n, seed, realizations):
    z = np.stack([_rng(seed, int(r)).standard_normal(n) for r in realizations])
    return np.fft.irfft(np.fft.rfft(z, axis=1) * filt, n=n, axis=1)


def synthesize_noise(spec, dt, n_samples, seed, realization=0):
    """Draw a stationary Gaussian trajectory with two-sided spectrum ``gamma``.

    Spectral synthesis: white Gaussian samples are Fourier transformed,
    scaled by ``sqrt(gamma(w_k) / dt)`` and transformed back, so that the
    discrete-time process has variance ``(1/2pi) int gamma dw`` over the
    Nyquist band. The trajectory is periodic with period ``n_samples * dt``;
    callers that need aperiodic statistics should use a window much shorter
    than that.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    _check_resolution(spec, dt)
    filt = _spectral_filter(spec, dt, n_samples)
    x = _synthesize(filt, n_samples, seed, [realization])[0]
    return NoiseTrajectory(dt=dt, samples=x, seed=seed, realization=realization)


def empirical_spectrum(spec, omegas, t, dt, n_realizations, seed, pad=2, chunk=256):
    """Monte Carlo estimate of ``E |int_0^t exp(i w s) w(s) ds|^2 / t``.

    Each realization is synthesized over ``pad * t`` and integrated over the
    first ``t`` seconds (rectangle rule). Returns ``(mean, stderr)`` arrays
    over ``omegas``. Realizations are seeded individually so results do not
    depend on ``chunk``.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    _check_resolution(spec, dt)
    n = int(round(t / dt))
    n_total = pad * n
    filt = _spectral_filter(spec, dt, n_total)
    phase = np.exp(1j * np.outer(np.arange(n) * dt, omegas))  # (n, n_omega)
    # Welford accumulation across chunks
    count, mean, m2 = 0, np.zeros(omegas.size), np.zeros(omegas.size)
    for start in range(0, n_realizations, chunk):
        stop = min(start + chunk, n_realizations)
        x = _synthesize(filt, n_total, seed, range(start, stop))[:, :n]
        vals = np.abs(x @ phase * dt) ** 2 / (n * dt)
        for v in vals:
            count += 1
            d = v - mean
            mean += d / count
            m2 += d * (v - mean)
    stderr = np.sqrt(m2 / (count - 1) / count) if count > 1 else np.full(omegas.size, np.inf)
    return mean, stderr


def periodogram_psd(spec, omegas, dt, n_samples, n_realizations, seed, half_band=16, chunk=64):
    """Band-averaged periodogram estimate of the two-sided spectrum.

    Periodograms ``|dt * rfft(w)|^2 / (n dt)`` of independent trajectories
    are averaged, then smoothed over ``2 half_band + 1`` frequency bins
    centred on the bin nearest each requested ``omega``.
    """
    omegas = np.abs(np.atleast_1d(np.asarray(omegas, dtype=float)))
    _check_resolution(spec, dt)
    filt = _spectral_filter(spec, dt, n_samples)
    acc = np.zeros(n_samples // 2 + 1)
    for start in range(0, n_realizations, chunk):
        stop = min(start + chunk, n_realizations)
        x = _synthesize(filt, n_samples, seed, range(start, stop))
        acc += np.sum(np.abs(np.fft.rfft(x, axis=1) * dt) ** 2, axis=0)
    pgram = acc / n_realizations / (n_samples * dt)
    dw = 2 * np.pi / (n_samples * dt)
    # mirror to negative frequencies so bands near zero stay centred
    full = np.concatenate([pgram[:0:-1], pgram])
    idx = np.rint(omegas / dw).astype(int) + pgram.size - 1
    if np.any(idx + half_band >= full.size):
        raise ValueError("requested frequency band exceeds the Nyquist frequency")
    return np.array([full[i - half_band: i + half_band + 1].mean() for i in idx])


@dataclass(frozen=True)
class CorrelatorReport:
    omega: float
    empirical: float
    target: float
    stderr: float
    rel_error: float
    abs_error: float
    n_realizations: int
    consistent: bool
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


def verify_correlator(spec, omega_probe, t, n_realizations=1000, seed=0, dt=None, atol=None):
    """Compare the Monte Carlo second moment against ``gamma_at(spec, omega_probe)``.

    ``consistent`` is False when the empirical value differs from the target
    by more than five standard errors plus ``atol`` (default ``1e-3`` of the
    spectrum peak, the floor set by finite-window leakage).
    """
    if n_realizations < 2:
        raise ValueError("need at least 2 realizations")
    if dt is None:
        top = max(abs(omega_probe), spec.scale or 0.0)
        dt = min(0.05 / spec.scale if spec.scale else np.inf, np.pi / (4 * top) if top else t / 1024)
        dt = t / np.ceil(t / dt)
    if atol is None:
        atol = 1e-3 * spec.peak
    mean, se = empirical_spectrum(spec, [omega_probe], t, dt, n_realizations, seed)
    target = gamma_at(spec, omega_probe)
    emp, se = float(mean[0]), float(se[0])
    abs_err = abs(emp - target)
    rel = abs_err / target if target > 0 else np.inf
    return CorrelatorReport(
        omega=float(omega_probe),
        empirical=emp,
        target=target,
        stderr=se,
        rel_error=rel,
        abs_error=abs_err,
        n_realizations=n_realizations,
        consistent=abs_err <= 5 * se + atol,
        seed=seed,
    )
