"""Physical constants, collapse parameters and finite-time delta utilities.

All quantities are SI. Two constant profiles are provided: ``CODATA``
(CODATA 2018 values via :mod:`scipy.constants`) and ``PAPER_COMPAT``
(the rounded Stefan-Boltzmann constant used for the published bounds).
Both default the reference mass ``m0`` to one atomic mass unit, which is
the value that makes the published lambda/rC^2 column consistent with its
power-per-mass column.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy import constants as _sc
from scipy import integrate

__all__ = [
    "PhysConstants",
    "CODATA",
    "PAPER_COMPAT",
    "get_profile",
    "CollapseParams",
    "gamma_from_lambda",
    "delta_t",
    "delta_t_integral",
    "squared_delta_ratio",
]

AMU = _sc.physical_constants["atomic mass constant"][0]
PROTON_MASS = _sc.m_p
NEUTRON_MASS = _sc.m_n
SOLAR_MASS = 1.98847e30  # IAU nominal GM_sun / G


@dataclass(frozen=True)
class PhysConstants:
    """A set of physical constants used by every top-level computation.

    Parameters
    ----------
    hbar : float
        Reduced Planck constant [J s].
    sigma_SB : float
        Stefan-Boltzmann constant [W m^-2 K^-4].
    m0 : float
        Reference nucleon mass of the mass-proportional coupling [kg].
    profile : str
        Label recorded in outputs, ``"codata"`` or ``"paper"``.
    """

    hbar: float
    sigma_SB: float
    m0: float
    profile: str

    def __post_init__(self):
        for name in ("hbar", "sigma_SB", "m0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.profile not in ("codata", "paper"):
            raise ValueError(f"unknown constants profile {self.profile!r}")

    def with_m0(self, m0):
        """Return a copy with a different reference mass.

        ``m0`` may be a mass in kg or one of ``"amu"``, ``"proton"``,
        ``"neutron"``.
        """
        if isinstance(m0, str):
            try:
                m0 = {"amu": AMU, "proton": PROTON_MASS, "neutron": NEUTRON_MASS}[m0]
            except KeyError:
                raise ValueError(f"unknown reference mass {m0!r}") from None
        return replace(self, m0=float(m0))


CODATA = PhysConstants(hbar=_sc.hbar, sigma_SB=_sc.Stefan_Boltzmann, m0=AMU, profile="codata")
PAPER_COMPAT = PhysConstants(hbar=_sc.hbar, sigma_SB=5.6e-8, m0=1.66054e-27, profile="paper")


def get_profile(name, m0=None):
    """Look up a constants profile by name (``codata`` or ``paper``)."""
    try:
        c = {"codata": CODATA, "paper": PAPER_COMPAT}[name.lower()]
    except KeyError:
        raise ValueError(f"unknown constants profile {name!r}; expected 'codata' or 'paper'") from None
    return c if m0 is None else c.with_m0(m0)


@dataclass(frozen=True)
class CollapseParams:
    """Collapse rate ``lam`` [1/s] and correlation length ``rC`` [m]."""

    lam: float
    rC: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError("collapse rate must be >= 0")
        if not self.rC > 0:
            raise ValueError("correlation length must be > 0")


def gamma_from_lambda(p):
    """White-noise collapse strength ``lam * (4 pi)^(3/2) * rC^3`` [m^3/s]."""
    return p.lam * (4.0 * np.pi) ** 1.5 * p.rC**3


def delta_t(delta_omega, t):
    """Finite-time delta function.

    Defined by ``int_0^t exp(i dw s) ds = 2 pi exp(i dw t / 2) delta_t(dw)``,
    i.e. ``sin(dw t / 2) / (pi dw)`` with the limit ``t / (2 pi)`` at
    ``dw = 0``. Vectorized over ``delta_omega``.
    """
    if not t > 0:
        raise ValueError("t must be > 0")
    x = np.asarray(delta_omega, dtype=float)
    # np.sinc(u) = sin(pi u)/(pi u)
    out = t / (2.0 * np.pi) * np.sinc(x * t / (2.0 * np.pi))
    return out if out.ndim else float(out)


def delta_t_integral(t):
    """Integral of ``delta_t`` over the whole real line (should be 1).

    The central interval is integrated directly; the tails use QUADPACK's
    Fourier-integral routine on ``1/(pi w)`` with a ``sin(w t/2)`` weight.
    """
    a = 2.0 * np.pi / t
    core, _ = integrate.quad(delta_t, 0.0, a, args=(t,), epsabs=0, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(lambda w: 1.0 / (np.pi * w), a, np.inf, weight="sin", wvar=t / 2.0)
    return 2.0 * (core + tail)


def squared_delta_ratio(t, width, test_function=None, n_per_period=64):
    """Ratio of the two sides of the squared finite-time delta identity.

    Returns ``int [delta_t(w)]^2 f(w) dw / ((t/2pi) int delta_t(w) f(w) dw)``
    for a smooth test function ``f`` of the given width (Gaussian by
    default). The ratio tends to 1 as ``t * width`` grows.
    """
    if test_function is None:
        def test_function(w):
            return np.exp(-0.5 * (w / width) ** 2)
    span = 12.0 * width
    n = int(np.ceil(2 * span * t / (2 * np.pi) * n_per_period)) | 1
    w = np.linspace(-span, span, n)
    d = delta_t(w, t)
    f = test_function(w)
    lhs = integrate.simpson(d * d * f, x=w)
    rhs = t / (2.0 * np.pi) * integrate.simpson(d * f, x=w)
    return lhs / rhs
