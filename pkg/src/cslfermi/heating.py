"""CSL heating power of a free Fermi gas.

Three routes to the same quantity:

* :func:`heating_white` - closed form ``(3/4) hbar^2 lam M / (m0^2 rC^2)``;
* :func:`heating_colored` - nested adaptive quadrature of the long-time
  rate for an arbitrary even spectrum ``gamma(omega)``, averaged over the
  occupied momenta;
* :func:`discrete_box_sum` - the same rate as a sum over periodic box modes
  ``k = 2 pi n / L``, used as an oracle for the continuum limit and for the
  cancellation of the Pauli-blocking term.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .core import CODATA, gamma_from_lambda
from .noise import ExtrapolationWarning, White

__all__ = [
    "FermiGas",
    "HeatingResult",
    "QuadConfig",
    "QuadratureError",
    "omega_bar",
    "heating_white",
    "heating_colored",
    "BoxSumResult",
    "box_modes_in_sphere",
    "discrete_box_sum",
    "white_box_limit",
]


@dataclass(frozen=True)
class FermiGas:
    """Free gas of constituents of mass ``m_A`` with total mass ``M_total``.

    ``occupation`` is ``"step"`` (zero-temperature Fermi sphere of radius
    ``k_F``, momentum-magnitude density ``3 k^2 / k_F^3``) or ``"single"``
    (every particle at momentum magnitude ``k_single``). ``k_F = 0`` with a
    step occupation is treated as a single particle at rest.
    """

    m_A: float
    k_F: float
    M_total: float
    occupation: str = "step"
    k_single: float = 0.0

    def __post_init__(self):
        if not self.m_A > 0:
            raise ValueError("m_A must be > 0")
        if not self.k_F >= 0 or not self.k_single >= 0:
            raise ValueError("wavenumbers must be >= 0")
        if not self.M_total >= self.m_A:
            raise ValueError("M_total must be >= m_A")
        if self.occupation not in ("step", "single"):
            raise ValueError(f"unknown occupation {self.occupation!r}")

    @property
    def n_particles(self):
        return self.M_total / self.m_A

    @property
    def single_momentum(self) -> Optional[float]:
        """Momentum magnitude if all particles share it, else None."""
        if self.occupation == "single":
            return self.k_single
        if self.k_F == 0:
            return 0.0
        return None


@dataclass(frozen=True)
class HeatingResult:
    power: float
    per_particle_power: float
    method: str  # "closed_form_white" | "colored_quadrature" | "discrete_box_sum"
    quadrature_error_estimate: float = 0.0
    extrapolated: bool = False


@dataclass(frozen=True)
class QuadConfig:
    """Settings for :func:`heating_colored`.

    ``rtol`` is used at every nesting level. ``q_max_rc`` truncates the
    momentum-transfer integral at ``q_max_rc / rC`` where the Gaussian
    envelope is ``exp(-q_max_rc^2)``. With ``angular="auto"`` the angular
    integral uses the spectrum's closed-form first moment when it has one;
    ``"quad"`` forces adaptive quadrature at all three levels.
    """

    rtol: float = 1e-8
    q_max_rc: float = 8.0
    limit: int = 200
    angular: str = "auto"  # "auto" | "quad"

    def __post_init__(self):
        if not 0 < self.rtol <= 1e-2:
            raise ValueError("rtol must lie in (0, 1e-2]")
        if self.angular not in ("auto", "quad"):
            raise ValueError("angular must be 'auto' or 'quad'")


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, best_estimate, error_bound):
        super().__init__(f"{message} (best estimate {best_estimate:.6g} W, error bound {error_bound:.3g} W)")
        self.best_estimate = best_estimate
        self.error_bound = error_bound


def omega_bar(q_vec, k_i, m_A, constants=CODATA):
    """Energy transfer frequency ``(hbar / 2 m_A)(q^2 + 2 k_i . q)`` [rad/s]."""
    q = np.asarray(q_vec, dtype=float)
    k = np.asarray(k_i, dtype=float)
    w = constants.hbar / (2.0 * m_A) * (np.sum(q * q, axis=-1) + 2.0 * np.sum(k * q, axis=-1))
    return w if np.ndim(w) else float(w)


def heating_white(M_total, p, constants=CODATA, m_A=None):
    """Closed-form white-noise heating power of a body of mass ``M_total``.

    ``m_A`` (default ``constants.m0``) only sets ``per_particle_power``.
    """
    if m_A is None:
        m_A = constants.m0
    power = 0.75 * constants.hbar**2 * p.lam * M_total / (constants.m0**2 * p.rC**2)
    return HeatingResult(
        power=power,
        per_particle_power=power * m_A / M_total,
        method="closed_form_white",
    )


class _Quad:
    """Wraps ``scipy.integrate.quad`` and records non-convergence."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.failed = False

    def __call__(self, f, a, b, epsabs, points=None):
        if points is not None:
            points = [x for x in points if a < x < b] or None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            out = integrate.quad(
                f, a, b, epsabs=epsabs, epsrel=self.cfg.rtol,
                limit=max(self.cfg.limit, len(points or ()) + 2),
                points=points, full_output=1,
            )
        # a convergence message is appended only when ier != 0
        if len(out) > 3:
            self.failed = True
        return out[0], out[1]


def heating_colored(gas, spec, p, constants=CODATA, quad_cfg=QuadConfig()):
    """Long-time heating power for an arbitrary even noise spectrum.

    Evaluates, per particle,

        (m_A/m0)^2 (2pi)^-3 < int d^3q hbar w(q) exp(-q^2 rC^2) gamma(w(q)) >_k,

    with ``w(q) = (hbar / 2 m_A)(q^2 + 2 k.q)``, by reducing the ``q``
    integral to ``(|q|, cos theta)`` and averaging over ``|k|`` with the
    occupation density. Works in units ``u = q rC``, ``kappa = k rC``.

    ``spec`` gives the spectrum shape; the strength is taken from
    ``spec.gamma0`` unless ``spec`` is :class:`White`, in which case it is
    rebuilt from ``p`` so that ``lam`` is honoured.

    Raises
    ------
    QuadratureError
        if any level of the nested quadrature fails to converge.
    """
    hbar, m_A, rC = constants.hbar, gas.m_A, p.rC
    if isinstance(spec, White):
        spec = White(gamma_from_lambda(p))
    wc = hbar / (2.0 * m_A * rC**2)  # frequency unit
    pref = (m_A / constants.m0) ** 2 / (2 * np.pi) ** 3 * hbar * wc / rC**3 * 2 * np.pi

    u_max = quad_cfg.q_max_rc
    quad = _Quad(quad_cfg)
    peak = spec.peak
    if peak == 0:
        return HeatingResult(0.0, 0.0, "colored_quadrature")
    # absolute floors are rtol times the white-noise value at the peak strength
    tol = quad_cfg.rtol
    white_ref = 3 * np.sqrt(np.pi) / 4  # 2 int u^4 exp(-u^2) du

    extrapolated = []

    def gamma(w):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ExtrapolationWarning)
            g = float(spec(w)) / peak
        if caught:
            extrapolated.append(True)
        return g

    s = None if spec.scale is None else spec.scale / wc  # spectral scale in units of wc
    use_moment = quad_cfg.angular == "auto" and spec.first_moment(0.0) is not None

    def inner(u, kappa):
        # int_{-1}^{1} dmu x gamma(wc x), x = u^2 + 2 kappa u mu, done in x
        if kappa == 0.0 or u == 0.0:
            return 2.0 * u * u * gamma(wc * u * u)
        lo, hi = u * u - 2.0 * kappa * u, u * u + 2.0 * kappa * u
        if use_moment:
            m = spec.first_moment(wc * hi) - spec.first_moment(wc * lo)
            return float(m) / (peak * wc * wc * 2.0 * kappa * u)
        pts = [0.0]
        if s is not None:
            pts += [sgn * f * s for sgn in (-1.0, 1.0) for f in (1.0, 3.0)]
        val = quad(lambda x: x * gamma(wc * x), lo, hi, tol * 4.0 * kappa * u * max(u * u, 1.0), points=pts)[0]
        return val / (2.0 * kappa * u)

    def radial(kappa):
        def f(u):
            return u * u * np.exp(-u * u) * inner(u, kappa)
        # u where the x-range endpoints cross 0 or the spectral scale
        pts = [2.0 * kappa]
        for c in ([s, 3.0 * s] if s is not None else []):
            pts.append(np.sqrt(c) if kappa == 0 else -kappa + np.sqrt(kappa * kappa + c))
            pts.append(kappa + np.sqrt(kappa * kappa + c))
            if kappa * kappa > c:
                pts += [kappa - np.sqrt(kappa * kappa - c), kappa + np.sqrt(kappa * kappa - c)]
        return quad(f, 0.0, u_max, tol * white_ref, points=sorted(set(pts)))

    k_single = gas.single_momentum
    if k_single is not None:
        val, err = radial(k_single * rC)
    else:
        kF = gas.k_F * rC

        def f(kappa):
            return 3.0 * kappa * kappa / kF**3 * radial(kappa)[0]

        val, err = quad(f, 0.0, kF, tol * white_ref)

    per_particle = pref * peak * val
    err = pref * peak * err
    power = per_particle * gas.n_particles
    if quad.failed:
        raise QuadratureError("nested quadrature did not converge", power, err * gas.n_particles)
    return HeatingResult(
        power=power,
        per_particle_power=per_particle,
        method="colored_quadrature",
        quadrature_error_estimate=err * gas.n_particles,
        extrapolated=bool(extrapolated),
    )


@dataclass(frozen=True)
class BoxSumResult:
    """Per-particle box-mode sum [W] without the ``(m_i/m0)^2`` coupling factor."""

    power: float
    truncation_bound: float
    L: float
    n_initial: int
    pauli_term: float = 0.0


def white_box_limit(p, m_i, constants=CODATA):
    """Continuum limit ``3 hbar^2 lam / (4 m_i rC^2)`` of the white box sum."""
    return 3.0 * constants.hbar**2 * p.lam / (4.0 * m_i * p.rC**2)


def box_modes_in_sphere(k_F, L):
    """All box momenta ``2 pi n / L`` with ``|k| <= k_F``, shape ``(n, 3)``."""
    dk = 2 * np.pi / L
    nmax = int(np.floor(k_F / dk))
    r = np.arange(-nmax, nmax + 1)
    n = np.stack(np.meshgrid(r, r, r, indexing="ij"), axis=-1).reshape(-1, 3)
    k = n * dk
    return k[np.sum(k * k, axis=1) <= k_F**2]


def _axis_sums(p_j, dk, n_lo, n_hi, rC):
    # offsets d = k - p_j keep the large p^2 terms out of the sums
    d = np.arange(n_lo, n_hi + 1) * dk - p_j
    w = np.exp(-(d * d) * rC**2)
    return math.fsum(w), math.fsum(w * d), math.fsum(w * d * d)


def discrete_box_sum(p_vec, L, p, m_i, constants=CODATA, include_pauli_term=False,
                     occupation=None, q_max_rc=8.0):
    """Box-mode sum for the long-time heating rate of one or more initial modes.

    Computes, for each initial momentum ``p_vec`` (shape ``(3,)`` or
    ``(n, 3)``),

        (gamma / L^3) sum_k exp(-(p - k)^2 rC^2) (E_k - E_p),

    with ``E_k = hbar^2 k^2 / 2 m_i`` and ``k = 2 pi n / L`` restricted to the
    cube ``|k_j - p_j| <= q_max_rc / rC``, and returns the occupation-weighted
    mean over initial modes. The Gaussian factorizes over Cartesian axes, so
    the cube sum is evaluated exactly as products of 1-d sums.

    With ``include_pauli_term`` the blocking contribution
    ``-sum_{p,k} N(p) N(k) exp(-(p-k)^2 rC^2)(E_k - E_p)`` is added, where
    ``N`` is ``occupation`` evaluated on box modes (default: 1 on the given
    initial modes, 0 elsewhere). It is summed pairwise over occupied modes.
    """
    if not L >= 10 * p.rC:
        raise ValueError("L must be at least 10 rC for a meaningful box sum")
    pv = np.atleast_2d(np.asarray(p_vec, dtype=float))
    rC = p.rC
    dk = 2 * np.pi / L
    qmax = q_max_rc / rC
    c = constants.hbar**2 / (2 * m_i)
    gamma = gamma_from_lambda(p)

    if occupation is None:
        weights = np.ones(len(pv))
    else:
        weights = np.asarray(occupation(pv), dtype=float)

    per_mode = np.empty(len(pv))
    for i, pp in enumerate(pv):
        s0, s1, s2 = np.empty(3), np.empty(3), np.empty(3)
        for j in range(3):
            lo = int(np.ceil((pp[j] - qmax) / dk))
            hi = int(np.floor((pp[j] + qmax) / dk))
            s0[j], s1[j], s2[j] = _axis_sums(pp[j], dk, lo, hi, rC)
        # k^2 - p^2 = |d|^2 + 2 p.d with d = k - p; G factorizes over axes
        terms = []
        for j in range(3):
            others = np.prod(np.delete(s0, j))
            terms += [s2[j] * others, 2.0 * pp[j] * s1[j] * others]
        per_mode[i] = c * math.fsum(terms)
    scale = gamma / L**3
    wsum = np.sum(weights)
    power = scale * np.dot(weights, per_mode) / wsum

    pauli = 0.0
    if include_pauli_term:
        occ = pv[weights > 0]
        n_occ = weights[weights > 0]
        d = occ[:, None, :] - occ[None, :, :]
        g = np.exp(-np.sum(d * d, axis=-1) * rC**2)
        e = c * np.sum(occ * occ, axis=1)
        de = e[None, :] - e[:, None]  # E_k - E_p, p along rows
        pauli = -scale * np.sum(n_occ[:, None] * n_occ[None, :] * g * de) / wsum

    # Gaussian tail outside the cube, relative to the leading term
    tail = 3 * np.exp(-(q_max_rc**2)) * (1 + q_max_rc**2)
    return BoxSumResult(
        power=power + pauli,
        truncation_bound=abs(power) * tail,
        L=L,
        n_initial=len(pv),
        pauli_term=pauli,
    )
