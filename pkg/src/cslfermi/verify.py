"""Numerical oracles shared by the ``verify`` command and the test suite.

Every check returns an :class:`OracleResult` holding the measured value,
its target and the tolerance it is judged against.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import core, heating, noise
from .core import CODATA, CollapseParams

__all__ = [
    "OracleResult",
    "NEUTRON_MASS",
    "BOX_ROUNDOFF_FLOOR",
    "check_delta_normalization",
    "check_squared_delta",
    "check_kernel_normalization",
    "check_kernel_fourier",
    "box_sum_errors",
    "check_box_sum",
    "check_box_monotone",
    "check_pauli_cancellation",
    "random_white_tuples",
    "check_white_limit",
    "check_kf_independence",
    "check_correlator",
    "run_all",
]

NEUTRON_MASS = 1.675e-27
#: relative error below which box sums count as converged to double precision
BOX_ROUNDOFF_FLOOR = 1e-12


@dataclass(frozen=True)
class OracleResult:
    name: str
    measured: float
    target: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self):
        d = asdict(self)
        d.update(measured=float(self.measured), target=float(self.target),
                 tolerance=float(self.tolerance), passed=bool(self.passed))
        return d

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag}  {self.name:<38s} measured={self.measured:.6g} "
                f"target={self.target:.6g} tol={self.tolerance:.3g} {self.detail}").rstrip()


def _rel(a, b):
    return abs(a / b - 1.0)


def check_delta_normalization(t=1.0, tol=1e-6):
    val = core.delta_t_integral(t)
    return OracleResult(f"delta_t integral (t={t:g})", val, 1.0, tol, abs(val - 1.0) <= tol)


def check_squared_delta(t=1e3, width=1.0, tol=1e-2):
    r = core.squared_delta_ratio(t, width)
    return OracleResult(f"squared delta identity (t*w={t * width:g})", r, 1.0, tol, abs(r - 1.0) <= tol)


def check_kernel_normalization(which="g", rC=1.0, tol=1e-6):
    k = noise.smearing_kernel_g if which == "g" else noise.smearing_kernel_F
    val = noise.kernel_integral(k, rC)
    return OracleResult(f"kernel {which} normalization", val, 1.0, tol, abs(val - 1.0) <= tol)


def check_kernel_fourier(rC=1.0, tol=1e-4, n=26):
    q = np.linspace(0.0, 5.0 / rC, n)
    num = np.array([noise.kernel_g_fourier(qi, rC) for qi in q])
    err = float(np.max(np.abs(num - np.exp(-(q * rC) ** 2 / 2))))
    return OracleResult("kernel g Fourier pair (max abs err)", err, 0.0, tol, err <= tol)


def box_sum_errors(p_vec, factors=(50, 100, 200, 400), params=None, m_i=NEUTRON_MASS, constants=CODATA):
    params = params or CollapseParams(1e-16, 1e-7)
    lim = heating.white_box_limit(params, m_i, constants)
    vals = [heating.discrete_box_sum(p_vec, f * params.rC, params, m_i, constants).power for f in factors]
    return np.array([_rel(v, lim) for v in vals])


def check_box_sum(p_vec=(0.0, 0.0, 0.0), factor=200, tol=1e-2, params=None, m_i=NEUTRON_MASS):
    params = params or CollapseParams(1e-16, 1e-7)
    lim = heating.white_box_limit(params, m_i)
    val = heating.discrete_box_sum(np.asarray(p_vec, float), factor * params.rC, params, m_i).power
    pn = np.linalg.norm(p_vec)
    return OracleResult(f"box sum L={factor}rC |p|={pn:.3g}", val, lim, tol, _rel(val, lim) <= tol,
                        f"rel_err={_rel(val, lim):.3g}")


def check_box_monotone(p_vec=(0.0, 0.0, 0.0), factors=(50, 100, 200, 400), floor=BOX_ROUNDOFF_FLOOR):
    """Errors must not increase with L, once floored at double-precision resolution."""
    errs = box_sum_errors(np.asarray(p_vec, float), factors)
    eff = np.maximum(errs, floor)
    ok = bool(np.all(np.diff(eff) <= 0))
    pn = np.linalg.norm(p_vec)
    return OracleResult(f"box sum monotone in L |p|={pn:.3g}", float(errs.max()), 0.0, floor, ok,
                        "errors=" + ",".join(f"{e:.2g}" for e in errs))


def check_pauli_cancellation(factor=20, n_shells=3, tol=1e-10, params=None, m_i=NEUTRON_MASS):
    """Blocking term over a filled Fermi sphere of box modes must vanish."""
    params = params or CollapseParams(1e-16, 1e-7)
    L = factor * params.rC
    k_F = n_shells * 2 * np.pi / L
    modes = heating.box_modes_in_sphere(k_F, L)
    without = heating.discrete_box_sum(modes, L, params, m_i).power
    with_ = heating.discrete_box_sum(modes, L, params, m_i, include_pauli_term=True).power
    change = abs(with_ - without) / abs(without)
    return OracleResult(f"Pauli term cancellation ({len(modes)} modes)", change, 0.0, tol, change < tol)


def random_white_tuples(n=20, seed=0):
    """``(m_A, k_F, lam, rC)`` tuples spanning six decades each."""
    rng = np.random.default_rng(seed)
    m_A = 10 ** rng.uniform(-30, -24, n)
    k_F = 10 ** rng.uniform(4, 10, n)
    lam = 10 ** rng.uniform(-20, -14, n)
    rC = 10 ** rng.uniform(-9, -3, n)
    return list(zip(m_A, k_F, lam, rC))


def check_white_limit(tuples=None, tol=1e-6):
    tuples = tuples or random_white_tuples()
    worst = 0.0
    for m_A, k_F, lam, rC in tuples:
        p = CollapseParams(lam, rC)
        gas = heating.FermiGas(m_A=m_A, k_F=k_F, M_total=1000 * m_A)
        col = heating.heating_colored(gas, noise.White(1.0), p).power
        ref = heating.heating_white(gas.M_total, p, m_A=m_A).power
        worst = max(worst, _rel(col, ref))
    return OracleResult(f"white-limit equivalence ({len(tuples)} tuples)", worst, 0.0, tol, worst <= tol)


def check_kf_independence(k_values=(0.0, 1e4, 1e6, 1e8, 1e9, 1e10), m_A=NEUTRON_MASS, tol=1e-5):
    p = CollapseParams(1e-16, 1e-7)
    vals = [heating.heating_colored(heating.FermiGas(m_A, k, m_A), noise.White(1.0), p).power
            for k in k_values]
    spread = (max(vals) - min(vals)) / abs(vals[0])
    return OracleResult("k_F independence (white)", spread, 0.0, tol, spread < tol)


def check_correlator(spec, omegas, t, dt, n_realizations=10_000, seed=0, tol=0.05):
    mean, se = noise.empirical_spectrum(spec, omegas, t, dt, n_realizations, seed)
    target = spec(np.asarray(omegas, float))
    rel = np.abs(mean / target - 1.0)
    worst = float(rel.max())
    return OracleResult(f"correlator MC {type(spec).__name__} ({n_realizations} real.)", worst, 0.0, tol,
                        worst <= tol, "rel=" + ",".join(f"{r:.2g}" for r in rel))


CORRELATOR_CASES = (
    # spectrum, omega grid [rad/s], window t [s], dt [s]
    (noise.White(1.0), (0.0, 100.0, 500.0, 1000.0, 2000.0), 1.0, 1e-3),
    (noise.GaussianCutoff(1e3, 1.0), (0.0, 250.0, 500.0, 1000.0, 1500.0), 1.0, 8e-5),
)


def run_all(seed=0, fast=False):
    """Run the full oracle suite. ``fast`` uses 10x fewer realizations and 10x looser MC tolerance."""
    p_fermi = 1e9 * np.array([1.0, 2.0, 3.0]) / np.sqrt(14.0)
    results = [
        check_delta_normalization(1.0),
        check_delta_normalization(1e3),
        check_squared_delta(),
        check_kernel_normalization("g"),
        check_kernel_normalization("F"),
        check_kernel_fourier(),
        check_box_sum((0.0, 0.0, 0.0)),
        check_box_sum(p_fermi),
        check_box_monotone((0.0, 0.0, 0.0)),
        check_box_monotone(p_fermi),
        check_pauli_cancellation(),
        check_white_limit(random_white_tuples(5 if fast else 20, seed)),
        check_kf_independence(),
    ]
    n_real, tol = (1_000, 0.5) if fast else (10_000, 0.05)
    for spec, omegas, t, dt in CORRELATOR_CASES:
        results.append(check_correlator(spec, omegas, t, dt, n_real, seed, tol))
    return results
