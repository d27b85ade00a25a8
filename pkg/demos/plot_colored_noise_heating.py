"""
Heating of a Fermi gas under band-limited noise
===============================================

With white noise the heating rate of a gas does not care how fast its
particles move. Once the noise spectrum has a cutoff, slow particles
can only absorb low frequencies and the heating drops. This script
sweeps a Gaussian cutoff across the natural frequency scale
hbar / (2 m rC^2) and prints the heating relative to the white value.
"""

import numpy as np

from cslfermi import CODATA, CollapseParams, FermiGas, GaussianCutoff, Lorentzian
from cslfermi import gamma_from_lambda, heating_colored, heating_white

m_n = 1.675e-27
p = CollapseParams(lam=1e-16, rC=1e-7)
gamma = gamma_from_lambda(p)
omega_c = CODATA.hbar / (2 * m_n * p.rC**2)
white = heating_white(m_n, p, m_A=m_n).power
print(f"natural frequency scale: {omega_c:.3e} rad/s, white heating per neutron: {white:.3e} W")

# k_F * rC sets how far the energy transfers spread beyond omega_c.
k_values = (0.0, 1e8, 1e9)
print("\ncutoff/omega_c " + "".join(f"   kF={k:7.1e}" for k in k_values))
for f in np.logspace(-3, 6, 10):
    ratios = [heating_colored(FermiGas(m_n, k, m_n), GaussianCutoff(f * omega_c, gamma), p).power / white
              for k in k_values]
    print(f"{f:13.1e} " + "".join(f"{r:14.6f}" for r in ratios))

# A Lorentzian spectrum has a slow tail, so it approaches white noise
# much later than the Gaussian does.
print("\nLorentzian at k_F = 1e9 /m")
gas = FermiGas(m_n, 1e9, m_n)
for f in (1e2, 1e4, 1e6):
    r = heating_colored(gas, Lorentzian(f * omega_c, gamma), p)
    print(f"  cutoff {f:7.0e} omega_c: {r.power / white:.6f} of white (error estimate {r.quadrature_error_estimate:.1e} W)")
