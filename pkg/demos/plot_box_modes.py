"""
From box modes to the continuum
===============================

Putting the gas in a periodic box turns the momentum integral into a
sum over discrete modes. The sum approaches the continuum heating rate
as the box grows, and the Pauli blocking term drops out exactly
because it is antisymmetric under exchange of initial and final mode.
"""

import numpy as np

from cslfermi import CollapseParams
from cslfermi.heating import box_modes_in_sphere, discrete_box_sum, white_box_limit

m_n = 1.675e-27
p = CollapseParams(lam=1e-16, rC=1e-7)
limit = white_box_limit(p, m_n)
print(f"continuum value 3 hbar^2 lambda / (4 m rC^2) = {limit:.6e} W")

# The approach is exponentially fast in (L / rC)^2.
for k in (np.zeros(3), 1e9 * np.array([1.0, 2.0, 3.0]) / np.sqrt(14)):
    print(f"\ninitial |p| = {np.linalg.norm(k):.1e} /m")
    for factor in (10, 11, 12, 14, 20, 50, 200):
        r = discrete_box_sum(k, factor * p.rC, p, m_n)
        print(f"  L = {factor:3d} rC: relative error {abs(r.power / limit - 1):.3e}")

# Fill three shells of modes and switch the blocking term on.
L = 20 * p.rC
modes = box_modes_in_sphere(3 * 2 * np.pi / L, L)
plain = discrete_box_sum(modes, L, p, m_n)
blocked = discrete_box_sum(modes, L, p, m_n, include_pauli_term=True)
print(f"\n{len(modes)} occupied modes: blocking term {blocked.pauli_term:.3e} W "
      f"against {plain.power:.3e} W without it")
