"""
Collapse-rate bounds from planetary and stellar heat flow
=========================================================

Every body in the shipped catalog radiates a known power per unit mass.
If collapse noise were the only heat source, that power would cap the
ratio lambda / rC^2. This script prints the cap for each body and writes
the Neptune and neutron-star exclusion lines to CSV.
"""

from pathlib import Path

import numpy as np

from cslfermi import PAPER_COMPAT, exclusion_curve, find_body, load_catalog, reproduce_table1

catalog = load_catalog()

# The ratio lambda / rC^2 is fixed by power per mass alone.
for row in reproduce_table1(catalog):
    print(f"{row.name:<14s} P/M = {row.power_per_mass:9.3e} W/kg   "
          f"lambda/rC^2 <= {row.lambda_over_rc2:9.3e} /(s m^2)   ({row.deviation:+.2%} vs published)")

# The neutron star can also be treated as a blackbody. The two routes
# disagree by about 30%, which is worth seeing side by side.
ns = find_body(catalog, "Neutron star")
for body in (ns, ns.blackbody()):
    curve = exclusion_curve(body, 1e-7, 1e-7 * 10, 2, PAPER_COMPAT)
    print(f"neutron star via {curve.generated_from:<16s} lambda(100 nm) <= {curve.lambda_max[0]:.3e} /s")

# Each line is a straight segment of slope 2 on log-log axes.
out = Path("demo_output")
out.mkdir(exist_ok=True)
for name in ("Neptune", "Neutron star"):
    curve = exclusion_curve(find_body(catalog, name), 1e-9, 1e-3, 61)
    path = out / f"{name.lower().replace(' ', '_')}_line.csv"
    np.savetxt(path, curve.points, delimiter=",", header="rC_m,lambda_max_per_s", comments="")
    print(f"{name}: slopes in [{curve.loglog_slopes().min():.12f}, {curve.loglog_slopes().max():.12f}] -> {path}")
