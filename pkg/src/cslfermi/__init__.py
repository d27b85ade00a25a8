"""CSL collapse-noise heating of Fermi gases and astrophysical bounds on the collapse rate."""

__version__ = "0.1.0"

from .core import (
    CODATA,
    PAPER_COMPAT,
    CollapseParams,
    PhysConstants,
    delta_t,
    gamma_from_lambda,
    get_profile,
)
from .noise import (
    GaussianCutoff,
    Lorentzian,
    Tabulated,
    White,
    gamma_at,
    load_tabulated_csv,
    synthesize_noise,
    verify_correlator,
)
from .heating import (
    FermiGas,
    HeatingResult,
    QuadConfig,
    QuadratureError,
    discrete_box_sum,
    heating_colored,
    heating_white,
    omega_bar,
)
from .astro import (
    AstroBody,
    BoundCurve,
    bound_lambda,
    exclusion_curve,
    lambda_over_rc2,
    find_body,
    load_catalog,
    radiated_power,
    reproduce_table1,
)
