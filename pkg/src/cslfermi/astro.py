"""Thermal-emission bounds on the collapse rate from astrophysical bodies.

If a body's observed thermal emission ``P_rad`` is attributed entirely to
collapse-noise heating, ``heating_white(M) = P_rad`` gives the largest
collapse rate compatible with the observation:

    lam_max(rC) = (4/3) (m0^2 / hbar^2) (P_rad / M) rC^2.

Planetary catalog entries carry ``P_rad / M`` directly; the neutron star
also carries radius and temperature so the blackbody route can be compared.
Masses are fact-sheet catalog data used only to form absolute powers.
"""

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from .core import CODATA

__all__ = [
    "CATALOG_ENV",
    "MissingDataError",
    "AstroBody",
    "BoundCurve",
    "TABLE1_REFERENCE",
    "load_catalog",
    "default_catalog_path",
    "find_body",
    "radiated_power",
    "power_per_mass",
    "lambda_over_rc2",
    "bound_lambda",
    "exclusion_curve",
    "Table1Row",
    "reproduce_table1",
    "load_overlay",
]

CATALOG_ENV = "CSLFERMI_CATALOG"

#: published (P/M [W/kg], lambda/rC^2 [1/(s m^2)]) per body
TABLE1_REFERENCE = {
    "Mercury": (4.74e-7, 1.57e8),
    "Venus": (1.40e-8, 4.62e6),
    "Earth": (2.00e-8, 6.60e6),
    "Moon": (1.55e-7, 5.12e7),
    "Mars": (2.45e-8, 8.10e6),
    "Jupiter": (2.76e-10, 9.14e4),
    "Saturn": (1.94e-10, 6.40e4),
    "Uranus": (6.03e-11, 2.00e4),
    "Neptune": (1.99e-11, 6.57e3),
    "Pluto": (1.50e-10, 4.98e4),
    "Sun": (1.90e-4, 6.29e10),
    "Neutron star": (2.85e-7, 9.43e7),
}


class MissingDataError(ValueError):
    """A body has neither power-per-mass nor radius and temperature."""


@dataclass(frozen=True)
class AstroBody:
    name: str
    mass: float
    radius: Optional[float] = None
    temperature: Optional[float] = None
    power_per_mass: Optional[float] = None

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"{self.name}: mass must be > 0")
        for attr in ("radius", "temperature"):
            v = getattr(self, attr)
            if v is not None and not v > 0:
                raise ValueError(f"{self.name}: {attr} must be > 0")
        if self.power_per_mass is not None and not self.power_per_mass >= 0:
            raise ValueError(f"{self.name}: power_per_mass must be >= 0")
        has_sb = self.radius is not None and self.temperature is not None
        if not has_sb and self.power_per_mass is None:
            raise MissingDataError(
                f"{self.name}: need power_per_mass or both radius and temperature"
            )

    @property
    def data_path(self):
        return "power_per_mass" if self.power_per_mass is not None else "stefan_boltzmann"

    def blackbody(self):
        """The same body with ``power_per_mass`` dropped (Stefan-Boltzmann route)."""
        if self.radius is None or self.temperature is None:
            raise MissingDataError(f"{self.name}: no radius/temperature for the blackbody route")
        return AstroBody(self.name, self.mass, self.radius, self.temperature, None)

    @classmethod
    def from_dict(cls, d):
        return cls(
            name=d["name"],
            mass=float(d["mass_kg"]),
            radius=_opt_float(d.get("radius_m")),
            temperature=_opt_float(d.get("temperature_K")),
            power_per_mass=_opt_float(d.get("power_per_mass_W_per_kg")),
        )

    def to_dict(self):
        d = {"name": self.name, "mass_kg": self.mass}
        for key, v in (("radius_m", self.radius), ("temperature_K", self.temperature),
                       ("power_per_mass_W_per_kg", self.power_per_mass)):
            if v is not None:
                d[key] = v
        return d


def _opt_float(v):
    return None if v is None else float(v)


def default_catalog_path():
    """Catalog path from ``$CSLFERMI_CATALOG`` or the shipped default."""
    env = os.environ.get(CATALOG_ENV)
    if env:
        return env
    return str(resources.files("cslfermi") / "catalog" / "default.json")


def load_catalog(path=None):
    """Load a JSON body catalog. Parse errors report the offending line."""
    path = path or default_catalog_path()
    with open(path) as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, list):
        raise ValueError(f"{path}: catalog must be a JSON array of bodies")
    bodies = []
    for i, entry in enumerate(raw):
        try:
            bodies.append(AstroBody.from_dict(entry))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: entry {i}: {exc}") from None
    return bodies


def find_body(catalog, name):
    for b in catalog:
        if b.name.lower() == name.lower():
            return b
    names = ", ".join(b.name for b in catalog)
    raise KeyError(f"unknown body {name!r}; catalog has: {names}")


def radiated_power(body, constants=CODATA):
    """Thermal power [W]: ``power_per_mass * mass`` or ``4 pi R^2 sigma T^4``."""
    if body.power_per_mass is not None:
        return body.power_per_mass * body.mass
    return 4.0 * np.pi * body.radius**2 * constants.sigma_SB * body.temperature**4


def power_per_mass(body, constants=CODATA):
    return radiated_power(body, constants) / body.mass


def lambda_over_rc2(body, constants=CODATA):
    """``lam_max / rC^2`` [1/(s m^2)] from balancing emission against heating."""
    return 4.0 / 3.0 * (constants.m0 / constants.hbar) ** 2 * power_per_mass(body, constants)


def bound_lambda(body, rC, constants=CODATA):
    """Upper bound on the collapse rate [1/s] at correlation length ``rC``."""
    rC = np.asarray(rC, dtype=float)
    if np.any(rC <= 0):
        raise ValueError("rC must be > 0")
    out = lambda_over_rc2(body, constants) * rC**2
    return out if out.ndim else float(out)


@dataclass(frozen=True, eq=False)
class BoundCurve:
    body_name: str
    rC: np.ndarray
    lambda_max: np.ndarray
    constants_profile: str
    generated_from: str  # "power_per_mass" | "stefan_boltzmann"
    metadata: dict = field(default_factory=dict)

    @property
    def points(self):
        return list(zip(self.rC.tolist(), self.lambda_max.tolist()))

    def loglog_slopes(self):
        return np.diff(np.log(self.lambda_max)) / np.diff(np.log(self.rC))


def exclusion_curve(body, rc_min, rc_max, n_points, constants=CODATA):
    """Sample ``bound_lambda`` on a logarithmic ``rC`` grid."""
    if not 0 < rc_min < rc_max:
        raise ValueError("need 0 < rc_min < rc_max")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    rc = np.logspace(np.log10(rc_min), np.log10(rc_max), int(n_points))
    rc[0], rc[-1] = rc_min, rc_max
    return BoundCurve(
        body_name=body.name,
        rC=rc,
        lambda_max=bound_lambda(body, rc, constants),
        constants_profile=constants.profile,
        generated_from=body.data_path,
        metadata={"m0_kg": constants.m0, "lambda_over_rc2": lambda_over_rc2(body, constants)},
    )


@dataclass(frozen=True)
class Table1Row:
    name: str
    power_per_mass: Optional[float]
    lambda_over_rc2: Optional[float]
    reference: Optional[tuple] = None
    error: Optional[str] = None

    @property
    def deviation(self):
        """Relative deviation of ``lambda_over_rc2`` from the published value."""
        if self.reference is None or self.lambda_over_rc2 is None:
            return None
        return self.lambda_over_rc2 / self.reference[1] - 1.0


def reproduce_table1(catalog, constants=CODATA):
    """One row per body; bodies whose data is unusable get an ``error`` row."""
    rows = []
    for body in catalog:
        ref = TABLE1_REFERENCE.get(body.name)
        try:
            rows.append(Table1Row(body.name, power_per_mass(body, constants),
                                  lambda_over_rc2(body, constants), ref))
        except (ValueError, TypeError) as exc:
            rows.append(Table1Row(body.name, None, None, ref, error=str(exc)))
    return rows


def load_overlay(path):
    """Read reference exclusion polylines: ``[{"name": ..., "points": [[rC, lam], ...]}]``.

    The data is passed through unchanged apart from validation.
    """
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, list):
        raise ValueError(f"{path}: overlay must be a JSON array")
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "name" not in item or "points" not in item:
            raise ValueError(f"{path}: entry {i} needs 'name' and 'points'")
        for pt in item["points"]:
            if len(pt) != 2:
                raise ValueError(f"{path}: entry {i}: points must be [rC, lambda] pairs")
    return raw
