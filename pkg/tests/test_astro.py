import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import constants as sc

from cslfermi.astro import (
    TABLE1_REFERENCE,
    AstroBody,
    MissingDataError,
    bound_lambda,
    exclusion_curve,
    find_body,
    lambda_over_rc2,
    load_catalog,
    load_overlay,
    radiated_power,
    reproduce_table1,
)
from cslfermi.core import CODATA, PAPER_COMPAT, CollapseParams
from cslfermi.heating import heating_white


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


def test_catalog_has_twelve_bodies(catalog):
    assert [b.name for b in catalog] == list(TABLE1_REFERENCE)


def test_radiated_power_examples(catalog):
    neptune = find_body(catalog, "neptune")
    assert radiated_power(neptune) == pytest.approx(1.99e-11 * 1.0241e26, rel=1e-4)
    assert radiated_power(neptune) == pytest.approx(2.038e15, rel=1e-3)
    cold = AstroBody("cold", mass=1.0, radius=1.0, temperature=1e-300)
    assert radiated_power(cold) == 0.0
    ns = find_body(catalog, "Neutron star").blackbody()
    by_hand = 4 * math.pi * 1e4**2 * 5.6e-8 * 2.8e5**4
    assert radiated_power(ns, PAPER_COMPAT) == pytest.approx(by_hand, rel=1e-14)
    assert radiated_power(ns, PAPER_COMPAT) == pytest.approx(4.33e23, rel=2e-3)
    assert radiated_power(ns, PAPER_COMPAT) / ns.mass == pytest.approx(2.16e-7, rel=2e-3)


def test_missing_data_names_body():
    with pytest.raises(MissingDataError, match="Vulcan"):
        AstroBody("Vulcan", mass=1e24, radius=1e6)


@pytest.mark.parametrize("bad", [
    dict(mass=0.0, power_per_mass=1.0),
    dict(mass=1.0, radius=-1.0, temperature=10.0),
    dict(mass=1.0, radius=1.0, temperature=0.0),
])
def test_body_validation(bad):
    with pytest.raises(ValueError):
        AstroBody("x", **bad)


@pytest.mark.parametrize("name, expected", [
    ("Neptune", 6.57e3),
    ("Neutron star", 9.43e7),
    ("Earth", 6.60e6),
    ("Mercury", 1.57e8),
    ("Sun", 6.29e10),
    ("Jupiter", 9.14e4),
    ("Venus", 4.62e6),
])
def test_lambda_over_rc2_examples(catalog, name, expected):
    assert lambda_over_rc2(find_body(catalog, name)) == pytest.approx(expected, rel=1e-2)


def test_lambda_over_rc2_formula():
    body = AstroBody("x", mass=1.0, power_per_mass=1.0)
    amu = sc.physical_constants["atomic mass constant"][0]
    assert lambda_over_rc2(body) == pytest.approx(4 / 3 * amu**2 / sc.hbar**2, rel=1e-12)
    # the published ratio between the two table columns
    assert lambda_over_rc2(body) == pytest.approx(3.30e14, rel=2e-3)


def test_bound_lambda_examples(catalog):
    neptune = find_body(catalog, "Neptune")
    assert bound_lambda(neptune, 1e-7) == pytest.approx(6.57e-11, rel=1e-2)
    assert bound_lambda(find_body(catalog, "Neutron star"), 1e-7) == pytest.approx(9.43e-7, rel=1e-2)
    with pytest.raises(ValueError):
        bound_lambda(neptune, 0.0)


def test_bound_lambda_matches_closed_form_for_blackbody(catalog):
    ns = find_body(catalog, "Neutron star").blackbody()
    R, M, T, rC = ns.radius, ns.mass, ns.temperature, 3e-7
    c = PAPER_COMPAT
    formula = 16 * R**2 * c.m0**2 * math.pi * rC**2 * T**4 * c.sigma_SB / (3 * M * c.hbar**2)
    assert bound_lambda(ns, rC, c) == pytest.approx(formula, rel=1e-13)


@given(st.floats(1e-12, 1e-1))
def test_bound_lambda_quadratic(rC):
    body = AstroBody("x", mass=3e25, power_per_mass=2e-11)
    assert bound_lambda(body, 2 * rC) == pytest.approx(4 * bound_lambda(body, rC), rel=1e-14)


def test_consistency_of_data_paths():
    R, T, M = 2.5e7, 60.0, 1e26
    bb = AstroBody("bb", mass=M, radius=R, temperature=T)
    ppm = AstroBody("ppm", mass=M, power_per_mass=4 * math.pi * R**2 * CODATA.sigma_SB * T**4 / M)
    assert bound_lambda(bb, 1e-7) == pytest.approx(bound_lambda(ppm, 1e-7), rel=1e-12)


def test_balance_round_trip(catalog):
    for body in catalog:
        for rC in (1e-9, 1e-7, 1e-4):
            lam = bound_lambda(body, rC)
            p = heating_white(body.mass, CollapseParams(lam, rC)).power
            assert p == pytest.approx(radiated_power(body), rel=1e-10)


def test_neptune_is_best(catalog):
    best = min(catalog, key=lambda b: lambda_over_rc2(b))
    assert best.name == "Neptune"


def test_table1_closure(catalog):
    rows = reproduce_table1(catalog)
    assert len(rows) == 12
    for r in rows:
        assert r.error is None
        assert r.power_per_mass == TABLE1_REFERENCE[r.name][0]
        assert abs(r.deviation) < 1e-2, r.name


def test_table1_reports_bad_rows_without_failing():
    class Broken:
        name, mass, power_per_mass, radius, temperature = "Broken", 1.0, None, None, None
    rows = reproduce_table1([Broken()])
    assert rows[0].error is not None


def test_exclusion_curve(catalog):
    neptune = find_body(catalog, "Neptune")
    c = exclusion_curve(neptune, 1e-9, 1e-3, 61)
    assert len(c.points) == 61
    assert c.rC[0] == 1e-9 and c.rC[-1] == 1e-3
    assert np.all(np.diff(c.rC) > 0) and np.all(np.diff(c.lambda_max) > 0)
    np.testing.assert_allclose(c.loglog_slopes(), 2.0, atol=1e-9)
    i = int(np.argmin(np.abs(c.rC - 1e-7)))
    assert c.rC[i] == pytest.approx(1e-7, rel=1e-12)
    assert c.lambda_max[i] == pytest.approx(6.57e-11, rel=1e-2)
    assert c.generated_from == "power_per_mass"
    assert c.constants_profile == "codata"
    two = exclusion_curve(neptune, 1e-8, 1e-7, 2)
    assert two.lambda_max[1] / two.lambda_max[0] == pytest.approx(100.0, rel=1e-12)
    with pytest.raises(ValueError):
        exclusion_curve(neptune, 1e-3, 1e-9, 5)
    with pytest.raises(ValueError):
        exclusion_curve(neptune, 1e-9, 1e-3, 1)


def test_exclusion_curve_interior_on_line(catalog):
    c = exclusion_curve(find_body(catalog, "Sun"), 2e-9, 5e-4, 17)
    x, y = np.log(c.rC), np.log(c.lambda_max)
    line = y[0] + (y[-1] - y[0]) * (x - x[0]) / (x[-1] - x[0])
    np.testing.assert_allclose(y, line, rtol=0, atol=1e-9)


def test_load_catalog_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('[\n {"name": "x", "mass_kg": 1.0,}\n]')
    with pytest.raises(ValueError, match="line 2"):
        load_catalog(p)
    p.write_text('[{"name": "x", "mass_kg": 1.0}]')
    with pytest.raises(ValueError, match="entry 0"):
        load_catalog(p)


def test_catalog_env_override(tmp_path, monkeypatch):
    p = tmp_path / "cat.json"
    p.write_text(json.dumps([{"name": "Rock", "mass_kg": 10.0, "power_per_mass_W_per_kg": 1e-9}]))
    monkeypatch.setenv("CSLFERMI_CATALOG", str(p))
    assert [b.name for b in load_catalog()] == ["Rock"]


def test_catalog_round_trip(catalog):
    assert [AstroBody.from_dict(b.to_dict()) for b in catalog] == catalog


def test_load_overlay(tmp_path):
    p = tmp_path / "ov.json"
    data = [{"name": "cold atoms", "points": [[1e-8, 1e-6], [1e-6, 1e-9]]}]
    p.write_text(json.dumps(data))
    assert load_overlay(p) == data
    p.write_text(json.dumps([{"name": "x"}]))
    with pytest.raises(ValueError):
        load_overlay(p)
