"""Command-line interface: ``cslfermi {heating,table,curve,verify}``.

Exit codes: 0 success, 1 usage error, 2 computation failure,
3 verification failure.
"""

import argparse
import csv
import json
import re
import sys
from pathlib import Path

from . import __version__, astro, heating, noise, verify
from .core import SOLAR_MASS, CollapseParams, gamma_from_lambda, get_profile

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE, EXIT_VERIFY = 0, 1, 2, 3

_UNITS = {
    "length": {"m": 1.0, "km": 1e3, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "mass": {"kg": 1.0, "g": 1e-3, "Msun": SOLAR_MASS},
    "temperature": {"K": 1.0, "MK": 1e6},
}
_QUANTITY = re.compile(r"^\s*([-+0-9.eE]+)\s*([A-Za-z]*)\s*$")


class UsageError(Exception):
    pass


def parse_quantity(text, kind):
    """Parse ``"10km"``, ``"1.4Msun"``, ``"0.28MK"`` or a bare SI number."""
    m = _QUANTITY.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"cannot parse {kind} {text!r}")
    value, unit = m.groups()
    units = _UNITS[kind]
    if unit and unit not in units:
        raise argparse.ArgumentTypeError(f"unknown {kind} unit {unit!r}; use one of {', '.join(units)}")
    try:
        return float(value) * units.get(unit or next(iter(units)), 1.0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {kind} {text!r}") from None


def _length(s):
    return parse_quantity(s, "length")


def _mass(s):
    return parse_quantity(s, "mass")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _constants(args):
    m0 = args.m0
    if m0 not in (None, "amu", "proton", "neutron"):
        try:
            m0 = float(m0)
        except ValueError:
            raise UsageError(f"--m0 must be amu, proton, neutron or a mass in kg, not {m0!r}") from None
    return get_profile(args.profile, m0)


def manifest(command, params, constants, seed=None, **extra):
    m = {
        "command": command,
        "parameters": params,
        "constants_profile": constants.profile,
        "constants": {"hbar": constants.hbar, "sigma_SB": constants.sigma_SB, "m0": constants.m0},
        "tool_version": __version__,
    }
    if seed is not None:
        m["seed"] = seed
    m.update(extra)
    return m


def _emit(args, payload, text_lines):
    if args.json:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _parse_spectrum(text, gamma0):
    if text == "white":
        return noise.White(gamma0)
    kind, _, arg = text.partition(":")
    if kind in ("gauss", "lorentz"):
        try:
            omega = float(arg)
        except ValueError:
            raise UsageError(f"bad cutoff frequency in --spectrum {text!r}") from None
        cls = noise.GaussianCutoff if kind == "gauss" else noise.Lorentzian
        return cls(omega, gamma0)
    if kind == "file":
        return noise.load_tabulated_csv(arg)
    raise UsageError(f"unknown --spectrum {text!r}; use white, gauss:OMEGA, lorentz:OMEGA or file:PATH")


def cmd_heating(args):
    try:
        const = _constants(args)
        p = CollapseParams(args.lam, args.rc)
        m_A = args.m_a if args.m_a is not None else const.m0
        if args.mass_kg < m_A:
            raise UsageError("--mass-kg must be at least the constituent mass --m-a")
        if args.kf is not None and args.kf < 0:
            raise UsageError("--kf must be non-negative")
        if not 0 < args.tol <= 1e-2:
            raise UsageError("--tol must lie in (0, 1e-2]")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params = {"mass_kg": args.mass_kg, "lambda": args.lam, "rc": args.rc, "spectrum": args.spectrum,
              "kf": args.kf, "m_a": m_A, "tol": args.tol}
    if args.spectrum == "white" and args.kf is None:
        res = heating.heating_white(args.mass_kg, p, const, m_A=m_A)
    else:
        spec = _parse_spectrum(args.spectrum, gamma_from_lambda(p))
        gas = heating.FermiGas(m_A=m_A, k_F=args.kf or 0.0, M_total=args.mass_kg)
        res = heating.heating_colored(gas, spec, p, const, quad_cfg=heating.QuadConfig(rtol=args.tol))
    payload = {
        "power_W": res.power,
        "per_particle_power_W": res.per_particle_power,
        "method": res.method,
        "error_estimate_W": res.quadrature_error_estimate,
        "extrapolated_spectrum": res.extrapolated,
        "manifest": manifest("heating", params, const),
    }
    _emit(args, payload, [
        f"method          {res.method}",
        f"power           {res.power:.6e} W",
        f"per particle    {res.per_particle_power:.6e} W",
        f"error estimate  {res.quadrature_error_estimate:.3e} W",
    ] + (["warning: tabulated spectrum extrapolated as zero"] if res.extrapolated else []))
    return EXIT_OK


def cmd_table(args):
    const = _constants(args)
    catalog = astro.load_catalog(args.catalog)
    rows = astro.reproduce_table1(catalog, const)
    header = ["name", "P_over_M_W_per_kg", "lambda_over_rc2_per_s_m2"]
    if args.compare:
        header += ["published_lambda_over_rc2", "deviation"]
    table = []
    for r in rows:
        rec = [r.name, r.power_per_mass, r.lambda_over_rc2]
        if args.compare:
            rec += [r.reference[1] if r.reference else None, r.deviation]
        table.append(rec)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows([["" if v is None else (f"{v:.6e}" if isinstance(v, float) else v) for v in rec]
                         for rec in table])
        _write_manifest(args.csv, manifest("table", {"catalog": args.catalog, "compare": args.compare}, const))

    lines = [f"{'body':<14s}{'P/M [W/kg]':>14s}{'lam/rC^2 [1/(s m^2)]':>24s}"
             + (f"{'published':>12s}{'deviation':>12s}" if args.compare else "")]
    for r in rows:
        if r.error:
            lines.append(f"{r.name:<14s}  error: {r.error}")
            continue
        line = f"{r.name:<14s}{r.power_per_mass:>14.3e}{r.lambda_over_rc2:>24.3e}"
        if args.compare:
            ref = f"{r.reference[1]:.3e}" if r.reference else "-"
            dev = f"{r.deviation:+.3%}" if r.deviation is not None else "-"
            line += f"{ref:>12s}{dev:>12s}"
        lines.append(line)
    payload = {"columns": header, "rows": table,
               "manifest": manifest("table", {"catalog": args.catalog, "compare": args.compare}, const)}
    _emit(args, payload, lines)
    if any(r.error for r in rows):
        return EXIT_COMPUTE
    return EXIT_OK


def _write_manifest(out, m):
    path = Path(str(out) + ".manifest.json")
    path.write_text(json.dumps(m, indent=2) + "\n")
    return path


def cmd_curve(args):
    const = _constants(args)
    catalog = astro.load_catalog(args.catalog)
    try:
        body = astro.find_body(catalog, args.body)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    if args.blackbody:
        body = body.blackbody()
    curve = astro.exclusion_curve(body, args.rc_min, args.rc_max, args.points, const)
    overlays = astro.load_overlay(args.overlay) if args.overlay else None
    params = {"body": body.name, "rc_min": args.rc_min, "rc_max": args.rc_max, "points": args.points,
              "format": args.format, "blackbody": args.blackbody, "overlay": args.overlay,
              "catalog": args.catalog}
    m = manifest("curve", params, const, generated_from=curve.generated_from,
                 lambda_over_rc2=curve.metadata["lambda_over_rc2"])
    out = Path(args.out)
    if args.format == "json":
        doc = {"body": body.name, "columns": ["rC_m", "lambda_max_per_s"],
               "points": curve.points, "manifest": m}
        if overlays is not None:
            doc["overlays"] = overlays
        out.write_text(json.dumps(doc, indent=2) + "\n")
    else:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rC_m", "lambda_max_per_s"])
            for rc, lam in curve.points:
                w.writerow([repr(rc), repr(lam)])
        _write_manifest(out, m)
        if overlays is not None:
            Path(str(out) + ".overlay.json").write_text(json.dumps(overlays, indent=2) + "\n")
    if not args.json:
        print(f"{body.name}: lambda_max = {curve.metadata['lambda_over_rc2']:.4e} * rC^2 "
              f"({curve.generated_from}); {len(curve.rC)} points written to {out}")
    else:
        json.dump({"out": str(out), "points": len(curve.rC), "manifest": m}, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify(args):
    results = verify.run_all(seed=args.seed, fast=args.fast)
    ok = all(r.passed for r in results)
    payload = {"passed": ok, "results": [r.to_dict() for r in results],
               "manifest": {"command": "verify", "parameters": {"fast": args.fast}, "seed": args.seed,
                            "rng_algorithm": noise.RNG_ALGORITHM, "tool_version": __version__}}
    _emit(args, payload, [r.line() for r in results] + [f"{'all oracles passed' if ok else 'FAILED'}"])
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser():
    parser = _Parser(prog="cslfermi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--profile", choices=["codata", "paper"], default="codata",
                        help="constants profile; paper uses the rounded sigma=5.6e-8")
        sp.add_argument("--m0", default=None, help="reference mass: amu (default), proton, neutron, or kg")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("heating", help="CSL heating power")
    sp.add_argument("--mass-kg", type=_mass, required=True, help="total mass (kg, or e.g. 1.4Msun)")
    sp.add_argument("--lambda", dest="lam", type=float, required=True, help="collapse rate [1/s]")
    sp.add_argument("--rc", type=_length, required=True, help="correlation length (m, or e.g. 100nm)")
    sp.add_argument("--spectrum", default="white", help="white | gauss:OMEGA | lorentz:OMEGA | file:PATH")
    sp.add_argument("--kf", type=float, default=None, help="Fermi wavenumber [1/m]")
    sp.add_argument("--m-a", type=_mass, default=None, help="constituent mass (default m0)")
    sp.add_argument("--tol", type=float, default=1e-8, help="quadrature relative tolerance")
    common(sp)
    sp.set_defaults(func=cmd_heating)

    sp = sub.add_parser("table", help="reproduce the power-per-mass bound table")
    sp.add_argument("--catalog", default=None, help=f"catalog JSON (default ${astro.CATALOG_ENV} or shipped)")
    sp.add_argument("--compare", action="store_true", help="add published value and deviation columns")
    sp.add_argument("--csv", default=None, help="also write the table to this CSV file")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("curve", help="export an exclusion curve lambda_max(rC)")
    sp.add_argument("--body", required=True)
    sp.add_argument("--rc-min", type=_length, default=1e-9)
    sp.add_argument("--rc-max", type=_length, default=1e-3)
    sp.add_argument("--points", type=int, default=61)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--overlay", default=None, help="static reference polylines to copy through")
    sp.add_argument("--blackbody", action="store_true", help="use radius and temperature instead of P/M")
    sp.add_argument("--catalog", default=None)
    common(sp)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("verify", help="run the numerical oracle suite")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--fast", action="store_true", help="10x fewer realizations, 10x looser MC tolerance")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cslfermi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except heating.QuadratureError as exc:
        print(f"cslfermi {args.command}: quadrature failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, OSError) as exc:
        code = EXIT_USAGE if isinstance(exc, OSError) else EXIT_COMPUTE
        print(f"cslfermi {args.command}: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
