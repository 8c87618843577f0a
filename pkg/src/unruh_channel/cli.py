"""Command line: ``sweep``, ``kraus`` and ``verify``.

Exit status is 0 on success, 1 when verification fails and 2 for usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .channels import KrausChannel, choi, compose, unruh_channel
from .scenarios import (
    PANELS,
    SCENARIOS,
    ScenarioError,
    SweepSpec,
    default_spec,
    emit_csv,
    load_config,
    noise_channel,
    parse_assignments,
    run_scenario,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KRAUS_DEFAULTS = {
    "qnd": {"r": math.pi / 8, "T": 0.5, "s": 0.5, "t": 0.5, "omega0": 1.0, "gamma0": 0.1,
            "omega_c": 1.0, "a_bath": 0.0},
    "sgad": {"r": math.pi / 8, "T": 0.5, "s": 0.5, "t": 0.5, "omega0": 0.1, "gamma0": 0.1, "phi_s": 0.0},
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unruh-channel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate a figure scenario on a grid and write CSV")
    sw.add_argument("--scenario", choices=sorted(SCENARIOS), help="scenario name")
    sw.add_argument("--panel", choices=PANELS, default="tr",
                    help="ts: temperature x squeezing, tr: time x Unruh angle (default tr)")
    sw.add_argument("--config", help="YAML sweep description; --scenario and --set override it")
    sw.add_argument("--steps", type=int, help="grid points per axis (default 41)")
    sw.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="fix a parameter, e.g. --set T=1.5 or --set r=pi/8")
    sw.add_argument("--out", help="CSV output path")
    sw.add_argument("--workers", type=int, default=1, help="processes used for the grid")

    kr = sub.add_parser("kraus", help="print Kraus operators and Choi matrix of a channel")
    kr.add_argument("--channel", required=True, choices=("unruh", "qnd", "sgad", "composed"))
    kr.add_argument("--noise", choices=("qnd", "sgad"), default="qnd",
                    help="bath noise used by --channel composed (default qnd)")
    kr.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    ve = sub.add_parser("verify", help="run the acceptance and invariant checks")
    ve.add_argument("--json", action="store_true", help="print the report as JSON")
    return ap


def _sweep_spec(args) -> SweepSpec:
    overrides = parse_assignments(args.set)
    if args.config:
        spec = load_config(args.config)
        if args.scenario and args.scenario != spec.scenario:
            spec = default_spec(args.scenario, args.panel, args.steps or spec.axis1.steps)
    elif args.scenario:
        spec = default_spec(args.scenario, args.panel, args.steps or 41)
    else:
        raise ScenarioError("sweep needs --scenario or --config")
    a1, a2 = spec.axis1, spec.axis2
    if args.steps and args.config:
        a1 = type(a1)(a1.name, a1.lo, a1.hi, args.steps)
        a2 = type(a2)(a2.name, a2.lo, a2.hi, args.steps)
    for name in overrides:
        if name in (a1.name, a2.name):
            raise ScenarioError(f"parameter {name!r} is swept and cannot be fixed")
    fixed = {**spec.fixed, **overrides}
    out = args.out or spec.output_path
    if not out:
        raise ScenarioError("sweep needs --out (or 'output' in the config)")
    return SweepSpec(spec.scenario, a1, a2, fixed, out)


def _cmd_sweep(args) -> int:
    try:
        spec = _sweep_spec(args)
        result = run_scenario(spec, workers=max(1, args.workers))
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit_csv(result, spec.output_path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {len(result.rows)} rows to {spec.output_path}")
    return EXIT_OK


PRINT_FLOOR = 1e-14


def _clean(x: float) -> float:
    # rounding residue and negative zero make the listing harder to read
    return 0.0 if abs(x) < PRINT_FLOOR else x


def _fmt_complex(z: complex) -> str:
    return f"{_clean(z.real):.9g}{_clean(z.imag):+.9g}i"


def format_matrix(m: np.ndarray, indent: str = "  ") -> str:
    cells = [[_fmt_complex(complex(z)) for z in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(indent + "  ".join(c.rjust(width) for c in row) for row in cells)


def kraus_channel(kind: str, noise: str, params: dict) -> tuple[KrausChannel, dict]:
    base = dict(KRAUS_DEFAULTS["sgad" if kind == "sgad" or (kind == "composed" and noise == "sgad") else "qnd"])
    if kind == "unruh":
        base = {"r": base["r"]}
    unknown = set(params) - set(base)
    if unknown:
        raise ScenarioError(f"parameter(s) {', '.join(sorted(unknown))} do not apply to the {kind} channel")
    p = {**base, **params}
    if kind == "unruh":
        return unruh_channel(p["r"]), p
    if kind == "composed":
        return compose(noise_channel(noise, p), unruh_channel(p["r"])), p
    bath_only = {k: v for k, v in p.items() if k != "r"}
    return noise_channel(kind, {**bath_only, "r": 0.0}), bath_only


def _cmd_kraus(args) -> int:
    try:
        ch, p = kraus_channel(args.channel, args.noise, parse_assignments(args.set))
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    title = args.channel if args.channel != "composed" else f"composed ({args.noise} after unruh)"
    print(f"channel: {title}")
    print("parameters: " + ", ".join(f"{k}={v:.9g}" for k, v in sorted(p.items())))
    print(f"Kraus operators ({len(ch)}):")
    for i, k in enumerate(ch.ops, 1):
        print(f" K{i} =")
        print(format_matrix(k))
    print(f"completeness residual: {ch.completeness_residual():.3e}")
    print("Choi matrix:")
    print(format_matrix(choi(ch)))
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verification import verify

    if args.json:
        report = verify()
        print(json.dumps(report.to_dict(), indent=2))
    else:
        report = verify(progress=lambda c: print(c.line(), flush=True))
        n = len(report.failures())
        print("verification passed" if report.passed else f"verification failed: {n} check(s)")
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"sweep": _cmd_sweep, "kraus": _cmd_kraus, "verify": _cmd_verify}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
