"""Command-line interface: ``g2lab verify | classify | evolve``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .coeffs import parse_rational
from .forms import UnsupportedMetricError
from .frames import validate_frame
from .geng2 import product_structure
from .registry import EXAMPLES, FixtureError, parse_fixture, run_all, run_suite
from .report import residual_str
from .su3 import (TorsionDecompositionError, check_hypo7, torsion_decompose, validate_su3,
                  w2plus_analysis)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_params(items: Optional[List[str]]) -> Dict[str, Fraction]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        k, v = (x.strip() for x in item.split("=", 1))
        try:
            out[k] = parse_rational(v)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"parameter {k} must be an exact rational, got {v!r}") from None
    return out


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_verify(args) -> int:
    params = _parse_params(args.param)
    if args.all == bool(args.id):
        raise UsageError("give exactly one of an example id or --all")
    try:
        if args.all:
            reports = run_all(params)
        else:
            if args.id not in EXAMPLES:
                raise UsageError(f"unknown example {args.id!r}; known: {', '.join(sorted(EXAMPLES))}")
            reports = [run_suite(args.id, params)]
    except FixtureError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        text = json.dumps(payload if args.all else payload[0], indent=2, ensure_ascii=False)
    else:
        text = "\n\n".join(r.to_text() for r in reports)
        if args.all:
            bad = [r.example for r in reports if not r.passed]
            text += f"\n\n{len(reports) - len(bad)}/{len(reports)} examples pass"
            if bad:
                text += ": failing " + ", ".join(bad)
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def classify_text(frame_text: str, forms_text: Optional[str] = None) -> dict:
    """Torsion components and class flags for a frame with standard or given forms."""
    fx = parse_fixture(frame_text + ("\n" + forms_text if forms_text is not None else ""))
    free = [k for k, v in fx.params.items() if v is None]
    if free:
        raise UsageError(f"give rational values for parameters {free} in [params]")
    fx = fx.bound({})
    s = fx.su3()
    out = {"frame": str(fx.frame), "forms": "explicit" if fx.forms else "standard", "checks": [], "flags": {}}
    jac = validate_frame(fx.frame)
    out["checks"] += [c.to_dict() for c in jac.checks if not c.passed]
    if s.n != 6:
        raise UsageError("classify expects a 6-dimensional frame")
    comp = validate_su3(s)
    out["checks"] += [c.to_dict() for c in comp.checks]
    try:
        tc = torsion_decompose(s)
        out["torsion"] = {k: residual_str(v) if not isinstance(v, Fraction) else str(v)
                          for k, v in tc.as_dict().items()}
        out["flags"]["integrable"] = not tc.nonzero()
    except (TorsionDecompositionError, UnsupportedMetricError) as exc:
        out["torsion"] = None
        out["torsion_note"] = str(exc)
        out["flags"]["integrable"] = not (s.d(s.omega) or s.d(s.psi_plus) or s.d(s.psi_minus))
    w = w2plus_analysis(s)
    out["flags"]["W2+"] = w.member
    if w.member:
        out["pi2"] = residual_str(w.pi2)
        out["d pi2"] = residual_str(s.d(w.pi2))
    else:
        out["obstruction"] = w.obstruction
    out["flags"]["hypo on x S1"] = check_hypo7(product_structure(s)).passed
    return out


def _classification_text(c: dict) -> str:
    lines = [f"frame {c['frame']} ({c['forms']} forms)"]
    for ch in c["checks"]:
        lines.append(f"  {ch['status'].upper():4}  {ch['name']}" + (f"  residual: {ch['residual']}"
                                                                    if ch["status"] == "fail" else ""))
    if c.get("torsion") is not None:
        nz = {k: v for k, v in c["torsion"].items() if v not in ("0", "")}
        lines.append("  torsion: " + (", ".join(f"{k} = {v}" for k, v in nz.items()) if nz else "all zero"))
    else:
        lines.append(f"  torsion: not decomposed ({c.get('torsion_note')})")
    if c["flags"]["integrable"]:
        lines.append("  integrable")
    if c["flags"]["W2+"]:
        tail = ", d pi2 != 0" if c["d pi2"] != "0" else ", d pi2 = 0"
        lines.append(f"  W2+, pi2 = {c['pi2']}{tail}")
    else:
        lines.append(f"  not W2+ with {c['forms']} forms ({c['obstruction']} fails)")
    lines.append(f"  hypo on x S1: {'yes' if c['flags']['hypo on x S1'] else 'no'}")
    return "\n".join(lines)


def cmd_classify(args) -> int:
    try:
        with open(args.file) as fh:
            frame_text = fh.read()
        forms_text = None
        if args.forms and args.forms != "standard":
            with open(args.forms) as fh:
                forms_text = fh.read()
        result = classify_text(frame_text, forms_text)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except FixtureError as exc:
        raise UsageError(f"cannot parse {args.file}: {exc}") from None
    text = json.dumps(result, indent=2, ensure_ascii=False) if args.format == "json" else _classification_text(result)
    _emit(text, args.out)
    return EXIT_FAIL if any(c["status"] == "fail" for c in result["checks"]) else EXIT_OK


def cmd_evolve(args) -> int:
    from .evolution import IntegrationError, evolution_residuals, evolved_family, integrate_rk4

    try:
        a = parse_rational(args.a)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--a must be an exact rational, got {args.a!r}") from None
    if args.step <= 0 or args.t_end < 0:
        raise UsageError("--step must be positive and --t-end non-negative")
    try:
        traj = integrate_rk4(float(a), args.t_end, args.step, backend=args.backend)
    except IntegrationError as exc:
        print(f"integration aborted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.csv:
        traj.to_csv(args.csv)
    eu, ev = traj.max_errors()
    print(f"a = {a}, t_end = {args.t_end}, step = {traj.step:g}, backend = {traj.backend}")
    print(f"u({traj.t[-1]:g}) = {traj.u[-1]:.15g}, v = {traj.v[-1]:.15g}")
    print(f"max |u - (1 + a t/2)| = {eu:.3e}, max |v - 1| = {ev:.3e}")
    status = EXIT_OK
    if args.check_analytic:
        ok_num = eu <= args.tol_u and ev <= args.tol_v
        print(f"{'PASS' if ok_num else 'FAIL'}  numeric vs analytic (tol u {args.tol_u:g}, v {args.tol_v:g})")
        rep = evolution_residuals(evolved_family(a))
        for c in rep.checks:
            print(f"{c.status.upper():4}  {c.name}")
        if not (ok_num and rep.passed):
            status = EXIT_FAIL
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="g2lab", description="Exact checks for generalized G2 and SU(3) structures.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suite of a built-in example")
    v.add_argument("id", nargs="?", help="example id (see --list)")
    v.add_argument("--all", action="store_true", help="run every example")
    v.add_argument("--list", action="store_true", help="list example ids and exit")
    v.add_argument("--param", action="append", metavar="K=V", help="bind a parameter to a rational")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", metavar="FILE")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="torsion classes of a frame with standard or given forms")
    c.add_argument("file")
    c.add_argument("--forms", default="standard", help="'standard' or a file with a [forms] section")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out", metavar="FILE")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("evolve", help="integrate the reduced flow and compare with the exact solution")
    e.add_argument("--a", default="2")
    e.add_argument("--t-end", type=float, default=1.0)
    e.add_argument("--step", type=float, default=1e-3)
    e.add_argument("--csv", metavar="FILE")
    e.add_argument("--check-analytic", action="store_true")
    e.add_argument("--tol-u", type=float, default=1e-8)
    e.add_argument("--tol-v", type=float, default=1e-10)
    e.add_argument("--backend", choices=("numba", "numpy"))
    e.set_defaults(func=cmd_evolve)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "verify" and args.list:
        for k in sorted(EXAMPLES):
            print(f"{k:20} {EXAMPLES[k].anchor}")
        return EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"g2lab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
