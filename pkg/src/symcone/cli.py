"""Command-line front-end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.  Every number
in the output is an exact rational written as ``p/q``.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from .cones import INFINITY, certificate_json, effective_cone_xtilde
from .lattice import pair, self_int
from .plane import DEFAULT_T, build_config, interpolation_report
from .surfaces import (
    build_sym2,
    build_x,
    build_xtilde_g1,
    build_xtilde_span,
    build_z,
    dn_class,
    gamma_class,
    rn_class,
    z_gram_from_graph,
    z_intersection_graph,
)
from .wps import NOTATION_PARAMS, build_wps, verify_curve_on_x

SURFACES = ("sym2", "x", "xtilde-g1", "xtilde-span", "z")
_FAMILY = re.compile(r"^(D|Gamma|R)(\d+)$")


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        if re.fullmatch(r"\s*[+-]?\d+(/\d+)?\s*", text) is None:
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",")]


def _param(text: str):
    return INFINITY if text.strip() in ("inf", "infinity", "oo") else _rational(text)


def _param_list(text: str) -> list:
    return [_param(t) for t in text.split(",")]


def _order(text: str):
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"m must be an integer >= 2 or 'infinity', got {text!r}") from None
    if m < 2:
        raise argparse.ArgumentTypeError("m must be at least 2")
    return m


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return n


def _positive(text: str) -> int:
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symcone", description="Exact intersection theory on the surfaces X, X~, Z.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattice", help="print a surface model (Gram, named classes, relations) as JSON")
    s.add_argument("surface", choices=SURFACES)
    s.add_argument("--genus", type=_positive, default=None)

    s = sub.add_parser("pair", help="intersection number of two named classes")
    s.add_argument("surface", choices=SURFACES)
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--genus", type=_positive, default=None)

    s = sub.add_parser("dn", help="the classes D_n on X~ and R_n on Z")
    s.add_argument("--n", type=_nonneg, required=True)

    s = sub.add_parser("cone", help="effective cone of X~ with its facet certificate")
    s.add_argument("--m", type=_order, required=True)
    s.add_argument("--N", type=_positive, default=20, help="ladder length when m is infinity")

    s = sub.add_parser("zgraph", help="dual graph of the negative curves on Z")
    s.add_argument("--format", choices=("dot", "json"), default="dot")

    s = sub.add_parser("wps", help="the weighted projective model of X")
    s.add_argument("--genus", type=_positive, default=1)
    s.add_argument("--params", type=_param_list, default=None,
                   help="2g+2 comma-separated rationals ('infinity' allowed)")
    s.add_argument("--verify-curves", action="store_true")

    s = sub.add_parser("plane", help="plane interpolation oracle for R_n")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--t-values", type=_rational_list, default=None, help="five comma-separated rationals")
    s.add_argument("--kernel", action="store_true", help="also print the kernel vector(s)")

    s = sub.add_parser("verify", help="run the acceptance suite")
    s.add_argument("--json", action="store_true")
    s.add_argument("--perturb-z", nargs=2, type=_nonneg, metavar=("I", "J"),
                   help="flip one off-diagonal entry of the Z Gram before checking")
    return p


def _surface(name: str, genus: int | None):
    if name in ("sym2", "x", "xtilde-span"):
        g = genus if genus is not None else (2 if name == "xtilde-span" else 1)
        if name == "xtilde-span" and g < 2:
            raise UsageError("xtilde-span needs --genus >= 2")
        return {"sym2": build_sym2, "x": build_x, "xtilde-span": build_xtilde_span}[name](g)
    if genus not in (None, 1):
        raise UsageError(f"{name} is only defined for genus 1")
    return build_xtilde_g1() if name == "xtilde-g1" else build_z()


def _named(model, surface: str, label: str):
    if label in model.named_classes:
        return model[label]
    if label in model.lattice.basis_labels:
        return model.lattice.basis(label)
    m = _FAMILY.match(label)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if surface == "xtilde-g1" and kind == "D":
            return dn_class(model, k)
        if surface == "xtilde-g1" and kind == "Gamma" and k >= 2:
            return gamma_class(model, k)
        if surface == "z" and kind == "R":
            return rn_class(model, k)
    known = sorted(set(model.named_classes) | set(model.lattice.basis_labels))
    raise UsageError(f"unknown class {label!r} on {surface}; known: {', '.join(known)}")


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2) + "\n")


def _cmd_lattice(args, out) -> int:
    _dump(_surface(args.surface, args.genus).to_dict(), out)
    return 0


def _cmd_pair(args, out) -> int:
    model = _surface(args.surface, args.genus)
    a, b = _named(model, args.surface, args.a), _named(model, args.surface, args.b)
    out.write(f"{pair(a, b)}\n")
    return 0


def _cmd_dn(args, out) -> int:
    x, z = build_xtilde_g1(), build_z()
    D, R = dn_class(x, args.n), rn_class(z, args.n, x)
    _dump({
        "n": args.n,
        "D_n": D.to_dict(),
        "D_n^2": str(self_int(D)),
        "D_n.K": str(pair(D, x["K"])),
        "R_n": R.to_dict(),
        "R_n^2": str(self_int(R)),
        "R_n.K_Z": str(pair(R, z["K"])),
        "R_n.delta-": str(pair(R, z["delta-"])),
        "R_n.E'": str(pair(R, z["E'"])),
    }, out)
    return 0


def _cmd_cone(args, out) -> int:
    spec, cert = effective_cone_xtilde(args.m, ladder_N=args.N)
    out.write(certificate_json(spec, cert, indent=2) + "\n")
    return 0


def _cmd_zgraph(args, out) -> int:
    graph = z_intersection_graph()
    if args.format == "dot":
        out.write(graph.to_dot())
    else:
        _dump({"nodes": graph.nodes, "edges": [list(e) for e in graph.edges],
               "gram": z_gram_from_graph(graph).to_strings()}, out)
    return 0


def _cmd_wps(args, out) -> int:
    params = args.params if args.params is not None else (list(NOTATION_PARAMS) if args.genus == 1 else None)
    if params is None:
        raise UsageError("--params is required when --genus > 1")
    try:
        S = build_wps(args.genus, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = S.to_dict()
    code = 0
    if args.verify_curves:
        checks = {name: verify_curve_on_x(S, c) for name, c in S.curves.items()}
        payload["curve_checks"] = checks
        code = 0 if all(checks.values()) else 1
    _dump(payload, out)
    return code


def _cmd_plane(args, out) -> int:
    try:
        config = build_config(args.t_values if args.t_values is not None else DEFAULT_T)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = interpolation_report(args.n, config, with_kernel=args.kernel)
    report["multiplicities"] = [report["multiplicities"][k] for k in report["multiplicities"]]
    _dump(report, out)
    return 0


def _cmd_verify(args, out) -> int:
    from .acceptance import verify_all

    gram = None
    if args.perturb_z is not None:
        i, j = args.perturb_z
        if i == j or max(i, j) > 9:
            raise UsageError("--perturb-z needs two distinct indices in 0..9")
        G = z_gram_from_graph()
        v = 1 - G[i, j]
        gram = G.with_entry(i, j, v).with_entry(j, i, v)
    results = verify_all(gram)
    ok = all(r.passed and r.within_budget for r in results)
    if args.json:
        _dump({"passed": ok, "criteria": [r.to_dict() for r in results]}, out)
    else:
        for r in results:
            out.write(r.line() + "\n")
    return 0 if ok else 1


COMMANDS = {
    "lattice": _cmd_lattice,
    "pair": _cmd_pair,
    "dn": _cmd_dn,
    "cone": _cmd_cone,
    "zgraph": _cmd_zgraph,
    "wps": _cmd_wps,
    "plane": _cmd_plane,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    """Parse ``argv`` and run one subcommand; return the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse reports usage errors this way
        return 2 if exc.code else 0
    # buffer so that a usage error leaves no partial output
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except UsageError as exc:
        err.write(f"symcone {args.command}: error: {exc}\n")
        return 2
    out.write(buf.getvalue())
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
