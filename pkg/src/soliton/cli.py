"""Command-line front end.

Exit status: 0 success, 1 a verification check failed, 2 bad arguments,
3 algebra outside type A^(1), 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from soliton.cartan import all_table_rows, parse_algebra, require_computational
from soliton.diffpoly import DiffPoly, to_latex, to_text
from soliton.errors import (InternalConsistencyError, SolitonError, UnknownAlgebraError,
                            UnsupportedAlgebraError)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4


class UsageError(SolitonError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_cutoff() -> int:
    raw = os.environ.get("SOLITON_CUTOFF")
    if raw is None:
        from soliton.recursion import DEFAULT_CUTOFF
        return DEFAULT_CUTOFF
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"SOLITON_CUTOFF must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("SOLITON_CUTOFF must be non-negative")
    return value


def _var_name(base: str, i: int, rank: int) -> str:
    return base if rank == 1 else f"{base}{i}"


def _render(p: DiffPoly, fmt: str, name: str) -> str:
    return to_latex(p, name) if fmt == "latex" else to_text(p, name)


def _equations(lhs_prefix: str, base: str, images, fmt: str, name: str) -> list[str]:
    rank = len(images)
    lines = []
    for i, p in enumerate(images, start=1):
        var = _var_name(base, i, rank)
        if fmt == "latex":
            v = f"{base}_{{{i}}}" if rank > 1 else base
            lines.append(f"{lhs_prefix} {v} = {_render(p, fmt, name)}")
        else:
            lines.append(f"{lhs_prefix} {var} = {_render(p, fmt, name)}")
    return lines


def _flow_prefix(n: int, fmt: str) -> str:
    return f"\\partial_{{{n}}}" if fmt == "latex" else f"∂_{n}"


def _computational(name: str) -> int:
    return require_computational(parse_algebra(name))


def _check_flow(N: int, n: int):
    from soliton.cartan import sl

    if not sl(N).in_I(n):
        raise UsageError(f"{n} ∉ I for A_{N - 1}^(1): flows exist only for n ≢ 0 mod {N}")


def cmd_flows(args) -> dict:
    from soliton.recursion import mkdv_flow

    N = _computational(args.algebra)
    _check_flow(N, args.flow)
    cutoff = args.cutoff if args.cutoff is not None else default_cutoff()
    flow = mkdv_flow(N, args.flow, cutoff)
    return {
        "json": {"algebra": args.algebra, "flow": args.flow,
                 "images": [p.to_json_obj() for p in flow.images]},
        "lines": _equations(_flow_prefix(args.flow, args.format), "u", flow.images, args.format, "u"),
    }


def cmd_miura(args) -> dict:
    from soliton.reduction import miura

    N = _computational(args.algebra)
    images = miura(N)
    rank = N - 1
    lines = []
    for i, p in enumerate(images, start=1):
        if args.format == "latex":
            lhs = f"s_{{{i}}}" if rank > 1 else "s"
        else:
            lhs = _var_name("s", i, rank)
        lines.append(f"{lhs} = {_render(p, args.format, 'u')}")
    return {"json": {"algebra": args.algebra, "miura": [p.to_json_obj() for p in images]},
            "lines": lines}


def cmd_kdv(args) -> dict:
    from soliton.reduction import kdv_flow

    N = _computational(args.algebra)
    _check_flow(N, args.flow)
    flow = kdv_flow(N, args.flow)
    return {
        "json": {"algebra": args.algebra, "flow": args.flow, "variables": "s",
                 "images": [p.to_json_obj() for p in flow.images]},
        "lines": _equations(_flow_prefix(args.flow, args.format), "s", flow.images, args.format, "s"),
    }


def _fraction_text(c: Fraction) -> str:
    return str(c).replace("-", "−")


def cmd_conserved(args) -> dict:
    from soliton.toda import find_integrals

    N = _computational(args.algebra)
    _check_flow(N, args.degree)
    c = find_integrals(N, args.degree)
    lines = [
        f"H_{args.degree} = {_render(c.density, args.format, 'u')}",
        f"xi(H_{args.degree}) = {_fraction_text(c.scale)} ∂_{args.degree}",
        f"hamiltonian = {_render(c.hamiltonian, args.format, 'u')}",
    ]
    return {"json": {"algebra": args.algebra, "degree": args.degree,
                     "density": c.density.to_json_obj(),
                     "scale": f"{c.scale.numerator}/{c.scale.denominator}",
                     "hamiltonian": c.hamiltonian.to_json_obj()},
            "lines": lines}


def _parse_poly(text: str, rank: int) -> DiffPoly:
    try:
        return DiffPoly.from_json(text, rank)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot parse differential polynomial JSON: {exc}") from None


def cmd_poisson(args) -> dict:
    from soliton.toda import LocalFunctional, poisson_bracket

    N = _computational(args.algebra)
    left = _parse_poly(args.left, N - 1)
    right = _parse_poly(args.right, N - 1)
    for p in (left, right):
        if p.variables() and max(i for i, _ in p.variables()) > N - 1:
            raise UsageError("variable index exceeds the rank")
    result = poisson_bracket(LocalFunctional(left), LocalFunctional(right))
    return {"json": {"algebra": args.algebra, "bracket": result.representative.to_json_obj()},
            "lines": [f"{{∫P, ∫R}} = ∫ {_render(result.representative, args.format, 'u')} dz"]}


def cmd_table(args) -> dict:
    rows = [parse_algebra(args.algebra)] if args.algebra else all_table_rows()
    lines = []
    for d in rows:
        lines.append(f"{d.name}: h={d.coxeter_number} exponents={list(d.exponents)} "
                     f"labels={list(d.labels)}")
    obj = [d.to_json_obj() for d in rows]
    return {"json": obj[0] if args.algebra else obj, "lines": lines}


def cmd_verify(args) -> dict:
    from soliton.verification import run_checks

    N = _computational(args.algebra)
    results = run_checks(N)
    lines = [f"{'PASS' if ok else 'FAIL'} {name} ({secs:.2f}s)" for name, ok, secs in results]
    failed = [name for name, ok, _ in results if not ok]
    return {"json": {"algebra": args.algebra,
                     "checks": [{"name": n, "pass": ok} for n, ok, _ in results]},
            "lines": lines, "status": EXIT_CHECK_FAILED if failed else EXIT_OK}


COMMANDS = {
    "flows": cmd_flows,
    "miura": cmd_miura,
    "kdv": cmd_kdv,
    "conserved": cmd_conserved,
    "poisson": cmd_poisson,
    "verify": cmd_verify,
    "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="soliton", description="mKdV/KdV hierarchies of type A_{N-1}^(1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, algebra_required=True):
        p.add_argument("--algebra", required=algebra_required, help="e.g. sl2, A2, E8")
        p.add_argument("--format", choices=("text", "latex", "json"), default="text")

    p = sub.add_parser("flows", help="mKdV flow d_n u_i")
    common(p)
    p.add_argument("--flow", type=int, required=True)
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("miura", help="Miura map u -> s")
    common(p)

    p = sub.add_parser("kdv", help="KdV flow d_n s_i")
    common(p)
    p.add_argument("--flow", type=int, required=True)

    p = sub.add_parser("conserved", help="integral of motion of degree m")
    common(p)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("poisson", help="bracket of two local functionals (JSON input)")
    common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("verify", help="run the cross-module checks")
    common(p)

    p = sub.add_parser("table", help="Coxeter numbers and exponents")
    common(p, algebra_required=False)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "cutoff", None) is not None and args.cutoff < 0:
            raise UsageError("--cutoff must be non-negative")
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except UnsupportedAlgebraError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_UNSUPPORTED
    except UnknownAlgebraError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=stderr)
        return EXIT_INTERNAL
    if args.format == "json":
        print(json.dumps(result["json"], sort_keys=True), file=stdout)
    else:
        print("\n".join(result["lines"]), file=stdout)
    return result.get("status", EXIT_OK)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
