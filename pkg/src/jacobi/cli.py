"""Command-line entry point.

Exit codes: 0 on success, 1 on a domain error (bad structure, parse error,
degree bound), 2 on a usage error (reported by argparse).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable

from .diagram import CapacityError, StructuralError, decode_key
from .grope import (
    builtin_witness,
    grope_from_json,
    grope_to_json,
    psi_capped,
    psi_uncapped,
    push_in,
)
from .notation import ParseError, diagram_to_json, format_key
from .serialize import element_to_json, format_element_text, read_element
from .skeleton import pull_off
from .spaces import (
    Element,
    SpaceReport,
    generate_graphs,
    generate_trees,
    reduce_mod_ihx,
    space_report,
)
from .tower import theorem1_witness, tau_hat, tower_from_json, tower_to_json

DOMAIN_ERRORS = (StructuralError, CapacityError, ParseError, ValueError, KeyError)


def _labels(args) -> list[str]:
    if args.label_set:
        labels = [s.strip() for s in args.label_set.split(",") if s.strip()]
        if not labels:
            raise ValueError("--label-set is empty")
        return labels
    return [str(i) for i in range(1, args.labels + 1)]


def _read(args) -> str:
    if args.input and args.input != "-":
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _element_out(e: Element, fmt: str) -> str:
    if fmt == "json":
        return _dump(element_to_json(e))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("coeff", "diagram", "two_torsion"))
        for k, c in e:
            w.writerow((c, format_key(k), int(e.is_two_torsion(k))))
        return buf.getvalue().rstrip("\n")
    return format_element_text(e)


def _generators_out(basis, fmt: str) -> str:
    if fmt == "json":
        return _dump([
            {"text": format_key(c.key), "two_torsion": c.two_torsion, "diagram": diagram_to_json(decode_key(c.key))}
            for c in basis
        ])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("diagram", "two_torsion"))
        for c in basis:
            w.writerow((format_key(c.key), int(c.two_torsion)))
        return buf.getvalue().rstrip("\n")
    return "\n".join(format_key(c.key) + (" (two-torsion)" if c.two_torsion else "") for c in basis)


def _report_out(r: SpaceReport, fmt: str) -> str:
    if fmt == "json":
        return _dump(r.to_json())
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SpaceReport.CSV_HEADER)
        w.writerow(r.to_csv_row())
        return buf.getvalue().rstrip("\n")
    torsion = " + ".join(f"Z/{t}" for t in r.torsion) or "none"
    return (f"degree {r.degree} ({r.grading}): {r.generators} generators, "
            f"rank {r.rank}, torsion {torsion}")


# ---------------------------------------------------------------------------
# commands


def cmd_gen_trees(args) -> str:
    basis = generate_trees(args.degree, _labels(args), "distinct" if args.distinct else "repeats")
    return _generators_out(basis, args.format)


def cmd_gen_graphs(args) -> str:
    basis = generate_graphs(args.degree, _labels(args))
    return _generators_out(basis, args.format)


def cmd_rank(args) -> str:
    r = space_report(args.degree, _labels(args), args.grading, args.distinct, args.mod_ihx)
    return _report_out(r, args.format)


def cmd_reduce(args) -> str:
    return _element_out(reduce_mod_ihx(read_element(_read(args))), args.format)


def cmd_pull_off(args) -> str:
    return _element_out(pull_off(read_element(_read(args))), args.format)


def cmd_psi(args) -> str:
    G = grope_from_json(_load_json(_read(args)))
    if G.capped and not args.uncapped:
        e = psi_capped(G, args.degree)
    else:
        e = psi_uncapped(G, args.degree)
    return _element_out(e, args.format)


def cmd_tau(args) -> str:
    t = tower_from_json(_load_json(_read(args)))
    e = tau_hat(t)
    if args.reduce_ihx:
        e = reduce_mod_ihx(e)
    return _element_out(e, args.format)


def cmd_push_in(args) -> str:
    G = grope_from_json(_load_json(_read(args)))
    return _dump(tower_to_json(push_in(G)))


def cmd_witness(args) -> str:
    if args.kind == "theorem1":
        return _dump(tower_to_json(theorem1_witness()))
    return _dump(grope_to_json(builtin_witness(args.kind, args.degree)))


def selfcheck_items() -> list[tuple[str, Callable[[], bool]]]:
    def theorem1() -> bool:
        e = tau_hat(theorem1_witness())
        return len(e) == 3 and not reduce_mod_ihx(e)

    def construction() -> bool:
        G = builtin_witness("construction-4.1")
        return pull_off(psi_capped(G)) == tau_hat(theorem1_witness())

    def square() -> bool:
        kinds = ["construction-4.1", "theorem-3", "theorem-ihxn(4)", "theorem-ihxn(5)"]
        return all(pull_off(psi_capped(G)) == tau_hat(push_in(G)) for G in map(builtin_witness, kinds))

    def ranks() -> bool:
        from math import factorial

        return all(
            space_report(k - 1, [str(i) for i in range(1, k + 1)], distinct=True, mod_ihx=True).rank
            == factorial(k - 2)
            for k in (3, 4, 5)
        )

    def graph_witness() -> bool:
        e = psi_uncapped(builtin_witness("theorem-genihx-graph"))
        return bool(e) and not reduce_mod_ihx(e)

    return [
        ("theorem1 witness reduces to zero", theorem1),
        ("construction witness pulls off to the theorem1 invariant", construction),
        ("push-in square commutes on built-ins", square),
        ("tree rank table (k-2)! for k=3..5", ranks),
        ("graph IHX witness reduces to zero", graph_witness),
    ]


def cmd_selfcheck(args) -> tuple[str, int]:
    lines, ok = [], True
    for name, check in selfcheck_items():
        try:
            passed = bool(check())
        except Exception as exc:  # report, keep going
            passed = False
            name = f"{name} ({exc})"
        ok &= passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}")
    return "\n".join(lines), 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jacobi", description="Jacobi diagram, grope and Whitney tower calculator.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True, inp=False):
        if fmt:
            sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
        if inp:
            sp.add_argument("--in", dest="input", metavar="FILE", help="input file (default: stdin)")
        sp.add_argument("--out", dest="output", metavar="FILE", help="output file (default: stdout)")

    def labelled(sp):
        sp.add_argument("--degree", type=int, required=True)
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--labels", type=int, default=1, metavar="N", help="use labels 1..N")
        g.add_argument("--label-set", metavar="a,b,c")
        sp.add_argument("--distinct", action="store_true", help="no label repeats within a tree")

    sp = sub.add_parser("gen-trees", help="list tree generators")
    labelled(sp)
    common(sp)
    sp.set_defaults(func=cmd_gen_trees)

    sp = sub.add_parser("gen-graphs", help="list connected diagrams of a grope degree")
    labelled(sp)
    common(sp)
    sp.set_defaults(func=cmd_gen_graphs)

    sp = sub.add_parser("rank", help="rank and torsion of a diagram space")
    labelled(sp)
    sp.add_argument("--grading", choices=("vassiliev", "grope"), default="vassiliev")
    sp.add_argument("--mod-ihx", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("reduce", help="reduce an element modulo IHX")
    common(sp, inp=True)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("pull-off", help="forget attachment order of an attached element")
    common(sp, inp=True)
    sp.set_defaults(func=cmd_pull_off)

    sp = sub.add_parser("psi", help="diagram image of a grope encoding")
    sp.add_argument("--degree", type=int, default=None, help="keep only terms of this degree")
    sp.add_argument("--uncapped", action="store_true", help="use the uncapped map on a capped grope")
    common(sp, inp=True)
    sp.set_defaults(func=cmd_psi)

    sp = sub.add_parser("tau", help="intersection invariant of a tower")
    sp.add_argument("--reduce-ihx", action="store_true")
    common(sp, inp=True)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("push-in", help="tower obtained from a strictly capped grope")
    common(sp, fmt=False, inp=True)
    sp.set_defaults(func=cmd_push_in)

    sp = sub.add_parser("witness", help="print built-in witness data as JSON")
    sp.add_argument("kind", help="theorem1, construction-4.1, theorem-3, theorem-ihxn(N), theorem-genihx-graph")
    sp.add_argument("--degree", type=int, default=None, help="degree for theorem-ihxn")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("selfcheck", help="run the built-in verifications")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_selfcheck)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    text = result + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
