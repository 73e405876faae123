"""Command-line front end.

Exit codes: 0 pass, 1 checked and failed (or a mathematical precondition
was violated), 2 malformed input or usage, 3 unresolved reference,
4 shape mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .cohomology import cohomology_dims
from .deform import (
    equivalence_check_formal,
    equivalence_check_infinitesimal,
    formal_check,
    printed_crosscheck,
)
from .errors import (
    ContainmentViolation,
    FormulaDisagreement,
    NotInvertible,
    ParseError,
    ShapeMismatch,
    ThreeLieError,
    TooLarge,
    UnresolvedReference,
    ValidationFailure,
)
from .exactla import Mat
from .induce import (
    check_trace,
    check_twisted_lie,
    diagram_check,
    induce_3lie,
    induce_3ns,
    induce_cocycle,
    induce_rep,
    induced_twisted,
    validate_binary_context,
)
from .io import Entry, Workspace, parse_workspace, serialize_object
from .nslie import (
    check_3ns,
    check_ns_binary,
    compatible_from_invertible,
    from_nijenhuis_ns,
    from_twisted_ns,
    subadjacent,
)
from .report import Report, merge
from .structures import (
    check_cocycle3,
    check_cocycle_lie,
    check_filippov,
    check_jacobi,
    check_rep3,
    check_rep_lie,
    coboundary1,
    semidirect_twisted,
)
from .twistop import (
    check_gauge_isomorphism,
    check_twisted,
    coboundary_shift,
    gauge_transform,
    nijenhuis_check,
    nijenhuis_package,
    validate_context,
    validate_package,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNRESOLVED = 3
EXIT_SHAPE = 4

VERIFY_KINDS = (
    "3lie",
    "lie",
    "rep3",
    "rep_lie",
    "cocycle3",
    "cocycle_lie",
    "twisted",
    "twisted_lie",
    "3ns",
    "ns",
    "trace",
    "nijenhuis",
    "family",
)

INDUCE_WHAT = ("3lie", "rep", "cocycle", "twisted", "3ns", "diagram")


class Outcome:
    """A report plus the objects a command produced."""

    def __init__(self, report: Report, created=None):
        self.report = report
        self.created = created or []  # (name, kind, obj, refs)


def load_workspace(files) -> Workspace:
    ws = parse_workspace(files or [])
    for name, fn in list(catalog.THREE_LIE.items()):
        if name not in ws:
            ws.add(name, "3lie", fn())
    for name, fn in list(catalog.LIE.items()):
        if name not in ws:
            ws.add(name, "lie", fn())
    return ws


def _refs(ws: Workspace, name: str) -> dict:
    return ws.entry(name).refs


# -- verify -------------------------------------------------------------------


def cmd_verify(ws: Workspace, args) -> Outcome:
    kind, name = args.kind, args.obj
    if kind == "3lie":
        return Outcome(check_filippov(ws.get(name, "3lie")))
    if kind == "lie":
        return Outcome(check_jacobi(ws.get(name, "lie")))
    if kind in ("rep3", "rep_lie"):
        rho = ws.get(name, kind)
        g = ws.get(_refs(ws, name)["algebra"])
        return Outcome(check_rep3(g, rho) if kind == "rep3" else check_rep_lie(g, rho))
    if kind in ("cocycle3", "cocycle_lie"):
        theta = ws.get(name, kind)
        refs = _refs(ws, name)
        g, rho = ws.get(refs["algebra"]), ws.get(refs["rep"])
        check = check_cocycle3 if kind == "cocycle3" else check_cocycle_lie
        return Outcome(check(g, rho, theta))
    if kind == "twisted":
        op = ws.get(name, "twisted_op")
        return Outcome(merge(f"twisted operator {name}", [validate_context(op), check_twisted(op)]))
    if kind == "twisted_lie":
        bop = ws.get(name, "twisted_op_lie")
        return Outcome(merge(f"binary twisted operator {name}", [validate_binary_context(bop), check_twisted_lie(bop)]))
    if kind == "3ns":
        return Outcome(check_3ns(ws.get(name, "3ns")))
    if kind == "ns":
        return Outcome(check_ns_binary(ws.get(name, "ns")))
    if kind == "trace":
        tau = ws.get(name, "trace")
        return Outcome(check_trace(ws.get(_refs(ws, name)["algebra"]), tau))
    if kind == "nijenhuis":
        if not args.algebra:
            raise ParseError("verify nijenhuis needs --algebra")
        return Outcome(nijenhuis_check(ws.get(args.algebra, "3lie"), ws.get(name, "linmap")))
    if kind == "family":
        return Outcome(formal_check(ws.get(name, "deformation_family")))
    raise ParseError(f"unknown kind {kind!r}")


# -- construct ----------------------------------------------------------------


def _stem(args, default: str) -> str:
    return args.name or default


def cmd_semidirect(ws: Workspace, args) -> Outcome:
    refs = _refs(ws, args.cocycle)
    theta = ws.get(args.cocycle, "cocycle3")
    g, rho = ws.get(refs["algebra"], "3lie"), ws.get(refs["rep"], "rep3")
    alg = semidirect_twisted(g, rho, theta)
    r = check_filippov(alg)
    r.subject = f"semidirect product of {refs['algebra']} by {refs['rep']} twisted by {args.cocycle}"
    return Outcome(r, [(_stem(args, "semidirect"), "3lie", alg, {})])


def cmd_nijenhuis(ws: Workspace, args) -> Outcome:
    g = ws.get(args.algebra, "3lie")
    N = ws.get(args.map, "linmap")
    pkg = nijenhuis_package(g, N)
    r = validate_package(pkg)
    r.subject = f"Nijenhuis package of {args.map} on {args.algebra}"
    stem = _stem(args, f"{args.algebra}_{args.map}")
    gn, rho, theta, op = (ws.fresh_name(f"{stem}_{s}") for s in ("alg", "rep", "cocycle", "op"))
    return Outcome(
        r,
        [
            (gn, "3lie", pkg.g_n, {}),
            (rho, "rep3", pkg.rho, {"algebra": gn}),
            (theta, "cocycle3", pkg.theta, {"algebra": gn, "rep": rho}),
            (op, "twisted_op", pkg.op, {"algebra": gn, "rep": rho, "cocycle": theta}),
        ],
    )


def cmd_derive_ns(ws: Workspace, args) -> Outcome:
    if args.algebra and args.map:
        ns = from_nijenhuis_ns(ws.get(args.algebra, "3lie"), ws.get(args.map, "linmap"))
        subject = f"3-NS-Lie algebra of Nijenhuis operator {args.map}"
    elif args.op:
        op = ws.get(args.op, "twisted_op")
        if args.mode == "compatible":
            ns = compatible_from_invertible(op)
            subject = f"compatible 3-NS-Lie algebra of {args.op}"
        else:
            ns = from_twisted_ns(op)
            subject = f"3-NS-Lie algebra of {args.op}"
    else:
        raise ParseError("derive-ns needs --op, or --algebra with --map")
    r = check_3ns(ns)
    r.subject = subject
    created = [(_stem(args, "ns"), "3ns", ns, {})]
    if r.passed:
        r.extra["subadjacent"] = serialize_object("subadjacent", _entry("3lie", subadjacent(ns, validate=False)))
    return Outcome(r, created)


def _entry(kind, obj, refs=None):
    return Entry(kind, obj, dict(refs or {}))


def _theta1(ws: Workspace, name: str, op) -> Mat:
    m = ws.get(name, "linmap")
    if m.shape != (op.v_dim, op.g_dim):
        raise ShapeMismatch(f"theta1 {name!r} has shape {m.shape}, expected {(op.v_dim, op.g_dim)}")
    return m


def cmd_gauge(ws: Workspace, args) -> Outcome:
    op = ws.get(args.op, "twisted_op")
    theta1 = _theta1(ws, args.theta1, op)
    new = gauge_transform(op, theta1)
    r = merge(f"gauge transform of {args.op} by {args.theta1}", [check_twisted(new), check_gauge_isomorphism(op, theta1, new)])
    return Outcome(r, [(_stem(args, f"{args.op}_gauge"), "twisted_op", new, dict(_refs(ws, args.op)))])


def cmd_shift(ws: Workspace, args) -> Outcome:
    op = ws.get(args.op, "twisted_op")
    theta1 = _theta1(ws, args.theta1, op)
    new = coboundary_shift(op, theta1)
    refs = dict(_refs(ws, args.op))
    stem = _stem(args, f"{args.op}_shift")
    cname = ws.fresh_name(f"{stem}_cocycle")
    r = merge(
        f"coboundary shift of {args.op} by {args.theta1}",
        [check_cocycle3(new.g, new.rho, new.theta), check_twisted(new)],
    )
    r.extra["coboundary_is_cocycle"] = check_cocycle3(op.g, op.rho, coboundary1(op.g, op.rho, theta1)).outcome
    return Outcome(
        r,
        [
            (cname, "cocycle3", new.theta, {"algebra": refs["algebra"], "rep": refs["rep"]}),
            (ws.fresh_name(stem), "twisted_op", new, {"algebra": refs["algebra"], "rep": refs["rep"], "cocycle": cname}),
        ],
    )


# -- induce -------------------------------------------------------------------


def _trace(ws: Workspace, args):
    if not args.trace:
        raise ParseError("induce needs --trace")
    tau = ws.get(args.trace, "trace")
    return tau, _refs(ws, args.trace)["algebra"]


def cmd_induce(ws: Workspace, args) -> Outcome:
    what = args.what
    stem = args.name
    if what == "3lie":
        tau, gname = _trace(ws, args)
        g = ws.get(gname, "lie")
        alg = induce_3lie(g, tau)
        r = check_filippov(alg)
        r.subject = f"3-Lie algebra induced from {gname} by {args.trace}"
        return Outcome(r, [(stem or f"{gname}_3lie", "3lie", alg, {})])
    if what == "rep":
        tau, gname = _trace(ws, args)
        g = ws.get(gname, "lie")
        rho = induce_rep(g, ws.get(_required(args, "rep"), "rep_lie"), tau)
        alg = induce_3lie(g, tau, validate=False)
        r = check_rep3(alg, rho)
        r.subject = f"representation induced from {args.rep} by {args.trace}"
        aname = ws.fresh_name(f"{gname}_3lie")
        return Outcome(r, [(aname, "3lie", alg, {}), (stem or f"{args.rep}_3", "rep3", rho, {"algebra": aname})])
    if what == "cocycle":
        tau, gname = _trace(ws, args)
        g = ws.get(gname, "lie")
        cname = _required(args, "cocycle")
        theta = ws.get(cname, "cocycle_lie")
        rho_l = ws.get(_refs(ws, cname)["rep"], "rep_lie")
        alg = induce_3lie(g, tau, validate=False)
        rho = induce_rep(g, rho_l, tau, validate=False)
        th = induce_cocycle(g, theta, tau)
        r = check_cocycle3(alg, rho, th)
        r.subject = f"cocycle induced from {cname} by {args.trace}"
        aname, rname = ws.fresh_name(f"{gname}_3lie"), ws.fresh_name(f"{cname}_rep3")
        return Outcome(
            r,
            [
                (aname, "3lie", alg, {}),
                (rname, "rep3", rho, {"algebra": aname}),
                (stem or f"{cname}_3", "cocycle3", th, {"algebra": aname, "rep": rname}),
            ],
        )
    if what == "twisted":
        tau, gname = _trace(ws, args)
        bname = _required(args, "op")
        bop = ws.get(bname, "twisted_op_lie")
        op = induced_twisted(bop, tau)
        r = merge(f"twisted operator induced from {bname} by {args.trace}", [validate_context(op), check_twisted(op)])
        s = stem or f"{bname}_3"
        a, rp, c = (ws.fresh_name(f"{s}_{k}") for k in ("alg", "rep", "cocycle"))
        return Outcome(
            r,
            [
                (a, "3lie", op.g, {}),
                (rp, "rep3", op.rho, {"algebra": a}),
                (c, "cocycle3", op.theta, {"algebra": a, "rep": rp}),
                (ws.fresh_name(s), "twisted_op", op, {"algebra": a, "rep": rp, "cocycle": c}),
            ],
        )
    if what == "3ns":
        tau, aname = _trace(ws, args)
        a = ws.get(aname, "ns")
        ns = induce_3ns(a, tau)
        r = check_3ns(ns)
        r.subject = f"3-NS-Lie algebra induced from {aname} by {args.trace}"
        return Outcome(r, [(stem or f"{aname}_3", "3ns", ns, {})])
    if what == "diagram":
        tau, _ = _trace(ws, args)
        bname = _required(args, "op")
        bop = ws.get(bname, "twisted_op_lie")
        tp = ws.get(args.trace_prime, "trace") if args.trace_prime else None
        r = diagram_check(bop, tau, tp)
        r.subject = f"induction diagram for {bname} with {args.trace}" + (f" and {args.trace_prime}" if tp else "")
        r1, r2 = r.extra.pop("route1"), r.extra.pop("route2")
        r.extra["route1"] = serialize_object("route1", _entry("3ns", r1))
        r.extra["route2"] = serialize_object("route2", _entry("3ns", r2))
        return Outcome(r)
    raise ParseError(f"unknown --what {what!r}")


def _required(args, attr: str):
    value = getattr(args, attr.replace("-", "_"))
    if not value:
        raise ParseError(f"--{attr} is required here")
    return value


# -- cohomology and deformations ----------------------------------------------


def cmd_cohomology(ws: Workspace, args) -> Outcome:
    op = ws.get(args.op, "twisted_op")
    if args.degree < 0:
        raise ParseError("--degree must be non-negative")
    res = cohomology_dims(op, args.degree, args.cap)
    r = Report("pass", f"twisted cohomology of {args.op} in degree {args.degree}")
    r.extra.update(res.to_json())
    r.message = f"dim Z = {res.dim_z}, dim B = {res.dim_b}, dim H = {res.dim_h}"
    return Outcome(r)


def cmd_deform(ws: Workspace, args) -> Outcome:
    fam = ws.get(args.family, "deformation_family")
    if args.action == "check":
        r = formal_check(fam)
        r.subject = f"deformation family {args.family}"
        if args.printed and fam.order >= 1:
            r.extra["printed_conditions"] = printed_crosscheck(fam.base, fam.coefficient(1)).to_json()
        return Outcome(r)
    fam2 = ws.get(_required(args, "family2"), "deformation_family")
    pair = ws.get(_required(args, "pair"), "equivalence_pair")
    if args.infinitesimal:
        if fam.order != 1 or fam2.order != 1:
            raise ParseError("--infinitesimal needs two families of order 1")
        if fam.base != fam2.base:
            raise ShapeMismatch("families deform different operators")
        r = equivalence_check_infinitesimal(fam.base, fam.coefficient(1), fam2.coefficient(1), pair.X)
    else:
        r = equivalence_check_formal(fam, fam2, pair, args.truncation)
    r.subject = f"equivalence of {args.family} and {args.family2} via {args.pair}"
    return Outcome(r)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", action="append", default=[], metavar="FILE", help="workspace file (repeatable)")
    common.add_argument("--json", action="store_true", help="print the full report as JSON")
    common.add_argument("--out", metavar="FILE", help="write constructed objects (or the report) to FILE")
    common.add_argument("--name", help="name for the constructed object")

    p = argparse.ArgumentParser(prog="threelie", description="Exact checks and constructions for 3-Lie algebras and twisted O-operators.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the identity check for an object")
    v.add_argument("kind", choices=VERIFY_KINDS)
    v.add_argument("obj", metavar="name")
    v.add_argument("--algebra", help="3-Lie algebra for 'verify nijenhuis'")

    c = sub.add_parser("construct", help="build derived structures")
    csub = c.add_subparsers(dest="construction", required=True)
    s = csub.add_parser("semidirect", parents=[common])
    s.add_argument("--cocycle", required=True)
    s = csub.add_parser("nijenhuis", parents=[common])
    s.add_argument("--algebra", required=True)
    s.add_argument("--map", required=True)
    _induce_args(csub.add_parser("induce", parents=[common]))
    _derive_args(csub.add_parser("derive-ns", parents=[common]))
    for kind in ("gauge", "shift"):
        s = csub.add_parser(kind, parents=[common])
        s.add_argument("--op", required=True)
        s.add_argument("--theta1", required=True, help="linmap g -> V")

    h = sub.add_parser("cohomology", parents=[common], help="twisted cohomology dimensions")
    h.add_argument("--op", required=True)
    h.add_argument("--degree", type=int, required=True)
    h.add_argument("--cap", type=int, default=20000, help="largest matrix side to assemble")

    d = sub.add_parser("deform", help="deformation checks")
    dsub = d.add_subparsers(dest="action", required=True)
    s = dsub.add_parser("check", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("--printed", action="store_true", help="also compare with the written first-order conditions")
    s = dsub.add_parser("equiv", parents=[common])
    s.add_argument("--family", required=True)
    s.add_argument("--family2", required=True)
    s.add_argument("--pair", required=True)
    s.add_argument("--truncation", type=int)
    s.add_argument("--infinitesimal", action="store_true")

    _induce_args(sub.add_parser("induce", parents=[common], help="ternary structures from binary ones"))
    _derive_args(sub.add_parser("derive-ns", parents=[common], help="3-NS-Lie algebra of an operator"))
    return p


def _induce_args(s):
    s.add_argument("--what", choices=INDUCE_WHAT, required=True)
    s.add_argument("--trace", required=True)
    s.add_argument("--trace-prime", dest="trace_prime")
    s.add_argument("--rep")
    s.add_argument("--cocycle")
    s.add_argument("--op")


def _derive_args(s):
    s.add_argument("--op")
    s.add_argument("--mode", choices=("twisted", "compatible"), default="twisted")
    s.add_argument("--algebra")
    s.add_argument("--map")


def dispatch(ws: Workspace, args) -> Outcome:
    cmd = args.command
    if cmd == "verify":
        out = cmd_verify(ws, args)
        out.report.subject = f"verify {args.kind} {args.obj}: {out.report.subject}"
        return out
    if cmd == "construct":
        return {
            "semidirect": cmd_semidirect,
            "nijenhuis": cmd_nijenhuis,
            "induce": cmd_induce,
            "derive-ns": cmd_derive_ns,
            "gauge": cmd_gauge,
            "shift": cmd_shift,
        }[args.construction](ws, args)
    if cmd == "cohomology":
        return cmd_cohomology(ws, args)
    if cmd == "deform":
        return cmd_deform(ws, args)
    if cmd == "induce":
        return cmd_induce(ws, args)
    if cmd == "derive-ns":
        return cmd_derive_ns(ws, args)
    raise ParseError(f"unknown command {cmd!r}")


def run_command(ws: Workspace, args) -> tuple[Report, int]:
    """Run one parsed command; returns the report and the exit code."""
    try:
        out = dispatch(ws, args)
    except (ValidationFailure, NotInvertible, TooLarge, FormulaDisagreement, ContainmentViolation) as exc:
        r = Report("error", f"{args.command}", message=f"{type(exc).__name__}: {exc}")
        if isinstance(exc, ValidationFailure) and exc.report is not None:
            r.details = list(exc.report.details)
            r.stats = dict(exc.report.stats)
        return r, EXIT_FAIL
    if out.created:
        for name, kind, obj, refs in out.created:
            ws.add(ws.fresh_name(name), kind, obj, refs)
        out.report.extra["created"] = [n for n, *_ in out.created]
    return out.report, (EXIT_PASS if out.report.passed else EXIT_FAIL)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ws = load_workspace(args.file)
        before = set(ws.names())
        report, code = run_command(ws, args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnresolvedReference as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except ShapeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except ThreeLieError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if args.json:
        print(json.dumps(report.to_json(), indent=2))
        print(report.summary(), file=sys.stderr)
    else:
        print(report.summary())
    if args.out:
        created = [n for n in ws.names() if n not in before]
        path = Path(args.out)
        if created:
            # a self-contained file: everything loaded from input files plus the new objects
            keep = [n for n in ws.names() if n in created or n in _file_names(args.file)]
            text = _subset_dump(ws, _closure(ws, keep))
        else:
            text = json.dumps(report.to_json(), indent=2)
        path.write_text(text + "\n")
    return code


def _file_names(files) -> set:
    return set(parse_workspace(files).names()) if files else set()


def _closure(ws: Workspace, names) -> list:
    need = set()
    stack = list(names)
    while stack:
        n = stack.pop()
        if n in need:
            continue
        need.add(n)
        stack.extend(ws.entry(n).refs.values())
    return [n for n in ws.names() if n in need]


def _subset_dump(ws: Workspace, names) -> str:
    out = Workspace()
    for n in names:
        e = ws.entry(n)
        out.entries[n] = e
    return out.dumps()


if __name__ == "__main__":
    sys.exit(main())
