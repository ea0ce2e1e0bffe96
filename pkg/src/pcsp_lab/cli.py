"""Command-line entry point: ``pcsp-lab <subcommand> ...`` printing JSON on stdout.

Exit codes: 0 for Accept / found / verified, 1 for Reject / not found, 2 for
usage and domain errors (message on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import classify as cl
from . import polymorphisms as poly
from . import relax, solve, tableaux
from .errors import PCSPError
from .structures import Relation, RelStructure
from .templates import (
    Mode,
    PCSPTemplate,
    TemplateSpec,
    build_template,
    first_tuple_of_weight,
    parse_bitstring,
    spec_from_bitstrings,
)


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_template(data: dict) -> tuple[PCSPTemplate, Optional[TemplateSpec]]:
    """Either a template spec ``{"mode","t","k","S"}`` or explicit ``{"A","B"}`` structures."""
    if not isinstance(data, dict):
        raise UsageError("template file must hold a JSON object")
    if "A" in data and "B" in data:
        return PCSPTemplate.from_dict(data), None
    if {"t", "k"} <= data.keys():
        S = [parse_bitstring(x) if isinstance(x, str) else x for x in data.get("S", [])]
        spec = TemplateSpec.from_dict({**data, "S": S})
        return build_template(spec), spec
    raise UsageError('template file needs "t","k" (and optionally "mode","S") or "A","B"')


def load_relation(data, k: int) -> Relation:
    """A relation as ``{"arity","tuples"}`` or as a list of bitstrings / 0-1 arrays."""
    if isinstance(data, dict):
        return Relation.from_dict(data)
    if isinstance(data, list):
        tuples = [parse_bitstring(x) if isinstance(x, str) else tuple(x) for x in data]
        return Relation.of(tuples, k)
    raise UsageError("relation file must hold an object or a list of tuples")


def _emit(obj, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _tuples(arg: str) -> list[str]:
    items = [s for s in arg.split(",") if s.strip()]
    if not items:
        raise UsageError("--tuples needs at least one bitstring")
    return items


# -- subcommands -------------------------------------------------------------

def cmd_classify(args) -> int:
    if args.mode == "csp":
        if args.T is None:
            raise UsageError("classify csp needs --T file.json")
        T = load_relation(_read_json(args.T), args.k)
        report = cl.classify_csp_superset(args.t, args.k, T)
    else:
        if args.T is not None:
            raise UsageError("--T only applies to classify csp")
        if args.tuples is None:
            raise UsageError(f"classify {args.mode} needs --tuples")
        spec = spec_from_bitstrings(args.mode, args.t, args.k, _tuples(args.tuples))
        if args.mode == "add":
            report = cl.classify_add(spec, certify=args.certify)
        else:
            report = cl.classify_remove(spec)
    _emit(report.to_dict())
    return 0


def cmd_solve(args) -> int:
    template, spec = load_template(_read_json(args.template))
    X = RelStructure.from_dict(_read_json(args.instance))
    out: dict = {"algorithm": args.algorithm}
    if args.emit_lp and args.algorithm not in ("aip", "blp-aip"):
        raise UsageError("--emit-lp applies to aip and blp-aip only")
    if args.algorithm == "aip":
        if args.emit_lp:
            Path(args.emit_lp).write_text(relax.emit_text(relax.aip_build(X, template.A)))
        res = relax.aip_decide(X, template.A)
        out.update(res.to_dict())
        accepted = res.accepted
    elif args.algorithm == "blp-aip":
        if args.emit_lp:
            Path(args.emit_lp).write_text(relax.emit_text(relax.blp_build(X, template.A)))
        res = relax.blp_aip(X, template.A)
        out.update(res.to_dict())
        accepted = res.accepted
    else:
        if args.algorithm == "affine":
            if spec is None:
                raise UsageError("the affine algorithm needs a template spec, not explicit structures")
            x = solve.solve_search_affine(X, spec)
        else:
            x = solve.brute_solve(X, template.B)
        accepted = x is not None
        out["verdict"] = "Accept" if accepted else "Reject"
        out["assignment"] = x
    _emit(out)
    return 0 if accepted else 1


def cmd_poly(args) -> int:
    template, _ = load_template(_read_json(args.template))
    A, B = template.A, template.B
    if args.action == "search":
        if args.family is None or args.arity is None:
            raise UsageError("poly search needs --family and --arity")
        find = poly.exists_block_symmetric if args.family == "2bs" else poly.exists_alternating
        g = find(A, B, args.arity)
        out = {"found": g is not None, "family": args.family, "arity": args.arity}
        if g is not None:
            out["function"] = g.to_dict()
        _emit(out)
        return 0 if g is not None else 1
    _emit(cl.symmetric_dichotomy_evidence(A, B, args.max_arity))
    return 0


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {s!r}") from exc


def cmd_tableau(args) -> int:
    for name in ("k", "t", "d"):
        if getattr(args, name) is None:
            raise UsageError(f"tableau needs --{name}")
    if args.action == "refute":
        cert = tableaux.refute(args.k, args.t, args.d)
        ok = cert.verify()
        if args.ascii:
            for tab in cert.tableaux:
                sys.stdout.write(f"case {tab.case}\n{tab.render()}\n\n")
        else:
            _emit({**cert.to_dict(), "verified": ok})
        return 0 if ok else 1
    if args.prop is None or args.case is None:
        raise UsageError("tableau needs --prop and --case (or the 'refute' action)")
    a = _fraction(args.a) if args.a is not None else None
    tab, _ = tableaux.build_case(args.prop, args.case, args.k, args.t, args.d, a=a)
    ok = tableaux.verify_tableau(tab)
    if args.ascii:
        sys.stdout.write(tab.render() + "\n")
    else:
        _emit({**tab.to_dict(), "verified": ok})
    return 0 if ok else 1


def sweep(k_max: int) -> dict:
    """Every singleton S of weight d != t, both modes, against the parity rule."""
    rows = []
    for k in range(3, k_max + 1):
        for t in range(1, k):
            for d in range(1, k):
                if d == t:
                    continue
                S = (first_tuple_of_weight(d, k),)
                parity = t % 2 == 1 and k % 2 == 0
                for mode in (Mode.ADD, Mode.REMOVE):
                    spec = TemplateSpec(t, k, S, mode)
                    if mode is Mode.ADD:
                        label = cl.classify_add(spec).label
                        expected = cl.Label.TRACTABLE_VIA_AIP if parity and d % 2 == 1 \
                            else cl.Label.NOT_SOLVED_BY_BLP_AIP
                    else:
                        label = cl.classify_remove(spec).label
                        expected = cl.Label.TRACTABLE if parity and d % 2 == 0 else cl.Label.NP_HARD
                    rows.append({"mode": mode.value, "k": k, "t": t, "d": d,
                                 "label": label.value, "expected": expected.value,
                                 "agree": label is expected})
    rows.sort(key=lambda r: (r["mode"], r["k"], r["t"], r["d"]))
    mismatches = [r for r in rows if not r["agree"]]
    return {"k_max": k_max, "count": len(rows), "mismatches": len(mismatches), "rows": rows}


def cmd_sweep(args) -> int:
    if args.k_max < 3:
        raise UsageError("--k-max must be >= 3")
    # the sweep is exhaustive; the seed is accepted for interface uniformity
    result = sweep(args.k_max)
    result["seed"] = args.seed
    _emit(result)
    return 0 if result["mismatches"] == 0 else 1


# -- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pcsp-lab", description="Boolean promise CSP laboratory")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="label a template")
    c.add_argument("mode", choices=["add", "remove", "csp"])
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--tuples", help="comma-separated bitstrings, e.g. 1110,1000")
    c.add_argument("--T", help="JSON file with the relation T (classify csp)")
    c.add_argument("--certify", action="store_true", help="attach the full tableau certificate")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve", help="decide or solve an instance")
    s.add_argument("--template", required=True)
    s.add_argument("--instance", required=True)
    s.add_argument("--algorithm", required=True, choices=["aip", "blp-aip", "affine", "brute"])
    s.add_argument("--emit-lp", metavar="PATH", help="write the LP/IP system as text")
    s.set_defaults(func=cmd_solve)

    po = sub.add_parser("poly", help="polymorphism searches")
    po.add_argument("action", choices=["search", "families"])
    po.add_argument("--template", required=True)
    po.add_argument("--family", choices=["2bs", "alt"])
    po.add_argument("--arity", type=int)
    po.add_argument("--max-arity", type=int, default=9)
    po.set_defaults(func=cmd_poly)

    tb = sub.add_parser("tableau", help="build or verify refutation tableaux")
    tb.add_argument("action", nargs="?", choices=["refute"])
    tb.add_argument("--prop", type=int, choices=list(tableaux.PROPS))
    tb.add_argument("--case", choices=list(tableaux.CASES))
    tb.add_argument("--k", type=int)
    tb.add_argument("--t", type=int)
    tb.add_argument("--d", type=int)
    tb.add_argument("--a", help="override the case-3 parameter, e.g. 41/11")
    tb.add_argument("--ascii", action="store_true")
    tb.set_defaults(func=cmd_tableau)

    sw = sub.add_parser("sweep", help="exhaustive classification consistency sweep")
    sw.add_argument("--k-max", type=int, default=6)
    sw.add_argument("--seed", type=int, default=0)
    sw.set_defaults(func=cmd_sweep)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, PCSPError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
