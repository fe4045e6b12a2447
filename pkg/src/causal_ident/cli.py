"""Command-line interface: identify, enumerate, swig, project and verify.

Exit codes: 0 success or Identified, 1 input error, 2 NotIdentified,
3 Unknown, 4 NotApplicable or a failed numerical verification.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import InputError, PositivityError, PreconditionError, ResourceError
from .fixing import enumerate_reachable, reachable_kernels
from .formats import check_against_graph, inputs_from_json, load_graph, load_json, query_from_json
from .graph import topological_order
from .identify import ALGORITHMS, Status, identify
from .kernels import Base, DistRef, render
from .oracle import check_formula
from .swig import latent_project, marginal_swig, parse_intervention

EXIT_OK, EXIT_INPUT, EXIT_NOT_IDENTIFIED, EXIT_UNKNOWN, EXIT_OTHER = 0, 1, 2, 3, 4

STATUS_EXIT = {
    Status.IDENTIFIED: EXIT_OK,
    Status.NOT_IDENTIFIED: EXIT_NOT_IDENTIFIED,
    Status.UNKNOWN: EXIT_UNKNOWN,
    Status.NOT_APPLICABLE: EXIT_OTHER,
}

AUTO_HELP = """\
--algorithm auto picks the narrowest algorithm the input menu allows:
  id   no inputs, or only the observational joint over all vertices
  gid  every input is a full joint over the non-intervened vertices
  aid  every input is a marginal whose outcomes are ancestral in its intervened graph
  mid  every input is a marginal (no conditioning)
  eid  anything else, including conditional inputs
"""


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [s.strip() for s in text.split(",") if s.strip()]


def _load_problem(args):
    g = load_graph(args.graph)
    q = query_from_json(load_json(args.query))
    z = inputs_from_json(load_json(args.inputs)) if args.inputs else []
    check_against_graph(g, q, z)
    return g, q, z


def _cmd_identify(args, out) -> int:
    g, q, z = _load_problem(args)
    res = identify(g, z, q, args.algorithm)
    if args.format == "json":
        out.write(_dump(res.to_json("latex" if args.latex else "text")) + "\n")
    elif res.identified:
        out.write(res.render(args.format, do_form=args.do_form) + "\n")
    else:
        line = f"{res.status.value}"
        if res.witness:
            line += ": no admissible input for district(s) " + "; ".join("{" + ",".join(d) + "}" for d in res.witness)
        elif res.reason:
            line += ": " + res.reason
        out.write(line + "\n")
    return STATUS_EXIT[res.status]


def _cmd_enumerate(args, out) -> int:
    g = load_graph(args.graph)
    cat = enumerate_reachable(g)
    kernels = reachable_kernels(Base(DistRef(0, g.random)), g, cat)
    order = topological_order(g)
    sets = []
    for s in cat.reachable:
        ent = cat.entries[s]
        if args.intrinsic_only and not ent.intrinsic:
            continue
        sets.append({
            "set": sorted(s),
            "intrinsic": ent.intrinsic,
            "sequence": list(ent.sequence),
            "fixed": sorted(ent.graph.fixed),
            "kernel": render(kernels[s], order=order),
        })
    doc = {"graph": g.to_json(), "reachable": len(cat.reachable),
           "intrinsic": len(cat.intrinsic), "sets": sets}
    out.write(_dump(doc) + "\n")
    return EXIT_OK


def _cmd_swig(args, out) -> int:
    g = load_graph(args.graph)
    a = parse_intervention(args.do or "")
    keep = _names(args.keep) if args.keep is not None else sorted(g.random)
    out.write(_dump(marginal_swig(g, a, keep).to_json()) + "\n")
    return EXIT_OK


def _cmd_project(args, out) -> int:
    g = load_graph(args.graph)
    keep = _names(args.keep)
    bad = set(keep) - g.random
    if bad:
        raise InputError(f"cannot keep {sorted(bad)[0]!r}: not a random vertex")
    out.write(_dump(latent_project(g, keep).to_json()) + "\n")
    return EXIT_OK


def _parse_cards(text: str | None) -> dict[str, int]:
    out = {}
    for k, v in parse_intervention(text or "").items():
        if not isinstance(v, int) or not 2 <= v <= 4:
            raise InputError(f"cardinality of {k!r} must be an integer between 2 and 4")
        out[k] = v
    return out


def _cmd_verify(args, out) -> int:
    g, q, z = _load_problem(args)
    res = identify(g, z, q, args.algorithm)
    doc = {"status": res.status.value, "algorithm": res.algorithm, "formula": res.render() or None}
    if not res.identified:
        out.write(_dump(doc) + "\n")
        return STATUS_EXIT[res.status]
    if args.trials < 1:
        raise InputError("--trials must be at least 1")
    rep = check_formula(g, z, q, res, trials=args.trials, seed=args.seed, cards=_parse_cards(args.cards))
    doc.update(rep.to_json())
    doc["passed"] = rep.passed
    out.write(_dump(doc) + "\n")
    return EXIT_OK if rep.passed else EXIT_OTHER


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="causal-ident",
        description="Decide identifiability of counterfactual distributions in hidden-variable causal models.",
        epilog="Exit codes: 0 success/Identified, 1 input error, 2 NotIdentified, 3 Unknown, "
               "4 NotApplicable or failed verification.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def problem_args(sp):
        sp.add_argument("--graph", required=True, help="graph JSON file")
        sp.add_argument("--query", required=True, help='query JSON, e.g. {"y":["Y"],"do":{"X1":"x1"}}')
        sp.add_argument("--inputs", help="input menu JSON list (omit for the observational joint only)")
        sp.add_argument("--algorithm", default="auto", choices=("auto",) + ALGORITHMS)

    sp = sub.add_parser("identify", help="identify a query from an input menu",
                        description=AUTO_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    problem_args(sp)
    sp.add_argument("--format", default="text", choices=("text", "latex", "json"))
    sp.add_argument("--do-form", action="store_true", help="print contexts as do(...) instead of counterfactual labels")
    sp.add_argument("--latex", action="store_true", help="with --format json, also include a LaTeX formula")
    sp.set_defaults(func=_cmd_identify)

    sp = sub.add_parser("enumerate", help="list reachable and intrinsic sets with their kernels")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--intrinsic-only", action="store_true")
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("swig", help="split a graph on an intervention, optionally projecting")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--do", default="", help="intervention, e.g. X1=x1,X2=x2")
    sp.add_argument("--keep", help="random vertices to keep, e.g. Y,W")
    sp.set_defaults(func=_cmd_swig)

    sp = sub.add_parser("project", help="latent projection onto a vertex subset")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--keep", required=True, help="random vertices to keep, e.g. Y,W")
    sp.set_defaults(func=_cmd_project)

    sp = sub.add_parser("verify", help="identify, then check the formula against the latent-DAG oracle",
                        description=AUTO_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    problem_args(sp)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--cards", help="non-binary cardinalities, e.g. W=3,Y=4")
    sp.set_defaults(func=_cmd_verify)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (InputError, PreconditionError, PositivityError, ResourceError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
