"""Command-line entry point: ``dyncu <command> <model.json> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .errors import ContractError, InconsistencyError, ModelError
from .groupoid import finite_orbits, orbit_graph
from .model import load_model, parse_lsc
from .semigroup import Budgets
from .states import Infeasible, find_invariant_state
from .subequiv import decide_subequiv
from .typesemi import paradox_report, tarski_test
from .verdict import analyze, dumps

BUDGET_ENV = "DYNCU_BUDGET"

EXIT_OK, EXIT_MODEL, EXIT_INCONSISTENT = 0, 2, 3


def _parser():
    p = argparse.ArgumentParser(prog="dyncu", description="Comparison, paradoxes and the "
                                "stably finite / purely infinite dichotomy for finite action models.")
    p.add_argument("--budget", default=None, help="e.g. depth=2,len=2,mult=2,nmax=8,nodes=200000 "
                   f"(defaults come from the model file, then ${BUDGET_ENV})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", help="gate the hypotheses and emit a verdict")
    a.add_argument("model")
    a.add_argument("-q", "--quiet", action="store_true", help="JSON only, no summary on stderr")

    c = sub.add_parser("compare", help="decide F <= H up to the dynamics")
    c.add_argument("model")
    c.add_argument("F")
    c.add_argument("H")

    x = sub.add_parser("paradox", help="is k*F <= l*F ?")
    x.add_argument("model")
    x.add_argument("F")
    x.add_argument("k", type=int)
    x.add_argument("l", type=int)

    t = sub.add_parser("tarski", help="normalized state at F or an (n+1,n)-paradox")
    t.add_argument("model")
    t.add_argument("F")

    s = sub.add_parser("state", help="invariant state normalized at F0")
    s.add_argument("model")
    s.add_argument("F0", nargs="?", default=None)

    o = sub.add_parser("orbits", help="orbit graph")
    o.add_argument("model")
    o.add_argument("--dot", metavar="OUT", help="write the orbit graph in DOT format")
    return p


def _budgets(args, model):
    b = model.budgets
    env = os.environ.get(BUDGET_ENV)
    if env:
        b = Budgets.parse(env, b)
    if args.budget:
        b = Budgets.parse(args.budget, b)
    return b


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        model = load_model(args.model)
        try:
            budgets = _budgets(args, model)
        except ValueError as exc:
            raise ModelError(f"--budget: {exc}") from None
        model = model.with_budgets(budgets)
        out = _dispatch(args, model, budgets)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    sys.stdout.write(dumps(out) + "\n")
    return EXIT_OK


def _dispatch(args, model, budgets):
    sp = model.space
    if args.cmd == "analyze":
        v = analyze(model, budgets)
        if not args.quiet:
            print(v.summary(), file=sys.stderr)
        return v.to_json()
    if args.cmd == "compare":
        F, H = parse_lsc(sp, args.F), parse_lsc(sp, args.H)
        return decide_subequiv(F, H, model, budgets).to_json()
    if args.cmd == "paradox":
        return paradox_report(parse_lsc(sp, args.F), args.k, args.l, model, budgets).to_json()
    if args.cmd == "tarski":
        return tarski_test(parse_lsc(sp, args.F), model, budgets=budgets).to_json()
    if args.cmd == "state":
        F0 = parse_lsc(sp, args.F0) if args.F0 else model.f0()
        res = find_invariant_state(model, F0)
        if isinstance(res, Infeasible):
            if not res.verify():
                raise InconsistencyError("Farkas certificate failed to verify")
        return res.to_json()
    if args.cmd == "orbits":
        g = orbit_graph(model)
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(g.to_dot(model.name))
        d = {"nodes": g.nodes, "edges": [list(e) for e in g.edges]}
        if model.is_finite:
            d["orbits"] = [[sp.points[i] for i in O] for O in finite_orbits(model)]
        return d
    raise AssertionError(args.cmd)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
