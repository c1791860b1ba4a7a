"""Command line front end.

Exit codes: 0 success (including negative verdicts), 2 parse or validation
error, 3 enumeration guard exceeded, 4 sweep mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import abelian as ab
from . import catalog as cat
from . import cmap as cm
from . import pgroup as pg
from . import sweep as sw
from .errors import CMapKernelError, GuardExceeded, NotClass2

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_MISMATCH = 0, 2, 3, 4


class Timer:
    def __init__(self):
        self.phases = {}

    @contextmanager
    def phase(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = round((time.perf_counter() - t0) * 1000, 3)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def make_report(command, canonical_input, result, timer):
    return {
        "schema_version": SCHEMA_VERSION,
        "input_digest": hashlib.sha256(canonical_input.encode("ascii")).hexdigest(),
        "command": command,
        "result": result,
        "timings": timer.phases,
    }


def _print_text(report):
    res = report["result"]
    print(f"command: {report['command']}")
    for key in sorted(res):
        val = res[key]
        if isinstance(val, (dict, list)):
            val = canonical_json(val)
        print(f"{key}: {val}")


# --- commands ----------------------------------------------------------------


def cmd_cmap(args):
    timer = Timer()
    with timer.phase("parse"):
        A, B, lam = cat.ingest_lambda_problem(args.file)
    with timer.phase("analyse"):
        result = cm.report(A, B, lam, oracle=args.oracle, lemmas=args.lemmas,
                           guard=_hom_guard(args, cm.DEFINITION_GUARD))
    result["A"] = list(A.alphas)
    result["B"] = list(B.alphas)
    result["p"] = A.p
    result["lambda"] = [list(r) for r in lam.matrix]
    if args.oracle:
        result["oracle_agrees"] = (result["verdicts"]["definition"]
                                   == result["verdicts"]["basis"])
    return make_report("cmap", cat.dump_lambda_problem(A, B, lam), result, timer), EXIT_OK


def _hom_guard(args, default):
    return default if args.guard_hom is None else args.guard_hom


def _order_guards(args):
    """``(table guard, PN search guard)``; an explicit --guard-order sets both."""
    if args.guard_order is None:
        return pg.ORDER_GUARD, pg.PN_GUARD
    return args.guard_order, args.guard_order


def _load_group(source, guard):
    path = Path(source)
    if path.exists():
        return cat.ingest(path, guard=guard)
    recipe = cat.parse_recipe(source)
    if recipe.order > guard:
        raise GuardExceeded("group order", recipe.order, guard)
    return cat.build(recipe)


def cmd_group(args):
    timer = Timer()
    with timer.phase("build"):
        order_guard, pn_guard = _order_guards(args)
        G = _load_group(args.source, order_guard)
    result = {"order": G.order}
    if G.prime_power is None:
        result["verdict"] = {"kind": pg.Verdict.NOT_PPOWER,
                             "reason": f"order {G.order} is not a prime power"}
        return make_report("group", cat.dump_table(G), result, timer), EXIT_OK
    with timer.phase("structure"):
        conn = pg.lambda_map(G, seed=args.seed)
        result.update({
            "p": G.p,
            "center_order": conn.Z.order,
            "derived_order": conn.D.order,
            "A": list(conn.A.alphas),
            "B": list(conn.B.alphas),
            "lambda": [list(r) for r in conn.lam.matrix],
        })
    with timer.phase("verdict"):
        v = pg.verdict(G, conn=conn, pn_guard=pn_guard)
        result["pn"] = v.kind != pg.Verdict.NOT_PN
        result["verdict"] = v.as_dict()
        if v.profile is not None:
            result["profile"] = v.profile.as_dict()
    if args.oracle and (result["pn"] or args.allow_non_pn):
        with timer.phase("oracle"):
            autos = pg.central_automorphisms(G, guard=_hom_guard(args, pg.AUTC_GUARD),
                                             conn=conn)
            abelian, _ = pg.autc_is_abelian_oracle(G, autos)
            oracle = {"autc_order": len(autos), "autc_abelian": abelian}
            if result["pn"]:
                oracle["agrees"] = abelian == (v.kind == pg.Verdict.ABELIAN)
                result["oracle"] = oracle
            else:
                result["oracle_non_pn"] = oracle
    if args.class2:
        with timer.phase("class2"):
            try:
                result["class2"] = pg.adney_yen_class2_check(G, conn=conn)
            except NotClass2 as exc:
                result["class2"] = {"applicable": False,
                                    "nilpotency_class": exc.nilpotency_class}
    return make_report("group", cat.dump_table(G), result, timer), EXIT_OK


def _dump_reproducers(results, dump_dir):
    if not dump_dir:
        return []
    out = []
    dump_dir = Path(dump_dir)
    dump_dir.mkdir(parents=True, exist_ok=True)
    for r in results:
        for k, (lam, problems) in enumerate(r.mismatches):
            name = f"p{r.A.p}_A{''.join(map(str, r.A.alphas))}_B{''.join(map(str, r.B.alphas))}_{k}.txt"
            body = "# " + "; ".join(problems) + "\n" + cat.dump_lambda_problem(r.A, r.B, lam)
            (dump_dir / name).write_text(body, encoding="ascii")
            out.append(name)
    return out


def cmd_sweep(args):
    timer = Timer()
    result = {}
    params = {"primes": args.p, "max_exp": args.max_exp,
              "max_factors": args.max_factors, "tables": args.tables,
              "recipes": args.recipes}
    mismatches = 0
    if args.p:
        with timer.phase("lambda_sweep"):
            results = sw.sweep_lambdas(tuple(args.p), args.max_exp, args.max_factors,
                                       definition_budget=args.definition_budget)
        summary = sw.summarize(results)
        summary["reproducers"] = _dump_reproducers(results, args.dump_dir)
        result["lambda_sweep"] = summary
        mismatches += summary["mismatches"]
    groups = []
    if args.tables:
        files = sorted(p for p in Path(args.tables).iterdir() if p.is_file())
        groups += [(f.name, cat.ingest(f, guard=_order_guards(args)[0])) for f in files]
        params["table_digests"] = {f.name: hashlib.sha256(f.read_bytes()).hexdigest()
                                   for f in files}
    if args.recipes:
        groups += [(str(r), cat.build(r)) for r in cat.group_corpus(args.recipes)]
    if args.tables or args.recipes:
        with timer.phase("group_sweep"):
            gres = sw.sweep_groups(groups, bridge=not args.no_bridge,
                                   pn_guard=_order_guards(args)[1],
                                   autc_guard=_hom_guard(args, pg.AUTC_GUARD))
        summary = sw.group_summary(gres)
        summary["failures"] = {r.name: r.mismatches for r in gres if r.mismatches}
        result["group_sweep"] = summary
        mismatches += summary["mismatches"]
    result["mismatches"] = mismatches
    code = EXIT_MISMATCH if mismatches else EXIT_OK
    return make_report("sweep", canonical_json(params), result, timer), code


# --- entry point -------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cmapkernel",
        description="Decide c-maps between finite abelian p-groups and whether "
                    "the central automorphism group of a finite p-group is abelian.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=cat.__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print the JSON report")
        p.add_argument("--guard-hom", type=int, default=None,
                       help=f"limit on enumerated homomorphism counts (default "
                            f"{cm.DEFINITION_GUARD} for the definition oracle, "
                            f"{pg.AUTC_GUARD} for Aut_c)")
        p.add_argument("--guard-order", type=int, default=None,
                       help=f"limit on group orders (default {pg.ORDER_GUARD}, "
                            f"{pg.PN_GUARD} for the PN search)")

    p = sub.add_parser("cmap", help="analyse a lambda-problem file")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true",
                   help="also check f lam g == g lam f over all of Hom(B, A)")
    p.add_argument("--lemmas", action="store_true", help="run the lemma suite")
    common(p)
    p.set_defaults(func=cmd_cmap)

    p = sub.add_parser("group", help="analyse a Cayley table file or a recipe")
    p.add_argument("source", help="path to a table file, or a recipe string")
    p.add_argument("--oracle", action="store_true",
                   help="enumerate Aut_c(G) and compare permutations pairwise")
    p.add_argument("--class2", action="store_true", help="class-2 consistency report")
    p.add_argument("--allow-non-pn", action="store_true",
                   help="run the oracle on non-PN groups too (reported separately)")
    p.add_argument("--seed", type=int, default=None,
                   help="random tie-breaking in the abelian decompositions")
    common(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("sweep", help="exhaustive cross-checks")
    p.add_argument("--p", type=int, action="append", help="prime (repeatable)")
    p.add_argument("--max-exp", type=int, default=4,
                   help="shapes of order at most p^MAX_EXP")
    p.add_argument("--max-factors", type=int, default=3)
    p.add_argument("--definition-budget", type=int, default=sw.DEFINITION_BUDGET,
                   help="run the definition check when |Hom(A,B)|*|Hom(B,A)|^2 is at most this")
    p.add_argument("--tables", help="directory of Cayley table files")
    p.add_argument("--recipes", type=int, metavar="MAX_ORDER",
                   help="sweep the built-in group corpus up to this order")
    p.add_argument("--no-bridge", action="store_true",
                   help="skip the pairwise c-map bridge check")
    p.add_argument("--dump-dir", help="write reproducer files for mismatches here")
    common(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except GuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (CMapKernelError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _print_text(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
