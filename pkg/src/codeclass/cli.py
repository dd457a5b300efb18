"""Command line entry point: ``codeclass <subcommand> ...``.

Exit codes: 0 success, 2 a proof invariant failed, 3 a resource budget was
exceeded, 4 bad or missing input.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bounds as bnd
from .canon import BudgetError, equivalent
from .covrad import CoveringQuery, ResourceError, covering_radius, covers_at_least
from .db import CodeDB, DBFormatError, verify_db
from .gf import FieldError
from .linear_code import CodeError, LinearCode
from .pipeline import (
    MissingInputError,
    ProofInvariantError,
    Workspace,
    classify_k2,
    derive,
    prove,
    report_table,
    run_step,
)

EXIT_OK, EXIT_PROOF, EXIT_RESOURCE, EXIT_INPUT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _workspace(args) -> Workspace:
    known = bnd.load_known_bounds(args.config) if getattr(args, "config", None) else None
    return Workspace.open(args.db_dir, args.journal, known=known, q=args.q)


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise MissingInputError(f"missing {' '.join(missing)}")


def _read_code(path) -> LinearCode:
    return LinearCode.from_text(Path(path).read_text())


def cmd_classify_k2(args) -> int:
    _need(args, "n", "d")
    if args.k not in (None, 2):
        raise MissingInputError("classify-k2 only handles k = 2")
    ws = _workspace(args)
    db = classify_k2(args.n, args.d, args.q)
    sha = ws.store(db, method="k2-multiplicities")
    print(f"[{args.n},2,{args.d}]_{args.q}: {len(db)} codes, {db.distinct_enumerators()} weight enumerators")
    print(f"wrote {ws.db_path(args.n, 2, args.d)} sha256={sha}")
    return EXIT_OK


def cmd_extend_step(args) -> int:
    _need(args, "n", "k", "d")
    ws = _workspace(args)
    res = run_step(
        ws, (args.n, args.k, args.d), shards=args.shards, shard_index=args.shard_index,
        split_depth=args.split_depth, merge=not args.no_merge,
    )
    print(f"{res.step}: ran {res.units_run} units, {res.units_done}/{res.units_total} done")
    if res.complete:
        print(f"sealed: {len(res.db)} codes, {res.stats['enumerators']} weight enumerators, sha256={res.sha256}")
    return EXIT_OK


def cmd_covrad(args) -> int:
    if args.code:
        codes = [_read_code(args.code)]
    else:
        _need(args, "n", "k", "d")
        codes = _workspace(args).load_db(args.n, args.k, args.d).codes
    for i, c in enumerate(codes):
        if args.t is not None:
            ok = covers_at_least(CoveringQuery(c, args.t))
            print(f"{i} {'>=' if ok else '<'}{args.t}")
        else:
            print(f"{i} {covering_radius(c, method=args.method)}")
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _read_code(args.files[0]), _read_code(args.files[1])
    print("equivalent" if equivalent(a, b) else "inequivalent")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.file:
        db = CodeDB.load(args.file, check=False)
    else:
        _need(args, "n", "k", "d")
        db = _workspace(args).load_db(args.n, args.k, args.d, check=False)
    rep = verify_db(db)
    print(rep)
    return EXIT_OK if rep.ok else EXIT_PROOF


def cmd_table(args) -> int:
    print(report_table(_workspace(args)))
    return EXIT_OK


def cmd_derive(args) -> int:
    ws = _workspace(args)
    extra = []
    for spec in args.assume or []:
        n, k, d = (int(x) for x in spec.split(","))
        extra.append(bnd.BoundsFact(bnd.NOT_EXISTS, ws.q, n, k, d, source="command line"))
    table, lines, ok = derive(ws, extra)
    print("\n".join(lines))
    beyond = bnd.implied_beyond(table, ws.known, range(5, ws.known.k_max + 1))
    beyond = [f for f in beyond if f.rule != "axiom"]
    if beyond:
        print("also implied (not in the report families, not excluded by the Griesmer bound):")
        print("  " + ", ".join(f"[{f.n},{f.k},{f.d}]" for f in beyond))
    return EXIT_OK if ok else EXIT_PROOF


def cmd_prove(args) -> int:
    ws = _workspace(args)
    out = prove(ws, split_depth=args.split_depth, progress=print)
    print(out["table"])
    print("\n".join(out["bounds"]))
    return EXIT_OK if out["proof"].proved and out["bounds_ok"] else EXIT_PROOF


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--q", type=int, default=5, help="field size (prime)")
    common.add_argument("--n", type=int, help="code length")
    common.add_argument("--k", type=int, help="dimension")
    common.add_argument("--d", type=int, help="minimum distance")
    common.add_argument("--db-dir", default="results", help="directory holding the code DBs")
    common.add_argument("--journal", help="run journal (default: <db-dir>/journal.log)")
    common.add_argument("--config", help="known-bounds JSON (default: packaged table)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="codeclass", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("classify-k2", parents=[common], help="classify [n,2,d] codes directly")
    s.set_defaults(func=cmd_classify_k2)

    s = sub.add_parser("extend-step", parents=[common], help="run (a shard of) one extension step")
    s.add_argument("--shards", type=int, default=1)
    s.add_argument("--shard-index", type=int, default=0)
    s.add_argument("--split-depth", type=int, default=0, help="DFS prefix length per work unit")
    s.add_argument("--no-merge", action="store_true", help="leave merging to a later invocation")
    s.set_defaults(func=cmd_extend_step)

    s = sub.add_parser("covrad", parents=[common], help="covering radius of a DB or a single code")
    s.add_argument("--code", help="generator matrix text block file")
    s.add_argument("--t", type=int, help="only decide R >= t")
    s.add_argument("--method", choices=["auto", "dfs", "sweep"], default="auto")
    s.set_defaults(func=cmd_covrad)

    s = sub.add_parser("equiv", parents=[common], help="monomial equivalence of two codes")
    s.add_argument("files", nargs=2, help="generator matrix text block files")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("verify", parents=[common], help="recheck a DB file")
    s.add_argument("--file", help="DB file (instead of --n/--k/--d in --db-dir)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("table", parents=[common], help="summary table of the classification")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("derive", parents=[common], help="propagate bounds from known and computed facts")
    s.add_argument("--assume", action="append", metavar="N,K,D", help="extra non-existence axiom")
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("prove-21-5-14", parents=[common], help="run the whole classification and proof")
    s.add_argument("--split-depth", type=int, default=0)
    s.set_defaults(func=cmd_prove)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(asctime)s %(message)s")
    try:
        return args.func(args)
    except (ProofInvariantError, bnd.BoundsContradiction) as exc:
        print(f"proof invariant violated: {exc}", file=sys.stderr)
        return EXIT_PROOF
    except (ResourceError, BudgetError, MemoryError, OverflowError) as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MissingInputError, DBFormatError, CodeError, FieldError, FileNotFoundError, ValueError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
