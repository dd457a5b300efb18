"""Classification steps, covering-radius tallies and the non-existence proof.

Work is organised per step [n, k, d]_q. A step's work units are pairs
(parent index, DFS prefix); each finished unit writes a partial DB and a
``unit-done`` journal record with the partial file's hash. When every unit
is done the partials are merged into the step DB and the step is sealed in
the journal with the DB's content hash. Any number of workers, in any
order, produce the same bytes.
"""
from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .covrad import CoveringQuery, covers_at_least
from .db import CodeDB, db_name, sha256_hex, verify_db
from .extend import ExtensionTask, enumerate_children, shard_prefixes
from .journal import RunJournal, step_key
from .k2 import classify_k2_codes

log = logging.getLogger(__name__)

# rows of the summary table: (n, k, d); q is fixed by the workspace
TABLE_ROWS = [(18, 2, 14), (18, 2, 15), (19, 3, 14), (20, 4, 14), (21, 5, 14)]
COVRAD_HIGH = 13  # the threshold columns of the table: R >= 13 and R = 12


class ProofInvariantError(RuntimeError):
    """A check the proof depends on failed."""


class MissingInputError(ValueError):
    """A prerequisite DB or record is absent."""


@dataclass
class Workspace:
    db_dir: Path
    journal: RunJournal
    known: bnd.KnownBounds
    q: int = 5

    @classmethod
    def open(cls, db_dir, journal=None, known=None, q: int = 5) -> "Workspace":
        db_dir = Path(db_dir)
        db_dir.mkdir(parents=True, exist_ok=True)
        jr = RunJournal(journal if journal is not None else db_dir / "journal.log")
        return cls(db_dir, jr, known if known is not None else bnd.load_known_bounds(), q)

    def db_path(self, n: int, k: int, d: int) -> Path:
        return self.db_dir / db_name(self.q, n, k, d)

    def has_db(self, n: int, k: int, d: int) -> bool:
        return self.db_path(n, k, d).exists()

    def load_db(self, n: int, k: int, d: int, check: bool = True) -> CodeDB:
        path = self.db_path(n, k, d)
        if not path.exists():
            raise MissingInputError(f"no DB for [{n},{k},{d}]_{self.q} at {path}")
        data = path.read_bytes()
        seal = self.journal.seal(step_key(self.q, n, k, d))
        if seal is not None and seal["sha256"] != sha256_hex(data):
            raise ProofInvariantError(f"{path.name} does not match the hash sealed in the journal")
        return CodeDB.from_bytes(data, check=check)

    def store(self, db: CodeDB, **stats) -> str:
        sha = db.write(self.db_dir / db.name)
        self.journal.append(
            "step-sealed", step=step_key(*db.params), sha256=sha, count=len(db),
            enumerators=db.distinct_enumerators(), **stats,
        )
        return sha


# ------------------------------------------------------------------ k = 2


def classify_k2(n: int, d: int, q: int = 5) -> CodeDB:
    """All [n, 2, d]_q codes up to equivalence, by projective multiplicities."""
    return CodeDB.from_codes(q, n, 2, d, classify_k2_codes(n, d, q))


# ------------------------------------------------------------------ steps


@dataclass
class StepResult:
    step: str
    units_total: int
    units_done: int
    units_run: int
    db: CodeDB | None = None
    sha256: str | None = None
    stats: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.db is not None


def parent_range(ws: Workspace, n: int, k: int, d: int) -> range:
    """Parent distances d' that a complete [n, k, d] step must extend."""
    dmax = ws.known.dmax(n - 1, k - 1)
    if dmax is None:
        raise MissingInputError(
            f"no upper bound on d for [{n - 1},{k - 1}] in the known-bounds config; "
            "cannot certify that the parent set is complete"
        )
    if dmax < d:
        raise MissingInputError(f"config excludes every [{n - 1},{k - 1},>={d}] parent")
    return range(d, dmax + 1)


def load_parents(ws: Workspace, n: int, k: int, d: int) -> list[CodeDB]:
    dbs = []
    for dp in parent_range(ws, n, k, d):
        if not ws.has_db(n - 1, k - 1, dp):
            raise MissingInputError(
                f"parent DB [{n - 1},{k - 1},{dp}]_{ws.q} missing; refusing to run an incomplete step"
            )
        dbs.append(ws.load_db(n - 1, k - 1, dp))
    return dbs


def _unit_name(i: int, prefix: str) -> str:
    return f"parent={i} prefix={prefix}"


def _part_path(ws: Workspace, step: str, i: int, prefix: str) -> Path:
    return ws.db_dir / "parts" / step / f"p{i:05d}-{prefix or 'all'}.qdb"


def step_units(parents: list, d: int, split_depth: int, normalization: str):
    units = []
    for i, p in enumerate(parents):
        prefixes = [""] if split_depth == 0 else shard_prefixes(ExtensionTask(p, d, normalization), split_depth)
        units += [(i, pre) for pre in prefixes]
    return units


def _run_unit(ws, parent, n, k, d, prefix, normalization):
    task = ExtensionTask(parent, d, normalization)
    children = enumerate_children(task, [prefix])
    exact, above = [], Counter()
    for c in children:
        w = c.min_weight()
        if w == d:
            exact.append(c)
        else:
            above[w] += 1
            if ws.known.dmax(n, k) is not None and w > ws.known.dmax(n, k):
                raise ProofInvariantError(
                    f"found an [{n},{k},{w}]_{ws.q} code, which the known-bounds config excludes"
                )
    return CodeDB.from_codes(ws.q, n, k, d, exact), len(children), dict(above)


def run_step(
    ws: Workspace,
    target: tuple[int, int, int],
    shards: int = 1,
    shard_index: int = 0,
    split_depth: int = 0,
    normalization: str = "aut",
    merge: bool = True,
) -> StepResult:
    """Extend every complete parent set to ``target`` = (n, k, d).

    This worker runs the units whose position is ``shard_index`` mod
    ``shards`` and skips units the journal already records. When all units
    of the step are done (by any worker) and ``merge`` is set, the partial
    DBs are merged and the step is sealed.
    """
    n, k, d = target
    if not 0 <= shard_index < shards:
        raise ValueError(f"shard index {shard_index} outside 0..{shards - 1}")
    step = step_key(ws.q, n, k, d)
    parents = [c for db in load_parents(ws, n, k, d) for c in db.codes]
    units = step_units(parents, d, split_depth, normalization)
    done = ws.journal.done_units(step)
    ran = 0
    for pos, (i, prefix) in enumerate(units):
        if pos % shards != shard_index:
            continue
        name = _unit_name(i, prefix)
        path = _part_path(ws, step, i, prefix)
        rec = done.get(name)
        if rec is not None and path.exists() and sha256_hex(path.read_bytes()) == rec["sha256"]:
            continue
        t0 = time.time()
        part, n_cand, above = _run_unit(ws, parents[i], n, k, d, prefix, normalization)
        sha = part.write(path)
        ws.journal.append(
            "unit-done", step=step, unit=name, out=str(path.relative_to(ws.db_dir)), sha256=sha,
            count=len(part), candidates=n_cand, above=above, seconds=round(time.time() - t0, 3),
        )
        ran += 1
        log.info("%s %s: %d candidates, %d codes (%.1fs)", step, name, n_cand, len(part), time.time() - t0)
    done = ws.journal.done_units(step)
    n_done = sum(1 for i, pre in units if _unit_name(i, pre) in done)
    result = StepResult(step, len(units), n_done, ran)
    if n_done < len(units) or not merge:
        return result
    db = merge_step(ws, target, units)
    stats = {"parents": len(parents), "units": len(units)}
    result.sha256 = ws.store(db, **stats)
    result.db = db
    result.stats = {"count": len(db), "enumerators": db.distinct_enumerators(), **stats}
    return result


def merge_step(ws: Workspace, target, units) -> CodeDB:
    """Union of the partial DBs of every unit, checked against the journal."""
    n, k, d = target
    step = step_key(ws.q, n, k, d)
    done = ws.journal.done_units(step)
    seen: dict[bytes, object] = {}
    for i, prefix in units:
        rec = done[_unit_name(i, prefix)]
        data = (ws.db_dir / rec["out"]).read_bytes()
        if sha256_hex(data) != rec["sha256"]:
            raise ProofInvariantError(f"partial DB {rec['out']} does not match its journal hash")
        part = CodeDB.from_bytes(data, check=False)
        if part.params != (ws.q, n, k, d):
            raise ProofInvariantError(f"partial DB {rec['out']} has parameters {part.params}")
        for c in part.codes:
            seen.setdefault(c.G.tobytes(), c)
    return CodeDB.from_codes(ws.q, n, k, d, seen.values())


# ------------------------------------------------------------------ covering radius


@dataclass
class CovradTally:
    params: tuple[int, int, int, int]
    ge_high: int  # R >= 13
    eq_below: int  # R = 12
    lower: int  # R < 12
    verdicts: list[tuple[bool, bool | None]]


def covrad_tally(ws: Workspace, db: CodeDB, high: int = COVRAD_HIGH) -> CovradTally:
    """Per code: is R >= high, and if not, is R = high - 1. Journalled and resumable."""
    step = step_key(*db.params)
    sha = db.content_hash()
    prior = {
        r["index"]: r for r in ws.journal.records("covrad", step=step, db_sha256=sha, high=high)
    }
    verdicts = []
    for i, c in enumerate(db.codes):
        rec = prior.get(i)
        if rec is None:
            ge = covers_at_least(CoveringQuery(c, high))
            eq = None if ge else covers_at_least(CoveringQuery(c, high - 1))
            ws.journal.append("covrad", step=step, db_sha256=sha, high=high, index=i, ge_high=ge, ge_below=eq)
        else:
            ge, eq = rec["ge_high"], rec["ge_below"]
        verdicts.append((ge, eq))
    ge_high = sum(1 for g, _ in verdicts if g)
    eq_below = sum(1 for g, e in verdicts if not g and e)
    return CovradTally(db.params, ge_high, eq_below, len(verdicts) - ge_high - eq_below, verdicts)


# ------------------------------------------------------------------ proof


@dataclass
class ProofReport:
    lines: list[str]
    route_a: bool
    route_b: bool

    @property
    def proved(self) -> bool:
        return self.route_a and self.route_b

    def __str__(self):
        return "\n".join(self.lines)


def conclude_nonexistence(ws: Workspace, n: int = 21, k: int = 5, d: int = 14, **step_kw) -> ProofReport:
    """Two independent arguments that no [n, k, d]_q code exists.

    (a) Shortening an [n, k, d] code at a coordinate in the support gives
        an [n-1, k-1, >= d] code of covering radius >= d - 1; every
        classified parent has R < d - 1.
    (b) Extending every classified parent yields no [n, k, d] code.
    """
    lines = [f"Non-existence of [{n},{k},{d}]_{ws.q}"]
    parent_dbs = load_parents(ws, n, k, d)
    for pdb in parent_dbs:
        rep = verify_db(pdb)
        if not rep.ok:
            raise ProofInvariantError(f"parent DB fails verification:\n{rep}")
        lines.append(f"  parents {pdb.name}: {len(pdb)} codes, verified")
    route_a = True
    radii = Counter()
    for pdb in parent_dbs:
        tally = covrad_tally(ws, pdb, high=d - 1)
        route_a &= tally.ge_high == 0
        radii[f"R>={d - 1}"] += tally.ge_high
        radii[f"R={d - 2}"] += tally.eq_below
        radii[f"R<{d - 2}"] += tally.lower
    lines.append(
        f"  (a) covering radius: {radii[f'R>={d - 1}']} parents with R >= {d - 1}, "
        f"{radii[f'R={d - 2}']} with R = {d - 2}, {radii[f'R<{d - 2}']} with R < {d - 2}"
        f"  -> {'no' if route_a else 'cannot exclude an'} [{n},{k},{d}] code"
    )
    res = run_step(ws, (n, k, d), **step_kw)
    if not res.complete:
        raise MissingInputError(f"step {res.step} has {res.units_done}/{res.units_total} units done")
    route_b = len(res.db) == 0
    lines.append(f"  (b) direct extension: {len(res.db)} codes from {res.stats['parents']} parents")
    if route_a != route_b:
        raise ProofInvariantError("covering-radius and extension routes disagree:\n" + "\n".join(lines))
    lines.append(f"  verdict: {'no' if route_a else 'a'} [{n},{k},{d}]_{ws.q} code exists (routes agree)")
    rec = dict(step=step_key(ws.q, n, k, d), q=ws.q, n=n, k=k, d=d, exists=not route_a, radii=dict(radii))
    ws.journal.append("proof", **rec)
    return ProofReport(lines, route_a, route_b)


# ------------------------------------------------------------------ table and bounds


def table_row(ws: Workspace, n: int, k: int, d: int) -> dict:
    row = {"params": (n, k, d), "count": None, "enumerators": None, "ge13": None, "r12": None}
    if not ws.has_db(n, k, d):
        return row
    db = ws.load_db(n, k, d, check=False)
    row["count"] = len(db)
    if len(db) == 0:
        return row
    row["enumerators"] = db.distinct_enumerators()
    step = step_key(*db.params)
    recs = {
        r["index"]: r
        for r in ws.journal.records("covrad", step=step, db_sha256=db.content_hash(), high=COVRAD_HIGH)
    }
    if len(recs) == len(db):
        row["ge13"] = sum(1 for r in recs.values() if r["ge_high"])
        row["r12"] = sum(1 for r in recs.values() if not r["ge_high"] and r["ge_below"])
    return row


def report_table(ws: Workspace, rows=TABLE_ROWS) -> str:
    def cell(v):
        return "?" if v is None else str(v)

    out = [f"{'code':<14}{'#':>7}{'#_W':>7}{'#_>=13':>8}{'#_12':>7}"]
    for n, k, d in rows:
        r = table_row(ws, n, k, d)
        label = f"[{n},{k},{d}]_{ws.q}"
        if r["count"] == 0:
            out.append(f"{label:<14}{0:>7}{'-':>7}{'-':>8}{'-':>7}")
            continue
        out.append(
            f"{label:<14}{cell(r['count']):>7}{cell(r['enumerators']):>7}"
            f"{cell(r['ge13']):>8}{cell(r['r12']):>7}"
        )
    return "\n".join(out)


def computed_axioms(ws: Workspace) -> list[bnd.BoundsFact]:
    """Non-existence facts established by proof records in the journal."""
    out = []
    for r in ws.journal.records("proof"):
        if r.get("exists") is False:
            out.append(bnd.BoundsFact(
                bnd.NOT_EXISTS, r["q"], r["n"], r["k"], r["d"], source=f"computed, journal proof record {r['step']}"
            ))
    return sorted(set(out), key=bnd.BoundsFact.sort_key)


def derive(ws: Workspace, extra=()) -> tuple[bnd.BoundsTable, list[str], bool]:
    axioms = list(ws.known.facts) + computed_axioms(ws) + list(extra)
    table = bnd.derive_bounds(axioms, ws.known.q, ws.known.n_max, ws.known.k_max)
    lines, ok = bnd.bounds_report(table, ws.known)
    return table, lines, ok


# ------------------------------------------------------------------ full run


def prove(ws: Workspace, split_depth: int = 0, progress=None) -> dict:
    """Run every step from k = 2 to the [21,5,14] verdict; idempotent."""
    say = progress or log.info
    for d in (14, 15, 16):
        if ws.journal.seal(step_key(ws.q, 18, 2, d)) is None or not ws.has_db(18, 2, d):
            db = classify_k2(18, d, ws.q)
            ws.store(db, method="k2-multiplicities")
        db = ws.load_db(18, 2, d)
        say(f"[18,2,{d}]: {len(db)} codes")
    if len(ws.load_db(18, 2, 16)):
        raise ProofInvariantError("found an [18,2,16] code, which the known-bounds config excludes")
    for n, k in ((19, 3), (20, 4)):
        for db in load_parents(ws, n, k, 14):
            if len(db):
                covrad_tally(ws, db)
        if ws.journal.seal(step_key(ws.q, n, k, 14)) is None or not ws.has_db(n, k, 14):
            t0 = time.time()
            res = run_step(ws, (n, k, 14), split_depth=split_depth)
            say(f"[{n},{k},14]: {len(res.db)} codes, {res.stats['enumerators']} enumerators ({time.time() - t0:.0f}s)")
    covrad_tally(ws, ws.load_db(20, 4, 14))
    report = conclude_nonexistence(ws, split_depth=split_depth)
    say(str(report))
    _, lines, ok = derive(ws)
    return {"proof": report, "table": report_table(ws), "bounds": lines, "bounds_ok": ok}
