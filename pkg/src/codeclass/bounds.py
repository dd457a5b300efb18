"""Existence and non-existence facts for [n, k, d]_q codes and their closure.

A fact ``exists[n,k,d]`` means some linear code with these parameters and
minimum distance at least d exists; ``not_exists`` is its negation. The
closure uses, in both directions,

* puncturing:  exists[n,k,d]  => exists[n-1,k,d-1]       (d >= 2)
* residual:    exists[n,k,d]  => exists[n-d,k-1,ceil(d/q)] (k >= 2)
* shortening:  exists[n,k,d]  => exists[n-1,k-1,d]       (k >= 2)

plus the trivial monotonicity rules: a longer code (append a zero
coordinate), a subcode of smaller dimension and a smaller designed distance
all exist whenever the original does. Non-existence travels along the
contrapositives. Everything is confined to a finite window of (n, k).
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

EXISTS = "exists"
NOT_EXISTS = "not_exists"


class BoundsContradiction(ValueError):
    pass


@dataclass(frozen=True)
class BoundsFact:
    kind: str
    q: int
    n: int
    k: int
    d: int
    rule: str = "axiom"
    source: str = ""
    antecedents: tuple["BoundsFact", ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in (EXISTS, NOT_EXISTS):
            raise ValueError(f"kind must be {EXISTS!r} or {NOT_EXISTS!r}")
        if min(self.n, self.k, self.d) < 1 or self.k > self.n:
            raise ValueError(f"bad parameters [{self.n},{self.k},{self.d}]")

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.d)

    def label(self) -> str:
        word = "exists" if self.kind == EXISTS else "no"
        return f"{word} [{self.n},{self.k},{self.d}]_{self.q}"

    def chain(self, indent: int = 0) -> list[str]:
        """Derivation as indented lines, leaves are axioms with their source."""
        pad = "  " * indent
        if self.rule == "axiom":
            return [f"{pad}{self.label()}  (axiom: {self.source})"]
        out = [f"{pad}{self.label()}  (by {self.rule})"]
        for a in self.antecedents:
            out += a.chain(indent + 1)
        return out

    def sort_key(self):
        return (self.kind, self.q, self.n, self.k, self.d, self.rule, self.source)


@dataclass
class KnownBounds:
    q: int
    n_max: int
    k_max: int
    facts: list[BoundsFact]
    report: list[dict]

    def dmax(self, n: int, k: int) -> int | None:
        """Largest d not excluded by a non-existence axiom at exactly (n, k)."""
        ds = [f.d for f in self.facts if f.kind == NOT_EXISTS and (f.n, f.k) == (n, k)]
        return min(ds) - 1 if ds else None


def load_known_bounds(path=None) -> KnownBounds:
    if path is None:
        text = resources.files("codeclass").joinpath("data/known_bounds.json").read_text()
    else:
        text = Path(path).read_text()
    cfg = json.loads(text)
    q = int(cfg["q"])
    facts = [
        BoundsFact(f["kind"], q, int(f["n"]), int(f["k"]), int(f["d"]), source=f["source"])
        for f in cfg["facts"]
    ]
    return KnownBounds(q, int(cfg["window"]["n_max"]), int(cfg["window"]["k_max"]), facts, cfg["report"])


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class BoundsTable:
    """Closure of a fact set inside the window 1 <= k <= n <= n_max, k <= k_max.

    ``lo[n, k]`` is the best distance known to exist, ``hi[n, k]`` the
    smallest distance known not to exist; each carries the fact that
    established it.
    """

    def __init__(self, q: int, n_max: int, k_max: int):
        self.q, self.n_max, self.k_max = q, n_max, k_max
        self.lo: dict[tuple[int, int], BoundsFact] = {}
        self.hi: dict[tuple[int, int], BoundsFact] = {}

    def in_window(self, n: int, k: int, d: int) -> bool:
        return 1 <= k <= min(n, self.k_max) and n <= self.n_max and d >= 1

    def d_upper(self, n: int, k: int) -> int | None:
        f = self.hi.get((n, k))
        return f.d if f else None

    def d_lower(self, n: int, k: int) -> int | None:
        f = self.lo.get((n, k))
        return f.d if f else None

    def excludes(self, n: int, k: int, d: int) -> BoundsFact | None:
        f = self.hi.get((n, k))
        return f if f is not None and d >= f.d else None

    def establishes(self, n: int, k: int, d: int) -> BoundsFact | None:
        f = self.lo.get((n, k))
        return f if f is not None and d <= f.d else None

    # -- closure
    def _not_exists_consequences(self, f: BoundsFact):
        q, n, k, d = f.q, f.n, f.k, f.d
        yield NOT_EXISTS, n + 1, k, d + 1, "puncturing"
        yield NOT_EXISTS, n + 1, k + 1, d, "shortening"
        yield NOT_EXISTS, n - 1, k, d, "length monotonicity"
        yield NOT_EXISTS, n, k + 1, d, "subcode"
        # any [N, k+1, D] with ceil(D/q) >= d and N - D <= n has a forbidden residual
        for N in range(n + 1, self.n_max + 1):
            D = max(q * (d - 1) + 1, N - n)
            if D <= N:
                yield NOT_EXISTS, N, k + 1, D, "residual"

    def _exists_consequences(self, f: BoundsFact):
        q, n, k, d = f.q, f.n, f.k, f.d
        if d >= 2:
            yield EXISTS, n - 1, k, d - 1, "puncturing"
        if k >= 2:
            yield EXISTS, n - 1, k - 1, d, "shortening"
            if n - d >= k - 1:
                yield EXISTS, n - d, k - 1, _ceil_div(d, q), "residual"
            yield EXISTS, n, k - 1, d, "subcode"
        yield EXISTS, n + 1, k, d, "length monotonicity"

    def _improves(self, kind, n, k, d) -> bool:
        if kind == NOT_EXISTS:
            cur = self.hi.get((n, k))
            return cur is None or d < cur.d
        cur = self.lo.get((n, k))
        return cur is None or d > cur.d

    def close(self, axioms) -> None:
        heap = []
        seq = 0
        for a in sorted(axioms, key=BoundsFact.sort_key):
            if a.q != self.q:
                raise ValueError(f"fact over F_{a.q} in a table over F_{self.q}")
            heapq.heappush(heap, (a.sort_key(), seq, a))
            seq += 1
        while heap:
            _, _, f = heapq.heappop(heap)
            if not self.in_window(f.n, f.k, f.d) or not self._improves(f.kind, f.n, f.k, f.d):
                continue
            (self.hi if f.kind == NOT_EXISTS else self.lo)[(f.n, f.k)] = f
            gen = self._not_exists_consequences if f.kind == NOT_EXISTS else self._exists_consequences
            for kind, n, k, d, rule in gen(f):
                if self.in_window(n, k, d) and self._improves(kind, n, k, d):
                    g = BoundsFact(kind, f.q, n, k, d, rule=rule, antecedents=(f,))
                    heapq.heappush(heap, (g.sort_key(), seq, g))
                    seq += 1
        bad = [
            (cell, self.lo[cell], self.hi[cell])
            for cell in sorted(self.lo.keys() & self.hi.keys())
            if self.lo[cell].d >= self.hi[cell].d
        ]
        if bad:
            lines = []
            for (n, k), lo, hi in bad:
                lines.append(f"[{n},{k}]: exists d={lo.d} but not d={hi.d}")
                lines += ["  " + s for s in lo.chain()] + ["  " + s for s in hi.chain()]
            raise BoundsContradiction("contradictory facts\n" + "\n".join(lines))

    def facts(self) -> list[BoundsFact]:
        """The minimal non-existence and maximal existence fact of every cell."""
        return sorted(list(self.hi.values()) + list(self.lo.values()), key=BoundsFact.sort_key)


def derive_bounds(axioms, q: int = 5, n_max: int = 96, k_max: int = 10) -> BoundsTable:
    table = BoundsTable(q, n_max, k_max)
    table.close(list(axioms))
    return table


# ------------------------------------------------------------------ reports


def family_cells(entry: dict) -> list[tuple[int, int, int]]:
    """Cells [n0 + t*dn, k0 + t*dk, d0 + t*dd] for t = 0..t_max."""
    return [
        (entry["n"] + t * entry.get("dn", 0), entry["k"] + t * entry.get("dk", 0), entry["d"] + t * entry.get("dd", 0))
        for t in range(entry["t_max"] + 1)
    ]


@dataclass
class CellCheck:
    n: int
    k: int
    d: int
    derived: BoundsFact | None
    ok: bool


def check_nonexistence_cells(table: BoundsTable, cells) -> list[CellCheck]:
    """For each [n,k,d], is d exactly the least distance the closure excludes at (n, k)?"""
    out = []
    for n, k, d in cells:
        f = table.hi.get((n, k))
        out.append(CellCheck(n, k, d, f, f is not None and f.d == d))
    return out


def exact_d(table: BoundsTable, n: int, k: int) -> int | None:
    """d_q(n,k) when the closure pins it down, else None."""
    lo, hi = table.d_lower(n, k), table.d_upper(n, k)
    return lo if lo is not None and hi == lo + 1 else None


def exact_n(table: BoundsTable, k: int, d: int) -> int | None:
    """n_q(k,d) when the closure pins it down, else None."""
    for n in range(k, table.n_max + 1):
        if table.establishes(n, k, d):
            return n if n == k or table.excludes(n - 1, k, d) else None
        if not table.excludes(n, k, d):
            return None
    return None


def bounds_report(table: BoundsTable, known: KnownBounds) -> tuple[list[str], bool]:
    """Human-readable report over the configured families; (lines, all_ok)."""
    lines, ok = [], True
    for entry in known.report:
        kind = entry["kind"]
        cells = family_cells(entry)
        lines.append(f"{entry['name']}  ({entry['source']})")
        if kind == "not_exists":
            for c in check_nonexistence_cells(table, cells):
                ok &= c.ok
                got = c.derived.d if c.derived else None
                mark = "ok" if c.ok else "MISMATCH"
                lines.append(f"  no [{c.n},{c.k},{c.d}]_{table.q}: least excluded d = {got}  {mark}")
                if c.derived is not None:
                    lines += ["      " + s for s in c.derived.chain()]
        elif kind == "exact_d":
            for n, k, d in cells:
                got = exact_d(table, n, k)
                ok &= got == d
                lines.append(f"  d_{table.q}({n},{k}) = {got}  (expected {d})  {'ok' if got == d else 'MISMATCH'}")
        elif kind == "exact_n":
            for n, k, d in cells:
                got = exact_n(table, k, d)
                ok &= got == n
                lines.append(f"  n_{table.q}({k},{d}) = {got}  (expected {n})  {'ok' if got == n else 'MISMATCH'}")
        else:
            raise ValueError(f"unknown report kind {kind!r}")
    return lines, ok


def griesmer_length(k: int, d: int, q: int) -> int:
    """Least n allowed by the Griesmer bound for an [n, k, d]_q code."""
    return sum(_ceil_div(d, q**i) for i in range(k))


def implied_beyond(table: BoundsTable, known: KnownBounds, k_values) -> list[BoundsFact]:
    """Non-existence cells for the given k whose derivation passes through a
    computed (non-config) axiom, that the Griesmer bound does not already
    give, and that no report family lists."""
    listed = {(n, k) for e in known.report if e["kind"] == "not_exists" for n, k, _ in family_cells(e)}
    config = {f.params for f in known.facts}

    def computed(f: BoundsFact) -> bool:
        if f.rule == "axiom":
            return f.params not in config
        return any(computed(a) for a in f.antecedents)

    out = []
    for (n, k), f in sorted(table.hi.items()):
        if k not in k_values or (n, k) in listed or n < griesmer_length(k, f.d, table.q):
            continue
        if computed(f):
            out.append(f)
    return out
