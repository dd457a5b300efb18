"""On-disk lists of inequivalent codes with fixed parameters.

File layout (ASCII, LF line endings)::

    #qcodedb v1
    q=5 n=18 k=2 d=15 count=1

    111111111111000000
    000000111111111111

Each code is a block of k digit rows; blocks are separated by one blank
line, a blank line also separates the header from the first block, and
the file ends with a single LF. Codes appear in ascending certificate
order, so the bytes depend only on the set of equivalence classes.
"""
from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .canon import CanonicalCert, canonical_form, cert_of
from .linear_code import LinearCode, rank

MAGIC = "#qcodedb v1"
_HEADER = re.compile(r"q=(\d+) n=(\d+) k=(\d+) d=(\d+) count=(\d+)")


class DBFormatError(ValueError):
    pass


def db_name(q: int, n: int, k: int, d: int) -> str:
    return f"q{q}_n{n}_k{k}_d{d}.qdb"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


@dataclass
class CodeDB:
    q: int
    n: int
    k: int
    d: int
    codes: list[LinearCode] = field(default_factory=list)
    certs: list[CanonicalCert] | None = field(default=None, repr=False)

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.q, self.n, self.k, self.d)

    @property
    def name(self) -> str:
        return db_name(*self.params)

    def __len__(self) -> int:
        return len(self.codes)

    @classmethod
    def from_codes(cls, q, n, k, d, codes) -> "CodeDB":
        """Deduplicate into canonical representatives sorted by certificate."""
        reps: dict[CanonicalCert, LinearCode] = {}
        for c in codes:
            cf = canonical_form(c)
            reps.setdefault(cf.cert, cf.code)
        certs = sorted(reps)
        return cls(q, n, k, d, [reps[c] for c in certs], certs)

    @classmethod
    def merge(cls, dbs) -> "CodeDB":
        """Union of DBs with equal parameters, deduplicated."""
        dbs = list(dbs)
        if not dbs:
            raise ValueError("nothing to merge")
        params = {db.params for db in dbs}
        if len(params) != 1:
            raise DBFormatError(f"cannot merge DBs with parameters {sorted(params)}")
        return cls.from_codes(*dbs[0].params, [c for db in dbs for c in db.codes])

    def to_bytes(self) -> bytes:
        lines = [MAGIC, f"q={self.q} n={self.n} k={self.k} d={self.d} count={len(self.codes)}"]
        for c in self.codes:
            lines.append("")
            lines.extend("".join(str(int(x)) for x in row) for row in c.G)
        return ("\n".join(lines) + "\n").encode("ascii")

    def content_hash(self) -> str:
        return sha256_hex(self.to_bytes())

    def write(self, path) -> str:
        data = self.to_bytes()
        atomic_write(Path(path), data)
        return sha256_hex(data)

    @classmethod
    def from_bytes(cls, data: bytes, check: bool = True) -> "CodeDB":
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise DBFormatError("DB file is not ASCII") from exc
        if "\r" in text:
            raise DBFormatError("DB file must use LF line endings")
        lines = text.split("\n")
        if len(lines) < 3 or lines[0] != MAGIC or lines[-1] != "":
            raise DBFormatError("missing '#qcodedb v1' header or trailing LF")
        m = _HEADER.fullmatch(lines[1])
        if not m:
            raise DBFormatError(f"bad parameter line {lines[1]!r}")
        q, n, k, d, count = map(int, m.groups())
        body = lines[2:-1]
        blocks = []
        while body:
            if body[0] != "" or len(body) < k + 1:
                raise DBFormatError(f"malformed block after code {len(blocks)}")
            blocks.append(body[1 : k + 1])
            body = body[k + 1 :]
        if len(blocks) != count:
            raise DBFormatError(f"header says count={count}, found {len(blocks)} codes")
        codes = []
        for i, rows in enumerate(blocks):
            if any(len(r) != n or not r.isdigit() for r in rows):
                raise DBFormatError(f"code {i}: rows must be {n} digits")
            G = np.array([[int(ch) for ch in r] for r in rows], dtype=np.int64)
            if G.max(initial=0) >= q:
                raise DBFormatError(f"code {i}: digit outside 0..{q - 1}")
            c = LinearCode(G, q, check=False)
            if check:
                if rank(G, q) != k:
                    raise DBFormatError(f"code {i}: rank {rank(G, q)} != k={k}")
                if c.min_weight() != d:
                    raise DBFormatError(f"code {i}: min weight {c.min_weight()} != d={d}")
            codes.append(c)
        return cls(q, n, k, d, codes)

    @classmethod
    def load(cls, path, check: bool = True) -> "CodeDB":
        return cls.from_bytes(Path(path).read_bytes(), check=check)

    def ensure_certs(self) -> list[CanonicalCert]:
        if self.certs is None:
            self.certs = [cert_of(c) for c in self.codes]
        return self.certs

    def weight_enumerators(self) -> list[tuple[int, ...]]:
        return [c.weight_enumerator().counts for c in self.codes]

    def distinct_enumerators(self) -> int:
        return len(set(self.weight_enumerators()))


@dataclass
class Issue:
    index: int
    kind: str
    detail: str

    def __str__(self):
        return f"code {self.index}: {self.kind}: {self.detail}"


@dataclass
class VerifyReport:
    params: tuple[int, int, int, int]
    count: int
    issues: list[Issue]

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self):
        q, n, k, d = self.params
        head = f"[{n},{k},{d}]_{q}: {self.count} codes, "
        if self.ok:
            return head + "clean"
        return head + f"{len(self.issues)} issue(s)\n" + "\n".join(f"  {i}" for i in self.issues)


def verify_db(db: CodeDB) -> VerifyReport:
    """Recheck parameters, pairwise inequivalence and certificate order."""
    issues = []
    certs = []
    for i, c in enumerate(db.codes):
        if c.q != db.q or c.n != db.n:
            issues.append(Issue(i, "shape", f"q={c.q} n={c.n}"))
            certs.append(None)
            continue
        r = rank(c.G, c.q)
        if r != db.k or c.G.shape[0] != db.k:
            issues.append(Issue(i, "rank", f"{c.G.shape[0]} rows of rank {r}, expected k={db.k}"))
            certs.append(None)
            continue
        w = c.min_weight()
        if w != db.d:
            issues.append(Issue(i, "min-weight", f"{w} != d={db.d}"))
        certs.append(cert_of(c))
    first: dict[CanonicalCert, int] = {}
    for i, cert in enumerate(certs):
        if cert is None:
            continue
        if cert in first:
            issues.append(Issue(i, "duplicate", f"equivalent to code {first[cert]}"))
        else:
            first[cert] = i
    prev = None
    for i, cert in enumerate(certs):
        if cert is None:
            continue
        if prev is not None and cert < prev:
            issues.append(Issue(i, "order", "certificate smaller than its predecessor"))
        prev = cert
    return VerifyReport(db.params, len(db.codes), issues)
