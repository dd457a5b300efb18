"""Linear codes over prime fields given by generator matrices.

Coordinates are 0-based in the Python API and 1-based in text I/O and CLI
messages.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from ._accel import USE_NUMBA
from .gf import FieldSpec, GFVec

# q**k above this is refused by the enumeration-based routines
ENUMERATION_BUDGET = 10**7


class CodeError(ValueError):
    pass


def _as_field(q) -> FieldSpec:
    return q if isinstance(q, FieldSpec) else FieldSpec(int(q))


def rref(M: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod q and the pivot columns (zero rows dropped)."""
    A = np.array(M, dtype=np.int64) % q
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, q)) % q
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % q
        pivots.append(c)
        r += 1
    return A[:r].astype(np.int8), pivots


def rank(M: np.ndarray, q: int) -> int:
    return len(rref(M, q)[1])


@dataclass(frozen=True)
class WeightEnumerator:
    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.counts) - 1

    @property
    def min_distance(self) -> int:
        """Smallest nonzero weight, or 0 for the zero code."""
        for i, a in enumerate(self.counts[1:], start=1):
            if a:
                return i
        return 0

    def __str__(self):
        return " ".join(f"A{i}={a}" for i, a in enumerate(self.counts) if a)


class LinearCode:
    """Row space of a full-rank generator matrix over F_q.

    Derived data (codeword table, weight enumerator) is cached on first use;
    a concurrent duplicate fill computes the same value, so no locking.
    """

    def __init__(self, G, q=5, *, check: bool = True):
        self.field = _as_field(q)
        M = np.array(G, dtype=np.int64)
        if M.ndim == 1:
            M = M.reshape(1, -1) if M.size else M.reshape(0, 0)
        M %= self.field.q
        if check and M.shape[0] and rank(M, self.field.q) != M.shape[0]:
            raise CodeError(f"generator rows are linearly dependent (rank < {M.shape[0]})")
        M = M.astype(np.int8)
        M.setflags(write=False)
        self._G = M

    # -- basic data
    @property
    def G(self) -> np.ndarray:
        return self._G

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def k(self) -> int:
        return self._G.shape[0]

    @property
    def n(self) -> int:
        return self._G.shape[1]

    @property
    def rows(self) -> list[GFVec]:
        return [GFVec(self.field, r) for r in self._G]

    def __repr__(self):
        d = self.min_weight() if self.k and self.q**self.k <= ENUMERATION_BUDGET else "?"
        return f"<LinearCode [{self.n},{self.k},{d}]_{self.q}>"

    def __eq__(self, other):
        """Same row space (not equivalence; see canon.equivalent)."""
        if not isinstance(other, LinearCode):
            return NotImplemented
        if (self.q, self.n, self.k) != (other.q, other.n, other.k):
            return False
        return np.array_equal(rref(self.G, self.q)[0], rref(other.G, other.q)[0])

    __hash__ = None

    # -- enumeration
    def _check_budget(self):
        if self.q**self.k > ENUMERATION_BUDGET:
            raise CodeError(f"q^k = {self.q}^{self.k} exceeds the enumeration budget")

    @cached_property
    def table(self) -> np.ndarray:
        """All codewords as a (q**k, n) int8 array in Gray order."""
        self._check_budget()
        if self.k == 0:
            t = np.zeros((1, self.n), dtype=np.int8)
        elif USE_NUMBA:
            t = _kernels.codeword_table(self._G, self.q)
        else:
            t = _kernels.codeword_table_numpy(self._G, self.q)
        t.setflags(write=False)
        return t

    def codewords(self) -> Iterator[GFVec]:
        for row in self.table:
            yield GFVec(self.field, row)

    def weight_enumerator(self) -> WeightEnumerator:
        return self._enumerator

    @cached_property
    def _enumerator(self) -> WeightEnumerator:
        if USE_NUMBA:
            c = _kernels.weight_distribution(self.table)
        else:
            c = _kernels.weight_distribution_numpy(self.table)
        return WeightEnumerator(tuple(int(x) for x in c))

    def min_weight(self) -> int:
        if self.k == 0:
            raise CodeError("the zero code has no nonzero codeword")
        return self._enumerator.min_distance

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.min_weight())

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.q
        return rank(np.vstack([self._G, v[None, :]]), self.q) == self.k

    # -- derived codes
    def _coord(self, j: int) -> None:
        if not 0 <= j < self.n:
            raise CodeError(f"coordinate {j + 1} out of range 1..{self.n}")

    def shorten(self, j: int) -> "LinearCode":
        """Codewords vanishing at coordinate j, with j deleted."""
        self._coord(j)
        q = self.q
        col = self._G[:, j].astype(np.int64)
        rest = np.delete(self._G, j, axis=1).astype(np.int64)
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            return LinearCode(rest, self.field, check=False)
        p = nz[0]
        inv = pow(int(col[p]), -1, q)
        new_rows = [
            (rest[i] - col[i] * inv * rest[p]) % q for i in range(self.k) if i != p
        ]
        M = np.array(new_rows, dtype=np.int64).reshape(self.k - 1, self.n - 1)
        return LinearCode(M, self.field, check=False)

    def puncture(self, j: int) -> "LinearCode":
        """Delete coordinate j; requires d >= 2 so the dimension survives."""
        self._coord(j)
        d = self.min_weight()
        if d < 2:
            raise CodeError(f"puncturing needs d >= 2, code has d = {d}")
        out = LinearCode(np.delete(self._G, j, axis=1), self.field, check=False)
        assert out.min_weight() in (d - 1, d)
        return out

    def transform(self, perm: Sequence[int], scalars: Sequence[int]) -> "LinearCode":
        """Image under the monomial map c -> c' with c'[perm[j]] = scalars[j] * c[j]."""
        return LinearCode(apply_monomial(self._G, perm, scalars, self.q), self.field, check=False)

    # -- text I/O
    def to_text(self) -> str:
        lines = [f"q={self.q} n={self.n} k={self.k}"]
        lines += ["".join(map(str, r.tolist())) for r in self._G]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise CodeError("empty generator matrix block")
        m = re.fullmatch(r"q=(\d+) n=(\d+) k=(\d+)", lines[0])
        if not m:
            raise CodeError(f"bad header line: {lines[0]!r}")
        q, n, k = map(int, m.groups())
        rows = lines[1:]
        if len(rows) != k:
            raise CodeError(f"header says k={k}, found {len(rows)} rows")
        G = parse_rows(rows, q, n)
        return cls(G, q)


def parse_rows(rows: Sequence[str], q: int, n: int) -> np.ndarray:
    G = np.zeros((len(rows), n), dtype=np.int8)
    for i, r in enumerate(rows):
        if len(r) != n or not r.isdigit() or any(int(c) >= q for c in r):
            raise CodeError(f"row {i + 1} is not a length-{n} digit string over F_{q}: {r!r}")
        G[i] = [int(c) for c in r]
    return G


def apply_monomial(G: np.ndarray, perm, scalars, q: int) -> np.ndarray:
    G = np.asarray(G, dtype=np.int64)
    perm = np.asarray(perm, dtype=np.int64)
    scalars = np.asarray(scalars, dtype=np.int64)
    out = np.zeros_like(G)
    out[:, perm] = (G * scalars[None, :]) % q
    return out.astype(np.int8)


def random_monomial(n: int, q: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    return rng.permutation(n), rng.integers(1, q, size=n)


def systematize(G, q=5) -> tuple[np.ndarray, np.ndarray]:
    """Generator matrix (I_k | A) of an equivalent code, and the column permutation.

    Column i of the result is column ``perm[i]`` of the row-reduced input.
    """
    M = np.asarray(G)
    k = M.shape[0]
    R, pivots = rref(M, int(q))
    if len(pivots) != k:
        raise CodeError(f"rank {len(pivots)} < k = {k}; cannot systematize")
    rest = [c for c in range(M.shape[1]) if c not in set(pivots)]
    perm = np.array(pivots + rest, dtype=np.int64)
    return R[:, perm], perm


def systematic_code(code: LinearCode) -> LinearCode:
    S, _ = systematize(code.G, code.q)
    return LinearCode(S, code.field, check=False)


def is_systematic(G) -> bool:
    G = np.asarray(G)
    k = G.shape[0]
    return G.shape[1] >= k and np.array_equal(G[:, :k], np.eye(k, dtype=G.dtype))


def repetition_code(n: int, q: int = 5) -> LinearCode:
    return LinearCode(np.ones((1, n), dtype=np.int8), q)
