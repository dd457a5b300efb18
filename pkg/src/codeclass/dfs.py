"""Zero-budget search over vectors b in F_q^m.

Given a matrix A (k' x m) and a threshold t, find b such that every message
u in F_q^k' satisfies  wt(u) + wt(uA + b) >= t.  The same problem answers

* "is R(C) >= t?" for a systematic code (I | A)   (b = -z for x = (0, z)),
* "which rows (0..0, 1, b) extend the parent (I | A) to min weight t + 1?".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._accel import USE_NUMBA


def column_classes(A: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Class id and scale of every column: col_j = scale_j * representative.

    Zero columns form one class with scale 1. Class ids are numbered in order
    of first appearance.
    """
    k, m = A.shape
    ids = np.zeros(m, dtype=np.int64)
    scale = np.ones(m, dtype=np.int64)
    seen: dict[tuple, int] = {}
    for j in range(m):
        col = [int(x) % q for x in A[:, j]]
        nz = [x for x in col if x]
        if nz:
            s = nz[0]
            inv = pow(s, -1, q)
            key = tuple((x * inv) % q for x in col)
            scale[j] = s
        else:
            key = ("zero",)
        ids[j] = seen.setdefault(key, len(seen))
    return ids, scale


@dataclass
class BudgetProblem:
    q: int
    t: int
    m: int
    order: np.ndarray
    scale: np.ndarray
    same_class: np.ndarray
    hits: np.ndarray
    budget: np.ndarray
    classes: bool
    _masks: tuple | None = field(default=None, repr=False)

    @classmethod
    def build(cls, A, q: int, t: int, *, symmetric: bool = True, constraints: bool = True):
        A = np.asarray(A, dtype=np.int64) % q
        k, m = A.shape
        if symmetric:
            ids, scale_col = column_classes(A, q)
            sizes = np.bincount(ids)
            order = np.array(
                sorted(range(m), key=lambda j: (-sizes[ids[j]], ids[j], j)), dtype=np.int64
            )
            same = np.zeros(m, dtype=np.int64)
            same[1:] = ids[order[1:]] == ids[order[:-1]]
            scale = scale_col[order]
        else:
            order = np.arange(m, dtype=np.int64)
            same = np.zeros(m, dtype=np.int64)
            scale = np.ones(m, dtype=np.int64)
        if constraints:
            U = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64).reshape(-1, k)
            UA = (U @ A) % q
            budget = (m - t + (U != 0).sum(axis=1)).astype(np.int64)
            # row u is hit at DFS position p by value beta iff UA[u, order[p]] + scale[p]*beta == 0
            cols = UA[:, order].T  # (m, U)
            betas = np.arange(q)[None, :, None] * scale[:, None, None]
            hits = (cols[:, None, :] + betas) % q == 0
        else:
            budget = np.zeros(0, dtype=np.int64)
            hits = np.zeros((m, q, 0), dtype=bool)
        return cls(q, t, m, order, scale, same, hits, budget, symmetric)

    # -- conversions between DFS-order beta and original-order b
    def to_b(self, beta: np.ndarray) -> np.ndarray:
        beta = np.asarray(beta, dtype=np.int64).reshape(-1, self.m)
        inv = np.argsort(self.order)
        return (beta[:, inv] * self.scale[inv][None, :]) % self.q

    def to_beta(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=np.int64).reshape(-1, self.m)
        inv = np.array([0] + [pow(x, -1, self.q) for x in range(1, self.q)], dtype=np.int64)
        return (b[:, self.order] * inv[self.scale][None, :]) % self.q

    def _segments(self) -> list[tuple[int, int]]:
        segs, start = [], 0
        for p in range(1, self.m + 1):
            if p == self.m or not self.same_class[p]:
                segs.append((start, p))
                start = p
        return segs

    def keys(self, b: np.ndarray) -> np.ndarray:
        """Base-q integer of each row read left to right (lex order = key order)."""
        b = np.asarray(b, dtype=np.int64).reshape(-1, self.m)
        if self.q**self.m >= 2**62:
            raise OverflowError(f"{self.q}^{self.m} vectors do not fit 62-bit keys")
        pw = self.q ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        return b @ pw

    def normalize(self, b: np.ndarray, scaling: bool = True) -> np.ndarray:
        """Orbit representative: lex-least over scalings of the class-sorted vector."""
        beta = self.to_beta(b)
        segs = [s for s in self._segments() if s[1] - s[0] > 1]
        best = None
        best_key = None
        for lam in range(1, self.q if scaling else 2):
            x = (lam * beta) % self.q
            for s, e in segs:
                x[:, s:e] = np.sort(x[:, s:e], axis=1)
            cand = self.to_b(x)
            key = self.keys(cand)
            if best is None:
                best, best_key = cand, key
            else:
                better = key < best_key
                best[better] = cand[better]
                best_key = np.where(better, key, best_key)
        return best

    def prefixes(self, depth: int) -> list[str]:
        out = []
        for digits in itertools.product(range(self.q), repeat=min(depth, self.m)):
            if any(self.same_class[p] and p > 0 and digits[p] < digits[p - 1] for p in range(len(digits))):
                continue
            out.append("".join(map(str, digits)))
        return out

    # -- search
    def _run(self, prefix: str, mode: int, scale_norm: bool):
        if self.budget.size and self.budget.min() < 0:
            return np.zeros((0, self.m), dtype=np.int8), 0, 0
        pre = np.array([int(c) for c in prefix], dtype=np.int64)
        args = (self.q, self.same_class, pre, mode, bool(scale_norm))
        if not USE_NUMBA:
            return _kernels.budget_dfs_numpy(self.hits, self.budget, *args)
        return _kernels.budget_dfs(*self.masks(), *args)

    def masks(self) -> tuple[np.ndarray, np.ndarray]:
        """Packed hit masks and slack planes for the compiled kernel."""
        if self._masks is None:
            self._masks = _kernels.pack_budget_masks(self.hits, self.budget)
        return self._masks

    def solve_all(self, prefixes=None, scale_norm: bool = True) -> np.ndarray:
        """All admissible b (original coordinate order)."""
        parts = []
        for pre in prefixes if prefixes is not None else [""]:
            leaves, n, _ = self._run(pre, _kernels.MODE_COLLECT, scale_norm)
            parts.append(leaves[:n])
        beta = np.concatenate(parts) if parts else np.zeros((0, self.m), np.int8)
        return self.to_b(beta)

    def count(self, prefixes=None, scale_norm: bool = True) -> tuple[int, int]:
        """(admissible leaves, visited nodes)."""
        total = nodes = 0
        for pre in prefixes if prefixes is not None else [""]:
            _, n, nd = self._run(pre, _kernels.MODE_COUNT, scale_norm)
            total += n
            nodes += nd
        return total, nodes

    def witness(self, prefixes=None):
        """Some admissible b, or None."""
        for pre in prefixes if prefixes is not None else [""]:
            leaves, n, _ = self._run(pre, _kernels.MODE_FIRST, False)
            if n:
                return self.to_b(leaves[:1])[0]
        return None
