"""Inverse shortening: all [n, k, d] children of an [n-1, k-1, d'] parent.

A child has generator matrix

    ( I_{k-1}  0 | A )
    ( 0 ...  0 1 | b )

and min weight >= d iff, for every message u of the parent,
wt(u) + 1 + wt(uA + b) >= d. Candidate vectors b are found by the shared
budget DFS in :mod:`codeclass.dfs`, reduced by cheap symmetries inside the
search (global scaling; permutations inside classes of parallel parent
columns) and then by the parent's automorphism group.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import dfs
from .canon import canonical_form
from .gf import GFVec
from .linear_code import CodeError, LinearCode, is_systematic, systematic_code

NORMALIZATIONS = ("none", "scaling", "classes", "aut")


@dataclass
class ExtensionTask:
    parent: LinearCode
    target_d: int
    normalization: str = "aut"

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if not is_systematic(self.parent.G):
            self.parent = systematic_code(self.parent)
        if self.parent.min_weight() < self.target_d:
            raise CodeError(
                f"parent has d' = {self.parent.min_weight()} < target d = {self.target_d}"
            )

    @property
    def redundancy(self) -> np.ndarray:
        return self.parent.G[:, self.parent.k :]

    @property
    def child_params(self) -> tuple[int, int, int]:
        return (self.parent.n + 1, self.parent.k + 1, self.target_d)


def extend_matrix(parent: LinearCode, b) -> LinearCode:
    if not is_systematic(parent.G):
        raise CodeError("parent must be in systematic form (I | A)")
    k1, n1 = parent.k, parent.n
    bd = b.digits if isinstance(b, GFVec) else np.asarray(b, dtype=np.int64)
    if bd.size != n1 - k1:
        raise CodeError(f"b has length {bd.size}, expected {n1 - k1}")
    G = np.zeros((k1 + 1, n1 + 1), dtype=np.int64)
    G[:k1, :k1] = parent.G[:, :k1]
    G[:k1, k1 + 1 :] = parent.G[:, k1:]
    G[k1, k1] = 1
    G[k1, k1 + 1 :] = bd
    return LinearCode(G, parent.field, check=False)


def _search_problem(task: ExtensionTask) -> dfs.BudgetProblem:
    symmetric = task.normalization in ("classes", "aut")
    return dfs.BudgetProblem.build(task.redundancy, task.parent.q, task.target_d - 1, symmetric=symmetric)


def normalize_b(parent: LinearCode, b) -> GFVec:
    """Orbit representative of b under scaling and parallel-column swaps."""
    if not is_systematic(parent.G):
        raise CodeError("parent must be in systematic form (I | A)")
    A = parent.G[:, parent.k :]
    bd = b.digits if isinstance(b, GFVec) else np.asarray(b)
    prob = dfs.BudgetProblem.build(A, parent.q, 0, symmetric=True, constraints=False)
    out = prob.normalize(np.asarray(bd, dtype=np.int64)[None, :])[0]
    return GFVec(parent.field, out)


def shard_prefixes(task: ExtensionTask, depth: int = 2) -> list[str]:
    """Digit prefixes (DFS-order values) splitting the search into subtrees."""
    if depth == 0:
        return [""]
    return _search_problem(task).prefixes(depth)


def candidate_vectors(task: ExtensionTask, prefixes=None) -> np.ndarray:
    """All admissible b after in-search symmetry, one per orbit, as normalize_b gives it.

    The search keeps whichever orbit member is least in its own coordinate
    order; re-normalizing maps that to the lex-least digit string.
    """
    prob = _search_problem(task)
    if task.normalization == "none":
        return prob.solve_all(prefixes=prefixes, scale_norm=False)
    B = prob.normalize(prob.solve_all(prefixes=prefixes, scale_norm=True))
    return B[np.argsort(prob.keys(B), kind="stable")] if len(B) else B


def aut_orbit_representatives(task: ExtensionTask, B: np.ndarray) -> np.ndarray:
    """Lex-least element of each orbit of the parent's automorphism group on B.

    B must be closed (after normalization) under the group; images that fall
    outside B are ignored, which only weakens the reduction.
    """
    if len(B) <= 1:
        return B
    parent = task.parent
    q, k1 = parent.q, parent.k
    A = parent.G[:, k1:].astype(np.int64)
    prob = dfs.BudgetProblem.build(A, q, 0, symmetric=True, constraints=False)
    keys = prob.keys(B)
    order = np.argsort(keys)
    skeys = keys[order]
    gens = canonical_form(parent).automorphisms.generators
    N = len(B)
    rows_, cols_ = [], []
    W = np.zeros((N, parent.n), dtype=np.int64)
    W[:, k1:] = B
    for g in gens:
        Wp = np.zeros_like(W)
        Wp[:, g.perm] = (W * g.scalars[None, :]) % q
        Bp = (Wp[:, k1:] - Wp[:, :k1] @ A) % q
        Bp = prob.normalize(Bp)
        kp = prob.keys(Bp)
        idx = np.searchsorted(skeys, kp)
        idx[idx >= N] = N - 1
        hit = skeys[idx] == kp
        rows_.append(np.nonzero(hit)[0])
        cols_.append(order[idx[hit]])
    if not rows_:
        return B[np.argsort(keys)]
    r = np.concatenate(rows_)
    c = np.concatenate(cols_)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(N, N))
    ncomp, label = connected_components(graph, directed=True, connection="weak")
    # least key per component
    best = np.full(ncomp, -1, dtype=np.int64)
    for i in order[::-1]:
        best[label[i]] = i
    return B[np.sort(best)]


def enumerate_children(task: ExtensionTask, prefixes=None) -> list[LinearCode]:
    """Children of the parent with min weight >= target_d, up to the task's symmetry."""
    B = candidate_vectors(task, prefixes)
    if task.normalization == "aut":
        B = aut_orbit_representatives(task, B)
    out = []
    n, k, d = task.child_params
    for b in B:
        child = extend_matrix(task.parent, b)
        if child.min_weight() < d or child.n != n or child.k != k:
            raise AssertionError(f"unsound child for b={b}")
        out.append(child)
    return out


def naive_children_vectors(task: ExtensionTask, chunk: int = 1 << 16) -> np.ndarray:
    """Every b in F_q^(n-k) whose child has min weight >= target_d (oracle)."""
    A = task.redundancy.astype(np.int64)
    q = task.parent.q
    k1, m = A.shape
    U = np.array(list(itertools.product(range(q), repeat=k1)), dtype=np.int64).reshape(-1, k1)
    UA = (U @ A) % q
    need = task.target_d - 1 - (U != 0).sum(axis=1)  # wt(uA + b) must reach this
    total = q**m
    pw = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    good = []
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        B = (idx[:, None] // pw[None, :]) % q
        w = ((UA[None, :, :] + B[:, None, :]) % q != 0).sum(axis=2)
        good.append(B[(w >= need[None, :]).all(axis=1)])
    return np.concatenate(good).reshape(-1, m)
