import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from codeclass.linear_code import LinearCode, rank

REPO = Path(__file__).resolve().parents[1]
RESULTS = REPO / "results"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running classification steps")


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def random_code(rng, n, k, q=5, full_rank=True):
    while True:
        G = rng.integers(0, q, size=(k, n))
        if not full_rank or rank(G, q) == k:
            return LinearCode(G, q)


def all_vectors(q, n):
    return np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64).reshape(q**n, n)


def full_run_requested() -> bool:
    return os.environ.get("CODECLASS_FULL", "0") not in ("0", "", "false", "no")


def all_rref(q, n, k):
    """Every k x n reduced row echelon matrix of rank k (one per subspace)."""
    out = []
    for piv in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        base = np.zeros((k, n), dtype=np.int64)
        base[range(k), piv] = 1
        vals = all_vectors(q, len(free))
        Gs = np.repeat(base[None], len(vals), axis=0)
        for j, (r, c) in enumerate(free):
            Gs[:, r, c] = vals[:, j]
        out.append(Gs)
    return np.concatenate(out)


def min_weights(Gs, q):
    """Minimum weights of a stack of k x n generator matrices."""
    k = Gs.shape[1]
    U = all_vectors(q, k)[1:]
    return ((np.einsum("uk,gkn->gun", U, Gs) % q) != 0).sum(axis=2).min(axis=1)


def column_multiset_reps(Gs, q):
    """Collapse a stack of generator matrices that differ only by column
    scaling and permutation (same row space basis): scale each column to
    have leading nonzero 1, sort the columns, and keep unique results."""
    s, k, n = Gs.shape
    vecs = all_vectors(q, k)
    lead = np.ones(len(vecs), dtype=np.int64)
    for i, v in enumerate(vecs):
        nz = v[v != 0]
        if nz.size:
            lead[i] = pow(int(nz[0]), -1, q)
    proj = (vecs * lead[:, None]) % q @ (q ** np.arange(k - 1, -1, -1))
    codes = np.einsum("skn,k->sn", Gs, q ** np.arange(k - 1, -1, -1))
    cols = np.sort(proj[codes], axis=1)
    uniq = np.unique(cols, axis=0)
    return np.moveaxis(vecs[uniq], 2, 1)
