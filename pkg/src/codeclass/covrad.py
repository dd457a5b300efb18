"""Covering radius of systematic codes.

Every vector is a translate (0, z) + codeword, so R(C) >= t iff some z in
F_q^(n-k) keeps wt(u) + wt(uA - z) >= t for every message u. That is the
same zero-budget search the extension step uses.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._accel import USE_NUMBA
from .dfs import BudgetProblem
from .linear_code import LinearCode, is_systematic, systematic_code

SWEEP_BUDGET = 2**31


class ResourceError(RuntimeError):
    pass


@dataclass
class CoveringQuery:
    code: LinearCode
    t: int

    def __post_init__(self):
        if not is_systematic(self.code.G):
            self.code = systematic_code(self.code)
        if not 0 <= self.t <= self.code.n:
            raise ValueError(f"threshold {self.t} outside 0..{self.code.n}")

    def problem(self, symmetric: bool = True) -> BudgetProblem:
        c = self.code
        return BudgetProblem.build(c.G[:, c.k :], c.q, self.t, symmetric=symmetric)


def deep_hole(query: CoveringQuery, symmetric: bool = True):
    """A vector x = (0, z) at distance >= t from the code, or None."""
    if query.t == 0:
        return np.zeros(query.code.n, dtype=np.int64)
    b = query.problem(symmetric).witness()
    if b is None:
        return None
    c = query.code
    return np.concatenate([np.zeros(c.k, dtype=np.int64), (-b) % c.q])


def covers_at_least(query: CoveringQuery, symmetric: bool = True) -> bool:
    """True iff R(code) >= t."""
    return deep_hole(query, symmetric) is not None


def distance_to_code(code: LinearCode, x) -> int:
    x = np.asarray(x, dtype=np.int64) % code.q
    return int(((code.table.astype(np.int64) - x[None, :]) % code.q != 0).sum(axis=1).min())


def _radius_dfs(code: LinearCode) -> int:
    t = 1
    while t <= code.n - code.k:
        x = deep_hole(CoveringQuery(code, t))
        if x is None:
            return t - 1
        t = distance_to_code(code, x) + 1
    return code.n - code.k


def parity_check(code: LinearCode) -> np.ndarray:
    c = code if is_systematic(code.G) else systematic_code(code)
    A = c.G[:, c.k :].astype(np.int64)
    r = c.n - c.k
    return np.hstack([(-A.T) % c.q, np.eye(r, dtype=np.int64)]).astype(np.int64)


def _radius_sweep(code: LinearCode) -> int:
    r = code.n - code.k
    if r == 0:
        return 0
    H = parity_check(code)
    if USE_NUMBA:
        R = _kernels.coset_leader_sweep(H, code.q)
    else:
        R = _kernels.coset_leader_sweep.py_func(H, code.q) if hasattr(
            _kernels.coset_leader_sweep, "py_func") else _kernels.coset_leader_sweep(H, code.q)
    assert R >= 0
    return int(R)


def covering_radius(code: LinearCode, method: str = "auto", sweep_budget: int = SWEEP_BUDGET) -> int:
    """Exact covering radius by DFS threshold decisions or a coset-leader sweep."""
    if not is_systematic(code.G):
        code = systematic_code(code)
    r = code.n - code.k
    can_sweep = code.q**r <= sweep_budget
    can_dfs = code.q**code.k <= 10**7
    if method == "sweep" or (method == "auto" and can_sweep and not can_dfs):
        if not can_sweep:
            raise ResourceError(f"coset sweep needs {code.q}^{r} entries > budget {sweep_budget}")
        R = _radius_sweep(code)
    elif method in ("dfs", "auto"):
        if not can_dfs:
            if not can_sweep:
                raise ResourceError(
                    f"q^k = {code.q}^{code.k} over the enumeration budget and "
                    f"q^(n-k) = {code.q}^{r} over the sweep budget {sweep_budget}"
                )
            R = _radius_sweep(code)
        else:
            R = _radius_dfs(code)
    else:
        raise ValueError(f"unknown method {method!r}")
    assert 0 <= R <= r
    return R


def radius_exhaustive(code: LinearCode) -> int:
    """max over all z of d((0, z), C); brute-force oracle for small n - k."""
    c = code if is_systematic(code.G) else systematic_code(code)
    q, k, n = c.q, c.k, c.n
    T = c.table.astype(np.int64)
    best = 0
    for z in itertools.product(range(q), repeat=n - k):
        x = np.concatenate([np.zeros(k, dtype=np.int64), z])
        best = max(best, int(((T - x[None, :]) % q != 0).sum(axis=1).min()))
    return best
