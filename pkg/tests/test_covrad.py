import functools

import numpy as np
import pytest

from codeclass.covrad import (
    CoveringQuery,
    ResourceError,
    covering_radius,
    covers_at_least,
    deep_hole,
    distance_to_code,
    parity_check,
    radius_exhaustive,
)
from codeclass.k2 import classify_k2_codes
from codeclass.linear_code import LinearCode, repetition_code, systematic_code

from conftest import all_vectors, random_code

Q = 5


@functools.lru_cache(maxsize=None)
def _space(n):
    E = all_vectors(Q, n)
    return E, (E != 0).sum(axis=1)


def syndrome_sweep_radius(code):
    """Largest coset-leader weight, from every error vector of F_5^n."""
    H = parity_check(code)
    E, w = _space(code.n)
    syn = ((E @ H.T) % Q) @ (Q ** np.arange(H.shape[0]))
    lead = np.full(Q ** H.shape[0], code.n + 1)
    np.minimum.at(lead, syn, w)
    assert lead.max() <= code.n
    return int(lead.max())


def _codes(rng, count):
    out = []
    while len(out) < count:
        n = int(rng.integers(2, 9))
        k = int(rng.integers(max(1, n - 6), n + 1))
        out.append(random_code(rng, n, k))
    return out


def test_dfs_and_sweep_agree_with_syndrome_oracle(rng):
    for c in _codes(rng, 500):
        R = syndrome_sweep_radius(c)
        assert covering_radius(c, method="dfs") == R
        assert covering_radius(c, method="sweep") == R
        assert covers_at_least(CoveringQuery(c, R))
        assert R == c.n or not covers_at_least(CoveringQuery(c, R + 1))
        assert R <= c.n - c.k


def test_symmetric_search_matches_plain(rng):
    for c in _codes(rng, 100):
        for t in range(0, c.n - c.k + 2):
            if t > c.n:
                break
            q = CoveringQuery(c, t)
            assert covers_at_least(q, symmetric=True) == covers_at_least(q, symmetric=False)


def test_monotone_in_threshold(rng):
    for c in _codes(rng, 50):
        verdicts = [covers_at_least(CoveringQuery(c, t)) for t in range(c.n + 1)]
        assert verdicts == sorted(verdicts, reverse=True)


def test_deep_hole_is_a_witness(rng):
    for c in _codes(rng, 60):
        R = covering_radius(c)
        x = deep_hole(CoveringQuery(c, R))
        assert distance_to_code(systematic_code(c), x) >= R


def test_shortening_bound(rng):
    """Shortening a code with d >= 2 at a non-zero coordinate leaves R >= d - 1."""
    seen = 0
    while seen < 100:
        n = int(rng.integers(4, 10))
        k = int(rng.integers(2, min(n, 5)))
        c = random_code(rng, n, k)
        d = c.min_weight()
        if d < 2:
            continue
        support = np.nonzero(c.G.any(axis=0))[0]
        s = c.shorten(int(rng.choice(support)))
        assert covers_at_least(CoveringQuery(s, d - 1))
        seen += 1


def test_small_examples():
    rep = repetition_code(2)
    assert covers_at_least(CoveringQuery(rep, 1))
    assert not covers_at_least(CoveringQuery(rep, 2))
    assert covering_radius(rep) == 1
    full = LinearCode(np.eye(4, dtype=np.int64), Q)
    assert covering_radius(full) == 0
    assert covers_at_least(CoveringQuery(full, 0))
    assert not covers_at_least(CoveringQuery(full, 1))
    assert radius_exhaustive(repetition_code(3)) == covering_radius(repetition_code(3)) == 2


def test_threshold_validated():
    with pytest.raises(ValueError):
        CoveringQuery(repetition_code(3), 4)


def test_resource_error_when_both_paths_exceed_budget():
    c = LinearCode(np.hstack([np.eye(11, dtype=np.int64), np.ones((11, 16), dtype=np.int64)]), Q)
    with pytest.raises(ResourceError, match="sweep budget"):
        covering_radius(c, sweep_budget=10)
    with pytest.raises(ResourceError):
        covering_radius(c, method="sweep", sweep_budget=10)


def test_length_18_codes_reach_13():
    for d in (14, 15):
        for c in classify_k2_codes(18, d):
            assert covers_at_least(CoveringQuery(c, 13))
