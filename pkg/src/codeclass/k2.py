"""Direct classification of two-dimensional codes.

A [n, 2] code is fixed up to equivalence by how many of its columns are
zero and how many fall on each of the q + 1 points of the projective line.
Basis changes act on the points through PGL(2, q), so classes are orbits of
multiplicity vectors. The nonzero codeword vanishing on point p has weight
(n - zeros) - m_p.
"""
from __future__ import annotations

import itertools

import numpy as np

from .linear_code import LinearCode


def projective_points(q: int) -> list[tuple[int, int]]:
    return [(0, 1)] + [(1, a) for a in range(q)]


def _normalize(v, q):
    for x in v:
        if x % q:
            inv = pow(x, -1, q)
            return tuple((y * inv) % q for y in v)
    raise ValueError("zero vector has no projective point")


def pgl2_point_perms(q: int) -> list[tuple[int, ...]]:
    pts = projective_points(q)
    index = {p: i for i, p in enumerate(pts)}
    perms = set()
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if (a * d - b * c) % q == 0:
            continue
        perms.add(tuple(index[_normalize(((a * x + b * y) % q, (c * x + d * y) % q), q)] for x, y in pts))
    return sorted(perms)


def _compositions(total: int, parts: int, cap: int):
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def multiplicity_orbits(n: int, d: int, q: int = 5) -> list[tuple[int, tuple[int, ...]]]:
    """Orbit representatives (zero_columns, multiplicities) of [n, 2, d]_q codes."""
    perms = pgl2_point_perms(q)
    reps = set()
    for zeros in range(n + 1):
        m = n - zeros
        top = m - d
        if top < 1:
            break
        for comp in _compositions(m, q + 1, top):
            if max(comp) != top or sum(1 for x in comp if x) < 2:
                continue
            key = min(tuple(comp[p[i]] for i in range(q + 1)) for p in perms)
            reps.add((zeros, key))
    return sorted(reps)


def code_from_multiplicities(zeros: int, mult, q: int = 5) -> LinearCode:
    cols = []
    for p, m in zip(projective_points(q), mult):
        cols += [p] * m
    cols += [(0, 0)] * zeros
    return LinearCode(np.array(cols, dtype=np.int64).T, q)


def classify_k2_codes(n: int, d: int, q: int = 5) -> list[LinearCode]:
    """One generator matrix per equivalence class of [n, 2, d]_q codes."""
    return [code_from_multiplicities(z, m, q) for z, m in multiplicity_orbits(n, d, q)]
