"""Monomial equivalence of codes via canonical labeling of their digraphs.

The digraph of a code C has one vertex per codeword and one per pair
(j, y), y != 0; codeword c and (j, c_j) are joined both ways, and within a
coordinate the pairs form the cycle (j, y) -> (j, g*y) for a fixed primitive
root g (g = 2 over F_5). Two codes are monomially equivalent iff their
digraphs are isomorphic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _canon_kernel
from .linear_code import LinearCode, apply_monomial, rref

VERTEX_BUDGET = 4096
CERT_VERSION = 1


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class CodeDigraph:
    q: int
    n: int
    k: int
    multiplier: int
    n_codewords: int
    out_ptr: np.ndarray
    out_idx: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    colors: np.ndarray
    n_type1: int
    n_type2: int

    @property
    def n_vertices(self) -> int:
        return self.colors.shape[0]

    @property
    def n_arcs(self) -> int:
        return self.out_idx.shape[0]

    def coord_vertex(self, j: int, y: int) -> int:
        return self.n_codewords + j * (self.q - 1) + (y - 1)

    def arcs(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n_vertices), np.diff(self.out_ptr))
        return np.stack([src, self.out_idx], axis=1)


@dataclass(frozen=True, order=True)
class CanonicalCert:
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    def short(self, nbytes: int = 8) -> str:
        import hashlib

        return hashlib.sha256(self.data).hexdigest()[: 2 * nbytes]


@dataclass(frozen=True)
class Monomial:
    """c -> c' with c'[perm[j]] = scalars[j] * c[j]."""

    perm: np.ndarray
    scalars: np.ndarray

    def apply(self, G: np.ndarray, q: int) -> np.ndarray:
        return apply_monomial(G, self.perm, self.scalars, q)


@dataclass
class AutGenerators:
    generators: list[Monomial] = field(default_factory=list)
    complete: bool = True

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _csr(src: np.ndarray, dst: np.ndarray, nv: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    ptr = np.zeros(nv + 1, dtype=np.int64)
    np.add.at(ptr, src + 1, 1)
    return np.cumsum(ptr), dst[order].astype(np.int64)


def build_digraph(code: LinearCode, vertex_budget: int = VERTEX_BUDGET) -> CodeDigraph:
    q, n, k = code.q, code.n, code.k
    nc = q**k
    nv = nc + n * (q - 1)
    if nv > vertex_budget:
        raise BudgetError(f"digraph would have {nv} vertices (budget {vertex_budget})")
    g = code.field.primitive_root
    T = code.table
    ci, cj = np.nonzero(T)
    cv = nc + cj * (q - 1) + (T[ci, cj].astype(np.int64) - 1)
    # type-2 cycle inside each coordinate
    jj = np.repeat(np.arange(n), q - 1)
    yy = np.tile(np.arange(1, q), n)
    a2 = nc + jj * (q - 1) + (yy - 1)
    b2 = nc + jj * (q - 1) + ((g * yy) % q - 1)
    src = np.concatenate([ci, cv, a2]).astype(np.int64)
    dst = np.concatenate([cv, ci, b2]).astype(np.int64)
    out_ptr, out_idx = _csr(src, dst, nv)
    in_ptr, in_idx = _csr(dst, src, nv)
    colors = np.zeros(nv, dtype=np.int64)
    colors[nc:] = 1
    return CodeDigraph(
        q=q, n=n, k=k, multiplier=g, n_codewords=nc,
        out_ptr=out_ptr, out_idx=out_idx, in_ptr=in_ptr, in_idx=in_idx,
        colors=colors, n_type1=2 * ci.size, n_type2=a2.size,
    )


def canonical_labeling(graph: CodeDigraph) -> tuple[np.ndarray, np.ndarray]:
    """Canonical ``lab`` (label -> vertex) and automorphisms (rows vertex -> vertex)."""
    lab, auts, naut, _ = _canon_kernel.canonical_labeling(
        graph.out_ptr, graph.out_idx, graph.in_ptr, graph.in_idx, graph.colors
    )
    return lab, auts[:naut]


def _cert_bytes(graph: CodeDigraph, lab: np.ndarray) -> bytes:
    q, nc, nv = graph.q, graph.n_codewords, graph.n_vertices
    pos = np.empty(nv, dtype=np.int64)
    pos[lab] = np.arange(nv)
    coord = lab[nc:]
    nx = coord.size
    # out-arcs of coordinate vertices: codewords plus one successor on the cycle
    starts, ends = graph.out_ptr[coord], graph.out_ptr[coord + 1]
    rows = np.repeat(np.arange(nx), ends - starts)
    nbrs = graph.out_idx[np.concatenate([np.arange(a, b) for a, b in zip(starts, ends)])]
    is_word = nbrs < nc
    bits = np.zeros((nx, nc), dtype=np.uint8)
    bits[rows[is_word], pos[nbrs[is_word]]] = 1
    succ = np.zeros(nx, dtype=np.uint16)
    succ[rows[~is_word]] = pos[nbrs[~is_word]] - nc
    header = f"QC{CERT_VERSION} q={q} n={graph.n} k={graph.k} g={graph.multiplier}\n".encode()
    return header + succ.astype(">u2").tobytes() + np.packbits(bits, axis=1).tobytes()


def _monomials_from_auts(graph: CodeDigraph, auts: np.ndarray) -> list[Monomial]:
    q, nc, n = graph.q, graph.n_codewords, graph.n
    base = nc + np.arange(n) * (q - 1)  # vertex (j, 1)
    gens = []
    for a in auts:
        img = a[base] - nc
        perm = img // (q - 1)
        scal = img % (q - 1) + 1
        if np.array_equal(perm, np.arange(n)) and np.all(scal == 1):
            continue
        gens.append(Monomial(perm.astype(np.int64), scal.astype(np.int64)))
    return gens


def _canonical_code(code: LinearCode, graph: CodeDigraph, lab: np.ndarray) -> LinearCode:
    """Decode the relabeled digraph back into a code, then row-reduce."""
    q, nc, n = graph.q, graph.n_codewords, graph.n
    nv = graph.n_vertices
    pos = np.empty(nv, dtype=np.int64)
    pos[lab] = np.arange(nv)
    cpos = pos[nc:].reshape(n, q - 1)  # canonical position of (j, y)
    first = cpos.min(axis=1)
    coord_rank = np.argsort(np.argsort(first, kind="stable"), kind="stable")
    rep_y = cpos.argmin(axis=1) + 1  # value whose vertex comes first
    inv = np.array([0] + [pow(int(y), -1, q) for y in range(1, q)])
    scal = inv[rep_y]
    G = apply_monomial(code.G, coord_rank, scal, q)
    R, _ = rref(G, q)
    return LinearCode(R, code.field, check=False)


@dataclass
class CanonicalForm:
    cert: CanonicalCert
    code: LinearCode
    automorphisms: AutGenerators


def canonical_form(code: LinearCode, vertex_budget: int = VERTEX_BUDGET) -> CanonicalForm:
    graph = build_digraph(code, vertex_budget)
    lab, auts = canonical_labeling(graph)
    cert = CanonicalCert(_cert_bytes(graph, lab))
    gens = AutGenerators(
        _monomials_from_auts(graph, auts), complete=len(auts) < _canon_kernel.AUT_CAP
    )
    return CanonicalForm(cert, _canonical_code(code, graph, lab), gens)


def canonical_cert(graph: CodeDigraph) -> tuple[CanonicalCert, AutGenerators]:
    lab, auts = canonical_labeling(graph)
    gens = AutGenerators(
        _monomials_from_auts(graph, auts), complete=len(auts) < _canon_kernel.AUT_CAP
    )
    return CanonicalCert(_cert_bytes(graph, lab)), gens


def cert_of(code: LinearCode) -> CanonicalCert:
    return canonical_cert(build_digraph(code))[0]


def equivalent(c1: LinearCode, c2: LinearCode) -> bool:
    if (c1.q, c1.n, c1.k) != (c2.q, c2.n, c2.k):
        return False
    return cert_of(c1) == cert_of(c2)


def dedup(codes: Iterable[LinearCode], canonical: bool = False) -> list[LinearCode]:
    """One code per equivalence class, ordered by certificate bytes.

    The kept representative is the input whose row-reduced matrix is
    smallest, or with ``canonical=True`` the decoded canonical form; either
    way the result does not depend on input order.
    """
    reps: dict[CanonicalCert, tuple[bytes, LinearCode]] = {}
    for c in codes:
        if canonical:
            cf = canonical_form(c)
            reps.setdefault(cf.cert, (b"", cf.code))
            continue
        cert = cert_of(c)
        key = rref(c.G, c.q)[0].tobytes()
        cur = reps.get(cert)
        if cur is None or key < cur[0]:
            reps[cert] = (key, c)
    return [reps[c][1] for c in sorted(reps)]


def automorphism_group_order(code: LinearCode, gens: Sequence[Monomial] | None = None) -> int:
    """Order of the group generated by ``gens`` acting on (coordinate, value) pairs.

    Computed by Schreier-Sims over the permutation action on the n(q-1)
    pairs; used in tests and reports only.
    """
    from sympy.combinatorics import Permutation, PermutationGroup

    q, n = code.q, code.n
    if gens is None:
        gens = canonical_form(code).automorphisms.generators
    perms = []
    for g in gens:
        img = []
        for j in range(n):
            for y in range(1, q):
                img.append(int(g.perm[j]) * (q - 1) + (int(g.scalars[j]) * y) % q - 1)
        perms.append(Permutation(img))
    if not perms:
        return 1
    return int(PermutationGroup(perms).order())
