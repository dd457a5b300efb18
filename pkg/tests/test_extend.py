import numpy as np
import pytest

from codeclass.canon import cert_of
from codeclass.dfs import BudgetProblem, column_classes
from codeclass.extend import (
    ExtensionTask,
    aut_orbit_representatives,
    candidate_vectors,
    enumerate_children,
    extend_matrix,
    naive_children_vectors,
    normalize_b,
    shard_prefixes,
)
from codeclass.gf import GFVec
from codeclass.k2 import code_from_multiplicities
from codeclass.linear_code import CodeError, LinearCode, systematic_code

from conftest import all_rref, column_multiset_reps, min_weights

Q = 5


def parent_with_classes(rng, k1, m):
    """Random systematic parent whose first columns repeat up to scalars."""
    A = rng.integers(0, Q, (k1, m))
    if m >= 3:
        A[:, 1] = (3 * A[:, 0]) % Q
        A[:, 2] = A[:, 0]
    return LinearCode(np.hstack([np.eye(k1, dtype=np.int64), A]), Q)


def as_set(B):
    return {tuple(int(x) for x in b) for b in B}


def parents(rng, count, m_range=(2, 7), k_range=(1, 4)):
    out = []
    while len(out) < count:
        p = parent_with_classes(rng, int(rng.integers(*k_range)), int(rng.integers(*m_range)))
        d = p.min_weight()
        if d >= 1:
            out.append((p, max(1, d - int(rng.integers(0, 3)))))
    return out


def test_extend_matrix_shape_and_rows():
    p = LinearCode(np.array([[1, 0, 2, 3], [0, 1, 4, 1]]), Q)
    c = extend_matrix(p, [1, 2])
    assert (c.n, c.k) == (5, 3)
    assert c.G.tolist() == [[1, 0, 0, 2, 3], [0, 1, 0, 4, 1], [0, 0, 1, 1, 2]]
    assert extend_matrix(p, GFVec(p.field, [0, 0])).min_weight() == 1
    with pytest.raises(CodeError):
        extend_matrix(p, [1, 2, 3])
    with pytest.raises(CodeError):
        extend_matrix(LinearCode(np.array([[2, 1, 0]]), Q), [1, 1])


def test_task_rejects_weak_parent():
    p = LinearCode(np.array([[1, 0, 1], [0, 1, 1]]), Q)
    with pytest.raises(CodeError):
        ExtensionTask(p, 3)


def test_pruned_dfs_equals_naive_no_symmetry(rng):
    """Plain search against testing every b in F_5^(n-k), n-k up to 8."""
    cases = parents(rng, 40)
    cases += parents(rng, 4, m_range=(8, 9), k_range=(1, 3))
    for p, d in cases:
        task = ExtensionTask(p, d, "none")
        assert as_set(candidate_vectors(task)) == as_set(naive_children_vectors(task, chunk=1 << 12))


def test_pruned_dfs_equals_naive_up_to_symmetry(rng):
    for p, d in parents(rng, 40):
        for norm, symmetric in (("scaling", False), ("classes", True)):
            task = ExtensionTask(p, d, norm)
            naive = naive_children_vectors(task)
            prob = BudgetProblem.build(task.redundancy, Q, 0, symmetric=symmetric, constraints=False)
            expect = as_set(prob.normalize(naive)) if len(naive) else set()
            got = candidate_vectors(task)
            assert as_set(got) == expect
            assert len(got) == len(expect)


def test_prefix_shards_partition_the_search(rng):
    for p, d in parents(rng, 20):
        for norm in ("none", "classes"):
            task = ExtensionTask(p, d, norm)
            full = candidate_vectors(task)
            pieces = [candidate_vectors(task, [pre]) for pre in shard_prefixes(task, 2)]
            assert sum(len(x) for x in pieces) == len(full)
            assert set().union(*map(as_set, pieces)) == as_set(full)


def test_children_are_sound(rng):
    for p, d in parents(rng, 20):
        for c in enumerate_children(ExtensionTask(p, d)):
            assert (c.n, c.k) == (p.n + 1, p.k + 1)
            assert c.min_weight() >= d


def test_aut_reduction_keeps_every_class(rng):
    for p, d in parents(rng, 10, m_range=(3, 5)):
        full = {cert_of(c) for c in enumerate_children(ExtensionTask(p, d, "none"))}
        reduced = enumerate_children(ExtensionTask(p, d, "aut"))
        assert {cert_of(c) for c in reduced} == full


def test_aut_representatives_are_a_subset(rng):
    p, d = parents(rng, 1, m_range=(5, 6))[0]
    task = ExtensionTask(p, d, "aut")
    B = candidate_vectors(task)
    reps = aut_orbit_representatives(task, B)
    assert as_set(reps) <= as_set(B)
    assert len(reps) <= len(B)


def _orbit_images(A, b, rng, count=20):
    """Random elements of the scaling / parallel-column orbit of b."""
    ids, scale = column_classes(A, Q)
    out = []
    for _ in range(count):
        lam = int(rng.integers(1, Q))
        img = (lam * np.asarray(b)) % Q
        for c in np.unique(ids):
            cols = np.nonzero(ids == c)[0]
            if len(cols) < 2 or not A[:, cols[0]].any():
                continue
            i, j = rng.choice(cols, 2, replace=False)
            # swapping parallel columns col_j = (s_j/s_i) col_i needs compensating scalars
            r = (int(scale[j]) * pow(int(scale[i]), -1, Q)) % Q
            bi, bj = img[i], img[j]
            img[i] = (bj * pow(r, -1, Q)) % Q
            img[j] = (r * bi) % Q
        out.append(img)
    return out


def test_normalize_b_idempotent_and_orbit_constant(rng):
    for _ in range(30):
        p = parent_with_classes(rng, int(rng.integers(1, 4)), int(rng.integers(3, 8)))
        A = p.G[:, p.k:]
        b = rng.integers(0, Q, A.shape[1])
        nb = normalize_b(p, b)
        assert normalize_b(p, nb) == nb
        for img in _orbit_images(A, b, rng):
            assert normalize_b(p, img) == nb
            assert cert_of(extend_matrix(p, img)) == cert_of(extend_matrix(p, b))


def test_normalize_b_examples():
    p = systematic_code(code_from_multiplicities(0, (3,) * 6))
    m = p.n - p.k
    b = np.zeros(m, dtype=np.int64)
    b[0] = 1
    b[5:] = 2
    nb = normalize_b(p, b)
    assert normalize_b(p, (3 * b) % Q) == nb
    assert int(nb.digits[np.nonzero(nb.digits)[0][0]]) == 1
    A = p.G[:, p.k:]
    rng = np.random.default_rng(3)
    for img in _orbit_images(A, b, rng, 10):
        assert normalize_b(p, img) == nb
        assert cert_of(extend_matrix(p, img)) == cert_of(extend_matrix(p, nb))
    # no parallel columns: only scaling acts, and a leading 1 is already least
    plain = LinearCode(np.array([[1, 0, 1, 0, 1, 1], [0, 1, 0, 1, 1, 2]]), Q)
    for v in ([1, 4, 4, 0], [0, 1, 3, 2], [0, 0, 0, 1]):
        assert normalize_b(plain, v).digits.tolist() == v


def test_children_of_18_2_15_all_have_d_14():
    p = code_from_multiplicities(0, (3,) * 6)
    kids = enumerate_children(ExtensionTask(p, 14))
    assert kids
    assert {c.min_weight() for c in kids} == {14}
    b = np.array([1] * 13 + [0, 0, 0])
    c = extend_matrix(systematic_code(p), b)
    assert (c.n, c.k) == (19, 3) and c.min_weight() <= 15


def _brute_classes(n, k, d):
    Gs = all_rref(Q, n, k)
    reps = column_multiset_reps(Gs, Q)
    reps = reps[min_weights(reps, Q) == d]
    return {cert_of(LinearCode(G, Q)) for G in reps}


def _extension_classes(n, k, d):
    cands = []
    for dp in range(d, n - k + 2):
        Gs = all_rref(Q, n - 1, k - 1)
        reps = column_multiset_reps(Gs, Q)
        cands += [LinearCode(G, Q) for G in reps[min_weights(reps, Q) == dp]]
    found = set()
    for p in cands:
        for c in enumerate_children(ExtensionTask(p, d)):
            if c.min_weight() == d:
                found.add(cert_of(c))
    return found


@pytest.mark.parametrize("n,k,d", [(5, 3, 3), (5, 3, 2), (6, 2, 4), (6, 2, 3)])
def test_small_instance_completeness(n, k, d):
    """Extension from every brute-force parent class finds exactly the brute-force classes."""
    expect = _brute_classes(n, k, d)
    assert expect
    assert _extension_classes(n, k, d) == expect
