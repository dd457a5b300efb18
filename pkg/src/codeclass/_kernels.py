"""Hot loops: codeword tables and the zero-budget DFS.

Every kernel here is written in the numba subset so that it also runs,
slowly, as plain Python when ``CODECLASS_NUMBA=0``. The ``*_numpy``
functions are independent vectorised implementations of the same contracts.
"""
import numpy as np

from ._accel import njit, py_func

MODE_COUNT = 0
MODE_COLLECT = 1
MODE_FIRST = 2


# ---------------------------------------------------------------- codewords


@njit
def gray_messages(k, q):
    """Messages of the modular q-ary Gray code, one digit changes per step."""
    total = q**k
    out = np.zeros((total, k), dtype=np.int8)
    digits = np.zeros(k, dtype=np.int64)
    for i in range(total):
        x = i
        for r in range(k - 1, -1, -1):
            digits[r] = x % q
            x //= q
        prev = 0
        for r in range(k):
            out[i, r] = (digits[r] - prev) % q
            prev = digits[r]
    return out


@njit
def codeword_table(G, q):
    """All q**k codewords, Gray order; each step adds one generator row."""
    k, n = G.shape
    total = q**k
    table = np.zeros((total, n), dtype=np.int8)
    cur = np.zeros(n, dtype=np.int64)
    for i in range(1, total):
        # the digit that changes between gray(i-1) and gray(i) is the
        # lowest-order non-zero base-q digit of i, counted from the right
        x = i
        r = k - 1
        while x % q == 0:
            x //= q
            r -= 1
        for j in range(n):
            cur[j] = (cur[j] + G[r, j]) % q
            table[i, j] = cur[j]
    return table


def codeword_table_numpy(G, q):
    k = G.shape[0]
    msgs = py_func(gray_messages)(k, q)
    return ((msgs.astype(np.int64) @ G.astype(np.int64)) % q).astype(np.int8)


@njit
def weight_distribution(table):
    total, n = table.shape
    counts = np.zeros(n + 1, dtype=np.int64)
    for i in range(total):
        w = 0
        for j in range(n):
            if table[i, j] != 0:
                w += 1
        counts[w] += 1
    return counts


def weight_distribution_numpy(table):
    n = table.shape[1]
    return np.bincount((table != 0).sum(axis=1), minlength=n + 1).astype(np.int64)


# ---------------------------------------------------------------- budget DFS
#
# Search b in F_q^m (positions in DFS order; the caller maps a value beta
# at position p back to b[order[p]] = scale[p] * beta) such that for every constraint row u the
# vector uA + b has at most budget[u] zero coordinates.  Bit u of
# hits[p, beta] is set when position p with value beta zeroes row u.
# same_class[p] = 1 forces beta[p] >= beta[p-1].
#
# The remaining slack budget[u] - zeros(u) of all rows is kept bit-sliced:
# plane i, word w holds bit i of the slack of rows 64w..64w+63.  A value is
# legal iff its hit mask misses every row with zero slack; taking it
# subtracts one from the slack of the rows it hits.


@njit
def _class_starts(same_class):
    m = same_class.shape[0]
    start = np.zeros(m, dtype=np.int64)
    for p in range(1, m):
        start[p] = start[p - 1] if same_class[p] != 0 else p
    return start


@njit
def _scaled_class_cmp(val, s, e, lam, q, tmp):
    """Compare sorted(lam * val[s:e]) with val[s:e]: -1, 0 or 1."""
    n = e - s
    for a in range(n):
        x = (lam * val[s + a]) % q
        c = a - 1
        while c >= 0 and tmp[c] > x:
            tmp[c + 1] = tmp[c]
            c -= 1
        tmp[c + 1] = x
    for a in range(n):
        if tmp[a] < val[s + a]:
            return -1
        if tmp[a] > val[s + a]:
            return 1
    return 0


def pack_budget_masks(hits, budget):
    """Bit masks (m, q, W) of ``hits`` and slack planes (P, W) of ``budget``."""
    m, q, nu = hits.shape
    W = max(1, (nu + 63) // 64)
    pad = np.zeros((m, q, W * 64), dtype=bool)
    pad[:, :, :nu] = hits
    H = np.packbits(pad.reshape(m, q, W, 64)[..., ::-1], axis=-1, bitorder="big")
    H = H.view(">u8").astype(np.uint64).reshape(m, q, W)
    P = max(1, int(budget.max()).bit_length()) if nu else 1
    slack = np.ones(W * 64, dtype=np.int64)  # padding rows never run dry
    slack[:nu] = budget
    planes = ((slack[None, :] >> np.arange(P)[:, None]) & 1).astype(bool)
    S = np.packbits(planes.reshape(P, W, 64)[..., ::-1], axis=-1, bitorder="big")
    S = S.view(">u8").astype(np.uint64).reshape(P, W)
    return H, S


@njit
def budget_dfs(H, S0, q, same_class, prefix, mode, scale_norm):
    """Depth-first enumeration of admissible beta vectors.

    Returns (leaves, n_leaves, nodes). ``leaves`` holds beta rows in DFS
    order and is empty unless ``mode == MODE_COLLECT`` (or ``MODE_FIRST``,
    which stops after one leaf). ``nodes`` counts tested (position, value)
    pairs. With ``scale_norm`` only the scaling representative is kept:
    beta must not exceed, in DFS order, the class-sorted lam * beta for any
    lam; the test runs as soon as a class is complete.
    """
    m = H.shape[0]
    W = H.shape[2]
    P = S0.shape[0]
    st = np.zeros((m + 1, P, W), dtype=np.uint64)
    st[0] = S0
    Z = np.zeros(W, dtype=np.uint64)
    val = np.full(m, -1, dtype=np.int64)
    cap = 1024 if mode != MODE_COUNT else 1
    leaves = np.zeros((cap, m), dtype=np.int8)
    n_leaves = 0
    nodes = 0
    tmp = np.zeros(m, dtype=np.int64)
    start = _class_starts(same_class)
    # eq[p, lam]: sorted(lam * beta) agrees with beta on all classes before p
    eq = np.zeros((m + 1, q), dtype=np.bool_)
    eq[0, :] = True
    npre = prefix.shape[0]

    depth = 0
    while depth >= 0:
        v = val[depth]
        if v >= 0:
            if depth < npre:
                val[depth] = -1
                depth -= 1
                continue
            v += 1
            lo = q
        elif depth < npre:
            v = prefix[depth]
            lo = v + 1
        elif same_class[depth] != 0 and depth > 0:
            v = val[depth - 1]
            lo = q
        else:
            v = 0
            lo = q
        if depth < npre and same_class[depth] != 0 and depth > 0 and v < val[depth - 1]:
            v = q
        for w in range(W):
            o = st[depth, 0, w]
            for i in range(1, P):
                o |= st[depth, i, w]
            Z[w] = ~o
        while v < lo and v < q:
            nodes += 1
            bad = False
            for w in range(W):
                if H[depth, v, w] & Z[w]:
                    bad = True
                    break
            if not bad:
                break
            v += 1
        if v >= q or v >= lo:
            val[depth] = -1
            depth -= 1
            continue
        val[depth] = v
        if scale_norm and (depth == m - 1 or same_class[depth + 1] == 0):
            s = start[depth]
            smaller = False
            for lam in range(2, q):
                eq[depth + 1, lam] = False
                if eq[s, lam]:
                    c = _scaled_class_cmp(val, s, depth + 1, lam, q, tmp)
                    if c < 0:
                        smaller = True
                        break
                    eq[depth + 1, lam] = c == 0
            if smaller:
                continue
        if depth == m - 1:
            if mode != MODE_COUNT:
                if n_leaves == cap:
                    cap *= 2
                    grown = np.zeros((cap, m), dtype=np.int8)
                    grown[:n_leaves] = leaves[:n_leaves]
                    leaves = grown
                for p in range(m):
                    leaves[n_leaves, p] = val[p]
            n_leaves += 1
            if mode == MODE_FIRST:
                return leaves[:n_leaves], n_leaves, nodes
            continue
        for w in range(W):
            br = H[depth, v, w]
            for i in range(P):
                s = st[depth, i, w]
                st[depth + 1, i, w] = s ^ br
                br &= ~s
        depth += 1
    return leaves[:n_leaves], n_leaves, nodes


def scale_representatives(beta, same_class, q):
    """Mask of rows beta that are DFS-order lex-least over class-sorted scalings."""
    beta = np.asarray(beta, dtype=np.int64)
    m = beta.shape[1]
    keep = np.ones(len(beta), dtype=bool)
    bounds = [p for p in range(1, m) if not same_class[p]] + [m]
    segs = list(zip([0] + bounds[:-1], bounds))
    for lam in range(2, q):
        x = (lam * beta) % q
        for s, e in segs:
            x[:, s:e] = np.sort(x[:, s:e], axis=1)
        diff = x != beta
        first = diff.argmax(axis=1)
        rows = np.arange(len(beta))
        keep &= ~(diff.any(axis=1) & (x[rows, first] < beta[rows, first]))
    return keep


def budget_dfs_numpy(hits, budget, q, same_class, prefix, mode, scale_norm):
    """Breadth-first frontier version of :func:`budget_dfs` on plain counters.

    Memory grows with the widest level of the tree, so this path is meant
    for small instances and cross-checks. Its node count is the number of
    extended frontier rows, not comparable with the compiled kernel.
    """
    m = hits.shape[0]
    nu = budget.shape[0]
    Z = hits.astype(np.int32)
    vals = np.zeros((1, 0), dtype=np.int8)
    cnts = np.zeros((1, nu), dtype=np.int32)
    nodes = 0
    for p in range(m):
        choices = [int(prefix[p])] if p < prefix.shape[0] else list(range(q))
        new_vals, new_cnts = [], []
        for v in choices:
            c = cnts + Z[p, v][None, :]
            keep = (c <= budget[None, :]).all(axis=1)
            if same_class[p] and p > 0:
                keep &= vals[:, p - 1] <= v
            nodes += int(len(vals))
            if keep.any():
                col = np.full((int(keep.sum()), 1), v, dtype=np.int8)
                new_vals.append(np.hstack([vals[keep], col]))
                new_cnts.append(c[keep])
        if not new_vals:
            return np.zeros((0, m), dtype=np.int8), 0, nodes
        vals = np.vstack(new_vals)
        cnts = np.vstack(new_cnts)
        order_idx = np.lexsort(vals.T[::-1])
        vals, cnts = vals[order_idx], cnts[order_idx]
    if scale_norm:
        vals = vals[scale_representatives(vals, same_class, q)]
    n = len(vals)
    if mode == MODE_COUNT:
        return np.zeros((0, m), dtype=np.int8), n, nodes
    if mode == MODE_FIRST:
        vals = vals[:1]
        n = len(vals)
    return vals, n, nodes


# ------------------------------------------------------------ coset leaders


@njit
def coset_leader_sweep(H, q):
    """Breadth-first coset-leader weights over all q**r syndromes.

    Returns the largest coset-leader weight (the covering radius) or -1 when
    the columns of H do not span F_q^r.
    """
    r, n = H.shape
    total = q**r
    dist = np.full(total, -1, dtype=np.int16)
    # syndrome deltas of every scaled column, encoded base q
    ngen = n * (q - 1)
    gen = np.zeros((ngen, r), dtype=np.int64)
    g = 0
    for j in range(n):
        for lam in range(1, q):
            for i in range(r):
                gen[g, i] = (lam * H[i, j]) % q
            g += 1
    pw = np.ones(r, dtype=np.int64)
    for i in range(r - 2, -1, -1):
        pw[i] = pw[i + 1] * q
    frontier = np.zeros(total, dtype=np.int64)
    nxt = np.zeros(total, dtype=np.int64)
    dist[0] = 0
    frontier[0] = 0
    nf = 1
    level = 0
    seen = 1
    digits = np.zeros(r, dtype=np.int64)
    while nf > 0:
        nn = 0
        for a in range(nf):
            s = frontier[a]
            x = s
            for i in range(r - 1, -1, -1):
                digits[i] = x % q
                x //= q
            for g in range(ngen):
                t = 0
                for i in range(r):
                    t += ((digits[i] + gen[g, i]) % q) * pw[i]
                if dist[t] < 0:
                    dist[t] = level + 1
                    nxt[nn] = t
                    nn += 1
        seen += nn
        if nn == 0:
            break
        level += 1
        frontier, nxt = nxt, frontier
        nf = nn
    if seen < total:
        return -1
    return level
