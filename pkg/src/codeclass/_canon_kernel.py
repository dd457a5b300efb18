"""Canonical labeling of vertex-colored digraphs.

Individualization-refinement search:

* refinement to the coarsest equitable partition, counting in- and
  out-neighbours separately (Hopcroft queue, "all but the largest" rule);
* target cell = first smallest non-singleton cell;
* canonical leaf = least (refinement-trace sequence, relabeled graph);
* automorphisms found at leaves prune siblings in the same orbit of the
  pointwise stabilizer of the current path, and trigger a backjump to the
  level where the leaf's path leaves the first / best path.

Every decision depends only on cell positions and neighbour counts, never
on vertex numbers, which is what makes the result a canonical form.
"""
import numpy as np

from ._accel import njit

_HMOD = 2147483647
_HMUL = 1000003
AUT_CAP = 256


@njit
def _mix(h, x):
    return (h * _HMUL + x + 1) % _HMOD


@njit
def _refine(lab, pos, cstart, cellend, queue, inq, qhead, qlen,
            out_ptr, out_idx, in_ptr, in_idx,
            cnt_o, cnt_i, touched, tcells, cmark, keys, order, tmpv, ncells, h):
    nv = lab.shape[0]
    big = nv + 1
    while qlen > 0:
        s = queue[qhead]
        qhead = (qhead + 1) % nv
        qlen -= 1
        inq[s] = 0
        e = cellend[s]
        nt = 0
        for i in range(s, e):
            w = lab[i]
            for t in range(in_ptr[w], in_ptr[w + 1]):
                u = in_idx[t]
                if cnt_o[u] == 0 and cnt_i[u] == 0:
                    touched[nt] = u
                    nt += 1
                cnt_o[u] += 1
            for t in range(out_ptr[w], out_ptr[w + 1]):
                u = out_idx[t]
                if cnt_o[u] == 0 and cnt_i[u] == 0:
                    touched[nt] = u
                    nt += 1
                cnt_i[u] += 1
        ntc = 0
        for a in range(nt):
            c = cstart[pos[touched[a]]]
            if cmark[c] == 0:
                cmark[c] = 1
                tcells[ntc] = c
                ntc += 1
        tc = np.sort(tcells[:ntc])
        h = _mix(h, s)
        for a in range(ntc):
            c = tc[a]
            cmark[c] = 0
            ce = cellend[c]
            size = ce - c
            if size == 1:
                continue
            allsame = True
            k0 = cnt_o[lab[c]] * big + cnt_i[lab[c]]
            for i in range(c, ce):
                v = lab[i]
                kk = cnt_o[v] * big + cnt_i[v]
                keys[i - c] = kk
                tmpv[i - c] = v
                if kk != k0:
                    allsame = False
            if allsame:
                continue
            order[:size] = np.argsort(keys[:size], kind="mergesort")
            nfrag = 0
            prevk = -1
            fstart = c
            largest = -1
            largest_size = -1
            h = _mix(h, c)
            for i in range(size):
                v = tmpv[order[i]]
                kk = keys[order[i]]
                p = c + i
                lab[p] = v
                pos[v] = p
                if i == 0 or kk != prevk:
                    if i > 0:
                        cellend[fstart] = p
                        fs = p - fstart
                        h = _mix(h, fs)
                        h = _mix(h, prevk)
                        if fs > largest_size:
                            largest_size = fs
                            largest = fstart
                    fstart = p
                    nfrag += 1
                    prevk = kk
                cstart[p] = fstart
            cellend[fstart] = ce
            fs = ce - fstart
            h = _mix(h, fs)
            h = _mix(h, prevk)
            if fs > largest_size:
                largest_size = fs
                largest = fstart
            ncells += nfrag - 1
            h = _mix(h, nfrag)
            # queue the new fragments
            f = c
            was_queued = inq[c] == 1
            while f < ce:
                if was_queued:
                    if f != c and inq[f] == 0:
                        queue[(qhead + qlen) % nv] = f
                        qlen += 1
                        inq[f] = 1
                else:
                    if f != largest and inq[f] == 0:
                        queue[(qhead + qlen) % nv] = f
                        qlen += 1
                        inq[f] = 1
                f = cellend[f]
        for a in range(nt):
            u = touched[a]
            cnt_o[u] = 0
            cnt_i[u] = 0
    h = _mix(h, ncells)
    return ncells, h


@njit
def _leaf_code(lab, pos, out_ptr, out_idx, buf, tmp):
    nv = lab.shape[0]
    k = 0
    for i in range(nv):
        v = lab[i]
        d = out_ptr[v + 1] - out_ptr[v]
        buf[k] = d
        k += 1
        for t in range(d):
            tmp[t] = pos[out_idx[out_ptr[v] + t]]
        srt = np.sort(tmp[:d])
        for t in range(d):
            buf[k] = srt[t]
            k += 1
    return k


@njit
def _cmp(a, b, n):
    for i in range(n):
        if a[i] < b[i]:
            return -1
        if a[i] > b[i]:
            return 1
    return 0


@njit
def _find(par, x):
    r = x
    while par[r] != r:
        r = par[r]
    while par[x] != r:
        nx = par[x]
        par[x] = r
        x = nx
    return r


@njit
def _stabilizer_orbits(auts, naut, pathv, depth, par):
    nv = par.shape[0]
    for v in range(nv):
        par[v] = v
    for a in range(naut):
        fixes = True
        for l in range(depth):
            if auts[a, pathv[l]] != pathv[l]:
                fixes = False
                break
        if not fixes:
            continue
        for v in range(nv):
            x = _find(par, v)
            y = _find(par, auts[a, v])
            if x != y:
                if x < y:
                    par[y] = x
                else:
                    par[x] = y


@njit
def canonical_labeling(out_ptr, out_idx, in_ptr, in_idx, colors):
    """Return (canonical lab, automorphism array, n_auts, nodes).

    ``lab[i]`` is the vertex that receives canonical label i. Vertices are
    first grouped by ascending color. ``auts[a]`` maps vertex -> vertex.
    """
    nv = colors.shape[0]
    # ---- initial partition by color
    lab = np.argsort(colors, kind="mergesort").astype(np.int64)
    pos = np.zeros(nv, dtype=np.int64)
    for i in range(nv):
        pos[lab[i]] = i
    cstart = np.zeros(nv, dtype=np.int64)
    cellend = np.zeros(nv, dtype=np.int64)
    queue = np.zeros(max(nv, 1), dtype=np.int64)
    inq = np.zeros(nv, dtype=np.int64)
    qhead = 0
    qlen = 0
    ncells = 0
    h0 = 0
    start = 0
    for i in range(1, nv + 1):
        if i == nv or colors[lab[i]] != colors[lab[start]]:
            cellend[start] = i
            for p in range(start, i):
                cstart[p] = start
            queue[qlen] = start
            inq[start] = 1
            qlen += 1
            ncells += 1
            h0 = _mix(h0, i - start)
            h0 = _mix(h0, colors[lab[start]])
            start = i

    cnt_o = np.zeros(nv, dtype=np.int64)
    cnt_i = np.zeros(nv, dtype=np.int64)
    touched = np.zeros(nv, dtype=np.int64)
    tcells = np.zeros(nv, dtype=np.int64)
    cmark = np.zeros(nv, dtype=np.int64)
    keys = np.zeros(nv, dtype=np.int64)
    order = np.zeros(nv, dtype=np.int64)
    tmpv = np.zeros(nv, dtype=np.int64)

    ncells, h = _refine(lab, pos, cstart, cellend, queue, inq, qhead, qlen,
                        out_ptr, out_idx, in_ptr, in_idx,
                        cnt_o, cnt_i, touched, tcells, cmark, keys, order, tmpv, ncells, h0)

    # ---- per-level storage (grown on demand)
    cap = 16
    s_lab = np.zeros((cap, nv), dtype=np.int64)
    s_cst = np.zeros((cap, nv), dtype=np.int64)
    s_cend = np.zeros((cap, nv), dtype=np.int64)
    s_ncells = np.zeros(cap, dtype=np.int64)
    trace = np.zeros(cap, dtype=np.int64)
    pathv = np.zeros(cap, dtype=np.int64)
    tc_s = np.zeros(cap, dtype=np.int64)
    tc_e = np.zeros(cap, dtype=np.int64)
    ci = np.zeros(cap, dtype=np.int64)
    eqf = np.zeros(cap, dtype=np.int64)
    cmpb = np.zeros(cap, dtype=np.int64)
    nexpl = np.zeros(cap, dtype=np.int64)
    expl = np.zeros((cap, nv), dtype=np.int64)
    orb = np.zeros((cap, nv), dtype=np.int64)
    orb_n = np.full(cap, -1, dtype=np.int64)

    fpath = np.zeros(cap, dtype=np.int64)
    ftrace = np.zeros(cap, dtype=np.int64)
    bpath = np.zeros(cap, dtype=np.int64)
    btrace = np.zeros(cap, dtype=np.int64)
    fdepth = -1
    bdepth = -1

    narcs = out_idx.shape[0]
    codelen = nv + narcs
    firstcode = np.zeros(codelen, dtype=np.int64)
    bestcode = np.zeros(codelen, dtype=np.int64)
    curcode = np.zeros(codelen, dtype=np.int64)
    tmpn = np.zeros(max(nv, 1), dtype=np.int64)
    firstlab = np.zeros(nv, dtype=np.int64)
    bestlab = np.zeros(nv, dtype=np.int64)

    auts = np.zeros((AUT_CAP, nv), dtype=np.int64)
    naut = 0
    have_leaf = False
    nodes = 1

    L = 0
    s_lab[0] = lab
    s_cst[0] = cstart
    s_cend[0] = cellend
    s_ncells[0] = ncells
    trace[0] = h
    eqf[0] = 1
    cmpb[0] = 0

    entering = True
    while L >= 0:
        if entering:
            entering = False
            # ---- comparison state of this node
            if have_leaf:
                if L == 0:
                    eqf[0] = 1
                    cmpb[0] = 0
                else:
                    eqf[L] = 1 if (eqf[L - 1] == 1 and L <= fdepth and trace[L] == ftrace[L]) else 0
                    if cmpb[L - 1] != 0:
                        cmpb[L] = cmpb[L - 1]
                    elif L > bdepth:
                        cmpb[L] = 1
                    elif trace[L] < btrace[L]:
                        cmpb[L] = -1
                    elif trace[L] > btrace[L]:
                        cmpb[L] = 1
                    else:
                        cmpb[L] = 0
                if eqf[L] == 0 and cmpb[L] > 0:
                    L -= 1
                    continue
            if ncells == nv:
                # ---- leaf
                _leaf_code(lab, pos, out_ptr, out_idx, curcode, tmpn)
                jump = L - 1
                if not have_leaf:
                    have_leaf = True
                    fdepth = L
                    bdepth = L
                    for l in range(L):
                        fpath[l] = pathv[l]
                        bpath[l] = pathv[l]
                    for l in range(L + 1):
                        ftrace[l] = trace[l]
                        btrace[l] = trace[l]
                        eqf[l] = 1
                        cmpb[l] = 0
                    firstlab[:] = lab
                    bestlab[:] = lab
                    firstcode[:] = curcode
                    bestcode[:] = curcode
                else:
                    found = False
                    if eqf[L] == 1 and L == fdepth and _cmp(curcode, firstcode, codelen) == 0:
                        if naut < AUT_CAP:
                            for i in range(nv):
                                auts[naut, firstlab[i]] = lab[i]
                            naut += 1
                        r = 0
                        while r < L and pathv[r] == fpath[r]:
                            r += 1
                        jump = r
                        found = True
                    if not found and cmpb[L] == 0 and L == bdepth:
                        c = _cmp(curcode, bestcode, codelen)
                        if c == 0:
                            if naut < AUT_CAP:
                                for i in range(nv):
                                    auts[naut, bestlab[i]] = lab[i]
                                naut += 1
                            r = 0
                            while r < L and pathv[r] == bpath[r]:
                                r += 1
                            jump = r
                            found = True
                        elif c < 0:
                            cmpb[L] = -1
                    if not found and cmpb[L] < 0:
                        bdepth = L
                        for l in range(L):
                            bpath[l] = pathv[l]
                        for l in range(L + 1):
                            btrace[l] = trace[l]
                            cmpb[l] = 0
                        bestlab[:] = lab
                        bestcode[:] = curcode
                L = jump
                continue
            # ---- choose target cell: first smallest non-singleton
            best_s = -1
            best_sz = nv + 1
            i = 0
            while i < nv:
                e = cellend[i]
                sz = e - i
                if 1 < sz < best_sz:
                    best_sz = sz
                    best_s = i
                i = e
            tc_s[L] = best_s
            tc_e[L] = best_s + best_sz
            ci[L] = best_s
            nexpl[L] = 0
            orb_n[L] = -1

        # ---- advance to the next child of node L
        if orb_n[L] != naut:
            _stabilizer_orbits(auts, naut, pathv, L, orb[L])
            orb_n[L] = naut
        w = -1
        while ci[L] < tc_e[L]:
            cand = s_lab[L, ci[L]]
            ci[L] += 1
            rc = _find(orb[L], cand)
            dup = False
            for a in range(nexpl[L]):
                if _find(orb[L], expl[L, a]) == rc:
                    dup = True
                    break
            if not dup:
                w = cand
                break
        if w < 0:
            L -= 1
            continue
        expl[L, nexpl[L]] = w
        nexpl[L] += 1
        pathv[L] = w
        # restore partition of node L, individualize w, refine
        lab[:] = s_lab[L]
        cstart[:] = s_cst[L]
        cellend[:] = s_cend[L]
        ncells = s_ncells[L]
        for i in range(nv):
            pos[lab[i]] = i
        p = pos[w]
        s = cstart[p]
        e = cellend[s]
        other = lab[s]
        lab[s] = w
        pos[w] = s
        lab[p] = other
        pos[other] = p
        cellend[s] = s + 1
        cellend[s + 1] = e
        for i in range(s + 1, e):
            cstart[i] = s + 1
        ncells += 1
        queue[0] = s
        inq[s] = 1
        ncells, h = _refine(lab, pos, cstart, cellend, queue, inq, 0, 1,
                            out_ptr, out_idx, in_ptr, in_idx,
                            cnt_o, cnt_i, touched, tcells, cmark, keys, order, tmpv,
                            ncells, _mix(trace[L], s))
        nodes += 1
        L += 1
        if L >= cap:
            ncap = cap * 2
            s_lab = _grow2(s_lab, ncap)
            s_cst = _grow2(s_cst, ncap)
            s_cend = _grow2(s_cend, ncap)
            expl = _grow2(expl, ncap)
            orb = _grow2(orb, ncap)
            s_ncells = _grow1(s_ncells, ncap)
            trace = _grow1(trace, ncap)
            pathv = _grow1(pathv, ncap)
            tc_s = _grow1(tc_s, ncap)
            tc_e = _grow1(tc_e, ncap)
            ci = _grow1(ci, ncap)
            eqf = _grow1(eqf, ncap)
            cmpb = _grow1(cmpb, ncap)
            nexpl = _grow1(nexpl, ncap)
            orb_n = _grow1(orb_n, ncap)
            fpath = _grow1(fpath, ncap)
            ftrace = _grow1(ftrace, ncap)
            bpath = _grow1(bpath, ncap)
            btrace = _grow1(btrace, ncap)
            cap = ncap
        s_lab[L] = lab
        s_cst[L] = cstart
        s_cend[L] = cellend
        s_ncells[L] = ncells
        trace[L] = h
        entering = True

    return bestlab, auts[:naut].copy(), naut, nodes


@njit
def _grow2(a, ncap):
    out = np.zeros((ncap, a.shape[1]), dtype=a.dtype)
    out[: a.shape[0]] = a
    return out


@njit
def _grow1(a, ncap):
    out = np.zeros(ncap, dtype=a.dtype)
    out[: a.shape[0]] = a
    return out
