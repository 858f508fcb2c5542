"""Numba JIT implementations of the hot loops.

Same call surface as `_kernels_np`.  Nodes are int64 bitsets, so these
kernels only accept geometries whose (k-1)-sequence count fits the
declared width limits; the sweep layer falls back to the generic module
beyond them.  All functions release the GIL so rule blocks can run on a
thread pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# int64 node bitsets; the strict scan additionally keeps a visited bitmap
# over all 2**width possible nodes, so it is capped harder.
STRICT_WIDTH_LIMIT = 16
REVFUN_WIDTH_LIMIT = 63

REV_OK = 0
REV_BITS_OVERFLOW = 1
REV_BUDGET = 2

_JIT = {"cache": True, "nogil": True}


@njit(inline="always", **_JIT)
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


@njit(inline="always", **_JIT)
def _ipow(base, exp):
    out = 1
    for _ in range(exp):
        out *= base
    return out


@njit(**_JIT)
def oracle_is_reversible(table, p, r_l, r_r, n):
    k = r_l + r_r + 1
    total = _ipow(p, n)
    seen = np.zeros((total + 63) // 64 + 1, dtype=np.int64)
    digits = np.zeros(n + r_l + r_r, dtype=np.int64)
    for _ in range(total):
        img = 0
        for i in range(n):
            nbidx = 0
            for j in range(k):
                nbidx = nbidx * p + digits[i + j]
            img = img * p + table[nbidx]
        word = img >> 6
        bit = 1 << (img & 63)
        if seen[word] & bit != 0:
            return False
        seen[word] |= bit
        pos = n - 1
        while pos >= 0:
            digits[r_l + pos] += 1
            if digits[r_l + pos] == p:
                digits[r_l + pos] = 0
                pos -= 1
            else:
                break
    return True


@njit(**_JIT)
def count_preimages_exhaustive(table, p, r_l, r_r, image_index, n):
    k = r_l + r_r + 1
    total = _ipow(p, n)
    digits = np.zeros(n + r_l + r_r, dtype=np.int64)
    count = 0
    for _ in range(total):
        img = 0
        for i in range(n):
            nbidx = 0
            for j in range(k):
                nbidx = nbidx * p + digits[i + j]
            img = img * p + table[nbidx]
        if img == image_index:
            count += 1
        pos = n - 1
        while pos >= 0:
            digits[r_l + pos] += 1
            if digits[r_l + pos] == p:
                digits[r_l + pos] = 0
                pos -= 1
            else:
                break
    return count


@njit(inline="always", **_JIT)
def _build_step(table, p, width, step):
    for s in range(p * width):
        step[s] = 0
    for beta in range(width):
        base = beta * p
        for d in range(p):
            alpha = base + d
            step[table[alpha] * width + beta] |= 1 << (alpha % width)


@njit(**_JIT)
def _strict_one(p, width, init, zmask, step, visited, touched, queue):
    # BFS over suffix nodes; visited is a bitmap over all 2**width node
    # values, wiped via the touched-word list before returning.
    ntouched = 0
    word = init >> 6
    visited[word] |= 1 << (init & 63)
    touched[ntouched] = word
    ntouched += 1
    queue[0] = init
    qt = 1
    qh = 0
    ok = 1
    while qh < qt:
        x = queue[qh]
        qh += 1
        for a in range(p):
            y = 0
            t = x
            while t != 0:
                lsb = t & (-t)
                beta = _popcount(lsb - 1)
                y |= step[a * width + beta]
                t ^= lsb
            if _popcount(y & zmask) != 1:
                ok = 0
                break
            word = y >> 6
            bit = 1 << (y & 63)
            if visited[word] & bit == 0:
                visited[word] |= bit
                touched[ntouched] = word
                ntouched += 1
                queue[qt] = y
                qt += 1
        if ok == 0:
            break
    for i in range(ntouched):
        visited[touched[i]] = 0
    return ok


@njit(**_JIT)
def strict_flags_for_range(lo, hi, p, r_l, r_r):
    k = r_l + r_r + 1
    width = _ipow(p, k - 1)
    entries = width * p
    space = 1 << width
    visited = np.zeros((space + 63) // 64 + 1, dtype=np.int64)
    touched = np.zeros(space, dtype=np.int64)
    queue = np.zeros(space, dtype=np.int64)
    table = np.zeros(entries, dtype=np.int64)
    step = np.zeros(p * width, dtype=np.int64)
    zstride = _ipow(p, r_r)
    zmask = 0
    i = 0
    while i < width:
        zmask |= 1 << i
        i += zstride
    init = (1 << zstride) - 1
    flags = np.zeros(hi - lo, dtype=np.uint8)
    for off in range(hi - lo):
        w = lo + off
        if p == 2:
            for e in range(entries):
                table[e] = (w >> e) & 1
        else:
            v = w
            for e in range(entries):
                table[e] = v % p
                v //= p
        _build_step(table, p, width, step)
        flags[off] = _strict_one(p, width, init, zmask, step,
                                 visited, touched, queue)
    return flags


@njit(**_JIT)
def strict_flags_for_tables(tables, p, r_l, r_r):
    k = r_l + r_r + 1
    width = _ipow(p, k - 1)
    space = 1 << width
    visited = np.zeros((space + 63) // 64 + 1, dtype=np.int64)
    touched = np.zeros(space, dtype=np.int64)
    queue = np.zeros(space, dtype=np.int64)
    step = np.zeros(p * width, dtype=np.int64)
    zstride = _ipow(p, r_r)
    zmask = 0
    i = 0
    while i < width:
        zmask |= 1 << i
        i += zstride
    init = (1 << zstride) - 1
    nrules = tables.shape[0]
    flags = np.zeros(nrules, dtype=np.uint8)
    for row in range(nrules):
        _build_step(tables[row], p, width, step)
        flags[row] = _strict_one(p, width, init, zmask, step,
                                 visited, touched, queue)
    return flags


@njit(**_JIT)
def _grow_i64(arr, need):
    cap = arr.shape[0]
    while cap < need:
        cap *= 2
    out = np.zeros(cap, dtype=np.int64)
    out[: arr.shape[0]] = arr
    return out


@njit(**_JIT)
def revfun_for_tables(tables, p, r_l, r_r, max_buckets):
    k = r_l + r_r + 1
    width = _ipow(p, k - 1)
    step = np.zeros(p * width, dtype=np.int64)
    zstride = _ipow(p, r_r)
    zmask = 0
    m = 0
    while m < width:
        zmask |= 1 << m
        m += zstride
    init = (1 << zstride) - 1

    nrules = tables.shape[0]
    status = np.zeros(nrules, dtype=np.uint8)
    n_buckets = np.zeros(nrules, dtype=np.int64)
    t_len = np.zeros(nrules, dtype=np.int64)
    period = np.zeros(nrules, dtype=np.int64)
    t_bits = np.zeros(nrules, dtype=np.int64)
    c_bits = np.zeros(nrules, dtype=np.int64)

    nodes_flat = np.zeros(1024, dtype=np.int64)
    tmp = np.zeros(1024, dtype=np.int64)
    offs = np.zeros(max_buckets + 2, dtype=np.int64)
    rvals = np.zeros(max_buckets + 2, dtype=np.uint8)

    for row in range(nrules):
        _build_step(tables[row], p, width, step)
        nodes_flat[0] = init
        offs[0] = 0
        offs[1] = 1
        i = 1
        stat = REV_OK
        tl = 0
        q = 0
        buckets = 0
        while True:
            begin = offs[i - 1]
            end = offs[i]
            need = (end - begin) * p
            if need > tmp.shape[0]:
                tmp = _grow_i64(tmp, need)
            cnt = 0
            for idx in range(begin, end):
                x = nodes_flat[idx]
                for a in range(p):
                    y = 0
                    t = x
                    while t != 0:
                        lsb = t & (-t)
                        beta = _popcount(lsb - 1)
                        y |= step[a * width + beta]
                        t ^= lsb
                    tmp[cnt] = y
                    cnt += 1
            sub = tmp[:cnt]
            sub.sort()
            ucnt = 0
            for t2 in range(cnt):
                v = tmp[t2]
                if ucnt == 0 or tmp[ucnt - 1] != v:
                    tmp[ucnt] = v
                    ucnt += 1
            if offs[i] + ucnt > nodes_flat.shape[0]:
                nodes_flat = _grow_i64(nodes_flat, offs[i] + ucnt)
            for t2 in range(ucnt):
                nodes_flat[offs[i] + t2] = tmp[t2]
            offs[i + 1] = offs[i] + ucnt

            ok = 1
            extinct = 0
            for idx2 in range(offs[i], offs[i + 1]):
                b = nodes_flat[idx2]
                if b == 0:
                    extinct = 1
                if _popcount(b & zmask) != 1:
                    ok = 0
            rvals[i] = ok

            if extinct == 1:
                tl = i - 1
                q = 1
                buckets = i + 1
                break

            found = -1
            for j in range(i):
                if offs[j + 1] - offs[j] != ucnt:
                    continue
                same = True
                for t2 in range(ucnt):
                    if nodes_flat[offs[j] + t2] != nodes_flat[offs[i] + t2]:
                        same = False
                        break
                if same:
                    found = j
                    break
            if found >= 0:
                tl = found
                q = i - found
                buckets = i
                break
            i += 1
            if i > max_buckets:
                stat = REV_BUDGET
                break

        if stat == REV_OK and (tl > 63 or q > 63):
            stat = REV_BITS_OVERFLOW
        status[row] = stat
        if stat != REV_OK:
            continue
        n_buckets[row] = buckets
        t_len[row] = tl
        period[row] = q
        tb = 0
        for j in range(tl):
            if rvals[1 + j] != 0:
                tb |= 1 << j
        cb = 0
        for j in range(q):
            if rvals[tl + 1 + j] != 0:
                cb |= 1 << j
        t_bits[row] = tb
        c_bits[row] = cb
    return status, n_buckets, t_len, period, t_bits, c_bits
