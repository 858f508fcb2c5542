"""Plain numpy/python implementations of the hot loops.

Same call surface as `_kernels` (the numba backend); selected via
``CAREV_BACKEND=numpy``.  Configuration enumeration is vectorized in
chunks; the per-rule graph work simply reuses the reference python
implementations, which accept any envelope.
"""

from __future__ import annotations

import numpy as np

from .errors import BudgetError
from .nullboundary import _bucket_chain, _strict_scan

# generic implementations: no width restrictions
STRICT_WIDTH_LIMIT = None
REVFUN_WIDTH_LIMIT = None

_CHUNK = 1 << 16


def _images_for_indices(table, p, r_l, r_r, n, idx):
    """Evolve the configurations with the given packed indices; returns
    packed image indices (one null-boundary step, vectorized)."""
    k = r_l + r_r + 1
    m = idx.shape[0]
    padded = np.zeros((m, n + r_l + r_r), dtype=np.int64)
    v = idx.copy()
    for pos in range(n - 1, -1, -1):
        padded[:, r_l + pos] = v % p
        v //= p
    nb = np.zeros(m, dtype=np.int64)
    img = np.zeros(m, dtype=np.int64)
    for i in range(n):
        nb[:] = 0
        for j in range(k):
            nb *= p
            nb += padded[:, i + j]
        img *= p
        img += table[nb]
    return img


def oracle_is_reversible(table, p, r_l, r_r, n):
    """True iff the null-boundary step is injective on all p**n
    configurations of n cells."""
    total = p**n
    seen = np.zeros(total, dtype=bool)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        img = _images_for_indices(table, p, r_l, r_r, n, idx)
        uniq = np.unique(img)
        if uniq.size != img.size or seen[uniq].any():
            return False
        seen[uniq] = True
    return True


def count_preimages_exhaustive(table, p, r_l, r_r, image_index, n):
    """Number of n-cell configurations evolving to the given image."""
    total = p**n
    count = 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        img = _images_for_indices(table, p, r_l, r_r, n, idx)
        count += int((img == image_index).sum())
    return count


def strict_flags_for_range(lo, hi, p, r_l, r_r):
    entries = p ** (r_l + r_r + 1)
    flags = np.zeros(hi - lo, dtype=np.uint8)
    for off, number in enumerate(range(lo, hi)):
        table = []
        v = number
        for _ in range(entries):
            table.append(v % p)
            v //= p
        ok, _, _, _ = _strict_scan(tuple(table), p, r_l, r_r)
        flags[off] = 1 if ok else 0
    return flags


def strict_flags_for_tables(tables, p, r_l, r_r):
    flags = np.zeros(tables.shape[0], dtype=np.uint8)
    for row in range(tables.shape[0]):
        ok, _, _, _ = _strict_scan(tuple(int(t) for t in tables[row]),
                                   p, r_l, r_r)
        flags[row] = 1 if ok else 0
    return flags


# revfun result status codes, shared with the numba backend
REV_OK = 0
REV_BITS_OVERFLOW = 1  # transient or cycle longer than 63: repack in python
REV_BUDGET = 2


def revfun_for_tables(tables, p, r_l, r_r, max_buckets):
    """Bucket-chain results for a block of rule tables.

    Returns (status, n_buckets, transient_len, period, transient_bits,
    cycle_bits); bit j of the packed values is R at offset j+1.  Chains
    whose encoding does not fit 63 bits report REV_BITS_OVERFLOW and are
    recomputed by the caller through the object API.
    """
    n = tables.shape[0]
    status = np.zeros(n, dtype=np.uint8)
    n_buckets = np.zeros(n, dtype=np.int64)
    t_len = np.zeros(n, dtype=np.int64)
    period = np.zeros(n, dtype=np.int64)
    t_bits = np.zeros(n, dtype=np.int64)
    c_bits = np.zeros(n, dtype=np.int64)
    for row in range(n):
        table = tuple(int(t) for t in tables[row])
        try:
            trans, cyc, buckets = _bucket_chain(table, p, r_l, r_r,
                                                max_buckets)
        except BudgetError:
            status[row] = REV_BUDGET
            continue
        if len(trans) > 63 or len(cyc) > 63:
            status[row] = REV_BITS_OVERFLOW
            continue
        n_buckets[row] = buckets
        t_len[row] = len(trans)
        period[row] = len(cyc)
        t_bits[row] = sum(1 << j for j, v in enumerate(trans) if v)
        c_bits[row] = sum(1 << j for j, v in enumerate(cyc) if v)
    return status, n_buckets, t_len, period, t_bits, c_bits
