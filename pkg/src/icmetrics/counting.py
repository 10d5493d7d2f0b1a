"""Tie-aware counting of concordant, discordant, and value-tied pairs.

Given equal-length sequences `keys` and `values`, every unordered index pair
with a strict key order (key_i > key_j) is classified by comparing the values
at the same indices. This is the kernel behind every concordance metric in
the package: the plain C-index feeds labels as keys and predictions as
values, the groupwise variants run it inside each group, and the IC-index
runs it on within-drug-pair difference vectors.

Two implementations share one contract. `count_concordance_naive` walks all
O(m^2) pairs and is the reference oracle; `count_concordance` sorts by key
and replays the sequence through a binary indexed tree over value ranks in
O(m log m). Property tests and the CLI selftest hold the two equal on random
inputs, and the compiled kernels below are reused by the metric module's hot
loops.
"""

import numpy as np
from numba import njit

from .errors import InvalidValue
from typing import NamedTuple


class ConcordanceCounts(NamedTuple):
    concordant: int
    discordant: int
    tied_value: int


def _validated(keys, values, tie_tol):
    keys = np.ascontiguousarray(keys, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    if keys.ndim != 1 or values.ndim != 1:
        raise InvalidValue("keys and values must be one-dimensional")
    if keys.shape[0] != values.shape[0]:
        raise InvalidValue(
            "length mismatch: %d keys vs %d values" % (keys.shape[0], values.shape[0])
        )
    if not np.isfinite(keys).all():
        raise InvalidValue("keys contain a non-finite entry")
    if not np.isfinite(values).all():
        raise InvalidValue("values contain a non-finite entry")
    if not (np.isfinite(tie_tol) and tie_tol >= 0.0):
        raise InvalidValue("tie_tol must be finite and non-negative")
    return keys, values


def count_concordance_naive(keys, values, tie_tol=0.0):
    """Exhaustive O(m^2) reference implementation of `count_concordance`.

    Kept deliberately simple: for each pair with a strict key order, the
    element with the larger key is the query and the other the reference,
    and the reference value is compared against query - tol / query + tol.
    The fast kernel reproduces these comparisons bit-for-bit.
    """
    keys, values = _validated(keys, values, tie_tol)
    concordant = discordant = tied = 0
    m = keys.shape[0]
    for i in range(m):
        for j in range(i):
            if keys[i] == keys[j]:
                continue
            if keys[i] > keys[j]:
                query, ref = values[i], values[j]
            else:
                query, ref = values[j], values[i]
            if ref < query - tie_tol:
                concordant += 1
            elif ref > query + tie_tol:
                discordant += 1
            else:
                tied += 1
    return ConcordanceCounts(concordant, discordant, tied)


def count_concordance(keys, values, tie_tol=0.0):
    """Count concordant / discordant / value-tied pairs over strictly key-ordered index pairs.

    Parameters
    ----------
    keys: array-like of finite reals, length m
    values: array-like of finite reals, length m
    tie_tol: non-negative tolerance below which value differences count as ties;
      the default 0.0 means exact floating-point equality, matching H(0) = 1/2.

    Returns
    -------
    ConcordanceCounts with integer fields (concordant, discordant, tied_value).
    Pairs with equal keys contribute to no bucket, so the three fields sum to
    the number of strictly key-ordered pairs.
    """
    keys, values = _validated(keys, values, tie_tol)
    c, d, t = _count_sorted(keys, values, float(tie_tol))
    return ConcordanceCounts(int(c), int(d), int(t))


@njit(cache=True, nogil=True)
def _fenwick_add(tree, pos):
    # 1-based binary indexed tree point update.
    size = tree.shape[0] - 1
    while pos <= size:
        tree[pos] += 1
        pos += pos & (-pos)


@njit(cache=True, nogil=True)
def _fenwick_prefix(tree, pos):
    # Sum of positions 1..pos (0 for pos <= 0).
    total = 0
    while pos > 0:
        total += tree[pos]
        pos -= pos & (-pos)
    return total


@njit(cache=True, nogil=True)
def _count_sorted(keys, values, tie_tol):
    # The pair-counting core. The procedure:
    #
    #   1) argsort indices by key, ascending, and walk the sequence in that
    #      order, one batch of exactly-equal keys at a time;
    #   2) maintain a binary indexed tree over "value slots", where element
    #      slots are positions in a stable sort of all values, so equal
    #      values occupy a contiguous slot range;
    #   3) for each element of the current batch, query how many already
    #      inserted elements (all with strictly smaller keys) lie below
    #      value - tol, within [value - tol, value + tol], and above; these
    #      are exactly its concordant / tied / discordant partners;
    #   4) only after the whole batch is queried, insert its elements.
    #
    # Deferring insertion to the end of each batch is what enforces the
    # strict key_i > key_j restriction: equal-key pairs never see each other
    # in the tree. Each query is two prefix sums after two binary searches in
    # the sorted value array, giving O(m log m) overall.
    m = keys.shape[0]
    concordant = np.int64(0)
    discordant = np.int64(0)
    tied = np.int64(0)
    if m < 2:
        return concordant, discordant, tied

    order = np.argsort(keys, kind="mergesort")
    sorted_values = np.sort(values)
    value_order = np.argsort(values, kind="mergesort")
    slot = np.empty(m, dtype=np.int64)
    for rank in range(m):
        slot[value_order[rank]] = rank

    tree = np.zeros(m + 1, dtype=np.int64)
    inserted = np.int64(0)
    i = 0
    while i < m:
        j = i
        batch_key = keys[order[i]]
        while j < m and keys[order[j]] == batch_key:
            j += 1
        for b in range(i, j):
            v = values[order[b]]
            lo = np.searchsorted(sorted_values, v - tie_tol, side="left")
            hi = np.searchsorted(sorted_values, v + tie_tol, side="right")
            below = _fenwick_prefix(tree, lo)
            within = _fenwick_prefix(tree, hi) - below
            concordant += below
            tied += within
            discordant += inserted - below - within
        for b in range(i, j):
            _fenwick_add(tree, slot[order[b]] + 1)
            inserted += 1
        i = j
    return concordant, discordant, tied


@njit(cache=True, nogil=True)
def _two_diff(a, b):
    # Error-free difference: hi = fl(a - b) and hi + lo == a - b exactly.
    hi = a - b
    bb = a - hi
    lo = (a - (hi + bb)) + (bb - b)
    return hi, lo


@njit(cache=True, nogil=True)
def _dd_less(ahi, alo, bhi, blo):
    # Exact order of the reals (ahi + alo) < (bhi + blo) for normalized
    # hi/lo pairs: hi parts order the reals except on hi ties, where the
    # exact residuals decide.
    return ahi < bhi or (ahi == bhi and alo < blo)


@njit(cache=True, nogil=True)
def _dd_argsort(hi, lo):
    # Stable sort by exact real value via two stable passes (lo then hi).
    first = np.argsort(lo, kind="mergesort")
    second = np.argsort(hi[first], kind="mergesort")
    return first[second]


@njit(cache=True, nogil=True)
def _dd_lower_bound(sorted_hi, sorted_lo, qhi, qlo, size):
    # First index in the sorted hi/lo arrays whose value is >= the query.
    low = 0
    high = size
    while low < high:
        mid = (low + high) // 2
        if _dd_less(sorted_hi[mid], sorted_lo[mid], qhi, qlo):
            low = mid + 1
        else:
            high = mid
    return low


@njit(cache=True, nogil=True)
def _dd_upper_bound(sorted_hi, sorted_lo, qhi, qlo, size):
    # First index in the sorted hi/lo arrays whose value is > the query.
    low = 0
    high = size
    while low < high:
        mid = (low + high) // 2
        if _dd_less(qhi, qlo, sorted_hi[mid], sorted_lo[mid]):
            high = mid
        else:
            low = mid + 1
    return low


@njit(cache=True, nogil=True)
def _count_sorted_dd(khi, klo, vhi, vlo):
    # _count_sorted over keys and values given as error-free hi/lo pairs,
    # with exact-equality ties only (no tolerance band). Comparisons follow
    # the exact reals hi + lo, so the counts do not depend on how a caller
    # grouped the floating-point subtractions that produced the pairs.
    m = khi.shape[0]
    concordant = np.int64(0)
    discordant = np.int64(0)
    tied = np.int64(0)
    if m < 2:
        return concordant, discordant, tied

    order = _dd_argsort(khi, klo)
    value_order = _dd_argsort(vhi, vlo)
    sorted_vhi = vhi[value_order]
    sorted_vlo = vlo[value_order]
    slot = np.empty(m, dtype=np.int64)
    for rank in range(m):
        slot[value_order[rank]] = rank

    tree = np.zeros(m + 1, dtype=np.int64)
    inserted = np.int64(0)
    i = 0
    while i < m:
        j = i
        batch_hi = khi[order[i]]
        batch_lo = klo[order[i]]
        while j < m and khi[order[j]] == batch_hi and klo[order[j]] == batch_lo:
            j += 1
        for b in range(i, j):
            qhi = vhi[order[b]]
            qlo = vlo[order[b]]
            lo_idx = _dd_lower_bound(sorted_vhi, sorted_vlo, qhi, qlo, m)
            hi_idx = _dd_upper_bound(sorted_vhi, sorted_vlo, qhi, qlo, m)
            below = _fenwick_prefix(tree, lo_idx)
            within = _fenwick_prefix(tree, hi_idx) - below
            concordant += below
            tied += within
            discordant += inserted - below - within
        for b in range(i, j):
            _fenwick_add(tree, slot[order[b]] + 1)
            inserted += 1
        i = j
    return concordant, discordant, tied


@njit(cache=True, nogil=True)
def _count_grouped(indptr, keys, values, tie_tol):
    # Run _count_sorted independently on each row of a CSR-like layout and
    # sum the counts. Rows are record groups sharing one drug (or target).
    concordant = np.int64(0)
    discordant = np.int64(0)
    tied = np.int64(0)
    for row in range(indptr.shape[0] - 1):
        start = indptr[row]
        stop = indptr[row + 1]
        if stop - start < 2:
            continue
        c, d, t = _count_sorted(keys[start:stop], values[start:stop], tie_tol)
        concordant += c
        discordant += d
        tied += t
    return concordant, discordant, tied


@njit(cache=True, nogil=True)
def _count_pair_differences(indptr, cols, y, pred, offset, stride):
    # IC-index core: for every unordered pair of rows (a, b), intersect
    # their sorted column lists, build the difference vectors
    #   key_c = y[a, c] - y[b, c],   value_c = pred[a, c] - pred[b, c]
    # over shared columns c, and count concordance among them. A strictly
    # key-ordered column pair is exactly a 2x2 design with a nonzero label
    # interaction, and the value comparison reproduces the sign of the
    # prediction interaction, so the accumulated counts are the unordered
    # qualifying quadruples split by H-utility 1 / 0 / one-half.
    #
    # Differences are kept as error-free hi/lo pairs and compared as exact
    # reals. A second-order difference like y - y' - y* + y'* has no single
    # correct rounding order, and deciding signs on rounded intermediates
    # would make the counts depend on which axis the caller put outermost;
    # exact comparisons make both orientations and the bruteforce
    # enumeration agree bit for bit on any finite input.
    #
    # `offset`/`stride` select an interleaved subset of the outer rows so
    # callers can fan the loop out across threads; integer counts make the
    # reduction order irrelevant.
    n_rows = indptr.shape[0] - 1
    max_len = 0
    for row in range(n_rows):
        length = indptr[row + 1] - indptr[row]
        if length > max_len:
            max_len = length
    khi = np.empty(max_len, dtype=np.float64)
    klo = np.empty(max_len, dtype=np.float64)
    vhi = np.empty(max_len, dtype=np.float64)
    vlo = np.empty(max_len, dtype=np.float64)

    concordant = np.int64(0)
    discordant = np.int64(0)
    tied = np.int64(0)
    for a in range(offset, n_rows, stride):
        a_end = indptr[a + 1]
        for b in range(a + 1, n_rows):
            i = indptr[a]
            j = indptr[b]
            b_end = indptr[b + 1]
            m = 0
            while i < a_end and j < b_end:
                ca = cols[i]
                cb = cols[j]
                if ca == cb:
                    khi[m], klo[m] = _two_diff(y[i], y[j])
                    vhi[m], vlo[m] = _two_diff(pred[i], pred[j])
                    m += 1
                    i += 1
                    j += 1
                elif ca < cb:
                    i += 1
                else:
                    j += 1
            if m >= 2:
                c, d, t = _count_sorted_dd(khi[:m], klo[:m], vhi[:m], vlo[:m])
                concordant += c
                discordant += d
                tied += t
    return concordant, discordant, tied
