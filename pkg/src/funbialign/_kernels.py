"""Compiled loops for the pairwise matrix and complete-linkage agglomeration.

Matrices use the condensed upper-triangular layout of
``scipy.spatial.distance.squareform``: entry (i, j), i < j, lives at
``n*i - i*(i+1)//2 + j - i - 1``.
"""

import os

import numba
import numpy as np
from numba import njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # entries are written independently, so any layer gives identical output
    numba.config.THREADING_LAYER = "workqueue"


@njit(cache=True, inline="always")
def condensed_index(n, i, j):
    return n * i - (i * (i + 1)) // 2 + j - i - 1


@njit(parallel=True, cache=True)
def pair_fmsr_condensed(centered):
    """Two-portion fMSR for every pair of row-centred portions.

    For two rows the double-centred residuals are +-(c1 - c2)/2, hence
    ``H = sum((c1 - c2)**2) / (4 l)``.
    """
    n, length = centered.shape
    out = np.empty(n * (n - 1) // 2)
    scale = 1.0 / (4.0 * length)
    for i in prange(n - 1):
        base = condensed_index(n, i, i + 1)
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(length):
                diff = centered[i, t] - centered[j, t]
                acc += diff * diff
            out[base + j - i - 1] = acc * scale
    return out


@njit(cache=True)
def add_acolyte_penalty(condensed, n, curve_index, start, max_shift, penalty):
    """Add ``penalty`` to every acolyte pair; portions sorted by (curve, start)."""
    count = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            if curve_index[j] != curve_index[i] or start[j] - start[i] > max_shift:
                break
            condensed[condensed_index(n, i, j)] += penalty
            count += 1
    return count


@njit(cache=True)
def _nearest_right(d, n, active, k):
    best = -1
    best_d = np.inf
    base = condensed_index(n, k, k + 1) - k - 1 if k < n - 1 else 0
    for m in range(k + 1, n):
        if active[m]:
            v = d[base + m]
            if v < best_d or best == -1:
                best_d = v
                best = m
    return best, best_d


@njit(cache=True)
def complete_linkage_condensed(d, n):
    """Complete-linkage agglomeration with a deterministic tie rule.

    Each cluster is stored in the slot of its smallest leaf id.  Every step
    merges the active pair with minimum distance, ties going to the
    lexicographically smallest (slot_i, slot_j).  ``d`` is overwritten.

    Returns ``left, right, heights`` with node ids 0..n-1 for leaves and
    n + step for the cluster created at ``step``.
    """
    left = np.empty(n - 1, dtype=np.int64)
    right = np.empty(n - 1, dtype=np.int64)
    heights = np.empty(n - 1)
    active = np.ones(n, dtype=np.bool_)
    node = np.arange(n)
    nn = np.full(n, -1, dtype=np.int64)
    nnd = np.full(n, np.inf)
    for k in range(n - 1):
        nn[k], nnd[k] = _nearest_right(d, n, active, k)

    for step in range(n - 1):
        i = -1
        best = np.inf
        for k in range(n):
            if active[k] and nn[k] >= 0 and (i == -1 or nnd[k] < best):
                best = nnd[k]
                i = k
        j = nn[i]
        left[step] = node[i]
        right[step] = node[j]
        heights[step] = best

        for k in range(n):
            if not active[k] or k == i or k == j:
                continue
            a = condensed_index(n, min(k, i), max(k, i))
            b = condensed_index(n, min(k, j), max(k, j))
            if d[b] > d[a]:
                d[a] = d[b]
        active[j] = False
        node[i] = n + step

        for k in range(j):
            if active[k] and (k == i or nn[k] == i or nn[k] == j):
                nn[k], nnd[k] = _nearest_right(d, n, active, k)
    return left, right, heights
