"""Acolyte-penalised dissimilarity matrix, complete linkage and the acolyte cut."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numba
import numpy as np

from . import _kernels
from .curves import PortionSet, max_acolyte_shift
from .errors import InconsistentTree, SinglePortion

log = logging.getLogger(__name__)


def set_threads(threads: int) -> int:
    """Bound the worker threads of the compiled kernels (0 = all available)."""
    available = numba.config.NUMBA_NUM_THREADS
    count = available if threads <= 0 else min(threads, available)
    numba.set_num_threads(count)
    return count


@dataclass(frozen=True, eq=False)
class DissimilarityMatrix:
    """Symmetric matrix stored as its condensed upper triangle.

    ``raw`` holds the pairwise fMSR dissimilarities and ``values`` the same
    entries with ``penalty`` added to acolyte pairs.
    """

    size: int
    values: np.ndarray = field(repr=False)
    penalty: float
    raw: np.ndarray | None = field(default=None, repr=False)
    n_acolyte_pairs: int = 0
    portions: PortionSet | None = field(default=None, repr=False)

    def __getitem__(self, ij) -> float:
        i, j = ij
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[_kernels.condensed_index(self.size, i, j)])

    def square(self) -> np.ndarray:
        from scipy.spatial.distance import squareform

        return squareform(self.values, checks=False)


def build_matrix(portions: PortionSet) -> DissimilarityMatrix:
    n = len(portions)
    if n < 2:
        raise SinglePortion("SinglePortion: need at least two portions to cluster")
    X = portions.values
    centered = np.ascontiguousarray(X - X.mean(axis=1, keepdims=True))
    raw = _kernels.pair_fmsr_condensed(centered)
    raw.setflags(write=False)
    penalty = float(raw.max())
    values = raw.copy()
    count = _kernels.add_acolyte_penalty(
        values,
        n,
        np.ascontiguousarray(portions.curve_index),
        np.ascontiguousarray(portions.start),
        max_acolyte_shift(portions.length_points),
        penalty,
    )
    values.setflags(write=False)
    log.debug("matrix: n=%d M=%.6g acolyte pairs=%d", n, penalty, count)
    return DissimilarityMatrix(n, values, penalty, raw, count, portions)


@dataclass(frozen=True, eq=False)
class Dendrogram:
    left: np.ndarray
    right: np.ndarray
    heights: np.ndarray
    leaf_count: int

    @property
    def merges(self) -> list[tuple[int, int, float]]:
        return [
            (int(a), int(b), float(h)) for a, b, h in zip(self.left, self.right, self.heights)
        ]

    @property
    def n_nodes(self) -> int:
        return 2 * self.leaf_count - 1

    @property
    def root(self) -> int:
        return self.n_nodes - 1

    def is_leaf(self, node: int) -> bool:
        return node < self.leaf_count

    def children(self, node: int) -> tuple[int, int]:
        k = node - self.leaf_count
        return int(self.left[k]), int(self.right[k])

    def height(self, node: int) -> float:
        return 0.0 if self.is_leaf(node) else float(self.heights[node - self.leaf_count])

    @cached_property
    def sizes(self) -> np.ndarray:
        """Leaf-descendant count of every node."""
        n = self.leaf_count
        sizes = np.ones(self.n_nodes, dtype=np.int64)
        for k in range(n - 1):
            sizes[n + k] = sizes[self.left[k]] + sizes[self.right[k]]
        sizes.setflags(write=False)
        return sizes

    @cached_property
    def parents(self) -> np.ndarray:
        parents = np.full(self.n_nodes, -1, dtype=np.int64)
        internal = np.arange(self.leaf_count, self.n_nodes)
        parents[self.left] = internal
        parents[self.right] = internal
        parents.setflags(write=False)
        return parents

    def leaves(self, node: int) -> np.ndarray:
        """Sorted leaf ids below ``node``."""
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            if x < self.leaf_count:
                out.append(x)
            else:
                stack.extend(self.children(x))
        return np.sort(np.array(out, dtype=np.int64))

    def nodes_below(self, node: int) -> list[int]:
        """``node`` and all its descendants, children before parents."""
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            out.append(x)
            if x >= self.leaf_count:
                stack.extend(self.children(x))
        return sorted(out)

    def to_json(self) -> list[list]:
        return [[a, b, h] for a, b, h in self.merges]


def complete_linkage(matrix: DissimilarityMatrix) -> Dendrogram:
    n = matrix.size
    if n < 2:
        raise SinglePortion("SinglePortion: need at least two portions to cluster")
    work = np.array(matrix.values, dtype=np.float64, copy=True)
    left, right, heights = _kernels.complete_linkage_condensed(work, n)
    del work
    return Dendrogram(left, right, heights, n)


@dataclass(frozen=True)
class SubTree:
    root: int
    leaves: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.leaves.size)


@dataclass(frozen=True, eq=False)
class SubTreeForest:
    tree: Dendrogram
    subtrees: tuple[SubTree, ...]

    def __len__(self) -> int:
        return len(self.subtrees)

    def __iter__(self):
        return iter(self.subtrees)


def _has_acolytes(leaves: np.ndarray, portions: PortionSet) -> bool:
    # leaves sorted => portions sorted by (curve, start); close pairs are adjacent
    if leaves.size < 2:
        return False
    ci = portions.curve_index[leaves]
    st = portions.start[leaves]
    same = ci[1:] == ci[:-1]
    close = (st[1:] - st[:-1]) <= max_acolyte_shift(portions.length_points)
    return bool(np.any(same & close))


def cut_dendrogram(
    tree: Dendrogram, matrix: DissimilarityMatrix, portions: PortionSet | None = None
) -> SubTreeForest:
    """Remove the long acolyte branches and return the surviving sub-trees.

    A merge is cut when its height exceeds the penalty ``M``.  A merge at
    exactly ``M`` is cut only if it joins an acolyte pair, which happens when
    an acolyte pair has zero raw dissimilarity.
    """
    portions = portions if portions is not None else matrix.portions
    if portions is None:
        raise InconsistentTree("InconsistentTree: matrix carries no portion layout")
    n = tree.leaf_count
    if n != matrix.size or n != len(portions):
        raise InconsistentTree("InconsistentTree: tree, matrix and portions differ in size")
    M = matrix.penalty
    kept = np.zeros(tree.n_nodes, dtype=bool)
    kept[:n] = True
    for k in range(n - 1):
        a, b, h = int(tree.left[k]), int(tree.right[k]), tree.heights[k]
        if not (kept[a] and kept[b]) or h > M:
            continue
        if h == M and _has_acolytes(np.union1d(tree.leaves(a), tree.leaves(b)), portions):
            continue
        kept[n + k] = True

    parents = tree.parents
    roots = [x for x in range(tree.n_nodes) if kept[x] and (parents[x] < 0 or not kept[parents[x]])]
    subtrees = []
    for r in roots:
        leaves = tree.leaves(r)
        leaves.setflags(write=False)
        if _has_acolytes(leaves, portions):
            raise InconsistentTree(
                f"InconsistentTree: sub-tree rooted at node {r} contains acolyte portions"
            )
        subtrees.append(SubTree(r, leaves))
    subtrees.sort(key=lambda s: int(s.leaves[0]))
    return SubTreeForest(tree, tuple(subtrees))
