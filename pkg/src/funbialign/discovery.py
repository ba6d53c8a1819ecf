"""Seeds, families, recommended representatives and ranked post-processing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .clustering import (
    Dendrogram,
    DissimilarityMatrix,
    SubTree,
    SubTreeForest,
    build_matrix,
    complete_linkage,
    cut_dendrogram,
    set_threads,
)
from .curves import CurveSet, PortionSet, create_portions, max_acolyte_shift
from .errors import InputError
from .scoring import MotifScore, fmsr_adjusted

log = logging.getLogger(__name__)

CRITERIA = ("hadj", "rank-sum", "variance")


@dataclass(frozen=True)
class SubTreeNodeInfo:
    node: int
    leaf_descendants: frozenset
    is_seed: bool


@dataclass(frozen=True, eq=False)
class MotifCandidate:
    portion_ids: np.ndarray = field(repr=False)
    score: MotifScore
    source: tuple[int, int, int]
    variance: float = 0.0

    @property
    def cardinality(self) -> int:
        return int(self.portion_ids.size)

    @property
    def node(self) -> int:
        return self.source[2]


@dataclass(frozen=True)
class DiscoveredMotif:
    candidate: MotifCandidate
    rank_hadj: int
    rank_cardinality: int
    rank_sum: int
    rank_variance: int
    final_rank: int
    criterion: str

    def to_json(self, portions: PortionSet) -> dict:
        c = self.candidate
        ids = portions.curve_set
        return {
            "final_rank": self.final_rank,
            "criterion": self.criterion,
            "h": c.score.h,
            "h_adjusted": c.score.h_adjusted,
            "cardinality": c.cardinality,
            "variance": c.variance,
            "rank_hadj": self.rank_hadj,
            "rank_cardinality": self.rank_cardinality,
            "rank_sum": self.rank_sum,
            "portions": [
                {
                    "curve_id": ids[int(portions.curve_index[j])].id,
                    "start": int(portions.start[j]),
                    "length": portions.length_points,
                }
                for j in c.portion_ids
            ],
        }


def find_seeds(tree: Dendrogram, subtree: SubTree, n_min: int) -> list[int]:
    """Nodes with at least ``n_min`` leaves whose children both have fewer."""
    sizes = tree.sizes
    seeds = []
    for x in tree.nodes_below(subtree.root):
        if tree.is_leaf(x) or sizes[x] < n_min:
            continue
        a, b = tree.children(x)
        if sizes[a] < n_min and sizes[b] < n_min:
            seeds.append(x)
    return seeds


def node_info(tree: Dendrogram, subtree: SubTree, n_min: int) -> list[SubTreeNodeInfo]:
    seeds = set(find_seeds(tree, subtree, n_min))
    return [
        SubTreeNodeInfo(x, frozenset(int(v) for v in tree.leaves(x)), x in seeds)
        for x in tree.nodes_below(subtree.root)
    ]


def family(seed: int, tree: Dendrogram, subtree: SubTree, all_seeds: Sequence[int]) -> list[int]:
    """``seed`` plus its ancestors that are not ancestors of another seed.

    Returned bottom-up, i.e. by increasing cardinality.
    """
    parents = tree.parents
    shared = set()
    for other in all_seeds:
        if other == seed:
            continue
        x = other
        while x != subtree.root:
            x = int(parents[x])
            shared.add(x)
    out = [seed]
    x = seed
    while x != subtree.root:
        x = int(parents[x])
        if x in shared:
            break
        out.append(x)
    return out


def recommend_index(h_adjusted: Sequence[float]) -> int:
    """Position of the recommended node in a family sorted by cardinality.

    A strictly increasing score sequence selects the node just before the
    largest increase; anything else selects the minimum score (first one on
    ties, i.e. the smaller cardinality).
    """
    h = np.asarray(h_adjusted, dtype=np.float64)
    if h.size == 1:
        return 0
    gaps = np.diff(h)
    if np.all(gaps > 0):
        return int(np.argmax(gaps))
    return int(np.argmin(h))


def motif_variance(candidate: MotifCandidate, portions: PortionSet) -> float:
    """Population variance over the grid of the candidate's mean curve."""
    values = portions.values[candidate.portion_ids]
    return float(np.var(values.mean(axis=0)))


def make_candidate(portions: PortionSet, ids, source) -> MotifCandidate:
    ids = np.sort(np.asarray(ids, dtype=np.int64))
    ids.setflags(write=False)
    values = portions.values[ids]
    return MotifCandidate(
        ids, fmsr_adjusted(values), source, float(np.var(values.mean(axis=0)))
    )


def recommend(family_nodes: Sequence[int], tree: Dendrogram, portions: PortionSet, source=(0, 0)):
    """Recommended representative of a family as a :class:`MotifCandidate`."""
    leaves = [tree.leaves(x) for x in family_nodes]
    if len(family_nodes) == 1:
        k = 0
    else:
        k = recommend_index([fmsr_adjusted(portions.values[ids]).h_adjusted for ids in leaves])
    subtree_id, seed = source
    return make_candidate(portions, leaves[k], (subtree_id, seed, int(family_nodes[k])))


def collect_candidates(
    forest: SubTreeForest, portions: PortionSet, n_min: int
) -> list[MotifCandidate]:
    if n_min < 2:
        raise InputError(f"InvalidMinCardinality: n_min must be >= 2, got {n_min}")
    tree = forest.tree
    candidates = []
    for s, subtree in enumerate(forest.subtrees):
        if subtree.size < n_min:
            continue
        seeds = find_seeds(tree, subtree, n_min)
        for seed in seeds:
            fam = family(seed, tree, subtree, seeds)
            candidates.append(recommend(fam, tree, portions, (s, seed)))
    return candidates


def _competition_ranks(keys: np.ndarray) -> np.ndarray:
    return rankdata(keys, method="min").astype(np.int64)


def post_process(
    candidates: Sequence[MotifCandidate], criterion: str, portions: PortionSet
) -> list[DiscoveredMotif]:
    """Rank candidates and drop those fully covered by better-ranked motifs.

    A candidate is dropped when every one of its portions equals, or is an
    acolyte of, a portion of some already retained motif.
    """
    if criterion not in CRITERIA:
        raise InputError(f"InvalidCriterion: {criterion!r} is not one of {', '.join(CRITERIA)}")
    if not candidates:
        return []
    hadj = np.array([c.score.h_adjusted for c in candidates])
    card = np.array([c.cardinality for c in candidates])
    var = np.array([c.variance for c in candidates])
    rank_h = _competition_ranks(hadj)
    rank_c = _competition_ranks(-card)
    rank_v = _competition_ranks(-var)
    rank_s = rank_h + rank_c
    primary = {"hadj": rank_h, "rank-sum": rank_s, "variance": rank_v}[criterion]
    order = sorted(range(len(candidates)), key=lambda k: (primary[k], candidates[k].node))

    n = len(portions)
    shift = max_acolyte_shift(portions.length_points)
    covered = np.zeros(n, dtype=bool)
    out = []
    for k in order:
        ids = candidates[k].portion_ids
        if covered[ids].all():
            continue
        out.append(
            DiscoveredMotif(
                candidates[k],
                int(rank_h[k]),
                int(rank_c[k]),
                int(rank_s[k]),
                int(rank_v[k]),
                len(out) + 1,
                criterion,
            )
        )
        for j in ids:
            lo, hi = max(0, j - shift), min(n, j + shift + 1)
            same = portions.curve_index[lo:hi] == portions.curve_index[j]
            covered[lo:hi] |= same
    return out


@dataclass(frozen=True, eq=False)
class DiscoveryResult:
    portions: PortionSet
    matrix: DissimilarityMatrix
    tree: Dendrogram
    forest: SubTreeForest
    candidates: list[MotifCandidate]
    motifs: list[DiscoveredMotif]

    def to_json(self, max_results: int = 0) -> list[dict]:
        motifs = self.motifs if max_results <= 0 else self.motifs[:max_results]
        return [m.to_json(self.portions) for m in motifs]


def discover(
    curves: CurveSet,
    length_points: int,
    n_min: int,
    criterion: str = "rank-sum",
    threads: int = 0,
) -> DiscoveryResult:
    """Run portion creation, clustering, candidate collection and ranking."""
    if criterion not in CRITERIA:
        raise InputError(f"InvalidCriterion: {criterion!r} is not one of {', '.join(CRITERIA)}")
    if n_min < 2:
        raise InputError(f"InvalidMinCardinality: n_min must be >= 2, got {n_min}")
    set_threads(threads)
    portions = create_portions(curves, length_points)
    matrix = build_matrix(portions)
    tree = complete_linkage(matrix)
    forest = cut_dendrogram(tree, matrix, portions)
    candidates = collect_candidates(forest, portions, n_min)
    motifs = post_process(candidates, criterion, portions)
    log.info(
        "portions=%d subtrees=%d candidates=%d motifs=%d",
        len(portions), len(forest), len(candidates), len(motifs),
    )
    return DiscoveryResult(portions, matrix, tree, forest, candidates, motifs)
