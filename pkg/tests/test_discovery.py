import numpy as np
import pytest

from funbialign.clustering import Dendrogram, SubTree
from funbialign.curves import CurveSet, are_acolytes, create_portions
from funbialign.discovery import (
    collect_candidates,
    discover,
    family,
    find_seeds,
    make_candidate,
    motif_variance,
    node_info,
    post_process,
    recommend,
    recommend_index,
)
from funbialign.errors import InputError
from funbialign.simulation import SimulationConfig, simulate


def tree_from(merges, n):
    left, right, h = zip(*merges)
    return Dendrogram(np.array(left), np.array(right), np.array(h, dtype=float), n)


def whole(tree):
    return SubTree(tree.root, np.arange(tree.leaf_count))


@pytest.fixture
def balanced():
    merges = [(0, 1, 1), (2, 3, 1), (4, 5, 1), (6, 7, 1), (8, 9, 2), (10, 11, 2), (12, 13, 3)]
    return tree_from(merges, 8)


@pytest.fixture
def chain():
    merges = [(0, 1, 1), (6, 2, 2), (7, 3, 3), (8, 4, 4), (9, 5, 5)]
    return tree_from(merges, 6)


class TestSeedsAndFamilies:
    def test_balanced(self, balanced):
        seeds = find_seeds(balanced, whole(balanced), 3)
        assert seeds == [12, 13]
        assert family(12, balanced, whole(balanced), seeds) == [12]
        assert family(13, balanced, whole(balanced), seeds) == [13]

    def test_chain(self, chain):
        seeds = find_seeds(chain, whole(chain), 4)
        assert seeds == [8]
        assert family(8, chain, whole(chain), seeds) == [8, 9, 10]

    def test_too_small(self):
        tree = tree_from([(0, 1, 1), (3, 2, 2)], 3)
        assert find_seeds(tree, whole(tree), 5) == []

    def test_node_info(self, balanced):
        info = {i.node: i for i in node_info(balanced, whole(balanced), 5)}
        assert info[14].is_seed and not info[12].is_seed
        assert info[12].leaf_descendants == frozenset({0, 1, 2, 3})


class TestRecommendIndex:
    @pytest.mark.parametrize(
        "h, expected",
        [
            ((0.10, 0.12, 0.50, 0.55), 1),
            ((0.10, 0.08, 0.50), 1),
            ((0.3,), 0),
            ((0.2, 0.2, 0.4), 0),
            ((0.125, 0.375, 0.625), 0),
        ],
    )
    def test_examples(self, h, expected):
        assert recommend_index(h) == expected


def small_portions():
    rng = np.random.default_rng(2)
    return create_portions(CurveSet.from_arrays([rng.normal(size=40)]), 5)


class TestPostProcess:
    def test_disjoint_kept(self):
        ps = small_portions()
        a = make_candidate(ps, [0, 10, 20], (0, 0, 100))
        b = make_candidate(ps, [5, 15, 25, 30], (0, 1, 101))
        out = post_process([a, b], "hadj", ps)
        assert len(out) == 2
        assert sorted(m.final_rank for m in out) == [1, 2]

    def test_duplicate_dropped(self):
        ps = small_portions()
        a = make_candidate(ps, [0, 10, 20], (0, 0, 100))
        b = make_candidate(ps, [0, 10, 20], (1, 0, 101))
        assert len(post_process([a, b], "rank-sum", ps)) == 1

    def test_acolyte_cover_dropped(self):
        ps = small_portions()
        a = make_candidate(ps, [0, 10, 20], (0, 0, 100))
        b = make_candidate(ps, [1, 11, 21], (0, 1, 101))
        out = post_process([a, b], "hadj", ps)
        assert len(out) == 1

    def test_partial_cover_kept(self):
        ps = small_portions()
        a = make_candidate(ps, [0, 10, 20], (0, 0, 100))
        b = make_candidate(ps, [1, 11, 30], (0, 1, 101))
        assert len(post_process([a, b], "hadj", ps)) == 2

    def test_rank_sum_values(self):
        ps = small_portions()
        cands = [
            make_candidate(ps, [0, 10], (0, 0, 100)),
            make_candidate(ps, [5, 15, 25], (0, 1, 101)),
            make_candidate(ps, [30, 35], (0, 2, 102)),
        ]
        out = post_process(cands, "rank-sum", ps)
        for m in out:
            assert m.rank_sum == m.rank_hadj + m.rank_cardinality
        assert [m.final_rank for m in out] == list(range(1, len(out) + 1))
        keys = [m.rank_sum for m in out]
        assert keys == sorted(keys)

    def test_variance_criterion_order(self):
        ps = small_portions()
        cands = [make_candidate(ps, [k, k + 12], (0, k, 100 + k)) for k in range(0, 12, 4)]
        out = post_process(cands, "variance", ps)
        v = [m.candidate.variance for m in out]
        assert v == sorted(v, reverse=True)

    def test_bad_criterion(self):
        with pytest.raises(InputError):
            post_process([], "median", small_portions())


class TestVariance:
    def test_constant(self):
        ps = create_portions(CurveSet.from_arrays([[3.0] * 6, [3.0] * 6]), 6)
        assert motif_variance(make_candidate(ps, [0, 1], (0, 0, 0)), ps) == 0.0

    def test_two_point(self):
        ps = create_portions(CurveSet.from_arrays([[0.0, 1.0, 0.0], [0.0, 1.0, 0.0]]), 3)
        # mean curve [0, 1, 0]
        assert motif_variance(make_candidate(ps, [0, 1], (0, 0, 0)), ps) == pytest.approx(2 / 9)

    def test_mean_curve(self):
        ps = create_portions(CurveSet.from_arrays([[0.0, 2, 2, 4], [2.0, 2, 4, 4]]), 4)
        # mean curve [1, 2, 3, 4]
        assert motif_variance(make_candidate(ps, [0, 1], (0, 0, 0)), ps) == pytest.approx(1.25)


@pytest.fixture(scope="module")
def simulated():
    curves, truth = simulate(SimulationConfig(curve_points=1201, n_motifs=2, occurrences=5, rng_seed=4))
    return curves, truth, discover(curves, truth.length_points, 4)


class TestPipeline:
    def test_seed_invariants(self, simulated):
        _, _, res = simulated
        tree = res.tree
        for sub in res.forest:
            if sub.size < 4:
                continue
            seeds = find_seeds(tree, sub, 4)
            for s in seeds:
                a, b = tree.children(s)
                assert tree.sizes[s] >= 4 and tree.sizes[a] < 4 and tree.sizes[b] < 4
            fams = [set(family(s, tree, sub, seeds)) for s in seeds]
            for i in range(len(fams)):
                for j in range(i + 1, len(fams)):
                    assert not fams[i] & fams[j]

    def test_candidates_are_family_members(self, simulated):
        _, _, res = simulated
        for c in res.candidates:
            s, seed, node = c.source
            sub = res.forest.subtrees[s]
            seeds = find_seeds(res.tree, sub, 4)
            assert node in family(seed, res.tree, sub, seeds)
            assert c.portion_ids.tolist() == res.tree.leaves(node).tolist()
            assert c.cardinality >= 4

    def test_motifs_are_acolyte_free(self, simulated):
        _, _, res = simulated
        refs = res.portions.refs
        for m in res.motifs:
            ids = m.candidate.portion_ids
            assert not any(are_acolytes(refs[i], refs[j]) for i in ids for j in ids if i < j)

    def test_finds_embedded_motifs(self, simulated):
        from funbialign.simulation import evaluate

        _, truth, res = simulated
        report = evaluate(res.to_json(), truth)
        assert all(m.correct >= 4 for m in report.motifs)

    def test_json_shape(self, simulated):
        _, _, res = simulated
        rec = res.to_json(1)
        assert len(rec) == 1
        assert set(rec[0]) >= {"final_rank", "h", "h_adjusted", "cardinality", "portions", "rank_sum"}

    def test_recommend_single(self, balanced):
        ps = create_portions(CurveSet.from_arrays(np.random.default_rng(0).normal(size=(8, 4))), 4)
        c = recommend([12], balanced, ps, (0, 12))
        assert c.portion_ids.tolist() == [0, 1, 2, 3] and c.node == 12

    def test_invalid_n_min(self, simulated):
        curves, truth, res = simulated
        with pytest.raises(InputError):
            collect_candidates(res.forest, res.portions, 1)
        with pytest.raises(InputError):
            discover(curves, truth.length_points, 4, criterion="nope")


@pytest.mark.slow
def test_low_noise_candidates_contain_every_motif():
    from funbialign.simulation import evaluate

    curves, truth = simulate(SimulationConfig(sigmas=(0.1,), rng_seed=0))
    res = discover(curves, truth.length_points, 6)
    cands = [
        [(int(res.portions.curve_index[j]), int(res.portions.start[j])) for j in c.portion_ids]
        for c in res.candidates
    ]
    # every embedded motif has a candidate matching all of its occurrences
    report = evaluate(cands, truth)
    assert all(m.correct == 8 and m.missing == 0 for m in report.motifs)
