import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from funbialign.errors import (
    CardinalityTooLarge,
    InvalidCardinality,
    LengthMismatch,
    NonFiniteInput,
    TooFewPortions,
)
from funbialign.scoring import (
    adjustment_factor,
    bias_deviation,
    dissimilarity,
    fmsr,
    fmsr_adjusted,
    submotif_averages,
    verify_bias,
)

from oracles import naive_fmsr, product_factor

finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


def motif_matrix(n, length):
    return arrays(np.float64, (n, length), elements=finite)


class TestFmsr:
    def test_two_point_example(self):
        assert naive_fmsr([[0, 0], [0, 1]]) == 0.0625
        assert fmsr([[0, 0], [0, 1]]) == pytest.approx(0.0625, abs=1e-15)

    def test_constant_parallel_portions(self):
        assert fmsr([[3.0] * 5, [-2.0] * 5]) == 0.0

    def test_shifted_copies(self):
        rng = np.random.default_rng(3)
        beta = rng.normal(size=30)
        X = beta + rng.normal(size=(6, 1))
        assert fmsr(X) <= 1e-12

    def test_permutation_invariant(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(5, 9))
        assert fmsr(X[::-1]) == pytest.approx(fmsr(X), rel=1e-12)

    def test_errors(self):
        with pytest.raises(TooFewPortions):
            fmsr([[1, 2, 3]])
        with pytest.raises(LengthMismatch):
            fmsr([[1, 2, 3], [1, 2]])
        with pytest.raises(NonFiniteInput):
            fmsr([[1, np.inf], [1, 2]])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda n: st.integers(1, 8).flatmap(lambda l: motif_matrix(n, l))))
    def test_matches_naive_and_nonnegative(self, X):
        h = fmsr(X)
        assert h >= 0
        assert h == pytest.approx(naive_fmsr(X.tolist()), rel=1e-9, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(
        motif_matrix(4, 7),
        arrays(np.float64, (4, 1), elements=finite),
        arrays(np.float64, (1, 7), elements=finite),
        st.floats(-5, 5, allow_nan=False),
    )
    def test_invariances_and_scaling(self, X, alpha, beta, c):
        h = fmsr(X)
        assert fmsr(X + alpha + beta) == pytest.approx(h, abs=1e-8)
        assert fmsr(c * X) == pytest.approx(c * c * h, rel=1e-9, abs=1e-9)


class TestAdjustment:
    def test_values(self):
        assert adjustment_factor(2) == 1.0
        assert adjustment_factor(3) == pytest.approx(4 / 3, rel=1e-15)
        assert adjustment_factor(4) == pytest.approx(3 / 2, rel=1e-15)
        assert adjustment_factor(1000) < 2

    def test_monotone_and_bounded(self):
        values = [adjustment_factor(n) for n in range(2, 400)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert max(values) < 2
        # telescoping product: 2(n-1)/n
        assert adjustment_factor(400) == pytest.approx(2 * 399 / 400, rel=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 5, 9, 17])
    def test_matches_product(self, n):
        assert adjustment_factor(n) == pytest.approx(product_factor(n), rel=1e-14)

    @pytest.mark.parametrize("n", [1, 0, -3])
    def test_invalid(self, n):
        with pytest.raises(InvalidCardinality):
            adjustment_factor(n)


class TestAdjustedAndDissimilarity:
    def test_ideal(self):
        X = np.tile(np.sin(np.arange(10.0)), (5, 1)) + np.arange(5.0)[:, None]
        s = fmsr_adjusted(X)
        assert s.h <= 1e-12 and s.h_adjusted <= 1e-12 and s.cardinality == 5

    def test_pair(self):
        s = fmsr_adjusted([[0, 0], [0, 1]])
        assert s.h == s.h_adjusted == pytest.approx(0.0625)
        assert s.cardinality == 2

    def test_three_portions(self):
        rng = np.random.default_rng(0)
        s = fmsr_adjusted(rng.normal(size=(3, 6)))
        assert s.h_adjusted == pytest.approx(0.75 * s.h, rel=1e-14)

    def test_dissimilarity(self):
        rng = np.random.default_rng(1)
        p1, p2 = rng.normal(size=(2, 12))
        assert dissimilarity(p1, p1 + 4.2) <= 1e-12
        assert dissimilarity([0, 0], [0, 1]) == pytest.approx(0.0625)
        assert dissimilarity(p1, p2) == pytest.approx(dissimilarity(p2, p1), rel=1e-14)
        assert dissimilarity(p1, p2) == pytest.approx(naive_fmsr([p1.tolist(), p2.tolist()]), rel=1e-12)


class TestSubMotifOracle:
    def test_pair_only(self):
        X = [[0, 0], [0, 1]]
        assert submotif_averages(X).by_size == {2: pytest.approx(0.0625)}

    def test_growth_law_n5(self):
        rng = np.random.default_rng(11)
        avg = submotif_averages(rng.normal(size=(5, 10)))
        h = avg.by_size
        assert h[3] / h[2] == pytest.approx(4 / 3, rel=1e-10)
        assert h[5] == pytest.approx(h[2] * (4 / 3) * (9 / 8) * (16 / 15), rel=1e-10)

    @pytest.mark.parametrize("n_q", [4, 5, 6])
    def test_ratio_each_step(self, n_q):
        rng = np.random.default_rng(n_q)
        for _ in range(5):
            avg = submotif_averages(rng.uniform(-1, 1, size=(n_q, 15)))
            for n in range(2, n_q):
                assert avg.ratio(n) == pytest.approx(n * n / (n * n - 1), rel=1e-10)
            for n in range(2, n_q + 1):
                assert avg.by_size[n] / adjustment_factor(n) == pytest.approx(avg.by_size[2], rel=1e-10)
            assert bias_deviation(avg) < 1e-10

    def test_enumeration_is_exhaustive(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(4, 5))
        triples = [naive_fmsr(X[list(c)].tolist()) for c in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]]
        assert submotif_averages(X).by_size[3] == pytest.approx(math.fsum(triples) / 4, rel=1e-12)

    def test_guard(self):
        with pytest.raises(CardinalityTooLarge):
            submotif_averages(np.zeros((13, 3)))

    def test_verify_bias(self):
        assert verify_bias(5, 8, 5, seed=0) < 1e-10
        with pytest.raises(InvalidCardinality):
            verify_bias(2, 8, 1, seed=0)
