"""Functional mean squared residue (fMSR) scores.

Portions are rows of an ``n_Q x l`` matrix sampled on a common grid; the
integral over the motif domain is the arithmetic mean over grid points, so
the score is the mean squared double-centred residual of that matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CardinalityTooLarge,
    InvalidCardinality,
    InvariantError,
    LengthMismatch,
    NonFiniteInput,
    TooFewPortions,
)

NEGATIVE_FLOOR = 1e-12
MAX_ORACLE_CARDINALITY = 12


@dataclass(frozen=True)
class MotifScore:
    h: float
    h_adjusted: float
    cardinality: int


@dataclass(frozen=True)
class SubMotifAverages:
    by_size: dict[int, float]

    def ratio(self, n: int, m: int = 1) -> float:
        return self.by_size[n + m] / self.by_size[n]


def as_portion_matrix(portions) -> np.ndarray:
    if isinstance(portions, np.ndarray):
        if portions.ndim != 2:
            raise LengthMismatch("LengthMismatch: portions must form a 2-D array")
        X = portions.astype(np.float64, copy=False)
    else:
        rows = [np.asarray(p, dtype=np.float64).ravel() for p in portions]
        if len({r.size for r in rows}) > 1:
            raise LengthMismatch("LengthMismatch: portions have different lengths")
        X = np.array(rows, dtype=np.float64).reshape(len(rows), -1)
    if X.shape[0] < 2:
        raise TooFewPortions(f"TooFewPortions: need at least 2 portions, got {X.shape[0]}")
    if X.shape[1] < 1:
        raise LengthMismatch("LengthMismatch: portions are empty")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("NonFiniteInput: portions contain non-finite values")
    return X


def _clamp(h: float) -> float:
    if h < 0.0:
        if h < -NEGATIVE_FLOOR:
            raise InvariantError(f"fMSR evaluated to {h!r} < 0")
        return 0.0
    return h


def fmsr(portions) -> float:
    """fMSR ``H(Q)`` of a set of aligned portions (rows)."""
    X = as_portion_matrix(portions)
    row_means = X.mean(axis=1, keepdims=True)
    col_means = X.mean(axis=0, keepdims=True)
    residual = X - row_means - col_means + X.mean()
    return _clamp(float(np.mean(residual * residual)))


def adjustment_factor(n: int) -> float:
    """Product of ``r^2 / (r^2 - 1)`` for ``r = 2 .. n-1`` (1 when ``n == 2``)."""
    if int(n) != n or n < 2:
        raise InvalidCardinality(f"InvalidCardinality: cardinality must be >= 2, got {n}")
    factor = 1.0
    for r in range(2, int(n)):
        factor *= r * r / (r * r - 1.0)
    return factor


def fmsr_adjusted(portions) -> MotifScore:
    X = as_portion_matrix(portions)
    h = fmsr(X)
    n = X.shape[0]
    return MotifScore(h=h, h_adjusted=h / adjustment_factor(n), cardinality=n)


def dissimilarity(p1, p2) -> float:
    """Adjusted fMSR of the two-portion motif ``{p1, p2}``."""
    return fmsr_adjusted([p1, p2]).h_adjusted


def submotif_averages(portions) -> SubMotifAverages:
    """Mean fMSR over every size-``n`` subset, by exhaustive enumeration."""
    X = as_portion_matrix(portions)
    n_q = X.shape[0]
    if n_q > MAX_ORACLE_CARDINALITY:
        raise CardinalityTooLarge(
            f"CardinalityTooLarge: {n_q} portions exceed the enumeration limit {MAX_ORACLE_CARDINALITY}"
        )
    by_size = {}
    for n in range(2, n_q + 1):
        scores = [fmsr(X[list(subset)]) for subset in itertools.combinations(range(n_q), n)]
        by_size[n] = math.fsum(scores) / len(scores)
    return SubMotifAverages(by_size)


def bias_deviation(averages: SubMotifAverages) -> float:
    """Largest relative gap between observed and predicted sub-motif growth.

    Checks both the one-step ratio ``n^2 / (n^2 - 1)`` and that the
    bias-corrected averages stay at the size-2 level.
    """
    sizes = sorted(averages.by_size)
    base = averages.by_size[2]
    worst = 0.0
    for n in sizes[:-1]:
        expected = n * n / (n * n - 1.0)
        worst = max(worst, abs(averages.ratio(n) / expected - 1.0))
    for n in sizes:
        corrected = averages.by_size[n] / adjustment_factor(n)
        worst = max(worst, abs(corrected - base) / base)
    return worst


def verify_bias(cardinality: int, length: int, trials: int, seed: int) -> float:
    """Maximum relative deviation from the sub-motif growth law over random motifs.

    Motif entries are i.i.d. uniform on [-1, 1].
    """
    if cardinality < 3:
        raise InvalidCardinality("InvalidCardinality: the growth law needs cardinality >= 3")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        X = rng.uniform(-1.0, 1.0, size=(cardinality, length))
        worst = max(worst, bias_deviation(submotif_averages(X)))
    return worst
