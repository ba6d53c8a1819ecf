"""B-spline curves with embedded noisy motif occurrences, and their scoring.

Random draws come from one ``numpy.random.Generator`` (PCG64) seeded once
and consumed in a fixed order: background coefficients, motif templates,
placements, vertical shifts, coefficient noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import BSpline

from .curves import CurveSet, SampledCurve
from .errors import CurveMismatch, InvalidConfig, PlacementInfeasible

PRNG_NAME = "numpy.random.PCG64"
BETA_SHAPE = 0.45


@dataclass(frozen=True)
class SimulationConfig:
    curve_points: int = 7001
    knot_spacing: int = 10
    spline_order: int = 3
    n_motifs: int = 4
    occurrences: int = 8
    motif_spans: int = 4
    sigmas: tuple[float, ...] = (0.1,)
    coeff_range: tuple[float, float] = (-15.0, 15.0)
    shift_range: tuple[float, float] = (-10.0, 10.0)
    rng_seed: int = 0

    def __post_init__(self):
        sigmas = tuple(float(s) for s in np.atleast_1d(self.sigmas))
        object.__setattr__(self, "sigmas", sigmas)
        if self.knot_spacing < 1 or self.spline_order < 1 or self.motif_spans < 1:
            raise InvalidConfig("InvalidConfig: knot spacing, order and spans must be positive")
        if self.curve_points < 2 or (self.curve_points - 1) % self.knot_spacing:
            raise InvalidConfig(
                f"InvalidConfig: curve_points - 1 = {self.curve_points - 1} is not a multiple "
                f"of the knot spacing {self.knot_spacing}"
            )
        if self.n_motifs < 0 or self.occurrences < 0:
            raise InvalidConfig("InvalidConfig: motif and occurrence counts must be >= 0")
        if len(sigmas) not in (1, self.n_motifs) or any(s < 0 for s in sigmas):
            raise InvalidConfig(
                f"InvalidConfig: need 1 or {self.n_motifs} non-negative noise levels, got {len(sigmas)}"
            )
        if self.motif_spans < self.degree:
            raise InvalidConfig("InvalidConfig: motif_spans must be at least the spline degree")
        lo, hi = self.coeff_range
        if not lo < hi or self.shift_range[0] > self.shift_range[1]:
            raise InvalidConfig("InvalidConfig: ranges must be increasing")

    @property
    def degree(self) -> int:
        return self.spline_order - 1

    @property
    def n_intervals(self) -> int:
        return (self.curve_points - 1) // self.knot_spacing

    @property
    def n_coefficients(self) -> int:
        return self.n_intervals + self.degree

    @property
    def motif_coefficients(self) -> int:
        return self.motif_spans + self.degree

    @property
    def length_points(self) -> int:
        return self.motif_spans * self.knot_spacing + 1

    def sigma(self, motif: int) -> float:
        return self.sigmas[0] if len(self.sigmas) == 1 else self.sigmas[motif]

    def to_json(self) -> dict:
        return {
            "curve_points": self.curve_points,
            "knot_spacing": self.knot_spacing,
            "spline_order": self.spline_order,
            "n_motifs": self.n_motifs,
            "occurrences": self.occurrences,
            "motif_spans": self.motif_spans,
            "sigmas": list(self.sigmas),
            "coeff_range": list(self.coeff_range),
            "shift_range": list(self.shift_range),
            "rng_seed": self.rng_seed,
            "prng": PRNG_NAME,
        }


@dataclass(frozen=True)
class GroundTruth:
    """Embedded occurrences as ``(curve_index, start)`` per motif."""

    occurrences: tuple[tuple[tuple[int, int], ...], ...]
    templates: tuple[tuple[float, ...], ...]
    length_points: int
    curve_ids: tuple[str, ...] = ("sim",)
    sigmas: tuple[float, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "length_points": self.length_points,
            "curve_ids": list(self.curve_ids),
            "motifs": [
                {
                    "occurrences": [
                        {"curve_id": self.curve_ids[c], "start": s} for c, s in occ
                    ],
                    "template": list(tpl),
                    "sigma": sig,
                }
                for occ, tpl, sig in zip(self.occurrences, self.templates, self.sigmas)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GroundTruth":
        ids = tuple(data["curve_ids"])
        motifs = data["motifs"]
        return cls(
            occurrences=tuple(
                tuple((ids.index(o["curve_id"]), int(o["start"])) for o in m["occurrences"])
                for m in motifs
            ),
            templates=tuple(tuple(float(v) for v in m.get("template", ())) for m in motifs),
            length_points=int(data["length_points"]),
            curve_ids=ids,
            sigmas=tuple(float(m.get("sigma", 0.0)) for m in motifs),
        )


def _beta_coefficients(rng: np.random.Generator, size, coeff_range) -> np.ndarray:
    lo, hi = coeff_range
    return lo + (hi - lo) * rng.beta(BETA_SHAPE, BETA_SHAPE, size=size)


def _place_blocks(rng: np.random.Generator, n_blocks: int, span: int, gap: int, n_intervals: int):
    """Uniformly random knot-interval starts of non-overlapping blocks."""
    slack = n_intervals - n_blocks * span - max(n_blocks - 1, 0) * gap
    if slack < 0:
        raise PlacementInfeasible(
            f"PlacementInfeasible: {n_blocks} occurrences of {span} knot intervals "
            f"(gap {gap}) do not fit in {n_intervals} intervals"
        )
    if n_blocks == 0:
        return np.empty(0, dtype=np.int64)
    picks = np.sort(rng.choice(slack + n_blocks, size=n_blocks, replace=False))
    k = np.arange(n_blocks)
    return picks - k + k * (span + gap)


def knot_vector(config: SimulationConfig) -> np.ndarray:
    length = config.curve_points - 1
    interior = np.arange(0, length + 1, config.knot_spacing, dtype=np.float64)
    d = config.degree
    return np.concatenate([np.zeros(d), interior, np.full(d, float(length))])


def evaluate_spline(coefficients: np.ndarray, config: SimulationConfig) -> np.ndarray:
    spline = BSpline(knot_vector(config), coefficients, config.degree, extrapolate=False)
    return spline(np.arange(config.curve_points, dtype=np.float64))


def simulate(config: SimulationConfig) -> tuple[CurveSet, GroundTruth]:
    rng = np.random.Generator(np.random.PCG64(config.rng_seed))
    n_occ = config.n_motifs * config.occurrences
    q = config.motif_coefficients

    coef = _beta_coefficients(rng, config.n_coefficients, config.coeff_range)
    templates = _beta_coefficients(rng, (config.n_motifs, q), config.coeff_range)
    blocks = _place_blocks(rng, n_occ, config.motif_spans, config.motif_spans, config.n_intervals)
    labels = rng.permutation(np.repeat(np.arange(config.n_motifs), config.occurrences))
    shifts = rng.uniform(*config.shift_range, size=n_occ)
    unit_noise = rng.standard_normal((n_occ, q))

    occurrences = []
    k = 0
    for m in range(config.n_motifs):
        starts = np.sort(blocks[labels == m])
        for a in starts:
            coef[a:a + q] = templates[m] + shifts[k] + config.sigma(m) * unit_noise[k]
            k += 1
        occurrences.append(tuple((0, int(a) * config.knot_spacing) for a in starts))

    values = evaluate_spline(coef, config)
    curves = CurveSet((SampledCurve("sim", values, 1.0, 0.0),))
    truth = GroundTruth(
        occurrences=tuple(occurrences),
        templates=tuple(tuple(float(v) for v in t) for t in templates),
        length_points=config.length_points,
        curve_ids=("sim",),
        sigmas=tuple(config.sigma(m) for m in range(config.n_motifs)),
    )
    return curves, truth


@dataclass(frozen=True)
class MotifEvaluation:
    motif: int
    matched_rank: int | None
    correct: int
    extra: int
    missing: int
    pairs: tuple[tuple[int, int, float], ...] = ()

    def to_json(self) -> dict:
        return {
            "motif": self.motif,
            "matched_rank": self.matched_rank,
            "correct": self.correct,
            "extra": self.extra,
            "missing": self.missing,
            "pairs": [
                {"true_start": t, "found_start": f, "overlap": o} for t, f, o in self.pairs
            ],
        }


@dataclass(frozen=True)
class EvaluationReport:
    motifs: tuple[MotifEvaluation, ...]

    def to_json(self) -> dict:
        return {"motifs": [m.to_json() for m in self.motifs]}

    def table(self) -> str:
        lines = [f"{'motif':>5} {'rank':>5} {'correct':>7} {'extra':>5} {'missing':>7}"]
        for m in self.motifs:
            rank = "-" if m.matched_rank is None else str(m.matched_rank)
            lines.append(f"{m.motif:>5} {rank:>5} {m.correct:>7} {m.extra:>5} {m.missing:>7}")
        return "\n".join(lines)


def _match(true_occ, found, length: int, threshold: float):
    """Greedy one-to-one matching by decreasing overlap."""
    candidates = []
    for a, (ct, st) in enumerate(true_occ):
        for b, (cf, sf) in enumerate(found):
            if ct != cf:
                continue
            shared = max(0, length - abs(st - sf))
            if shared >= threshold * length:
                candidates.append((-shared, a, b))
    candidates.sort()
    used_t, used_f, pairs = set(), set(), []
    for neg, a, b in candidates:
        if a in used_t or b in used_f:
            continue
        used_t.add(a)
        used_f.add(b)
        pairs.append((true_occ[a][1], found[b][1], -neg / length))
    pairs.sort()
    return pairs


def _as_portion_lists(discovered, curve_ids: Sequence[str], length: int):
    out = []
    for motif in discovered:
        portions = motif["portions"] if isinstance(motif, dict) else motif
        refs = []
        for p in portions:
            if isinstance(p, dict):
                cid, start, plen = p["curve_id"], int(p["start"]), int(p.get("length", length))
            else:
                cid, start = p[0], int(p[1])
                plen = length
            if isinstance(cid, str):
                if cid not in curve_ids:
                    raise CurveMismatch(f"CurveMismatch: unknown curve id {cid!r}")
                cid = list(curve_ids).index(cid)
            if plen != length:
                raise CurveMismatch(
                    f"CurveMismatch: motif length {plen} differs from the embedded length {length}"
                )
            refs.append((int(cid), start))
        out.append(refs)
    return out


def evaluate(discovered, truth: GroundTruth, match_threshold: float = 0.5) -> EvaluationReport:
    """Count correct, extra and missing occurrences for every embedded motif.

    ``discovered`` is a ranked sequence of motifs, each given as its output
    JSON record or as a list of ``(curve, start)`` pairs.  Every embedded
    motif is matched to the discovered motif recovering the most of its
    occurrences (fewer extras, then better rank, break ties).
    """
    length = truth.length_points
    found = _as_portion_lists(discovered, truth.curve_ids, length)
    results = []
    for m, occ in enumerate(truth.occurrences):
        best = None
        for r, portions in enumerate(found):
            pairs = _match(list(occ), portions, length, match_threshold)
            key = (len(pairs), -(len(portions) - len(pairs)), -r)
            if pairs and (best is None or key > best[0]):
                best = (key, r, pairs, len(portions))
        if best is None:
            results.append(MotifEvaluation(m, None, 0, 0, len(occ)))
            continue
        _, r, pairs, card = best
        results.append(
            MotifEvaluation(m, r + 1, len(pairs), card - len(pairs), len(occ) - len(pairs), tuple(pairs))
        )
    return EvaluationReport(tuple(results))
