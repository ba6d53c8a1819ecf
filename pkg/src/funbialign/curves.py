"""Curves, portions and the acolyte relation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    CurveTooShort,
    EmptyCurveSet,
    IndexOutOfRange,
    InvalidCurve,
    InvalidLength,
)

MIN_PORTION_LENGTH = 3


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """One curve sampled on an equispaced grid ``origin + k * grid_step``."""

    id: str
    values: np.ndarray
    grid_step: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size < 2:
            raise InvalidCurve(f"InvalidCurve: curve {self.id!r} needs at least 2 samples")
        if not np.all(np.isfinite(values)):
            raise InvalidCurve(f"InvalidCurve: curve {self.id!r} contains non-finite samples")
        if not (self.grid_step > 0 and math.isfinite(self.grid_step)):
            raise InvalidCurve(f"InvalidCurve: curve {self.id!r} has grid_step {self.grid_step}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "grid_step", float(self.grid_step))
        object.__setattr__(self, "origin", float(self.origin))

    def __len__(self) -> int:
        return self.values.size

    @property
    def grid(self) -> np.ndarray:
        return self.origin + self.grid_step * np.arange(self.values.size)


@dataclass(frozen=True, eq=False)
class CurveSet:
    curves: tuple[SampledCurve, ...]

    def __post_init__(self):
        curves = tuple(self.curves)
        object.__setattr__(self, "curves", curves)
        ids = [c.id for c in curves]
        if len(set(ids)) != len(ids):
            raise InvalidCurve("InvalidCurve: curve ids must be unique")
        steps = {c.grid_step for c in curves}
        if len(steps) > 1:
            raise InvalidCurve(
                f"InvalidCurve: curves use different grid steps {sorted(steps)}"
            )

    @classmethod
    def from_arrays(cls, arrays: Sequence[Sequence[float]], grid_step: float = 1.0, ids=None):
        if ids is None:
            ids = [f"curve{i}" for i in range(len(arrays))]
        return cls(tuple(SampledCurve(str(i), v, grid_step) for i, v in zip(ids, arrays)))

    def __len__(self) -> int:
        return len(self.curves)

    def __getitem__(self, i: int) -> SampledCurve:
        return self.curves[i]

    @property
    def grid_step(self) -> float:
        return self.curves[0].grid_step if self.curves else 1.0

    def index_of(self, curve_id: str) -> int:
        for i, c in enumerate(self.curves):
            if c.id == curve_id:
                return i
        raise IndexOutOfRange(f"IndexOutOfRange: no curve with id {curve_id!r}")


@dataclass(frozen=True, order=True)
class PortionRef:
    curve_index: int
    start: int
    length_points: int

    @property
    def stop(self) -> int:
        return self.start + self.length_points


@dataclass(frozen=True, eq=False)
class PortionSet:
    """All windows of ``length_points`` samples, ordered by (curve, start).

    ``curve_index`` and ``start`` are parallel integer arrays; ``refs`` gives
    the same information as :class:`PortionRef` objects.
    """

    curve_set: CurveSet
    length_points: int
    curve_index: np.ndarray
    start: np.ndarray
    values: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.start.size

    def __getitem__(self, j: int) -> PortionRef:
        return PortionRef(int(self.curve_index[j]), int(self.start[j]), self.length_points)

    @property
    def refs(self) -> list[PortionRef]:
        return [self[j] for j in range(len(self))]

    @property
    def portions(self) -> list[PortionRef]:
        return self.refs


def create_portions(curves: CurveSet, length_points: int) -> PortionSet:
    if len(curves) == 0:
        raise EmptyCurveSet("EmptyCurveSet: no curves given")
    if length_points < MIN_PORTION_LENGTH:
        raise InvalidLength(
            f"InvalidLength: motif length must be at least {MIN_PORTION_LENGTH} points, got {length_points}"
        )
    for c in curves.curves:
        if len(c) < length_points:
            raise CurveTooShort(c.id, len(c), length_points)

    idx, starts, blocks = [], [], []
    for i, c in enumerate(curves.curves):
        n_i = len(c) - length_points + 1
        idx.append(np.full(n_i, i, dtype=np.int64))
        starts.append(np.arange(n_i, dtype=np.int64))
        blocks.append(np.lib.stride_tricks.sliding_window_view(c.values, length_points))
    values = np.ascontiguousarray(np.concatenate(blocks, axis=0))
    curve_index = np.concatenate(idx)
    start = np.concatenate(starts)
    for a in (values, curve_index, start):
        a.setflags(write=False)
    return PortionSet(curves, length_points, curve_index, start, values)


def overlap(a: PortionRef, b: PortionRef) -> int:
    """Number of grid points shared by two portions (0 across curves)."""
    if a.curve_index != b.curve_index:
        return 0
    return max(0, min(a.stop, b.stop) - max(a.start, b.start))


def max_acolyte_shift(length_points: int) -> int:
    # shared = l - d >= l/2  <=>  d <= l - ceil(l/2)
    return length_points - math.ceil(0.5 * length_points)


def are_acolytes(a: PortionRef, b: PortionRef) -> bool:
    if a == b or a.curve_index != b.curve_index:
        return False
    return overlap(a, b) >= 0.5 * a.length_points


def portion_values(p: PortionRef, curves: CurveSet) -> np.ndarray:
    if not 0 <= p.curve_index < len(curves):
        raise IndexOutOfRange(f"IndexOutOfRange: curve index {p.curve_index} out of range")
    values = curves[p.curve_index].values
    if p.start < 0 or p.length_points < 1 or p.stop > values.size:
        raise IndexOutOfRange(
            f"IndexOutOfRange: portion [{p.start}, {p.stop}) exceeds curve "
            f"{curves[p.curve_index].id!r} of {values.size} samples"
        )
    return values[p.start:p.stop]
