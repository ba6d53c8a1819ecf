"""Exception hierarchy.

Input problems derive from :class:`InputError` (CLI exit status 1); broken
internal invariants derive from :class:`InvariantError` (exit status 2).
"""


class FunbialignError(Exception):
    pass


class InputError(FunbialignError, ValueError):
    pass


class InvariantError(FunbialignError, RuntimeError):
    pass


class EmptyCurveSet(InputError):
    pass


class InvalidCurve(InputError):
    pass


class CurveTooShort(InputError):
    def __init__(self, curve_id, n_samples, length_points):
        self.curve_id = curve_id
        super().__init__(
            f"CurveTooShort: curve {curve_id!r} has {n_samples} samples, "
            f"fewer than the motif length {length_points}"
        )


class InvalidLength(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class TooFewPortions(InputError):
    pass


class LengthMismatch(InputError):
    pass


class NonFiniteInput(InputError):
    pass


class InvalidCardinality(InputError):
    pass


class CardinalityTooLarge(InputError):
    pass


class SinglePortion(InputError):
    pass


class InconsistentTree(InvariantError):
    pass


class InvalidConfig(InputError):
    pass


class PlacementInfeasible(InputError):
    pass


class CurveMismatch(InputError):
    pass


class MalformedInput(InputError):
    pass
