"""Functional motif discovery with adjusted fMSR and acolyte-aware clustering."""

__version__ = "0.1.0"

from .curves import (  # noqa: E402
    CurveSet,
    PortionRef,
    PortionSet,
    SampledCurve,
    are_acolytes,
    create_portions,
    portion_values,
)
from .scoring import (  # noqa: E402
    MotifScore,
    adjustment_factor,
    dissimilarity,
    fmsr,
    fmsr_adjusted,
    submotif_averages,
)

__all__ = [
    "CurveSet",
    "MotifScore",
    "PortionRef",
    "PortionSet",
    "SampledCurve",
    "adjustment_factor",
    "are_acolytes",
    "create_portions",
    "dissimilarity",
    "fmsr",
    "fmsr_adjusted",
    "portion_values",
    "submotif_averages",
]
