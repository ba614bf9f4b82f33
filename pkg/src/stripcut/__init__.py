"""Strip cutting of pants decompositions of the punctured disk, with train tracks."""

from .braids import BraidParseError, BraidWord, Letter, parse_braid
from .curves import (
    ChordMulticurve,
    act,
    canonical_equal,
    chain_partition,
    intersection_number,
    reduce,
    round_curve,
    round_pants,
)
from .estimator import conjugacy_minimize, distance_estimate, relax, volume_estimate
from .strips import canonical_trace, renormalized_count, strip_cut, strip_decompose

__version__ = "0.1.0"

__all__ = [
    "BraidParseError",
    "BraidWord",
    "Letter",
    "parse_braid",
    "ChordMulticurve",
    "act",
    "canonical_equal",
    "chain_partition",
    "intersection_number",
    "reduce",
    "round_curve",
    "round_pants",
    "canonical_trace",
    "renormalized_count",
    "strip_cut",
    "strip_decompose",
    "distance_estimate",
    "volume_estimate",
    "conjugacy_minimize",
    "relax",
]
