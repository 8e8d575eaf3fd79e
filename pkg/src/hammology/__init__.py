"""Persistent homology of sets of strings under the Hamming distance."""

from .errors import CapExceededError, HammologyError, InputError, InvariantViolation, LPError
from .filtration import Filtration, HammingIsometry, build_filtration, dh_isomorphism, filtration_isomorphic, sublevel
from .matching import bottleneck, compare, d0, dk, dnew, register_cycles, single_bar_bottleneck
from .metrics import DiscreteString, GeneralizedString, StringSet, distance, embed, gh_distance, hamming, hausdorff
from .miniball import (
    approx_equivalent,
    d_sigma,
    is_center,
    minimal_generators,
    radius_discrete,
    radius_generalized,
)
from .persistence import BarcodeSet, classify_simplices, compute_persistence, euler_check, is_morse
from .separation import (
    choose_j,
    default_epsilon,
    equivalent_class_invariance,
    replay_separation,
    separate,
    separate_pair,
    separate_union,
)

__version__ = "0.1.0"

__all__ = [
    "BarcodeSet", "CapExceededError", "DiscreteString", "Filtration", "GeneralizedString", "HammingIsometry",
    "HammologyError", "InputError", "InvariantViolation", "LPError", "StringSet", "approx_equivalent",
    "bottleneck", "build_filtration", "choose_j", "classify_simplices", "compare", "compute_persistence", "d0",
    "d_sigma", "default_epsilon", "dh_isomorphism", "distance", "dk", "dnew", "embed", "equivalent_class_invariance",
    "euler_check", "filtration_isomorphic", "gh_distance", "hamming", "hausdorff", "is_center", "is_morse",
    "minimal_generators", "radius_discrete", "radius_generalized", "register_cycles", "replay_separation",
    "separate", "separate_pair", "separate_union", "single_bar_bottleneck", "sublevel",
]
