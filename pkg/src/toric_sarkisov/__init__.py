"""Exact toric engine for the D-MMP, two-dimensional geography of models and Sarkisov links."""

from .divisors import (
    canonical_divisor,
    is_ample,
    is_nef,
    is_terminal,
    pair_singularity,
    pullback_compare,
    section_polytope,
    support_function,
)
from .fan import Fan, FanError, ToricModel, fan_morphism, is_complete, is_projective, picard_number, validate_fan
from .geography import GeographySlice, SliceError, build_slice, chamber_decomposition, generic_slice
from .mmp import EngineError, MMPTrace, ample_model, run_mmp, verify_output
from .sarkisov import LinkError, SarkisovChain, SarkisovLink, factorize

__all__ = [
    "EngineError", "Fan", "FanError", "GeographySlice", "LinkError", "MMPTrace", "SarkisovChain",
    "SarkisovLink", "SliceError", "ToricModel", "ample_model", "build_slice", "canonical_divisor",
    "chamber_decomposition", "factorize", "fan_morphism", "generic_slice", "is_ample", "is_complete",
    "is_nef", "is_projective", "is_terminal", "pair_singularity", "picard_number", "pullback_compare",
    "run_mmp", "section_polytope", "support_function", "validate_fan", "verify_output",
]
