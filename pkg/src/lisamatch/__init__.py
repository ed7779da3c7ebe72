"""Spectral graph matching: LiSA and the SM / SM-KB baselines."""

from .assign import brute_force_lap, greedy_discretize, one_dim_assign
from .core import (AffinityMatrix, BreakdownError, DegenerateInputError, DimensionError,
                   DomainError, GraphInstance, GraphKind, GraphMatchingError, Matching,
                   ParseError, PointSet, SizeLimitError, SpectralScores, affinity_score,
                   kb_discrepancy, validate_matching)
from .matchers import MatchResult, lisa_match, sm_match, smkb_match
from .spectral import (EigenPairEstimate, PowerConfig, eigengap, perturbation_bound,
                       power_method, second_eigenpair)

__version__ = "0.1.0"

__all__ = [
    "AffinityMatrix", "BreakdownError", "DegenerateInputError", "DimensionError", "DomainError",
    "EigenPairEstimate", "GraphInstance", "GraphKind", "GraphMatchingError", "MatchResult",
    "Matching", "ParseError", "PointSet", "PowerConfig", "SizeLimitError", "SpectralScores",
    "affinity_score", "brute_force_lap", "eigengap", "greedy_discretize", "kb_discrepancy",
    "lisa_match", "one_dim_assign", "perturbation_bound", "power_method", "second_eigenpair",
    "sm_match", "smkb_match", "validate_matching",
]
