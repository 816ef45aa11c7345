"""Greedy 10-adic powers of two with long runs of zeros."""

from .forceability import ForceabilityReport, classify, is_beta_forceable, verify_corollaries, verify_record
from .greedy_engine import ExpansionState, GreedyEngine, RunRecord, force_zeros, initial_state, next_term, run
from .residue_core import (
    DecimalResidue,
    DomainError,
    ExponentClass,
    candidate_digits,
    lift_class,
    min_representative,
    pow2_mod,
    same_power_residue,
    step_factor,
)
from .stats_report import digit_frequency, digit_gap_matrix, gap_histogram, model_expected_gap

__version__ = "0.1.0"

__all__ = [
    "DecimalResidue", "DomainError", "ExpansionState", "ExponentClass", "ForceabilityReport",
    "GreedyEngine", "RunRecord", "candidate_digits", "classify", "digit_frequency",
    "digit_gap_matrix", "force_zeros", "gap_histogram", "initial_state", "is_beta_forceable",
    "lift_class", "min_representative", "model_expected_gap", "next_term", "pow2_mod", "run",
    "same_power_residue", "step_factor", "verify_corollaries", "verify_record",
]
