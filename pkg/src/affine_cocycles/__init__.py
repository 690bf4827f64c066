"""Proper affine isometric actions on sums of l^{2n} spaces, built from tent functions.

The modules mirror the construction bottom-up: :mod:`.groups` (concrete
groups), :mod:`.metric` (word length and balls), :mod:`.scaling` (iterated
logarithms), :mod:`.cocycle` (tents, blocks, the affine action) and
:mod:`.verify` (executable checks of every estimate).
"""
from .cocycle import (
    CocycleBlock,
    CocycleVector,
    Construction,
    SparseFunction,
    affine_action,
    cocycle_block,
    cocycle_vector,
    lp_norm,
    tent,
    translate,
)
from .errors import (
    BudgetExceeded,
    CocycleError,
    ConfigurationError,
    DomainError,
    GroupAxiomError,
    GroupSpecError,
)
from .groups import Word, eval_word, inv, mul, parse_group_spec, parse_word
from .metric import Ball, GrowthEstimate, LengthFunction, ball, distance, growth_constant, length
from .scaling import ScaleParams, iterlog, scale, slope, tower
from .verify import VerificationReport, VerifyConfig, divergence_partial_sums, run_full_report

__version__ = "0.1.0"
