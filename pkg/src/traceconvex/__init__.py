"""Trace functionals on positive matrices: evaluation, randomized convexity
certification, entropy inequalities, and decomposition norms."""

from .errors import TraceConvexError
from .functionals import (
    ExponentPair,
    Regime,
    dilate_contraction,
    joint_power_trace,
    partial_power_norm,
    power_sum_norm,
    sandwiched_power_trace,
    skew_information,
    variational_minimizer,
    variational_objective,
)
from .convexity import (
    Counterexample,
    GapReport,
    Verdict,
    certify_regime,
    find_counterexample,
    midpoint_gap,
)
from .inequalities import (
    MinkowskiVerdict,
    entropy,
    minkowski_sides,
    minkowski_two_space,
    ssa_bridge_slopes,
    ssa_gap,
)
from .linalg import (
    DEFAULT_TOL,
    SpectralDecomposition,
    Tolerances,
    eigh,
    matrix_power,
    schatten_norm,
    support_power,
    trace_x_log_x,
    validate_psd,
)
from .norms import (
    BlockEmbedding,
    Decomposition,
    OptimizerBudget,
    block_embed,
    jordan_decomposition,
    lqlp_general_norm,
    lqlp_selfadjoint_norm,
    unitary_mix_deviation,
)
from .tensorops import (
    LabeledMatrix,
    TensorSpace,
    average_over_signed_perms,
    kron_labeled,
    labeled,
    partial_trace,
    permute_factors,
    signed_permutations,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TraceConvexError",
    "ExponentPair",
    "Regime",
    "power_sum_norm",
    "partial_power_norm",
    "sandwiched_power_trace",
    "variational_objective",
    "variational_minimizer",
    "joint_power_trace",
    "dilate_contraction",
    "skew_information",
    "GapReport",
    "Counterexample",
    "Verdict",
    "midpoint_gap",
    "certify_regime",
    "find_counterexample",
    "MinkowskiVerdict",
    "entropy",
    "ssa_gap",
    "ssa_bridge_slopes",
    "minkowski_sides",
    "minkowski_two_space",
    "Tolerances",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "eigh",
    "matrix_power",
    "support_power",
    "schatten_norm",
    "trace_x_log_x",
    "validate_psd",
    "OptimizerBudget",
    "Decomposition",
    "BlockEmbedding",
    "jordan_decomposition",
    "lqlp_selfadjoint_norm",
    "lqlp_general_norm",
    "block_embed",
    "unitary_mix_deviation",
    "TensorSpace",
    "LabeledMatrix",
    "labeled",
    "kron_labeled",
    "partial_trace",
    "permute_factors",
    "signed_permutations",
    "average_over_signed_perms",
]
