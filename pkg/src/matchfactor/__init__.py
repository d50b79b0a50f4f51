"""Matching factor on the Birkhoff polytope.

The matching factor of a bistochastic matrix is the product over k of
||row k||^2 * ||column k||^2.  It equals 1 exactly on permutation matrices
and reaches its minimum 1/n^(2n) only at the uniform matrix.
"""

from .analysis import (
    OracleResult,
    TrajectoryRecord,
    closed_form_m_n2,
    oracle_grid_scan,
    permutation_proximity,
    power_trajectory,
)
from .bvn import BvnDecomposition, bvn_decompose, recompose, support_matching
from .errors import (
    ConvergenceError,
    DecompositionError,
    DriftError,
    InvalidInputError,
    InvalidMatrixError,
    MatchFactorError,
    MatchingError,
    NotBistochasticError,
    NotStarPositiveError,
    NumericalError,
    ZeroFactorError,
)
from .factor import (
    ExtremeClass,
    ExtremeKind,
    LemmaMode,
    LemmaVerdict,
    MatchingProfile,
    Variant,
    classify_extreme,
    lambda_k,
    lemma_predicates,
    matching_factor,
    star_lambda_k,
    star_matching_factor,
    theorem_bounds,
)
from .genmat import (
    Permutation,
    SinkhornConfig,
    SinkhornResult,
    convex_combination,
    permutation_matrix,
    random_bistochastic,
    random_permutation,
    random_star_positive,
    scale,
    sinkhorn,
    star_permutation_matrix,
    star_permutation_random,
    star_uniform,
    uniform_matrix,
)
from .matcore import (
    ClassificationReport,
    DenseMatrix,
    Marginals,
    ToleranceConfig,
    classify,
    marginals,
    new_matrix,
)

__version__ = "0.1.0"
