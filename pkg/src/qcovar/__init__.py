"""Non-commutative covariance matrices and extremal density decompositions."""

from .config import DEFAULT, Tolerances
from .covariance import (
    center,
    concavity_defect,
    covariance,
    expectations,
    in_feasible_set,
    semi_inner,
    shift,
)
from .decomposition import (
    ExtremalDecomposition,
    SplitResult,
    decompose,
    max_steps,
    split_once,
    verify,
    verify_decomposition,
)
from .extremality import (
    ExtremalityReport,
    Perturbation,
    compress,
    find_perturbation,
    is_extreme,
    is_extreme_sandwich,
    rank_bound,
)
from .hermitian import (
    FactoredDensity,
    as_density,
    as_hermitian,
    as_observables,
    devectorize,
    factor,
    is_psd,
    real_span_rank,
    vectorize,
)

__version__ = "0.1.0"
