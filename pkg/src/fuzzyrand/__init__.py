"""Fuzzy-extended Rand indices with chance adjustment.

Compares two cluster allocations (hard or fuzzy membership matrices) by
the mean pairwise concordance (NDC or Brouwer), then adjusts for chance
under a choice of random models: permutation, categorical, uniform
partition (num/all), or Dirichlet models fitted to the observed data
(fit/sym/flat), one- or two-sided, via closed forms where available and
a seeded Monte-Carlo expectation engine otherwise.
"""

from .adjust import (
    AdjustedResult,
    BatchCell,
    ModelFamily,
    RandomModel,
    Sided,
    adjusted_batch,
    adjusted_index,
)
from .dirichlet import (
    CategoricalParams,
    DirichletParams,
    build_model,
    fit_mle,
    log_pdf,
    sample,
)
from .errors import (
    CapabilityError,
    DegenerateAdjustmentError,
    FitNonConvergenceError,
    FuzzyRandError,
    NumericalError,
    ParseError,
    UsageError,
    ValidationError,
)
from .expectation import (
    ExpectationEstimate,
    McConfig,
    expected_conc_one_sided,
    expected_conc_perm,
    expected_conc_two_sided,
)
from .hard_models import (
    ClusterSizes,
    ProportionVector,
    expected_ri_all,
    expected_ri_cat,
    expected_ri_num,
    expected_ri_perm,
    expected_ri_perm_exact,
)
from .indices import (
    IndexKind,
    agreement_brouwer,
    agreement_ndc,
    concordance,
    pair_agreements,
    raw_index,
)
from .membership import (
    Classification,
    MembershipMatrix,
    classify,
    harden,
    read_csv,
    require_simplex,
    write_csv,
)
from .synth import FactorialParams, ToyAllocations, generate_pair, toy_allocations

__version__ = "0.1.0"

__all__ = [
    "AdjustedResult",
    "BatchCell",
    "CapabilityError",
    "CategoricalParams",
    "Classification",
    "ClusterSizes",
    "DegenerateAdjustmentError",
    "DirichletParams",
    "ExpectationEstimate",
    "FactorialParams",
    "FitNonConvergenceError",
    "FuzzyRandError",
    "IndexKind",
    "McConfig",
    "MembershipMatrix",
    "ModelFamily",
    "NumericalError",
    "ParseError",
    "ProportionVector",
    "RandomModel",
    "Sided",
    "ToyAllocations",
    "UsageError",
    "ValidationError",
    "adjusted_batch",
    "adjusted_index",
    "agreement_brouwer",
    "agreement_ndc",
    "build_model",
    "classify",
    "concordance",
    "expected_conc_one_sided",
    "expected_conc_perm",
    "expected_conc_two_sided",
    "expected_ri_all",
    "expected_ri_cat",
    "expected_ri_num",
    "expected_ri_perm",
    "expected_ri_perm_exact",
    "fit_mle",
    "generate_pair",
    "harden",
    "log_pdf",
    "pair_agreements",
    "raw_index",
    "read_csv",
    "require_simplex",
    "sample",
    "toy_allocations",
    "write_csv",
]
