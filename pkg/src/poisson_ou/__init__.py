"""Exact and Monte Carlo analysis of functionals of Poisson count vectors.

The package models a finite atomic intensity measure, the add-one-cost
difference operators, and the associated Ornstein-Uhlenbeck semigroup in
its thinning-plus-refresh form, and checks a family of functional
inequalities (Poincare, modified log-Sobolev, hypercontractivity,
L1-L2 variance bounds, concentration) either exactly on a truncated
state space or by simulation.
"""

from .errors import (
    BudgetExceededError,
    CapOverflowError,
    NegativeValueError,
    NonFiniteValueError,
    PoissonOUError,
    PreconditionError,
)
from .ground import (
    Configuration,
    GroundSpace,
    TruncatedStateSpace,
    check_mecke,
    poisson_law,
    sample_configuration,
    sample_configurations,
)
from .functionals import (
    Functional,
    add_one_cost,
    affine,
    certify_monotonicity,
    constant,
    from_rule,
    from_table,
    gamma_expectation,
    second_difference,
)
from .semigroup import (
    SemigroupEngine,
    apply_semigroup,
    commutation_check,
    expectation,
    generator_check,
    generator_table,
    integrated_gradient_check,
    lp_norm,
    mean_preservation_check,
    ou_kernel_1d,
    pointwise_gradient_check,
    semigroup_property_check,
    symmetry_check,
    variance,
)
from .inequalities import (
    check_concentration,
    check_entropy_power,
    check_lsi_failure,
    check_min_form_lsi,
    check_modified_lsi,
    check_pathwise_lemma,
    check_poincare,
    check_restricted_hypercontractivity,
    check_talagrand,
    check_weak_hypercontractivity,
    entropy,
    l1_variance_bound,
    lsi_failure_ratios,
    pathwise_lemma_sides,
    pathwise_lemma_sweep,
    talagrand_bound,
)
from .casestudies import (
    MaximaModel,
    counterexample_fk,
    counterexample_scan,
    exponential_functional,
    indicator_family,
    maxima_closed_forms,
    maxima_monte_carlo,
    near_optimality_scan,
    near_optimality_sides,
    one_dim_bound_comparison,
    one_dim_cumulative,
    talagrand_crosscheck,
)
from .dsl import DslError, functional_from_text, parse, serialize
from .reports import (
    HOLDS,
    HOLDS_STAT,
    HYPOTHESIS_NOT_MET,
    VIOLATED,
    InequalityReport,
    LpNorm,
    MonotonicityCertificate,
    make_report,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CapOverflowError",
    "Configuration",
    "DslError",
    "Functional",
    "GroundSpace",
    "HOLDS",
    "HOLDS_STAT",
    "HYPOTHESIS_NOT_MET",
    "InequalityReport",
    "LpNorm",
    "MaximaModel",
    "MonotonicityCertificate",
    "NegativeValueError",
    "NonFiniteValueError",
    "PoissonOUError",
    "PreconditionError",
    "SemigroupEngine",
    "TruncatedStateSpace",
    "VIOLATED",
    "add_one_cost",
    "affine",
    "apply_semigroup",
    "certify_monotonicity",
    "check_concentration",
    "check_entropy_power",
    "check_lsi_failure",
    "check_mecke",
    "check_min_form_lsi",
    "check_modified_lsi",
    "check_pathwise_lemma",
    "check_poincare",
    "check_restricted_hypercontractivity",
    "check_talagrand",
    "check_weak_hypercontractivity",
    "commutation_check",
    "constant",
    "counterexample_fk",
    "counterexample_scan",
    "entropy",
    "expectation",
    "exponential_functional",
    "from_rule",
    "from_table",
    "functional_from_text",
    "gamma_expectation",
    "generator_check",
    "generator_table",
    "indicator_family",
    "integrated_gradient_check",
    "l1_variance_bound",
    "lp_norm",
    "lsi_failure_ratios",
    "make_report",
    "maxima_closed_forms",
    "maxima_monte_carlo",
    "mean_preservation_check",
    "near_optimality_scan",
    "near_optimality_sides",
    "one_dim_bound_comparison",
    "one_dim_cumulative",
    "ou_kernel_1d",
    "parse",
    "pathwise_lemma_sides",
    "pathwise_lemma_sweep",
    "pointwise_gradient_check",
    "poisson_law",
    "sample_configuration",
    "sample_configurations",
    "second_difference",
    "semigroup_property_check",
    "serialize",
    "symmetry_check",
    "talagrand_bound",
    "talagrand_crosscheck",
    "variance",
]
