"""Circle-method pipeline for the Morgenstern quadratic form."""

from .delta import (
    DeltaExpansion,
    DeltaTerm,
    ErrorTerms,
    c_candidates,
    count_solutions,
    delta_expansion,
    delta_reconstruct,
    delta_reconstruct_exact,
    error_terms,
    exceptional_census,
    tls_kernel,
)
from .densities import (
    LocalDensity,
    SingularProduct,
    local_density,
    representation_count,
    singular_series_product,
    singular_series_sum,
)
from .params import CVector, MorgensternForm, SystemParams, beta_of_c
from .expsum import exp_sum_closed, exp_sum_direct, exp_sum_direct_table, exp_sum_naive
from .oscillatory import (
    BRANCHES,
    kl_argument,
    osc_branch,
    osc_integral_closed,
    osc_integral_numeric,
    osc_integral_shells,
    osc_integral_zero,
)

__all__ = [
    "BRANCHES",
    "CVector",
    "DeltaExpansion",
    "DeltaTerm",
    "ErrorTerms",
    "LocalDensity",
    "MorgensternForm",
    "SingularProduct",
    "SystemParams",
    "beta_of_c",
    "c_candidates",
    "count_solutions",
    "delta_expansion",
    "delta_reconstruct",
    "delta_reconstruct_exact",
    "error_terms",
    "exceptional_census",
    "exp_sum_closed",
    "exp_sum_direct",
    "exp_sum_direct_table",
    "exp_sum_naive",
    "kl_argument",
    "local_density",
    "osc_branch",
    "osc_integral_closed",
    "osc_integral_numeric",
    "osc_integral_shells",
    "osc_integral_zero",
    "representation_count",
    "singular_series_product",
    "singular_series_sum",
    "tls_kernel",
]
