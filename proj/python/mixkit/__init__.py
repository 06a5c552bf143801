"""Bayesian finite mixtures: exact conjugate enumeration, MCMC samplers,
relabeling and marginal-likelihood estimation on top of the C++ core."""

from ._mixkit import (
    ChainConfig,
    ComponentFamily,
    DataError,
    Dataset,
    NumericalError,
    PriorSpec,
    ResourceError,
    Trace,
    UnsupportedFamilyError,
    UsageError,
    ValidationError,
    chib,
    exact_evidence,
    exact_summary,
    exact_weight_posterior,
    family,
    gelfand_dey,
    load_binary_matrix,
    load_counts,
    load_multinomial_rows,
    load_univariate,
    point_estimates,
    prior_monte_carlo,
    read_trace_csv,
    reorder_trace,
    sample,
    simulate_t_benchmark,
    write_trace_csv,
)

__all__ = [
    "ChainConfig",
    "ComponentFamily",
    "DataError",
    "Dataset",
    "NumericalError",
    "PriorSpec",
    "ResourceError",
    "Trace",
    "UnsupportedFamilyError",
    "UsageError",
    "ValidationError",
    "chib",
    "exact_evidence",
    "exact_summary",
    "exact_weight_posterior",
    "family",
    "gelfand_dey",
    "load_binary_matrix",
    "load_counts",
    "load_multinomial_rows",
    "load_univariate",
    "point_estimates",
    "prior_monte_carlo",
    "read_trace_csv",
    "reorder_trace",
    "sample",
    "simulate_t_benchmark",
    "standardize",
    "write_trace_csv",
]

__version__ = "0.1.0"


def standardize(data):
    """Center a univariate real dataset at its mean and scale by the sample
    standard deviation."""
    values = list(data.reals)
    n = len(values)
    if n < 2:
        raise UsageError("standardize needs at least two observations")
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    sd = var**0.5
    if sd == 0.0:
        raise UsageError("standardize: constant sample")
    return Dataset.univariate_real([(v - mean) / sd for v in values])
