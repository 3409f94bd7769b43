"""qmean: exact distributions, error criteria, and bound checks for
quantum and classical Boolean-mean estimation."""

from .combinat import WeightClass, class_count, log_binomial, mean
from .estimators import (
    EstimatorSpec,
    OutcomeDistribution,
    PartialFnSpec,
    ae_distribution,
    ae_unitary_oracle,
    classical_bernoulli,
    constant_half,
    distinguisher,
    median_of_reps,
    total_variation,
)
from .errors import (
    ErrorReport,
    avg_expected_error,
    avg_prob_error,
    count_scaled,
    expected_error,
    markov_quantile_bound,
    quantile_error,
    worst_expected_error,
    worst_prob_error,
)
from .measures import (
    IndexWindow,
    SymmetricMeasure,
    load_measure,
    measure_class_condition,
    uniform_inputs,
    uniform_means,
)
from .bounds import (
    BoundCheck,
    central_binomial_floor_check,
    central_binomial_floor_grid,
    const_alg_error_exact,
    floor_sweep,
    nayakwu_degree_bound,
    ratio_band,
)
from .polymethod import (
    UnivariatePolyValues,
    acceptance_poly_of_distinguisher,
    min_degree_lp,
    minimal_degree,
    symmetrize,
)

__version__ = "0.1.0"

__all__ = [
    "WeightClass",
    "class_count",
    "log_binomial",
    "mean",
    "EstimatorSpec",
    "OutcomeDistribution",
    "PartialFnSpec",
    "ae_distribution",
    "ae_unitary_oracle",
    "classical_bernoulli",
    "constant_half",
    "distinguisher",
    "median_of_reps",
    "total_variation",
    "ErrorReport",
    "avg_expected_error",
    "avg_prob_error",
    "count_scaled",
    "expected_error",
    "markov_quantile_bound",
    "quantile_error",
    "worst_expected_error",
    "worst_prob_error",
    "IndexWindow",
    "SymmetricMeasure",
    "load_measure",
    "measure_class_condition",
    "uniform_inputs",
    "uniform_means",
    "BoundCheck",
    "central_binomial_floor_check",
    "central_binomial_floor_grid",
    "const_alg_error_exact",
    "floor_sweep",
    "nayakwu_degree_bound",
    "ratio_band",
    "UnivariatePolyValues",
    "acceptance_poly_of_distinguisher",
    "min_degree_lp",
    "minimal_degree",
    "symmetrize",
]
