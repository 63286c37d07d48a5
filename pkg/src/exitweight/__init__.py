"""Weight spectra, EXIT functions and BSC bounds for binary linear codes."""

from .codes import (
    BinaryCode,
    corank,
    dual,
    load_gm,
    min_distance,
    random_code,
    rank_of_subset,
    repetition_code,
    rm_code,
)
from .exit_mu import (
    CurveSamples,
    SamplingConfig,
    exit_avg,
    exit_bit,
    exit_curve,
    mu,
    mu_derivative_exact,
    threshold_estimate,
    verify_exit_identity,
)
from .spectrum import (
    BoundReport,
    WeightDistribution,
    bound_report,
    macwilliams,
    weight_distribution,
    weight_distribution_exact,
)
from .bsc import SimResult, critical_rate, simulate_bsc, union_bound

__version__ = "0.1.0"
