"""Signal-space greedy recovery for signals sparse in redundant
dictionaries, with block-sparse variants, near-optimal projection schemes,
isometry-constant probes and a Monte Carlo benchmark harness."""

__version__ = "0.1.0"

from .backend import kernel_backend
from .core import (
    Dictionary,
    SensingMatrix,
    Signal,
    SparseCoefficients,
    Support,
    block_atoms,
    complement_projection,
    constrained_least_squares,
    project_onto_range,
    restrict_columns,
)
from .generate import (
    ExperimentSeed,
    awgn,
    clustered_block_coeffs,
    gaussian_sensing,
    overcomplete_dft,
)
from .rip import RipEstimate, exact_drip, sampled_drip_lower_bound, verify_rip_lemmas
from .selectors import (
    BompSelector,
    BruteForceSelector,
    EpsBompSelector,
    NearOptimalityReport,
    OmpSelector,
    SupportSelector,
    ThresholdingSelector,
    bomp_selector,
    eps_bomp_selector,
    epsilon_block_extension,
    estimate_near_optimality,
    omp_selector,
    optimal_selector_bruteforce,
    thresholding_selector,
)
from .solver import (
    HaltingPolicy,
    RecoveryProblem,
    SolverTrace,
    correlate_residual,
    sscosamp,
)
from .theory import (
    NoiseBoundParams,
    TheoryConstants,
    check_convergence_condition,
    epsilon_threshold,
    iteration_constants,
    noise_projection_bound,
    oracle_error_bounds,
    oracle_estimate,
    t_star,
    worst_noise_support,
)

__all__ = [
    "Dictionary", "SensingMatrix", "Signal", "SparseCoefficients", "Support",
    "block_atoms", "restrict_columns", "project_onto_range",
    "complement_projection", "constrained_least_squares",
    "SupportSelector", "BruteForceSelector", "ThresholdingSelector",
    "OmpSelector", "BompSelector", "EpsBompSelector", "NearOptimalityReport",
    "optimal_selector_bruteforce", "thresholding_selector", "omp_selector",
    "bomp_selector", "eps_bomp_selector", "epsilon_block_extension",
    "estimate_near_optimality",
    "RecoveryProblem", "HaltingPolicy", "SolverTrace", "sscosamp",
    "correlate_residual",
    "TheoryConstants", "NoiseBoundParams", "oracle_estimate",
    "oracle_error_bounds", "check_convergence_condition", "epsilon_threshold",
    "iteration_constants", "t_star", "noise_projection_bound",
    "worst_noise_support",
    "RipEstimate", "exact_drip", "sampled_drip_lower_bound", "verify_rip_lemmas",
    "ExperimentSeed", "gaussian_sensing", "overcomplete_dft",
    "clustered_block_coeffs", "awgn",
    "kernel_backend",
]
