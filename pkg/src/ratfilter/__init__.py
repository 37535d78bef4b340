"""Rational filters for interior Hermitian eigenproblems, designed by
weighted least-squares optimization."""

from .errors import *  # noqa: F401,F403
from .filters import (
    CPFilter, FullFilter, IntervalMap, evaluate, evaluate_derivative,
    expand_cp, reduce_to_cp, map_interval, local_extrema,
)
from .weights import (
    WeightFunction, GuidelineReport, unit_weight, weight_at, normalize, h_norm_sq,
    check_guideline1, check_guideline2, check_guideline3,
)
from .objective import (
    ObjectiveValue, PenaltyConfig, residual_level, residual_level_oracle,
    gradient, steepness, penalty,
)
from .optimize import (
    OptimizerConfig, OptResult, lm_reduced_matrix, project_box,
    gradient_descent, levenberg_marquardt, optimize, backtracking_step,
)
from .seeds import ContourSpec, gauss_filter, trapezoidal_filter, elliptic_filter
from .benchmark import (
    Spectrum, BenchmarkProblem, ProfileCurve, generate_intervals,
    convergence_rate, worst_condition, performance_profile,
)
from .subspace import apply_filter, rayleigh_ritz, subspace_iteration, SubspaceResult
from .io import load_filter, save_filter, load_weight, load_fixture_filter, load_fixture_weight

__version__ = "0.1.0"
