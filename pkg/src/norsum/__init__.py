"""Norlund summation of Taylor series in weighted Dirichlet spaces.

Library layout:

* `sequences`      determining sequences, partial sums, growth diagnostics
* `power_series`   coefficient vectors, Hadamard products, polynomial division
* `norlund`        the (generalized) Norlund operator and its multiplier form
* `dirichlet`      Hardy/weighted-Dirichlet norms and the quadrature oracle
* `operator_norms` the multiplier matrix, spectral norms, closed-form bounds
* `experiments`    experiment harness behind the `norsum` CLI
"""

from .errors import (
    BoundInapplicable,
    ConfigError,
    ConvergenceFailure,
    DegenerateFit,
    InvalidSequence,
    PointOutsideDisk,
    QuadratureNotConverged,
    RangeExceeded,
    ReferenceTooShort,
    SummabilityError,
)
from .sequences import (
    DeterminingSequence,
    GrowthReport,
    Monotonicity,
    growth_rate,
    growth_report,
    is_non_decreasing,
    parse_sequence_spec,
    partial_sum,
)
from .power_series import (
    CoefficientSeries,
    aleman_divide,
    derivative,
    evaluate,
    geometric_series,
    hadamard_product,
    parse_function_spec,
    read_coefficient_file,
    taylor_partial_sum,
    zeta2_series,
)
from .norlund import (
    NorlundOperator,
    multiplier_polynomial,
    norlund_sum,
    norlund_sum_definition,
)
from .dirichlet import (
    BOUNDARY_QUADRATURE,
    INTERIOR_QUADRATURE,
    PointMassWeight,
    QuadratureSpec,
    dirichlet_inner_product,
    dirichlet_norm,
    h2_norm_sq,
    local_dirichlet_energy,
    local_dirichlet_energy_quadrature,
    parse_weight_spec,
    weighted_dirichlet_energy,
)
from .operator_norms import (
    NorlundMatrix,
    build_matrix,
    dirichlet_operator_matrix,
    lemma_bound_upper,
    sharpness_probe,
    spectral_norm,
    thm_lower_bound,
    thm_upper_bound,
)
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    ExperimentRow,
    FitSummary,
    convergence_error,
    fit_rate,
    non_increasing_probe_sequence,
    parse_grid,
    run,
    run_verification,
    to_csv,
    to_json,
)

__version__ = "0.1.0"
