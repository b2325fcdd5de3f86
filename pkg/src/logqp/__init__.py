"""Log-domain interior-point methods for convex quadratic programs."""

from .core import (
    NumericalFailure,
    QPInstance,
    SolveReport,
    SpdFactorization,
    Status,
    ValidationReport,
    spd_factor,
    validate,
)
from .instances import (
    AnalyticKind,
    GeneratorSpec,
    QPFormatError,
    analytic_instance,
    generate_random_qp,
    read_qp,
    write_qp,
)
from .newton import NewtonStep, center, divergence, logdomain_residual, newton_direction, step_size
from .path import (
    DirectionDecomposition,
    ShortstepParams,
    decompose_direction,
    least_squares_mu,
    min_mu_feasible,
    q,
    q_inverse,
    select_shortstep_params,
)
from .solvers import (
    Algorithm,
    SolverConfig,
    barrier_longstep,
    dual_barrier_step,
    longstep,
    primal_barrier_step,
    recover_solution,
    shortstep,
    solve,
)

__version__ = "0.1.0"
