"""Optimal trade-execution scheduling under transient market impact."""

from .errors import (
    AssemblyError,
    DomainError,
    EngineError,
    ResidualCheckError,
    UnboundedSolutionError,
    UnsupportedKernelError,
    ValidationError,
)
from .model import (
    ConstantLocalDrift,
    DiracDelta,
    DriftSpec,
    ExecutionProblem,
    ExpDecayDrift,
    ExponentialKernel,
    GridTrajectory,
    KernelSpec,
    MarketParams,
    RiskSpec,
    ZeroDrift,
    build_problem,
    curvature_rate,
    drift_at,
    drift_integral,
    normalize,
    uniform_grid,
)
from .impact import ImpactPath, block_cost, convolve_impact, kernel_value
from .closed_form import (
    ParticularSolution,
    TrajectorySolution,
    particular_solution,
    risk_neutral_limit,
    sample,
    solve,
    solve_delta_kernel,
    solve_exponential_kernel,
)
from .objective import ObjectiveReport, euler_residual, euler_residual_relative, evaluate
from .oracle import DeviationReport, compare, solve_grid_delta, solve_grid_kernel
from .montecarlo import SimulationSummary, analytic_moments, simulate

__version__ = "0.1.0"
