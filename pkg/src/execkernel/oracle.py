"""Independent grid referee: direct minimization of the discretized utility.

Knows nothing about the sinh closed forms.  The trajectory is parameterized
by its values (memoryless kernel) or its cell rates (exponential kernel) on
a uniform grid, the utility becomes a strictly convex quadratic, and the
stationarity system is solved by direct factorization:

* Dirac kernel: interior holdings, symmetric tridiagonal system.
* Exponential kernel: cell rates with one equality constraint pinning the
  traded total; the impact quadratic uses the EXACT double integrals of
  beta*exp(-beta|t-tau|) over cell pairs (a symmetric Toeplitz Gram
  matrix), so the only error left is the piecewise-constant rate ansatz.

Boundary block trades are never imposed: when the optimum wants them they
emerge as steep first/last cells, and their sizes are recovered by
Richardson extrapolation of the boundary-cell drops across two grid
resolutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solveh_banded, toeplitz

from .errors import AssemblyError, UnsupportedKernelError, ValidationError
from .model import (
    DiracDelta,
    ExecutionProblem,
    ExponentialKernel,
    GridTrajectory,
    uniform_grid,
)


def solve_grid_delta(problem: ExecutionProblem, n_cells: int) -> GridTrajectory:
    """Exact minimizer of the discretized memoryless-kernel utility."""
    if not isinstance(problem.kernel, DiracDelta):
        raise UnsupportedKernelError("solve_grid_delta requires the Dirac kernel")
    if n_cells < 4:
        raise ValidationError(f"n_cells must be >= 4, got {n_cells}")
    if problem.eta_tilde <= 0.0:
        raise ValidationError("eta_tilde must be positive for a solvable system")

    times = uniform_grid(problem.horizon, n_cells)
    h = problem.horizon / n_cells
    lam = problem.lambda_norm
    alpha = problem.alpha_tilde(times)

    # stationarity in the interior holdings x_1..x_{N-1}:
    #   (2/h + lam*h) x_j - x_{j-1}/h - x_{j+1}/h = h * alpha_j
    n_int = n_cells - 1
    ab = np.zeros((2, n_int))
    ab[0, 1:] = -1.0 / h
    ab[1, :] = 2.0 / h + lam * h
    rhs = h * alpha[1:-1]
    rhs[0] += problem.x0 / h
    rhs[-1] += problem.xT / h
    interior = solveh_banded(ab, rhs)

    holdings = np.empty(n_cells + 1)
    holdings[0] = problem.x0
    holdings[-1] = problem.xT
    holdings[1:-1] = interior
    return GridTrajectory(times=times, holdings=holdings)


def _kernel_gram(beta: float, h: float, n: int) -> np.ndarray:
    """Exact double integrals of beta*exp(-beta|t-tau|) over cell pairs."""
    x = beta * h
    first = np.empty(n)
    first[0] = 2.0 * (h + np.expm1(-x) / beta)
    if n > 1:
        # 2*(cosh(x)-1)/beta written stably as 4*sinh(x/2)^2/beta
        c_off = 4.0 * np.sinh(0.5 * x) ** 2 / beta
        first[1:] = c_off * np.exp(-x * np.arange(1, n))
    return toeplitz(first)


def _solve_kernel_once(problem: ExecutionProblem, n_cells: int):
    beta = problem.kernel.beta
    T = problem.horizon
    h = T / n_cells
    times = uniform_grid(T, n_cells)
    lam = problem.lambda_norm
    alpha = problem.alpha_tilde(times)

    w = np.full(n_cells + 1, h)
    w[0] = w[-1] = 0.5 * h

    mat = _kernel_gram(beta, h, n_cells)
    if lam > 0.0:
        # risk term through cumulative holdings: (L^T W L)_{ij} =
        # h^2 * (weight mass of nodes strictly after max(i, j))
        tail = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
        idx = np.arange(n_cells)
        mat = mat + 2.0 * lam * h * h * tail[np.maximum.outer(idx, idx) + 1]

    # linear term: L^T W (2 lam X0 - 2 alpha)
    z = 2.0 * lam * problem.x0 - 2.0 * alpha
    ztail = np.concatenate([np.cumsum((w * z)[::-1])[::-1], [0.0]])
    q = h * ztail[1:]

    try:
        chol = cho_factor(mat, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise AssemblyError(f"assembled stationarity matrix is not SPD: {exc}") from exc

    hvec = np.full(n_cells, h)
    sol_q = cho_solve(chol, q, check_finite=False)
    sol_h = cho_solve(chol, hvec, check_finite=False)
    d = problem.xT - problem.x0
    mu = -(d + hvec @ sol_q) / (hvec @ sol_h)
    rates = -(sol_q + mu * sol_h)

    holdings = problem.x0 + np.concatenate([[0.0], np.cumsum(rates * h)])
    holdings[-1] = problem.xT
    holdings[0] = problem.x0
    jump0_raw = holdings[0] - holdings[1]
    jumpT_raw = holdings[-2] - holdings[-1]
    return times, holdings, jump0_raw, jumpT_raw


def solve_grid_kernel(problem: ExecutionProblem, n_cells: int) -> GridTrajectory:
    """Dense-grid minimizer under the exponential kernel.

    Runs at n_cells and n_cells // 2 so the boundary-cell drops can be
    Richardson-extrapolated into block-size estimates (their leading error
    is linear in the cell width).
    """
    if not isinstance(problem.kernel, ExponentialKernel):
        raise UnsupportedKernelError("solve_grid_kernel requires the exponential kernel")
    if n_cells < 8:
        raise ValidationError(f"n_cells must be >= 8, got {n_cells}")

    times, holdings, j0_hi, jT_hi = _solve_kernel_once(problem, n_cells)
    n_lo = max(8, n_cells // 2)
    _, _, j0_lo, jT_lo = _solve_kernel_once(problem, n_lo)

    h_hi = problem.horizon / n_cells
    h_lo = problem.horizon / n_lo
    # two-point fit of j(h) = j* + c h
    est0 = (j0_hi * h_lo - j0_lo * h_hi) / (h_lo - h_hi)
    estT = (jT_hi * h_lo - jT_lo * h_hi) / (h_lo - h_hi)

    return GridTrajectory(
        times=times, holdings=holdings, est_jump0=est0, est_jumpT=estT
    )


@dataclass(frozen=True)
class DeviationReport:
    """Deviation between two trajectories on one grid."""

    sup: float
    l2: float
    jump0_delta: float
    jumpT_delta: float


def compare(a: GridTrajectory, b: GridTrajectory) -> DeviationReport:
    """Sup/L2 deviation over interior nodes plus block-size deltas."""
    if len(a.times) != len(b.times) or not np.array_equal(a.times, b.times):
        raise ValidationError("trajectories must share an identical time grid")
    diff = a.holdings[1:-1] - b.holdings[1:-1]
    sup = float(np.max(np.abs(diff))) if len(diff) else 0.0
    l2 = float(np.sqrt(np.mean(diff * diff))) if len(diff) else 0.0
    return DeviationReport(
        sup=sup,
        l2=l2,
        jump0_delta=a.effective_jump0 - b.effective_jump0,
        jumpT_delta=a.effective_jumpT - b.effective_jumpT,
    )
