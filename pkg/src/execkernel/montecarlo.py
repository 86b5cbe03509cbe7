"""Monte Carlo verification of the wealth dynamics.

Simulates the short-horizon arithmetic price

    S(t) = s0 * (1 + integral_0^t alpha) + s0 * sigma * W_t

and accumulates per-path PnL from the self-financing wealth identity:
terminal inventory marked at the fair (undisplaced) price, smooth trading
executed at the trapezoid cell price, block trades paying their half
impact plus the displacement prevailing when they fire.  The displacement
leg is deterministic given the schedule, so it is integrated exactly with
the impact module's cell integrals; all randomness enters through the
fair-price legs.

Randomness contract: the normals of path p are a pure function of
(seed, p, step), realized as one Philox counter-based stream keyed by
(seed, p).  Results are therefore bit-identical no matter how paths are
chunked or scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import objective
from .errors import ValidationError
from .model import ExecutionProblem, GridTrajectory, drift_integral, uniform_grid


@dataclass(frozen=True)
class SimulationSummary:
    """Sample PnL moments with seed provenance."""

    mean_pnl: float
    var_pnl: float
    std_error_mean: float
    n_paths: int
    seed: int
    dt: float


def _path_normals(seed: int, path_index: int, n_steps: int) -> np.ndarray:
    """The contract: normals for one path, independent of any other path."""
    bitgen = np.random.Philox(key=np.array([seed, path_index], dtype=np.uint64))
    return np.random.Generator(bitgen).standard_normal(n_steps)


def simulate(
    problem: ExecutionProblem,
    traj: GridTrajectory,
    n_paths: int,
    seed: int,
    dt: float,
    chunk_size: int = 4096,
) -> SimulationSummary:
    """Sample mean/variance of realized PnL for a fixed schedule."""
    if n_paths < 1:
        raise ValidationError(f"n_paths must be >= 1, got {n_paths}")
    if not (dt > 0):
        raise ValidationError(f"dt must be positive, got {dt!r}")
    if chunk_size < 1:
        raise ValidationError(f"chunk_size must be >= 1, got {chunk_size}")

    T = problem.horizon
    n_steps = max(2, int(round(T / dt)))
    dt_eff = T / n_steps
    times = uniform_grid(T, n_steps)
    work = traj if (len(traj.times) == len(times)
                    and np.allclose(traj.times, times)) else traj.resample(times)

    s0 = problem.market.s0
    sigma = problem.market.sigma
    x = work.holdings
    dx = np.diff(x)

    # deterministic legs: drift accrual paired with trades, plus the full
    # impact cost (identical convention to the objective module)
    accr = np.array([drift_integral(problem.drift, t) for t in times])
    drift_nodes = s0 * accr
    # holdings[-1] is already the open-interval value x(T-) = XT + jumpT
    drift_leg = x[-1] * drift_nodes[-1] \
        - float(0.5 * (drift_nodes[:-1] + drift_nodes[1:]) @ dx)
    impact_leg = objective.evaluate(work, problem).impact_cost
    det_pnl = drift_leg - impact_leg

    # noise functional of one path: s0*sigma*(x(T-)*W_T - sum Wbar_i dx_i)
    xT_open = x[-1]
    pnl = np.empty(n_paths)
    sqdt = math.sqrt(dt_eff)
    for start in range(0, n_paths, chunk_size):
        stop = min(start + chunk_size, n_paths)
        for p in range(start, stop):
            z = _path_normals(seed, p, n_steps)
            w_nodes = np.concatenate([[0.0], np.cumsum(z)]) * sqdt
            w_mid = 0.5 * (w_nodes[:-1] + w_nodes[1:])
            noise = s0 * sigma * (xT_open * w_nodes[-1] - w_mid @ dx)
            pnl[p] = det_pnl + noise

    mean = float(np.mean(pnl))
    var = float(np.var(pnl, ddof=1)) if n_paths > 1 else 0.0
    return SimulationSummary(
        mean_pnl=mean,
        var_pnl=var,
        std_error_mean=math.sqrt(var / n_paths),
        n_paths=n_paths,
        seed=seed,
        dt=dt_eff,
    )


def analytic_moments(traj: GridTrajectory, problem: ExecutionProblem):
    """Expected PnL and PnL variance implied by the utility integrands."""
    rep = objective.evaluate(traj, problem)
    expected = rep.alpha_gain - rep.impact_cost
    w = traj.node_weights()
    x = traj.holdings
    variance = (problem.market.s0 * problem.market.sigma) ** 2 * float(w @ (x * x))
    return expected, variance
