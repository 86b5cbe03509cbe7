"""Mean-variance utility evaluation and stationarity residuals.

The utility of a schedule x(t) is, in currency,

    total = alpha_gain - impact_cost - risk_penalty

    alpha_gain   = s0 * integral alpha(t) x(t) dt
    impact_cost  = -integral h[x] xdot dt  (+ block execution costs)
    risk_penalty = lambda_raw * (s0 sigma)^2 * integral x^2 dt

Alpha and risk terms use trapezoid quadrature on the trajectory grid; the
impact term uses the exact per-cell integrals from the impact module, so
both kernels are integrated without quadrature error given the
piecewise-constant rate convention.  Block trades under the exponential
kernel pay their own half-impact plus the displacement prevailing when
they execute, which is the w -> 0 limit of a fast finite-rate trade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import impact as impact_mod
from .errors import DomainError, ValidationError
from .model import (
    ConstantLocalDrift,
    DiracDelta,
    ExecutionProblem,
    ExpDecayDrift,
    ExponentialKernel,
    GridTrajectory,
    ZeroDrift,
)


@dataclass(frozen=True)
class ObjectiveReport:
    """Utility decomposition; costs are reported positive when costly."""

    alpha_gain: float
    impact_cost: float
    risk_penalty: float
    total: float

    @classmethod
    def from_components(cls, alpha_gain: float, impact_cost: float,
                        risk_penalty: float) -> "ObjectiveReport":
        return cls(
            alpha_gain=alpha_gain,
            impact_cost=impact_cost,
            risk_penalty=risk_penalty,
            total=alpha_gain - impact_cost - risk_penalty,
        )


def evaluate(traj: GridTrajectory, problem: ExecutionProblem) -> ObjectiveReport:
    """Utility of a sampled trajectory, block trades included."""
    if len(traj.times) < 3:
        raise ValidationError("objective evaluation needs at least 2 cells")
    scale = max(1.0, abs(problem.x0), abs(problem.xT))
    if abs(traj.holdings[0] + traj.jump0 - problem.x0) > 1e-9 * scale:
        raise ValidationError("trajectory start does not match the problem's X0")
    if abs(traj.holdings[-1] - traj.jumpT - problem.xT) > 1e-9 * scale:
        raise ValidationError("trajectory end does not match the problem's XT")

    eta_tilde = problem.eta_tilde
    w = traj.node_weights()
    x = traj.holdings
    alpha_gain = 2.0 * eta_tilde * float(w @ (problem.alpha_tilde(traj.times) * x))
    risk_penalty = eta_tilde * problem.lambda_norm * float(w @ (x * x))

    rates = traj.rates
    if isinstance(problem.kernel, DiracDelta):
        if traj.jump0 != 0.0 or traj.jumpT != 0.0:
            raise ValidationError("block trades have unbounded cost under the Dirac kernel")
        impact_cost = eta_tilde * float(np.sum(traj.cell_widths * rates * rates))
    else:
        path = impact_mod.convolve_impact(
            traj, problem.kernel, eta_tilde, jump0=traj.jump0
        )
        impact_cost = -float(rates @ path.cell_integrals)
        impact_cost += impact_mod.block_cost(problem.kernel, eta_tilde, traj.jump0)
        impact_cost += impact_mod.block_cost(problem.kernel, eta_tilde, traj.jumpT)
        # terminal block executes against the displacement prevailing at T-
        impact_cost += traj.jumpT * float(path.values[-1])

    return ObjectiveReport.from_components(alpha_gain, impact_cost, risk_penalty)


def _interior_forcing(problem: ExecutionProblem, t: np.ndarray) -> np.ndarray:
    """Right-hand side of the interior ODE xddot - k^2 x = f(t)."""
    alpha = problem.alpha_tilde(t)
    if isinstance(problem.kernel, DiracDelta):
        return -alpha
    beta = problem.kernel.beta
    lam = problem.lambda_norm
    if isinstance(problem.drift, ExpDecayDrift):
        gamma = problem.drift.gamma
    elif isinstance(problem.drift, ConstantLocalDrift):
        gamma = 0.0
    else:
        gamma = 0.0
    # alphaddot = gamma^2 * alpha for the exponential family
    return (gamma ** 2 - beta ** 2) * alpha / (lam + beta ** 2)


def euler_residual(sol, problem: ExecutionProblem, probes) -> float:
    """Sup of |xddot - k^2 x - f(t)| over interior probe times."""
    probes = np.asarray(probes, dtype=float)
    if np.any(probes <= 0.0) or np.any(probes >= problem.horizon):
        raise DomainError("residual probes must lie strictly inside (0, T)")
    resid = sol.accel(probes) - problem.k ** 2 * sol.value(probes) \
        - _interior_forcing(problem, probes)
    return float(np.max(np.abs(resid)))


def euler_residual_relative(sol, problem: ExecutionProblem, probes) -> float:
    """Residual sup normalized by the magnitude of the ODE terms."""
    probes = np.asarray(probes, dtype=float)
    if np.any(probes <= 0.0) or np.any(probes >= problem.horizon):
        raise DomainError("residual probes must lie strictly inside (0, T)")
    acc = sol.accel(probes)
    val = sol.value(probes)
    forcing = _interior_forcing(problem, probes)
    resid = acc - problem.k ** 2 * val - forcing
    scale = float(np.max(np.abs(acc) + problem.k ** 2 * np.abs(val) + np.abs(forcing)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(resid))) / scale
