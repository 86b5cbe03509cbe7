"""Analytic optimal trajectories for both impact kernels.

Memoryless kernel: the interior optimality condition is

    xddot - k^2 x = -alpha_tilde(t),      k^2 = lambda_norm

solved by two sinh blocks pinned to the boundary holdings plus a
particular term p(t) with  pddot - k^2 p = -alpha_tilde.

Exponential kernel (resilience beta, risk aversion lambda_norm > 0):

    k^2 = lambda_norm * beta^2 / (lambda_norm + beta^2)
    A   = atanh(k / beta)            (= ln sqrt((beta+k)/(beta-k)))
    B   = beta / sqrt(lambda_norm + beta^2)   (= k / sqrt(lambda_norm))

    x(t) = (X0 - p) B sinh(k(T-t) + A)/sinh(kT + 2A)
         + (XT - p) B sinh(k t + A)/sinh(kT + 2A) + p

with block trades at both ends:  dX0 = X0 - x(0+),  dXT = x(T-) - XT.
Shifting BOTH sinh arguments by A is what satisfies the two conditions
that remove the exp(+-beta t) modes from the kernel state; the unshifted
second term fails them unless XT = 0.  Every constructed solution is
self-checked against the interior stationarity ODE and rejected if the
residual does not vanish, which pins the sign of p(t) as well.

Risk-neutral limit (lambda -> 0, no drift): two equal blocks
(X0 - XT)/(beta T + 2) around a straight line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import objective
from .errors import (
    ResidualCheckError,
    UnboundedSolutionError,
    UnsupportedKernelError,
    ValidationError,
    DomainError,
)
from .model import (
    ConstantLocalDrift,
    DiracDelta,
    DriftSpec,
    ExecutionProblem,
    ExpDecayDrift,
    ExponentialKernel,
    GridTrajectory,
    ZeroDrift,
)

# relative threshold below which |gamma^2 - k^2| switches to the resonant form
EPS_RESONANT = 1e-9

# construction-time stationarity tolerance (relative)
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class ParticularSolution:
    """Particular term p(t) appearing additively in the trajectory.

    kind: "none", "constant" (coef), "exp_decay" (coef * exp(-gamma t)),
    or "resonant" (coef * t * exp(-gamma t), used when gamma ~ k).
    """

    kind: str
    coef: float = 0.0
    gamma: float = 0.0

    def value(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == "none":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.coef)
        if self.kind == "exp_decay":
            return self.coef * np.exp(-self.gamma * t)
        if self.kind == "resonant":
            return self.coef * t * np.exp(-self.gamma * t)
        raise ValidationError(f"unknown particular kind {self.kind!r}")

    def d1(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind in ("none", "constant"):
            return np.zeros_like(t)
        if self.kind == "exp_decay":
            return -self.gamma * self.coef * np.exp(-self.gamma * t)
        if self.kind == "resonant":
            return self.coef * (1.0 - self.gamma * t) * np.exp(-self.gamma * t)
        raise ValidationError(f"unknown particular kind {self.kind!r}")

    def d2(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind in ("none", "constant"):
            return np.zeros_like(t)
        if self.kind == "exp_decay":
            return self.gamma ** 2 * self.coef * np.exp(-self.gamma * t)
        if self.kind == "resonant":
            g = self.gamma
            return self.coef * (g * g * t - 2.0 * g) * np.exp(-g * t)
        raise ValidationError(f"unknown particular kind {self.kind!r}")


NO_PARTICULAR = ParticularSolution(kind="none")


def particular_solution(drift: DriftSpec, k: float, alpha_tilde0: float) -> ParticularSolution:
    """Particular term for the memoryless interior ODE, sign fixed by residual.

    The returned p satisfies pddot - k^2 p = -alpha_tilde(t); the residual is
    probed before returning so a wrong sign can never leave this function.
    """
    if k < 0:
        raise ValidationError(f"k must be >= 0, got {k!r}")
    if isinstance(drift, ConstantLocalDrift):
        raise ValidationError(
            "constant-local drift with a cutoff inside the horizon has no "
            "closed form here; use the grid oracle"
        )
    if isinstance(drift, ZeroDrift) or alpha_tilde0 == 0.0:
        return NO_PARTICULAR
    if not isinstance(drift, ExpDecayDrift):
        raise ValidationError(f"unknown drift spec {drift!r}")

    gamma = drift.gamma
    if gamma == 0.0:
        if k == 0.0:
            raise UnboundedSolutionError(
                "risk-neutral trader with non-decaying alpha has no bounded optimum"
            )
        sol = ParticularSolution(kind="constant", coef=alpha_tilde0 / k ** 2)
    elif abs(gamma ** 2 - k ** 2) <= EPS_RESONANT * max(k ** 2, gamma ** 2):
        sol = ParticularSolution(kind="resonant", coef=alpha_tilde0 / (2.0 * k), gamma=gamma)
    else:
        sol = ParticularSolution(
            kind="exp_decay", coef=alpha_tilde0 / (k ** 2 - gamma ** 2), gamma=gamma
        )

    _check_particular(sol, k, alpha_tilde0, gamma)
    return sol


def _check_particular(sol: ParticularSolution, k: float, alpha_tilde0: float, gamma: float) -> None:
    t = np.linspace(0.0, 1.0, 5)
    forcing = alpha_tilde0 * np.exp(-gamma * t)
    resid = sol.d2(t) - k ** 2 * sol.value(t) + forcing
    scale = max(abs(alpha_tilde0), k ** 2 * float(np.max(np.abs(sol.value(t)))))
    if float(np.max(np.abs(resid))) > 1e-7 * scale:
        raise ResidualCheckError(
            "particular solution does not satisfy the interior ODE "
            f"(relative residual {float(np.max(np.abs(resid))) / scale:.2e})"
        )


@dataclass(frozen=True)
class TrajectorySolution:
    """Closed-form trajectory: sinh blocks, particular term, boundary blocks.

    The smooth interior curve is

        u(t) = [c1 sinh(k(T-t)+A) + c2 sinh(kt+A)] / sinh(kT+2A) + p(t)

    degenerating to the straight line c1 (T-t)/T + c2 t/T + p(t) when k = 0.
    u(0) is the post-block value X0 - jump0 and u(T) the pre-block value
    XT + jumpT; the contractual boundary holdings are x0 and xT.
    """

    c1: float
    c2: float
    particular: ParticularSolution
    jump0: float
    jumpT: float
    k: float
    A: float
    B: float
    x0: float
    xT: float
    T: float

    def __post_init__(self):
        if not (self.T > 0):
            raise ValidationError(f"T must be positive, got {self.T!r}")
        scale = max(1.0, abs(self.x0), abs(self.xT))
        if abs(float(self.value(0.0)) + self.jump0 - self.x0) > 1e-9 * scale:
            raise ValidationError("solution does not honor the initial holdings")
        if abs(float(self.value(self.T)) - self.jumpT - self.xT) > 1e-9 * scale:
            raise ValidationError("solution does not honor the terminal holdings")

    def _blocks(self, t):
        t = np.asarray(t, dtype=float)
        if self.k == 0.0:
            return self.c1 * (self.T - t) / self.T + self.c2 * t / self.T
        denom = math.sinh(self.k * self.T + 2.0 * self.A)
        return (
            self.c1 * np.sinh(self.k * (self.T - t) + self.A)
            + self.c2 * np.sinh(self.k * t + self.A)
        ) / denom

    def value(self, t) -> np.ndarray:
        """Holdings u(t) on the open interval (post-jump at 0, pre-jump at T)."""
        return self._blocks(t) + self.particular.value(t)

    def rate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.k == 0.0:
            smooth = np.full_like(t, (self.c2 - self.c1) / self.T)
        else:
            denom = math.sinh(self.k * self.T + 2.0 * self.A)
            smooth = self.k * (
                -self.c1 * np.cosh(self.k * (self.T - t) + self.A)
                + self.c2 * np.cosh(self.k * t + self.A)
            ) / denom
        return smooth + self.particular.d1(t)

    def accel(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.k ** 2 * self._blocks(t) + self.particular.d2(t)


def sample(sol: TrajectorySolution, grid) -> GridTrajectory:
    """Evaluate the solution on a strictly increasing grid inside [0, T].

    Boundary nodes carry the open-interval values; block sizes travel in the
    trajectory metadata.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2:
        raise ValidationError("sample grid needs at least 2 nodes")
    if np.any(grid < 0.0) or np.any(grid > sol.T):
        raise DomainError("sample grid must lie within [0, T]")
    return GridTrajectory(
        times=grid,
        holdings=sol.value(grid),
        jump0=sol.jump0,
        jumpT=sol.jumpT,
    )


def _self_check(sol: TrajectorySolution, problem: ExecutionProblem) -> TrajectorySolution:
    probes = np.linspace(0.0, problem.horizon, 65)[1:-1]
    rel = objective.euler_residual_relative(sol, problem, probes)
    if rel > RESIDUAL_TOL:
        raise ResidualCheckError(
            f"constructed trajectory fails the stationarity check (relative residual {rel:.2e})"
        )
    return sol


def _closed_form_drift(problem: ExecutionProblem) -> DriftSpec:
    """Map constant-local drift covering the whole horizon onto gamma = 0."""
    drift = problem.drift
    if isinstance(drift, ConstantLocalDrift) and drift.t1 >= problem.horizon:
        return ExpDecayDrift(alpha0=drift.alpha0, gamma=0.0)
    return drift


def solve_delta_kernel(problem: ExecutionProblem) -> TrajectorySolution:
    """Optimal trajectory under the memoryless kernel (no boundary blocks)."""
    if not isinstance(problem.kernel, DiracDelta):
        raise UnsupportedKernelError("solve_delta_kernel requires the Dirac kernel")
    drift = _closed_form_drift(problem)
    k = problem.k
    p = particular_solution(drift, k, problem.alpha_tilde0)
    p0 = float(p.value(0.0))
    pT = float(p.value(problem.horizon))
    sol = TrajectorySolution(
        c1=problem.x0 - p0,
        c2=problem.xT - pT,
        particular=p,
        jump0=0.0,
        jumpT=0.0,
        k=k,
        A=0.0,
        B=1.0,
        x0=problem.x0,
        xT=problem.xT,
        T=problem.horizon,
    )
    return _self_check(sol, problem)


def solve_exponential_kernel(problem: ExecutionProblem) -> TrajectorySolution:
    """Optimal trajectory under the exponential kernel, blocks at both ends."""
    if not isinstance(problem.kernel, ExponentialKernel):
        raise UnsupportedKernelError("solve_exponential_kernel requires the exponential kernel")
    lam = problem.lambda_norm
    if lam <= 0.0:
        raise ValidationError(
            "risk-neutral exponential-kernel problems are solved by risk_neutral_limit"
        )
    drift = _closed_form_drift(problem)
    if isinstance(drift, ExpDecayDrift) and drift.gamma > 0.0:
        raise ValidationError(
            "decaying drift under the exponential kernel has no closed form here; "
            "use the grid oracle"
        )
    if isinstance(drift, ConstantLocalDrift):
        raise ValidationError(
            "constant-local drift with a cutoff inside the horizon has no closed "
            "form here; use the grid oracle"
        )

    beta = problem.kernel.beta
    k = problem.k
    A = math.atanh(k / beta)
    B = beta / math.sqrt(lam + beta * beta)

    if isinstance(drift, ZeroDrift) or problem.alpha_tilde0 == 0.0:
        p: ParticularSolution = NO_PARTICULAR
        p_const = 0.0
    else:
        p_const = problem.alpha_tilde0 / lam
        p = ParticularSolution(kind="constant", coef=p_const)

    denom = math.sinh(k * problem.horizon + 2.0 * A)
    u0 = ((problem.x0 - p_const) * B * math.sinh(k * problem.horizon + A)
          + (problem.xT - p_const) * B * math.sinh(A)) / denom + p_const
    uT = ((problem.x0 - p_const) * B * math.sinh(A)
          + (problem.xT - p_const) * B * math.sinh(k * problem.horizon + A)) / denom + p_const

    sol = TrajectorySolution(
        c1=(problem.x0 - p_const) * B,
        c2=(problem.xT - p_const) * B,
        particular=p,
        jump0=problem.x0 - u0,
        jumpT=uT - problem.xT,
        k=k,
        A=A,
        B=B,
        x0=problem.x0,
        xT=problem.xT,
        T=problem.horizon,
    )
    return _self_check(sol, problem)


def risk_neutral_limit(x0: float, xT: float, T: float, beta: float) -> TrajectorySolution:
    """Two equal blocks around a straight line: the lambda -> 0 schedule."""
    if not (T > 0):
        raise ValidationError(f"T must be positive, got {T!r}")
    if not (beta > 0):
        raise ValidationError(f"beta must be positive, got {beta!r}")
    jump = (x0 - xT) / (beta * T + 2.0)
    return TrajectorySolution(
        c1=x0 - jump,
        c2=xT + jump,
        particular=NO_PARTICULAR,
        jump0=jump,
        jumpT=jump,
        k=0.0,
        A=0.0,
        B=1.0,
        x0=x0,
        xT=xT,
        T=T,
    )


def solve(problem: ExecutionProblem) -> TrajectorySolution:
    """Route a problem to the matching closed-form solver."""
    if isinstance(problem.kernel, DiracDelta):
        return solve_delta_kernel(problem)
    if problem.lambda_norm > 0.0:
        return solve_exponential_kernel(problem)
    if problem.alpha_tilde0 != 0.0 and not isinstance(problem.drift, ZeroDrift):
        raise ValidationError(
            "risk-neutral exponential-kernel problems with drift have no closed "
            "form here; use the grid oracle"
        )
    return risk_neutral_limit(problem.x0, problem.xT, problem.horizon, problem.kernel.beta)
