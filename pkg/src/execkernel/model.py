"""Domain types, unit normalization, and the shared time-grid trajectory.

All solver modules work in normalized coordinates: holdings in shares,
time in the clock of the horizon, and a single risk coefficient
``lambda_norm`` that already absorbs price, volatility and the impact
scale.  The mapping from raw market parameters is:

    eta_tilde   = eta * sigma / (adv * s0)
    lambda_norm = lambda_raw * (s0 * sigma)**2 / eta_tilde
    alpha_tilde = alpha(t) * s0 / (2 * eta_tilde)

Under the Dirac (memoryless) kernel the trajectory curvature rate is
k = sqrt(lambda_norm); under the exponential kernel with resilience beta,

    k**2 = lambda_norm * beta**2 / (lambda_norm + beta**2)

which keeps k strictly below both beta and sqrt(lambda_norm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import DomainError, ValidationError


# --------------------------------------------------------------------------
# market / drift / kernel / risk specifications
# --------------------------------------------------------------------------

def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be a finite positive number, got {value!r}")


def _require_nonnegative(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        raise ValidationError(f"{name} must be a finite non-negative number, got {value!r}")


@dataclass(frozen=True)
class MarketParams:
    """Raw market parameters: arrival price, volatility, volume, impact scale."""

    s0: float
    sigma: float
    adv: float
    eta: float

    def __post_init__(self):
        _require_positive("s0", self.s0)
        _require_positive("sigma", self.sigma)
        _require_positive("adv", self.adv)
        _require_positive("eta", self.eta)

    @property
    def eta_tilde(self) -> float:
        return self.eta * self.sigma / (self.adv * self.s0)


@dataclass(frozen=True)
class ZeroDrift:
    """No alpha signal."""


@dataclass(frozen=True)
class ConstantLocalDrift:
    """Constant drift alpha0 active on [0, t1), zero afterwards."""

    alpha0: float
    t1: float

    def __post_init__(self):
        if not math.isfinite(self.alpha0):
            raise ValidationError(f"alpha0 must be finite, got {self.alpha0!r}")
        if not (self.t1 > 0):
            raise ValidationError(f"t1 must be positive, got {self.t1!r}")


@dataclass(frozen=True)
class ExpDecayDrift:
    """Drift alpha0 * exp(-gamma * t); gamma = 0 degenerates to constant drift."""

    alpha0: float
    gamma: float

    def __post_init__(self):
        if not math.isfinite(self.alpha0):
            raise ValidationError(f"alpha0 must be finite, got {self.alpha0!r}")
        if not (math.isfinite(self.gamma) and self.gamma >= 0):
            raise ValidationError(f"gamma must be >= 0, got {self.gamma!r}")


DriftSpec = Union[ZeroDrift, ConstantLocalDrift, ExpDecayDrift]


@dataclass(frozen=True)
class DiracDelta:
    """Memoryless impact: price recovers instantly after trading stops."""


@dataclass(frozen=True)
class ExponentialKernel:
    """Resilient impact beta * exp(-beta * dt); integrates to one."""

    beta: float

    def __post_init__(self):
        _require_positive("beta", self.beta)


KernelSpec = Union[DiracDelta, ExponentialKernel]


@dataclass(frozen=True)
class RiskSpec:
    """Raw risk aversion and its normalized (1/time^2) counterpart."""

    lambda_raw: float
    lambda_norm: float

    def __post_init__(self):
        _require_nonnegative("lambda_raw", self.lambda_raw)
        _require_nonnegative("lambda_norm", self.lambda_norm)
        if (self.lambda_raw == 0) != (self.lambda_norm == 0):
            raise ValidationError("lambda_norm must vanish exactly when lambda_raw does")


def drift_at(spec: DriftSpec, t: float) -> float:
    """Instantaneous drift rate at time t >= 0."""
    if t < 0:
        raise DomainError(f"drift is defined for t >= 0, got t={t!r}")
    if isinstance(spec, ZeroDrift):
        return 0.0
    if isinstance(spec, ConstantLocalDrift):
        return spec.alpha0 if t < spec.t1 else 0.0
    if isinstance(spec, ExpDecayDrift):
        return spec.alpha0 * math.exp(-spec.gamma * t)
    raise ValidationError(f"unknown drift spec {spec!r}")


def drift_integral(spec: DriftSpec, t: float) -> float:
    """Exact antiderivative of the drift: integral of alpha over [0, t]."""
    if t < 0:
        raise DomainError(f"drift is defined for t >= 0, got t={t!r}")
    if isinstance(spec, ZeroDrift):
        return 0.0
    if isinstance(spec, ConstantLocalDrift):
        return spec.alpha0 * min(t, spec.t1)
    if isinstance(spec, ExpDecayDrift):
        if spec.gamma == 0:
            return spec.alpha0 * t
        return spec.alpha0 * (1.0 - math.exp(-spec.gamma * t)) / spec.gamma
    raise ValidationError(f"unknown drift spec {spec!r}")


def curvature_rate(lambda_norm: float, kernel: KernelSpec) -> float:
    """Urgency rate k of the optimal trajectory for the given kernel."""
    if isinstance(kernel, DiracDelta):
        return math.sqrt(lambda_norm)
    if isinstance(kernel, ExponentialKernel):
        b2 = kernel.beta ** 2
        if lambda_norm == 0:
            return 0.0
        return math.sqrt(lambda_norm * b2 / (lambda_norm + b2))
    raise ValidationError(f"unknown kernel spec {kernel!r}")


def normalize(market: MarketParams, risk_raw: float, kernel: KernelSpec) -> RiskSpec:
    """Map raw risk aversion to the normalized coefficient used downstream."""
    _require_nonnegative("risk_raw", risk_raw)
    lambda_norm = risk_raw * (market.s0 * market.sigma) ** 2 / market.eta_tilde
    return RiskSpec(lambda_raw=risk_raw, lambda_norm=lambda_norm)


# --------------------------------------------------------------------------
# the assembled problem
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExecutionProblem:
    """Fully normalized statement of one scheduling problem.

    Derived fields (k, alpha_tilde0, eta_tilde) are computed once at
    construction; instances are immutable and safe to share.
    """

    x0: float
    xT: float
    horizon: float
    market: MarketParams
    drift: DriftSpec
    kernel: KernelSpec
    risk: RiskSpec
    k: float = field(init=False)
    alpha_tilde0: float = field(init=False)
    eta_tilde: float = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ValidationError(f"horizon must be positive, got {self.horizon!r}")
        for name in ("x0", "xT"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}")
        object.__setattr__(self, "eta_tilde", self.market.eta_tilde)
        object.__setattr__(self, "k", curvature_rate(self.risk.lambda_norm, self.kernel))
        alpha0 = 0.0
        if isinstance(self.drift, (ConstantLocalDrift, ExpDecayDrift)):
            alpha0 = self.drift.alpha0
        object.__setattr__(
            self, "alpha_tilde0", alpha0 * self.market.s0 / (2.0 * self.eta_tilde)
        )

    @property
    def lambda_norm(self) -> float:
        return self.risk.lambda_norm

    def alpha_tilde(self, t) -> np.ndarray:
        """Share-space forcing alpha_tilde(t) = alpha(t) * s0 / (2 eta_tilde)."""
        scale = self.market.s0 / (2.0 * self.eta_tilde)
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError("alpha_tilde is defined for t >= 0")
        if isinstance(self.drift, ZeroDrift):
            return np.zeros_like(t)
        if isinstance(self.drift, ConstantLocalDrift):
            return scale * np.where(t < self.drift.t1, self.drift.alpha0, 0.0)
        return scale * self.drift.alpha0 * np.exp(-self.drift.gamma * t)


def build_problem(
    x0: float,
    xT: float,
    horizon: float,
    market: MarketParams,
    drift: DriftSpec,
    kernel: KernelSpec,
    risk_raw: float,
) -> ExecutionProblem:
    """Normalize raw inputs and assemble an ExecutionProblem."""
    risk = normalize(market, risk_raw, kernel)
    return ExecutionProblem(
        x0=x0, xT=xT, horizon=horizon, market=market,
        drift=drift, kernel=kernel, risk=risk,
    )


# --------------------------------------------------------------------------
# grid trajectory: the common currency of solvers, oracle and simulator
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridTrajectory:
    """Holdings sampled on a strictly increasing time grid.

    jump0 / jumpT are executable block trades NOT contained in the holdings
    path: node values follow the open-interval convention (post-jump at the
    start, pre-jump at the end).  The grid oracle instead realizes blocks
    through steep boundary cells and reports its extracted sizes in
    est_jump0 / est_jumpT, leaving jump0 = jumpT = 0.
    """

    times: np.ndarray
    holdings: np.ndarray
    jump0: float = 0.0
    jumpT: float = 0.0
    est_jump0: Optional[float] = None
    est_jumpT: Optional[float] = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        holdings = np.asarray(self.holdings, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "holdings", holdings)
        if times.ndim != 1 or holdings.shape != times.shape:
            raise ValidationError("times and holdings must be 1-d arrays of equal length")
        if len(times) < 2:
            raise ValidationError("a grid trajectory needs at least 2 nodes")
        if not np.all(np.diff(times) > 0):
            raise ValidationError("times must be strictly increasing")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(holdings))):
            raise ValidationError("times and holdings must be finite")

    @property
    def cell_widths(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def rates(self) -> np.ndarray:
        """Piecewise-constant trading rate on cells."""
        return np.diff(self.holdings) / self.cell_widths

    def node_weights(self) -> np.ndarray:
        """Trapezoid quadrature weights of the nodes."""
        h = self.cell_widths
        w = np.zeros_like(self.times)
        w[:-1] += 0.5 * h
        w[1:] += 0.5 * h
        return w

    @property
    def effective_jump0(self) -> float:
        """Start block: the executable size, or the oracle's estimate."""
        return self.est_jump0 if self.est_jump0 is not None else self.jump0

    @property
    def effective_jumpT(self) -> float:
        return self.est_jumpT if self.est_jumpT is not None else self.jumpT

    def resample(self, times: np.ndarray) -> "GridTrajectory":
        """Linear interpolation onto a new strictly increasing grid."""
        times = np.asarray(times, dtype=float)
        holdings = np.interp(times, self.times, self.holdings)
        return GridTrajectory(times=times, holdings=holdings,
                              jump0=self.jump0, jumpT=self.jumpT,
                              est_jump0=self.est_jump0, est_jumpT=self.est_jumpT)


def uniform_grid(horizon: float, n_cells: int) -> np.ndarray:
    """n_cells + 1 equally spaced nodes spanning [0, horizon]."""
    if n_cells < 1:
        raise ValidationError(f"n_cells must be >= 1, got {n_cells}")
    return np.linspace(0.0, float(horizon), n_cells + 1)
