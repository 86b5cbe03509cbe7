"""Temporary-impact convolution h[x] for both kernels.

The price displacement seen by the trader is

    h(t) = -eta_tilde * integral_0^t K(t - tau) xdot(tau) dtau

so h opposes the trading direction: selling pushes h up, which (entering
the execution price as -h) means the seller receives less.  For the
exponential kernel the convolution is integrated exactly per cell through
the one-state recursion

    h' = -beta * h - eta_tilde * beta * xdot

with xdot piecewise constant, so the only error anywhere is the piecewise
representation of the trajectory itself, never quadrature.

Block trades are zero-width events: a block dX executed at t_j adds
eta_tilde * beta * dX * exp(-beta (t - t_j)) to h for t > t_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsupportedKernelError, ValidationError
from .model import DiracDelta, ExponentialKernel, GridTrajectory, KernelSpec


@dataclass(frozen=True)
class ImpactPath:
    """Impact per share sampled at the trajectory nodes.

    Node values use the open-interval convention: the first node carries
    h(0+) (after any start block), the last node carries h(T-).
    cell_integrals holds the exact integral of h over each cell, which is
    what cost evaluation needs.
    """

    times: np.ndarray
    values: np.ndarray
    cell_integrals: np.ndarray

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("impact values must be finite")


def kernel_value(kernel: KernelSpec, dt: float) -> float:
    """Pointwise kernel weight K(dt) = beta * exp(-beta * dt)."""
    if isinstance(kernel, DiracDelta):
        raise UnsupportedKernelError("the Dirac kernel has no pointwise value")
    if not isinstance(kernel, ExponentialKernel):
        raise UnsupportedKernelError(f"unknown kernel {kernel!r}")
    if dt < 0:
        raise DomainError(f"kernel lag must be >= 0, got {dt!r}")
    return kernel.beta * math.exp(-kernel.beta * dt)


def convolve_impact(
    traj: GridTrajectory,
    kernel: KernelSpec,
    eta_tilde: float,
    jump0: float = 0.0,
    jumpT: float = 0.0,
) -> ImpactPath:
    """Impact path of a piecewise-linear trajectory plus boundary blocks.

    jump0 is the block executed at t=0 (positive = position drop), folded
    into the path from 0+ on.  jumpT executes at the final instant and by
    the open-interval convention never shows up in the path values.
    """
    times = traj.times
    widths = traj.cell_widths
    rates = traj.rates
    n = len(rates)

    if isinstance(kernel, DiracDelta):
        # h = -eta_tilde * xdot, piecewise constant; node value taken from
        # the cell to the right (last node from the last cell).
        if jump0 != 0.0 or jumpT != 0.0:
            raise ValidationError("block trades have unbounded cost under the Dirac kernel")
        cell_h = -eta_tilde * rates
        values = np.concatenate([cell_h, cell_h[-1:]])
        return ImpactPath(times=times, values=values, cell_integrals=cell_h * widths)

    if not isinstance(kernel, ExponentialKernel):
        raise UnsupportedKernelError(f"unknown kernel {kernel!r}")

    beta = kernel.beta
    decay = np.exp(-beta * widths)
    values = np.empty(n + 1)
    cell_ints = np.empty(n)
    # start block: dx = -jump0, so h(0+) = -eta_tilde*K(0)*(-jump0)
    h = eta_tilde * beta * jump0
    values[0] = h
    for i in range(n):
        steady = -eta_tilde * rates[i]
        e = decay[i]
        # exact solution of h' = -beta h - eta_tilde beta v on the cell
        cell_ints[i] = (h - steady) * (1.0 - e) / beta + steady * widths[i]
        h = steady + (h - steady) * e
        values[i + 1] = h
    return ImpactPath(times=times, values=values, cell_integrals=cell_ints)


def block_cost(kernel: KernelSpec, eta_tilde: float, dx: float) -> float:
    """Execution cost of an isolated block trade dx against the kernel.

    Limit of a finite-rate trade of width w -> 0: the block walks its own
    impact, paying eta_tilde * beta * dx^2 / 2.
    """
    if isinstance(kernel, DiracDelta):
        if dx == 0.0:
            return 0.0
        raise ValidationError("block trades have unbounded cost under the Dirac kernel")
    if not isinstance(kernel, ExponentialKernel):
        raise UnsupportedKernelError(f"unknown kernel {kernel!r}")
    return 0.5 * eta_tilde * kernel.beta * dx * dx
