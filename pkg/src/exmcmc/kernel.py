"""Markov transition kernels, reversals, and stationarity checks.

Finite chains are represented as row-stochastic matrices over an ordered list
of abstract state identifiers.  Continuous chains (e.g. the autoregressive
chain in :mod:`exmcmc.chains`) implement the same step-sampler interface via
:class:`KernelPair` but do not support matrix operations.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatchError,
    ReversalUndefinedError,
    StationarityViolationError,
    UnsupportedRepresentationError,
)

# Tolerance for exact algebraic identities on matrices; accumulation through
# repeated matrix products is checked at 1e-10 instead.
EXACT_TOL = 1e-12
POWER_TOL = 1e-10


class DiscreteDistribution:
    """A finite target law: ordered states with point masses."""

    def __init__(self, states, mass):
        states = tuple(states)
        mass = np.asarray(mass, dtype=float)
        if mass.ndim != 1 or len(states) != mass.shape[0]:
            raise DimensionMismatchError("states and mass must have equal length")
        if len(set(states)) != len(states):
            raise ValueError("state identifiers must be unique")
        if np.any(mass < 0):
            raise ValueError("masses must be nonnegative")
        if abs(mass.sum() - 1.0) > EXACT_TOL:
            raise ValueError(f"masses must sum to 1, got {mass.sum()!r}")
        self.states = states
        self.mass = mass
        self._index = {s: i for i, s in enumerate(states)}
        self._cum = np.cumsum(mass)

    def __len__(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        return self._index[state]

    def prob(self, state) -> float:
        return float(self.mass[self._index[state]])

    def sample_index(self, rng: np.random.Generator) -> int:
        return int(np.searchsorted(self._cum, rng.random(), side="right"))

    def sample_indices(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return np.searchsorted(self._cum, rng.random(size), side="right")

    def sample(self, rng: np.random.Generator):
        return self.states[self.sample_index(rng)]

    def sampler(self) -> Callable[[np.random.Generator], object]:
        """Direct i.i.d. sampler for this law (inverse-CDF on the mass table)."""
        return self.sample


class DiscreteKernel:
    """A finite-state transition kernel as a row-stochastic matrix."""

    def __init__(self, states, matrix):
        states = tuple(states)
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape != (len(states), len(states)):
            raise DimensionMismatchError("matrix must be square over the state list")
        if len(set(states)) != len(states):
            raise ValueError("state identifiers must be unique")
        if np.any(matrix < 0):
            raise ValueError("transition probabilities must be nonnegative")
        rows = matrix.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > EXACT_TOL:
            raise ValueError(f"rows must sum to 1, max deviation {np.max(np.abs(rows - 1.0))!r}")
        self.states = states
        self.matrix = matrix
        self._index = {s: i for i, s in enumerate(states)}
        self._powers = {1: matrix}
        self._cums = {}

    def __len__(self) -> int:
        return len(self.states)

    def index(self, state) -> int:
        return self._index[state]

    def power(self, steps: int) -> np.ndarray:
        """Matrix of the ``steps``-step kernel."""
        if steps < 1:
            raise ValueError("steps must be >= 1")
        if steps not in self._powers:
            self._powers[steps] = np.linalg.matrix_power(self.matrix, steps)
        return self._powers[steps]

    def _cumulative(self, steps: int) -> np.ndarray:
        if steps not in self._cums:
            self._cums[steps] = np.cumsum(self.power(steps), axis=1)
        return self._cums[steps]

    def step_index(self, i: int, rng: np.random.Generator, steps: int = 1) -> int:
        """One draw from the ``steps``-step law started at state index ``i``."""
        cum = self._cumulative(steps)
        return int(np.searchsorted(cum[i], rng.random(), side="right"))

    def step(self, state, rng: np.random.Generator, steps: int = 1):
        return self.states[self.step_index(self._index[state], rng, steps)]


class StationarityReport(NamedTuple):
    stationary: bool
    max_residual: float


def is_stationary(
    kernel: DiscreteKernel, target: DiscreteDistribution, tol: float = EXACT_TOL
) -> StationarityReport:
    """Check ``f(y) = sum_x f(x) k(x, y)`` for every state ``y``."""
    if kernel.states != target.states:
        raise DimensionMismatchError("kernel and target must share the same state list")
    residual = float(np.max(np.abs(target.mass @ kernel.matrix - target.mass)))
    return StationarityReport(residual <= tol, residual)


def reversal(
    kernel: DiscreteKernel, target: DiscreteDistribution, tol: float = 1e-9
) -> DiscreteKernel:
    """The time-reverse kernel ``khat(y, x) = f(x) k(x, y) / f(y)``.

    Requires a strictly positive target that is stationary for the kernel;
    the reversal is then unique.
    """
    if kernel.states != target.states:
        raise DimensionMismatchError("kernel and target must share the same state list")
    if np.any(target.mass <= 0):
        raise ReversalUndefinedError("reversal undefined: target has a zero-mass state")
    report = is_stationary(kernel, target, tol)
    if not report.stationary:
        raise StationarityViolationError(
            f"target is not stationary for the kernel (max residual {report.max_residual:.3e})",
            report.max_residual,
        )
    f = target.mass
    khat = (kernel.matrix * f[:, None]).T / f[:, None]
    return DiscreteKernel(kernel.states, khat)


def is_reversible(
    kernel: DiscreteKernel, target: DiscreteDistribution, tol: float = EXACT_TOL
) -> bool:
    """Detailed balance: ``f(x) k(x, y) == f(y) k(y, x)`` entrywise."""
    flux = kernel.matrix * target.mass[:, None]
    return float(np.max(np.abs(flux - flux.T))) <= tol


class KernelPair:
    """A forward kernel and its reversal, with an L-step super-step size.

    ``forward`` and ``reverse`` are single base-step samplers
    ``(state, rng) -> state``.  ``super_forward``/``super_reverse`` apply the
    L-step law; for matrix-backed pairs these draw directly from the L-step
    matrix power, which has the same law as L sequential base steps.
    """

    def __init__(
        self,
        forward: Callable,
        reverse: Callable,
        step_size: int = 1,
        reversible: bool = False,
        forward_kernel: DiscreteKernel | None = None,
        reverse_kernel: DiscreteKernel | None = None,
        target: DiscreteDistribution | None = None,
    ):
        if step_size < 1:
            raise ValueError("step_size must be >= 1")
        self.forward = forward
        self.reverse = reverse
        self.step_size = step_size
        self.reversible = reversible
        self.forward_kernel = forward_kernel
        self.reverse_kernel = reverse_kernel
        self.target = target

    @classmethod
    def from_discrete(
        cls,
        kernel: DiscreteKernel,
        target: DiscreteDistribution,
        step_size: int = 1,
    ) -> "KernelPair":
        rev = reversal(kernel, target)
        return cls(
            forward=kernel.step,
            reverse=rev.step,
            step_size=step_size,
            reversible=is_reversible(kernel, target),
            forward_kernel=kernel,
            reverse_kernel=rev,
            target=target,
        )

    @classmethod
    def from_callables(
        cls,
        forward: Callable,
        reverse: Callable,
        step_size: int = 1,
        reversible: bool = False,
    ) -> "KernelPair":
        return cls(forward, reverse, step_size=step_size, reversible=reversible)

    @property
    def is_discrete(self) -> bool:
        return self.forward_kernel is not None

    def require_discrete(self) -> DiscreteKernel:
        if self.forward_kernel is None:
            raise UnsupportedRepresentationError(
                "operation requires a matrix-backed kernel"
            )
        return self.forward_kernel

    def forward_step(self, state, rng: np.random.Generator):
        return self.forward(state, rng)

    def reverse_step(self, state, rng: np.random.Generator):
        return self.reverse(state, rng)

    def super_forward(self, state, rng: np.random.Generator):
        if self.forward_kernel is not None:
            return self.forward_kernel.step(state, rng, self.step_size)
        for _ in range(self.step_size):
            state = self.forward(state, rng)
        return state

    def super_reverse(self, state, rng: np.random.Generator):
        if self.reverse_kernel is not None:
            return self.reverse_kernel.step(state, rng, self.step_size)
        for _ in range(self.step_size):
            state = self.reverse(state, rng)
        return state


def step_power(pair: KernelPair, start, direction: str, rng: np.random.Generator):
    """One draw from the L-step kernel in the chosen direction."""
    if direction == "forward":
        return pair.super_forward(start, rng)
    if direction == "reverse":
        return pair.super_reverse(start, rng)
    raise ValueError(f"direction must be 'forward' or 'reverse', got {direction!r}")
