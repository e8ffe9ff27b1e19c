"""The p-value calculus.

Monte Carlo p-values are exact rationals; conversion to float happens only at
reporting boundaries so that threshold comparisons never suffer rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidStatisticError, UnsupportedRepresentationError
from .kernel import DiscreteDistribution, KernelPair


def _check_finite(values) -> None:
    for v in values:
        if isinstance(v, float) and math.isnan(v):
            raise InvalidStatisticError("test statistic evaluated to NaN")


def p_mc(t0: float, t_draws: Sequence[float]) -> Fraction:
    """Monte Carlo p-value ``(#{t_i >= t0} + 1) / (M + 1)``.

    Ties count toward the numerator (conservative).  Returned as an exact
    rational in ``[1/(M+1), 1]``.
    """
    _check_finite([t0])
    _check_finite(t_draws)
    count = sum(1 for t in t_draws if t >= t0)
    return Fraction(count + 1, len(t_draws) + 1)


def p_mc_randomized(
    t0: float, t_draws: Sequence[float], rng: np.random.Generator
) -> Fraction:
    """Variant with uniform rank among ties; used by exact-uniformity checks.

    Under an exchangeable sampler the result is exactly uniform on
    ``{1/(M+1), ..., 1}``.
    """
    _check_finite([t0])
    _check_finite(t_draws)
    greater = sum(1 for t in t_draws if t > t0)
    ties = sum(1 for t in t_draws if t == t0)
    v = int(rng.integers(0, ties + 1))
    return Fraction(greater + v + 1, len(t_draws) + 1)


def p_analytic(
    target: DiscreteDistribution, statistic: Callable[[object], float], t0: float
) -> float:
    """Exact tail probability ``pi({x : T(x) >= t0})`` for an enumerable target."""
    if not isinstance(target, DiscreteDistribution):
        raise UnsupportedRepresentationError(
            "p_analytic requires an enumerable discrete target"
        )
    _check_finite([t0])
    return float(
        sum(m for s, m in zip(target.states, target.mass) if statistic(s) >= t0)
    )


def sqrt_epsilon(p) -> float:
    """The square-root correction ``min(1, sqrt(2 p))``.

    Makes a single sequential run of a reversible chain yield a valid
    p-value.
    """
    p = Fraction(p) if not isinstance(p, Fraction) else p
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return min(1.0, math.sqrt(2 * float(p)))


def p_max(p_values: Sequence[float]) -> float:
    """Maximized p-value over a finite family of simple nulls."""
    values = list(p_values)
    if not values:
        raise ValueError("p_max requires at least one p-value")
    for p in values:
        if not 0 <= p <= 1:
            raise ValueError(f"p-values must lie in [0, 1], got {p!r}")
    return max(values)


@dataclass(frozen=True)
class AtomLaw:
    """A finite distribution over values in [0, 1]."""

    values: tuple
    probs: tuple

    def __post_init__(self):
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError("atom probabilities must sum to 1")

    def mean(self) -> float:
        return float(sum(v * p for v, p in zip(self.values, self.probs)))


def p_infinity_discrete(
    pair: KernelPair, statistic: Callable[[object], float], x0
) -> AtomLaw:
    """Exact limiting law of the parallel-method p-value as M grows.

    For each hub state ``s`` reachable by L reverse steps from ``x0``, the
    limit value is the L-step forward mass of ``{T >= T(x0)}`` from ``s``,
    weighted by the reverse L-step probability of ``s``.
    """
    kernel = pair.require_discrete()
    rev = pair.reverse_kernel
    L = pair.step_size
    fwd = kernel.power(L)
    back = rev.power(L)
    t0 = statistic(x0)
    tail = np.array([statistic(s) >= t0 for s in kernel.states], dtype=float)
    i0 = kernel.index(x0)
    values = []
    probs = []
    for s in range(len(kernel)):
        weight = back[i0, s]
        if weight > 0:
            values.append(float(fwd[s] @ tail))
            probs.append(float(weight))
    return AtomLaw(tuple(values), tuple(probs))


# -- Normal CDF / quantile -------------------------------------------------
#
# The CDF goes through erfc, accurate to full double precision; the quantile
# is a safeguarded Newton iteration converged to 1e-12.


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    lo, hi = -40.0, 40.0
    x = 0.0
    for _ in range(200):
        f = normal_cdf(x) - p
        if f > 0:
            hi = x
        else:
            lo = x
        d = _normal_pdf(x)
        step = f / d if d > 0 else 0.0
        x_new = x - step
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) < 1e-13:
            x = x_new
            break
        x = x_new
    return x


def p_infinity_ar1(x0: float, rho: float, step: int, z_star: float) -> float:
    """Limiting parallel-method p-value for the autoregressive chain.

    ``1 - Phi(sqrt(1 - rho^(2L)) * x0 - rho^L * z_star)`` where ``z_star`` is
    the standard-normal innovation behind the hub draw.
    """
    if not -1 < rho < 1:
        raise ValueError("rho must lie in (-1, 1)")
    if step < 1:
        raise ValueError("step must be >= 1")
    rho_l = rho**step
    return 1.0 - normal_cdf(math.sqrt(1.0 - rho_l * rho_l) * x0 - rho_l * z_star)


def power_parallel_limit(mu: float, alpha: float, rho: float, step: int) -> float:
    """Limiting power of the parallel method against a shifted-mean normal.

    The chain dependence shrinks the signal by ``sqrt(1 - rho^(2L))``:
    ``1 - Phi(Phi^{-1}(1 - alpha) - sqrt(1 - rho^(2L)) * mu)``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    rho_l = rho**step
    shrink = math.sqrt(1.0 - rho_l * rho_l)
    return 1.0 - normal_cdf(normal_quantile(1.0 - alpha) - shrink * mu)
