"""Closed-form symmetric equilibrium of the frictionless disclosure game.

Without frictions the game reduces to a static contest: every box picks a
distribution on [0, 1] with mean mu and the highest realization wins.  The
unique symmetric equilibrium puts an atom ``a`` on 1 and spreads the rest as
F(x) = (1 - a) * (x / s)^(1/(n-1)) on [0, s].  For mu <= 1/n the atom is 0 and
s = n * mu; above that threshold ``a`` solves a = mu * (1 - (1 - a)^n) and
s = n * mu * (1 - a)^(n-1) = n * (mu - a) / (1 - a).

With frictions, full revelation is the unique symmetric equilibrium whenever
mu >= 1 - (1/n)^(1/(n-1)); below that cutoff no symmetric pure equilibrium
exists.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .distributions import DiscreteDistribution, StrategyGrid
from .errors import PreconditionViolation

FIXED_POINT_ITERS = 200
FIXED_POINT_RESIDUAL_TOL = 1e-14

HIGH_MEAN = "high-mean"
LOW_MEAN = "low-mean"


@dataclass(frozen=True)
class FrictionlessEquilibrium:
    """Parameters (a, s, branch) of the symmetric equilibrium for (n, mu)."""

    n: int
    mu: float
    a: float
    s: float
    branch: str

    def cdf(self, x: float) -> float:
        return equilibrium_cdf(self, x)


def _check_params(n: int, mu: float) -> None:
    if n < 2:
        raise PreconditionViolation("need at least two boxes")
    if not 0.0 < mu < 1.0:
        raise PreconditionViolation("mu must lie strictly between 0 and 1")


def solve_point_mass(n: int, mu: float) -> float:
    """Weight on 1 in the symmetric equilibrium: the positive root of
    phi(a) = mu * (1 - (1 - a)^n) - a, or 0 when mu <= 1/n."""
    _check_params(n, mu)
    if mu * n <= 1.0:
        return 0.0

    def phi(a: float) -> float:
        return mu * (1.0 - (1.0 - a) ** n) - a

    lo, hi = 1e-12, mu
    if phi(lo) <= 0.0:
        # mu is within rounding of 1/n; the positive root is indistinguishable from 0
        return 0.0
    for _ in range(FIXED_POINT_ITERS):
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    if abs(phi(a)) > FIXED_POINT_RESIDUAL_TOL:
        raise PreconditionViolation(f"fixed point residual {phi(a):.3g} too large")
    return a


def frictionless_equilibrium(n: int, mu: float) -> FrictionlessEquilibrium:
    """Solve for the symmetric equilibrium, choosing the branch by mu vs 1/n."""
    _check_params(n, mu)
    if mu * n <= 1.0:
        return FrictionlessEquilibrium(n, mu, 0.0, n * mu, LOW_MEAN)
    a = solve_point_mass(n, mu)
    s = n * mu * (1.0 - a) ** (n - 1)
    return FrictionlessEquilibrium(n, mu, a, s, HIGH_MEAN)


def equilibrium_cdf(eq: FrictionlessEquilibrium, x: float) -> float:
    """CDF of the equilibrium distribution: continuous on [0, s], atom at 1."""
    if x < 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    if x >= eq.s:
        return 1.0 - eq.a
    return (1.0 - eq.a) * (x / eq.s) ** (1.0 / (eq.n - 1))


def equilibrium_sample(
    eq: FrictionlessEquilibrium,
    rng: Union[int, random.Random, np.random.Generator],
    size: int | None = None,
):
    """Inverse-CDF sampling: u < 1 - a maps to s * (u / (1 - a))^(n-1), else 1.

    With ``size`` given, returns an ndarray drawn with numpy; otherwise a
    single float.
    """
    if size is not None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        u = gen.random(size)
        cont = eq.s * (u / (1.0 - eq.a)) ** (eq.n - 1) if eq.a < 1.0 else np.ones(size)
        return np.where(u < 1.0 - eq.a, cont, 1.0)
    if isinstance(rng, int):
        rng = random.Random(rng)
    u = rng.random()
    if u < 1.0 - eq.a:
        return eq.s * (u / (1.0 - eq.a)) ** (eq.n - 1)
    return 1.0


def _partial_mean(eq: FrictionlessEquilibrium, lo: float, hi: float) -> float:
    """Integral of x dF over [lo, hi] within the continuous part [0, s]."""
    n = eq.n
    scale = (1.0 - eq.a) / (n * eq.s ** (1.0 / (n - 1)))
    return scale * (hi ** (n / (n - 1)) - lo ** (n / (n - 1)))


def discretize_equilibrium(
    eq: FrictionlessEquilibrium, grid: StrategyGrid
) -> DiscreteDistribution:
    """Project the equilibrium onto a grid, preserving the mean.

    Each grid cell's continuous mass is split between the cell's endpoints in
    the proportion that keeps the cell's conditional mean, so the step CDF
    stays within one cell of the true CDF and the overall mean is exact up to
    rounding.  The atom on 1 is added to the top grid point.  A final transfer
    between the two grid points bracketing mu removes the float residual.
    """
    if abs(grid.mu - eq.mu) > 1e-12:
        raise PreconditionViolation("grid mean anchor must match the equilibrium mean")
    pts = grid.points
    weights = [0.0] * len(pts)
    for k in range(len(pts) - 1):
        lo, hi = pts[k], pts[k + 1]
        seg_lo, seg_hi = min(lo, eq.s), min(hi, eq.s)
        if seg_hi <= seg_lo:
            continue
        mass = equilibrium_cdf(eq, seg_hi) - equilibrium_cdf(eq, seg_lo)
        if mass <= 0.0:
            continue
        cell_mean = _partial_mean(eq, seg_lo, seg_hi) / mass
        w_hi = mass * (cell_mean - lo) / (hi - lo)
        weights[k] += mass - w_hi
        weights[k + 1] += w_hi
    weights[-1] += eq.a

    d = DiscreteDistribution(pts, tuple(weights))
    return _correct_mean(d, eq.mu)


def _correct_mean(d: DiscreteDistribution, mu: float) -> DiscreteDistribution:
    """Shift a tiny amount of mass between the atoms bracketing mu so the
    mean matches exactly (up to one rounding step)."""
    delta = mu - d.mean
    if delta == 0.0:
        return d
    below = max(i for i, x in enumerate(d.support) if x <= mu)
    above = min(
        (i for i, x in enumerate(d.support) if x > mu), default=len(d.support) - 1
    )
    if above == below:
        below -= 1
    gap = d.support[above] - d.support[below]
    move = delta / gap
    weights = list(d.weights)
    source = below if move > 0.0 else above
    if weights[source] <= abs(move):
        return d
    weights[below] -= move
    weights[above] += move
    return DiscreteDistribution(d.support, tuple(weights))


def frictions_threshold(n: int) -> float:
    """Smallest mean for which full revelation survives with frictions:
    mu* = 1 - (1/n)^(1/(n-1))."""
    if n < 2:
        raise PreconditionViolation("need at least two boxes")
    return 1.0 - (1.0 / n) ** (1.0 / (n - 1))


def full_info_is_equilibrium(n: int, mu: float) -> bool:
    """Whether full revelation by every box is an equilibrium with frictions
    (ties at the threshold count as yes)."""
    _check_params(n, mu)
    return mu >= frictions_threshold(n)


def comparative_statics(mu: float, n_range: Iterable[int]) -> list[tuple[int, float, float]]:
    """Rows (n, a, s): the atom grows and the spread shrinks as n rises."""
    rows = []
    for n in n_range:
        eq = frictionless_equilibrium(n, mu)
        rows.append((n, eq.a, eq.s))
    return rows
