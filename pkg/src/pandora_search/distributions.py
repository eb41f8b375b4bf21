"""Finite discrete distributions on [0, 1], the common currency for box strategies.

A box commits to how much it will reveal about its prize, which reduces to a
choice of distribution over posterior means.  With a binary prize (low value 0,
high value 1, high probability ``mu``) the feasible set is every distribution
on [0, 1] with mean ``mu``; less informative signals are mean-preserving
contractions of the prior.  Distributions here are immutable values: every
operation returns a new object.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import PreconditionViolation

ATOM_TOL = 1e-12
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms at strictly increasing points of [0, 1] with positive weights.

    On construction, support points closer than ``ATOM_TOL`` are merged
    (weights summed) and zero-weight atoms are pruned; weights must sum to 1
    within ``WEIGHT_SUM_TOL`` and are otherwise kept bit-exact, so building a
    distribution from its own fields is the identity.
    """

    support: tuple[float, ...]
    weights: tuple[float, ...]
    _cum: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        support = [float(x) for x in self.support]
        weights = [float(w) for w in self.weights]
        if len(support) != len(weights):
            raise PreconditionViolation("support and weights must have equal length")
        if not support:
            raise PreconditionViolation("distribution needs at least one atom")
        if any(w < 0.0 for w in weights):
            raise PreconditionViolation("weights must be nonnegative")
        total = sum(weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise PreconditionViolation(f"weights sum to {total!r}, not 1")
        for x in support:
            if x < -ATOM_TOL or x > 1.0 + ATOM_TOL:
                raise PreconditionViolation(f"support point {x!r} outside [0, 1]")

        pairs = sorted(
            (min(max(x, 0.0), 1.0), w) for x, w in zip(support, weights)
        )
        merged_x: list[float] = []
        merged_w: list[float] = []
        for x, w in pairs:
            if merged_x and x - merged_x[-1] <= ATOM_TOL:
                # barycenter of near-coincident atoms, so chained garblings
                # cannot accumulate spurious duplicates
                if merged_w[-1] + w > 0.0:
                    merged_x[-1] = (merged_x[-1] * merged_w[-1] + x * w) / (merged_w[-1] + w)
                merged_w[-1] += w
            else:
                merged_x.append(x)
                merged_w.append(w)
        kept = [(x, w) for x, w in zip(merged_x, merged_w) if w > 0.0]
        if not kept:
            raise PreconditionViolation("all atoms have zero weight")
        object.__setattr__(self, "support", tuple(x for x, _ in kept))
        object.__setattr__(self, "weights", tuple(w for _, w in kept))
        cum: list[float] = []
        acc = 0.0
        for w in self.weights:
            acc += w
            cum.append(acc)
        cum[-1] = 1.0
        object.__setattr__(self, "_cum", tuple(cum))

    @property
    def mean(self) -> float:
        return sum(x * w for x, w in zip(self.support, self.weights))

    @property
    def variance(self) -> float:
        m = self.mean
        return sum(w * (x - m) ** 2 for x, w in zip(self.support, self.weights))

    @property
    def max_support(self) -> float:
        return self.support[-1]

    def prob_eq(self, x: float) -> float:
        """Probability mass exactly at ``x`` (within ``ATOM_TOL``)."""
        return sum(w for s, w in zip(self.support, self.weights) if abs(s - x) <= ATOM_TOL)

    def prob_lt(self, x: float) -> float:
        """Probability mass strictly below ``x``."""
        return sum(w for s, w in zip(self.support, self.weights) if s < x - ATOM_TOL)

    def cdf(self, x: float) -> float:
        """P(X <= x)."""
        return sum(w for s, w in zip(self.support, self.weights) if s <= x + ATOM_TOL)

    def expected_max_with(self, floor: float) -> float:
        """E[max(X, floor)], the kernel of the reservation-price equation."""
        return sum(w * (s if s > floor else floor) for s, w in zip(self.support, self.weights))

    def sample(self, rng: random.Random) -> float:
        """One draw using the supplied random source."""
        return self.support[bisect_right(self._cum, rng.random())]

    def to_dict(self) -> dict:
        return {"support": list(self.support), "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteDistribution":
        return cls(tuple(data["support"]), tuple(data["weights"]))


@dataclass(frozen=True)
class BinaryPrior:
    """Prize of value 1 with probability ``mu``, else 0."""

    mu: float

    def __post_init__(self) -> None:
        if not 0.0 < self.mu < 1.0:
            raise PreconditionViolation("mu must lie strictly between 0 and 1")


@dataclass(frozen=True)
class StrategyGrid:
    """Ordered grid of candidate support points, always containing 0, mu, 1.

    Deviation constructions anchor on the endpoints and on the mean, so the
    grid is required to contain them exactly.
    """

    points: tuple[float, ...]
    mu: float

    def __post_init__(self) -> None:
        pts = tuple(float(p) for p in self.points)
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise PreconditionViolation("grid points must be strictly increasing")
        for anchor in (0.0, self.mu, 1.0):
            if anchor not in pts:
                raise PreconditionViolation(f"grid must contain {anchor} exactly")
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, m: int, mu: float) -> "StrategyGrid":
        """Uniform lattice of ``m`` points on [0, 1] plus ``mu`` if absent."""
        if m < 2:
            raise PreconditionViolation("grid needs at least the endpoints")
        if not 0.0 < mu < 1.0:
            raise PreconditionViolation("mu must lie strictly between 0 and 1")
        pts = {i / (m - 1) for i in range(m)}
        pts.add(float(mu))
        return cls(tuple(sorted(pts)), float(mu))


def mean(d: DiscreteDistribution) -> float:
    """Mean of a discrete distribution (sum of support times weights)."""
    return d.mean


def point_mass(x: float) -> DiscreteDistribution:
    """The fully uninformative strategy: all mass on one point."""
    return DiscreteDistribution((x,), (1.0,))


def binary_prior_distribution(prior: BinaryPrior) -> DiscreteDistribution:
    """The fully revealing strategy: posterior is 0 or 1 with the prior odds."""
    return DiscreteDistribution((0.0, 1.0), (1.0 - prior.mu, prior.mu))


def two_point(mu: float, x_lo: float, x_hi: float) -> DiscreteDistribution:
    """The unique distribution on {x_lo, x_hi} with mean ``mu``.

    Requires x_lo <= mu <= x_hi; endpoints collapse to a point mass.
    """
    if x_lo > x_hi:
        raise PreconditionViolation("x_lo must not exceed x_hi")
    if mu < x_lo - ATOM_TOL or mu > x_hi + ATOM_TOL:
        raise PreconditionViolation(f"mean {mu!r} outside [{x_lo!r}, {x_hi!r}]")
    if x_hi - x_lo <= ATOM_TOL:
        return point_mass(x_lo)
    w_hi = (mu - x_lo) / (x_hi - x_lo)
    return DiscreteDistribution((x_lo, x_hi), (1.0 - w_hi, w_hi))


def random_garbling(d: DiscreteDistribution, seed: int, steps: int) -> DiscreteDistribution:
    """A random mean-preserving contraction of ``d``.

    Each step merges probability mass at two atoms into their barycenter,
    either fully or partially.  The mean is preserved exactly; informativeness
    only goes down.  ``steps=0`` returns ``d`` unchanged.
    """
    if steps < 0:
        raise PreconditionViolation("steps must be nonnegative")
    rng = random.Random(seed)
    current = d
    for _ in range(steps):
        k = len(current.support)
        if k < 2:
            break
        i, j = sorted(rng.sample(range(k), 2))
        if rng.random() < 1.0 / 3.0:
            fi = fj = 1.0
        else:
            fi = rng.uniform(0.1, 0.9)
            fj = rng.uniform(0.1, 0.9)
        current = _merge_atoms(current, i, j, fi, fj)
    return current


def _merge_atoms(
    d: DiscreteDistribution, i: int, j: int, frac_i: float, frac_j: float
) -> DiscreteDistribution:
    """Move fractions of atoms i and j onto their barycenter."""
    mi = frac_i * d.weights[i]
    mj = frac_j * d.weights[j]
    if mi + mj <= 0.0:
        return d
    bary = (mi * d.support[i] + mj * d.support[j]) / (mi + mj)
    support = list(d.support) + [bary]
    weights = list(d.weights) + [mi + mj]
    weights[i] -= mi
    weights[j] -= mj
    return DiscreteDistribution(tuple(support), tuple(weights))


def profile_to_dicts(profile: Sequence[DiscreteDistribution]) -> list[dict]:
    return [d.to_dict() for d in profile]


def profile_from_dicts(items: Iterable[dict]) -> tuple[DiscreteDistribution, ...]:
    return tuple(DiscreteDistribution.from_dict(item) for item in items)
