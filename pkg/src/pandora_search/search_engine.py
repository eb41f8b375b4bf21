"""Sequential search with inspection cost c and discount beta.

Each box i holds a reward drawn from a known discrete distribution F_i.  The
searcher (Pandora) pays c per inspection, discounts by beta per period, keeps
full recall, and has an outside option worth 0.  The optimal policy is the
classic index rule: inspect boxes in decreasing order of their reservation
price z, stop once the best sampled reward weakly exceeds every remaining z,
then take the best sampled reward.  Indifference is resolved fairly, by a
uniform choice among the tied boxes.

Reward collected after k inspections is worth beta^k * x - c * sum_{j<k} beta^j.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .distributions import ATOM_TOL, DiscreteDistribution
from .errors import EnumerationBudgetExceeded, PreconditionViolation

BISECT_ITERS = 200
Z_GROUP_TOL = 1e-12
ENUMERATION_BUDGET = 10_000_000


@dataclass(frozen=True)
class ReservationPrice:
    """Index value z of a box; ``attained`` is False when the frictionless
    convention (z = essential supremum) was applied instead of a proper root."""

    value: float
    attained: bool


@dataclass(frozen=True)
class SearchEnvironment:
    """n boxes with a common (c, beta) and a profile of reward distributions."""

    n: int
    beta: float
    cost: float
    profile: tuple[DiscreteDistribution, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "profile", tuple(self.profile))
        if self.n != len(self.profile):
            raise PreconditionViolation("profile length must equal n")
        if self.n < 1:
            raise PreconditionViolation("need at least one box")
        if not 0.0 < self.beta <= 1.0:
            raise PreconditionViolation("beta must be in (0, 1]")
        if self.cost < 0.0:
            raise PreconditionViolation("cost must be nonnegative")
        for i, d in enumerate(self.profile):
            if self.beta * d.mean <= self.cost:
                raise PreconditionViolation(
                    f"box {i}: participation requires beta*mean > cost "
                    f"({self.beta * d.mean:.6g} <= {self.cost:.6g})"
                )


@dataclass(frozen=True)
class SearchOutcome:
    """Win probability per box plus Pandora's expected discounted net utility.

    Monte Carlo estimates carry standard errors; exact outcomes leave them None.
    """

    win_prob: tuple[float, ...]
    pandora_utility: float
    stop_without_selection_prob: float
    win_prob_se: Optional[tuple[float, ...]] = None
    pandora_utility_se: Optional[float] = None
    samples: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "win_prob", tuple(self.win_prob))
        if any(p < -1e-12 for p in self.win_prob):
            raise PreconditionViolation("win probabilities must be nonnegative")
        total = sum(self.win_prob) + self.stop_without_selection_prob
        if abs(total - 1.0) > 1e-9:
            raise PreconditionViolation(f"win probabilities sum to {total!r}, not 1")

    def to_dict(self) -> dict:
        out = {
            "win_prob": list(self.win_prob),
            "pandora_utility": self.pandora_utility,
            "stop_without_selection_prob": self.stop_without_selection_prob,
        }
        if self.win_prob_se is not None:
            out["stderr"] = {
                "win_prob": list(self.win_prob_se),
                "pandora_utility": self.pandora_utility_se,
            }
            out["samples"] = self.samples
        return out


def reservation_price_binary(mu: float, beta: float, cost: float) -> float:
    """Closed-form reservation price of a fully revealing box with binary prior:
    z = (beta*mu - c) / (1 - beta*(1 - mu))."""
    if beta * mu <= cost:
        raise PreconditionViolation("participation requires beta*mu > cost")
    return (beta * mu - cost) / (1.0 - beta * (1.0 - mu))


def reservation_price(d: DiscreteDistribution, beta: float, cost: float) -> ReservationPrice:
    """Solve z = -c + beta * E[max(X, z)] on [0, 1] by bisection.

    g(z) = -c + beta*E[max(X, z)] - z is continuous, piecewise linear and
    nonincreasing, with g(0) = beta*mean - c > 0 under participation.  With
    beta = 1 and c = 0, g vanishes identically above the support, so the
    smallest root is the essential supremum (``attained=False``).
    """
    if not 0.0 < beta <= 1.0:
        raise PreconditionViolation("beta must be in (0, 1]")
    if cost < 0.0:
        raise PreconditionViolation("cost must be nonnegative")
    if beta == 1.0 and cost == 0.0:
        return ReservationPrice(d.max_support, attained=False)
    if beta * d.mean <= cost:
        raise PreconditionViolation("participation requires beta*mean > cost")

    def g(z: float) -> float:
        return -cost + beta * d.expected_max_with(z) - z

    lo, hi = 0.0, 1.0
    if g(hi) > 0.0:
        raise PreconditionViolation("reservation-price equation has no root in [0, 1]")
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return ReservationPrice(0.5 * (lo + hi), attained=True)


def _reservation_values(env: SearchEnvironment) -> list[float]:
    return [reservation_price(d, env.beta, env.cost).value for d in env.profile]


def _tie_groups(zs: Sequence[float]) -> list[list[int]]:
    """Box indices grouped by equal z (within Z_GROUP_TOL), highest z first."""
    order = sorted(range(len(zs)), key=lambda i: -zs[i])
    groups: list[list[int]] = []
    for i in order:
        if groups and abs(zs[groups[-1][-1]] - zs[i]) <= Z_GROUP_TOL:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _walk(
    order: Sequence[int],
    zs: Sequence[float],
    xs: Sequence[float],
    beta: float,
    cost: float,
) -> tuple[list[int], float, float]:
    """Follow the index rule along a fixed visit order.

    Returns (tied winners, best sampled reward, realized utility).  The visit
    order must already be sorted by decreasing z, so the next box's z is the
    maximum among the unopened ones.
    """
    best = 0.0
    opened: list[int] = []
    utility_cost = 0.0
    disc = 1.0
    for idx in order:
        if zs[idx] <= best:
            break
        utility_cost += disc * cost
        disc *= beta
        opened.append(idx)
        if xs[idx] > best:
            best = xs[idx]
    winners = [i for i in opened if xs[i] == best]
    utility = disc * best - utility_cost
    return winners, best, utility


def run_search(
    env: SearchEnvironment, realizations: Sequence[float], rng: random.Random
) -> tuple[Optional[int], float]:
    """Simulate one search path with fair random tie-breaking.

    ``realizations[i]`` is the reward Pandora would find inside box i.  Returns
    the selected box (None if nothing was opened) and the realized discounted
    net utility.
    """
    if len(realizations) != env.n:
        raise PreconditionViolation("need one realization per box")
    zs = _reservation_values(env)
    order: list[int] = []
    for group in _tie_groups(zs):
        group = list(group)
        rng.shuffle(group)
        order.extend(group)
    winners, _, utility = _walk(order, zs, realizations, env.beta, env.cost)
    if not winners:
        return None, utility
    return winners[rng.randrange(len(winners))], utility


def exact_outcome(env: SearchEnvironment) -> SearchOutcome:
    """Exact win probabilities and expected utility by full enumeration.

    Enumerates every realization profile and, within each set of boxes tied at
    the same z, every visit permutation; terminal ties are split evenly.  Cost
    grows as prod(|support_i|) * prod(|group|!), guarded by
    ``ENUMERATION_BUDGET``.
    """
    zs = _reservation_values(env)
    groups = _tie_groups(zs)
    branches = 1.0
    for d in env.profile:
        branches *= len(d.support)
    for g in groups:
        branches *= math.factorial(len(g))
    if branches > ENUMERATION_BUDGET:
        raise EnumerationBudgetExceeded(
            f"{branches:.3g} weighted branches exceed the exact-enumeration "
            "budget; use monte_carlo_outcome"
        )

    group_perms = [list(itertools.permutations(g)) for g in groups]
    perm_weight = 1.0
    for perms in group_perms:
        perm_weight /= len(perms)

    win = [0.0] * env.n
    utility = 0.0
    stopped = 0.0
    atom_lists = [list(zip(d.support, d.weights)) for d in env.profile]
    for combo in itertools.product(*atom_lists):
        xs = [x for x, _ in combo]
        p = perm_weight
        for _, w in combo:
            p *= w
        for perm_combo in itertools.product(*group_perms):
            order = [i for grp in perm_combo for i in grp]
            winners, _, u = _walk(order, zs, xs, env.beta, env.cost)
            utility += p * u
            if winners:
                share = p / len(winners)
                for i in winners:
                    win[i] += share
            else:
                stopped += p
    return SearchOutcome(tuple(win), utility, stopped)


def monte_carlo_outcome(env: SearchEnvironment, samples: int, seed: int) -> SearchOutcome:
    """Seeded Monte Carlo estimate of ``exact_outcome`` with standard errors.

    Deterministic given (env, samples, seed); shards run with distinct seeds
    can be merged by weighted averaging.
    """
    if samples < 1:
        raise PreconditionViolation("samples must be at least 1")
    rng = random.Random(seed)
    zs = _reservation_values(env)
    groups = _tie_groups(zs)

    wins = [0] * env.n
    stopped = 0
    u_sum = 0.0
    u_sq = 0.0
    for _ in range(samples):
        xs = [d.sample(rng) for d in env.profile]
        order: list[int] = []
        for group in groups:
            g = list(group)
            rng.shuffle(g)
            order.extend(g)
        winners, _, u = _walk(order, zs, xs, env.beta, env.cost)
        if winners:
            wins[winners[rng.randrange(len(winners))]] += 1
        else:
            stopped += 1
        u_sum += u
        u_sq += u * u

    n = float(samples)
    win_prob = tuple(w / n for w in wins)
    u_mean = u_sum / n
    if samples > 1:
        u_var = max(u_sq / n - u_mean * u_mean, 0.0) * n / (n - 1.0)
        u_se = math.sqrt(u_var / n)
    else:
        u_se = float("nan")
    win_se = tuple(math.sqrt(max(p * (1.0 - p), 0.0) / n) for p in win_prob)
    return SearchOutcome(
        win_prob,
        u_mean,
        stopped / n,
        win_prob_se=win_se,
        pandora_utility_se=u_se,
        samples=samples,
    )
