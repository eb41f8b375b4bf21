"""Brute-force best responses and epsilon-equilibrium certificates.

Frictionless play is a static contest, so a deviator's payoff is linear in its
own distribution: payoff(q) = sum_x q(x) * win(x), where win(x) is the exact
fair-tie win probability of realization x against the opponents.  Maximizing a
linear objective over the mean-constrained simplex always admits an optimum on
at most two support points, so exhaustive search over grid pairs is exact on
the grid.

With frictions there is no such linearity; the searched family is a sweep of
candidate reservation values with all below-z mass on {0, y} and a single atom
above (plus the fully revealing and fully uninformative strategies).  Reports
therefore certify a lower bound on the best response and record the family.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .distributions import (
    ATOM_TOL,
    BinaryPrior,
    DiscreteDistribution,
    StrategyGrid,
    binary_prior_distribution,
    point_mass,
    two_point,
)
from .errors import EnumerationBudgetExceeded, PreconditionViolation
from .search_engine import (
    SearchEnvironment,
    SearchOutcome,
    exact_outcome,
    reservation_price,
    reservation_price_binary,
)

FRICTIONS_Z_SWEEP = 64
MAX_BELOW_POINTS = 6


@dataclass(frozen=True)
class BestResponseReport:
    baseline_payoff: float
    best_deviation: DiscreteDistribution
    best_payoff: float
    gain: float
    method: str
    partial: bool = False

    def to_dict(self) -> dict:
        return {
            "baseline_payoff": self.baseline_payoff,
            "best_payoff": self.best_payoff,
            "gain": self.gain,
            "best_deviation": self.best_deviation.to_dict(),
            "family": self.method,
            "partial": self.partial,
        }


@dataclass(frozen=True)
class FiniteMixedStrategy:
    """Finite mixture over pure strategies, all with the same mean."""

    components: tuple[tuple[DiscreteDistribution, float], ...]

    def __post_init__(self) -> None:
        comps = tuple((d, float(p)) for d, p in self.components)
        if not comps:
            raise PreconditionViolation("mixture needs at least one component")
        if abs(sum(p for _, p in comps) - 1.0) > 1e-12:
            raise PreconditionViolation("component probabilities must sum to 1")
        if any(p <= 0.0 for _, p in comps):
            raise PreconditionViolation("component probabilities must be positive")
        mu = comps[0][0].mean
        for d, _ in comps[1:]:
            if abs(d.mean - mu) > 1e-9:
                raise PreconditionViolation("all components must share one mean")
        object.__setattr__(self, "components", comps)

    @property
    def mean(self) -> float:
        return self.components[0][0].mean

    @classmethod
    def pure(cls, d: DiscreteDistribution) -> "FiniteMixedStrategy":
        return cls(((d, 1.0),))


@dataclass(frozen=True)
class DeviationExhibit:
    deviation: DiscreteDistribution
    baseline_payoff: float
    deviation_payoff: float
    gain: float
    note: str


@dataclass(frozen=True)
class CertificationReport:
    certified: bool
    epsilon: float
    regime: str
    per_box: tuple[BestResponseReport, ...]

    @property
    def max_gain(self) -> float:
        return max(r.gain for r in self.per_box)

    def to_dict(self) -> dict:
        worst = max(self.per_box, key=lambda r: r.gain)
        return {
            "certified": self.certified,
            "epsilon": self.epsilon,
            "regime": self.regime,
            "gain": self.max_gain,
            "best_deviation": worst.best_deviation.to_dict(),
            "family": worst.method,
            "per_box": [r.to_dict() for r in self.per_box],
        }


def _candidate_map(fn: Callable, items: Sequence) -> list:
    """Evaluate candidates, fanning out over threads if PANDORA_EQ_THREADS > 1.

    Order is preserved, so the later argmax (first strict maximum) is
    deterministic regardless of the thread count.
    """
    try:
        workers = int(os.environ.get("PANDORA_EQ_THREADS", "1"))
    except ValueError:
        workers = 1
    if workers <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def tie_split_win_probability(
    x: float, opponents: Sequence[DiscreteDistribution]
) -> float:
    """Exact probability that realization ``x`` wins a fair-tie contest
    against independent draws from ``opponents``."""
    ties = {0: 1.0}
    for opp in opponents:
        below = opp.prob_lt(x)
        at = opp.prob_eq(x)
        nxt: dict[int, float] = {}
        for t, p in ties.items():
            if below > 0.0:
                nxt[t] = nxt.get(t, 0.0) + p * below
            if at > 0.0:
                nxt[t + 1] = nxt.get(t + 1, 0.0) + p * at
        ties = nxt
        if not ties:
            return 0.0
    return sum(p / (t + 1) for t, p in ties.items())


def static_argmax_outcome(profile: Sequence[DiscreteDistribution]) -> SearchOutcome:
    """Outcome of the one-shot contest: highest realization wins, fair ties.

    This is the frictionless limit computed directly, without any search walk;
    utility is the expected maximum realization.
    """
    profile = list(profile)
    n = len(profile)
    win = []
    for i, d in enumerate(profile):
        others = profile[:i] + profile[i + 1 :]
        win.append(
            sum(
                w * tie_split_win_probability(x, others)
                for x, w in zip(d.support, d.weights)
            )
        )
    points = sorted({x for d in profile for x in d.support})
    e_max = 0.0
    prev = 0.0
    for v in points:
        p_le = 1.0
        for d in profile:
            p_le *= d.cdf(v)
        e_max += v * (p_le - prev)
        prev = p_le
    total = sum(win)
    return SearchOutcome(tuple(w / total for w in win), e_max, 0.0)


def _static_payoff(d: DiscreteDistribution, opponents: Sequence[DiscreteDistribution]) -> float:
    return sum(
        w * tie_split_win_probability(x, opponents) for x, w in zip(d.support, d.weights)
    )


def frictionless_best_response(
    opponents: Sequence[DiscreteDistribution],
    grid: StrategyGrid,
    incumbent: Optional[DiscreteDistribution] = None,
) -> BestResponseReport:
    """Exact best response on the grid via two-point exhaustive search.

    The baseline is the incumbent's own static payoff when given, else the
    symmetric share 1/n.
    """
    opponents = list(opponents)
    n = len(opponents) + 1
    mu = grid.mu
    pts = np.asarray(grid.points)
    win = np.array([tie_split_win_probability(x, opponents) for x in grid.points])

    mu_idx = int(np.searchsorted(pts, mu))
    best_payoff = float(win[mu_idx])
    best_dist = point_mass(mu)

    below = np.nonzero(pts < mu)[0]
    above = np.nonzero(pts > mu)[0]
    hi_pts = pts[above]
    hi_win = win[above]
    for i in below:
        q_hi = (mu - pts[i]) / (hi_pts - pts[i])
        payoff = (1.0 - q_hi) * win[i] + q_hi * hi_win
        j = int(np.argmax(payoff))
        if payoff[j] > best_payoff:
            best_payoff = float(payoff[j])
            best_dist = two_point(mu, float(pts[i]), float(hi_pts[j]))

    if incumbent is not None:
        baseline = _static_payoff(incumbent, opponents)
    else:
        baseline = 1.0 / n
    return BestResponseReport(
        baseline_payoff=baseline,
        best_deviation=best_dist,
        best_payoff=best_payoff,
        gain=best_payoff - baseline,
        method="two-point",
    )


def _deviator_payoff(
    candidate: DiscreteDistribution,
    opponents: Sequence[DiscreteDistribution],
    beta: float,
    cost: float,
) -> float:
    env = SearchEnvironment(
        len(opponents) + 1, beta, cost, (candidate, *opponents)
    )
    return exact_outcome(env).win_prob[0]


def _frictions_candidates(
    mu: float, grid: StrategyGrid, beta: float, cost: float
) -> list[DiscreteDistribution]:
    """The searched deviation family, in deterministic order.

    Fully uninformative, fully revealing, every two-point {0, m} with mean mu,
    then the swept family: reservation value z on a uniform sweep, one atom
    above z, remaining mass on {0, y}.
    """
    cands: list[DiscreteDistribution] = [
        point_mass(mu),
        binary_prior_distribution(BinaryPrior(mu)),
    ]
    for m in grid.points:
        if mu + ATOM_TOL < m < 1.0 - ATOM_TOL:
            cands.append(two_point(mu, 0.0, m))

    z_top = reservation_price_binary(mu, beta, cost)
    z_floor = beta * mu - cost
    interior = [p for p in grid.points if ATOM_TOL < p < 1.0 - ATOM_TOL]
    for k in range(1, FRICTIONS_Z_SWEEP + 1):
        z_cand = z_floor + (z_top - z_floor) * k / (FRICTIONS_Z_SWEEP + 1)
        below = [y for y in interior if y < z_cand - 1e-9]
        if len(below) > MAX_BELOW_POINTS:
            step = len(below) / MAX_BELOW_POINTS
            below = [below[int(i * step)] for i in range(MAX_BELOW_POINTS)]
        for m in grid.points:
            if m <= z_cand + 1e-9:
                continue
            p = ((1.0 - beta) * z_cand + cost) / (beta * (m - z_cand))
            if not 0.0 < p <= 1.0:
                continue
            rest = mu - p * m
            if rest < -ATOM_TOL:
                continue
            for y in below:
                w_y = rest / y
                w_0 = 1.0 - p - w_y
                if w_y < 0.0 or w_0 < -ATOM_TOL:
                    continue
                cands.append(
                    DiscreteDistribution((0.0, y, m), (max(w_0, 0.0), w_y, p))
                )
    return cands


def frictions_best_response(
    opponents: Sequence[DiscreteDistribution],
    grid: StrategyGrid,
    beta: float,
    cost: float,
    incumbent: Optional[DiscreteDistribution] = None,
) -> BestResponseReport:
    """Best deviation found over the frictions candidate family.

    A lower bound on the true best response; the report names the family.
    """
    opponents = list(opponents)
    n = len(opponents) + 1
    mu = grid.mu
    if beta * mu <= cost:
        raise PreconditionViolation("participation requires beta*mu > cost")

    candidates = _frictions_candidates(mu, grid, beta, cost)
    partial = False

    def payoff(c: DiscreteDistribution) -> float:
        try:
            return _deviator_payoff(c, opponents, beta, cost)
        except EnumerationBudgetExceeded:
            return float("-inf")

    payoffs = _candidate_map(payoff, candidates)
    if any(p == float("-inf") for p in payoffs):
        partial = True
    best_idx = 0
    for i, p in enumerate(payoffs):
        if p > payoffs[best_idx]:
            best_idx = i

    if incumbent is not None:
        baseline = _deviator_payoff(incumbent, opponents, beta, cost)
    else:
        baseline = 1.0 / n
    return BestResponseReport(
        baseline_payoff=baseline,
        best_deviation=candidates[best_idx],
        best_payoff=payoffs[best_idx],
        gain=payoffs[best_idx] - baseline,
        method="uninformative|full-info|two-point|below-z-sweep",
        partial=partial,
    )


def check_atom_instability(
    strategy: DiscreteDistribution, n: int, grid: StrategyGrid
) -> DeviationExhibit:
    """Refute a symmetric atomic profile in the frictionless game.

    Shifts every atom below 1 to the next grid point above it, then mixes in
    a point mass at 0 to restore the mean.  Against opponents still playing
    ``strategy``, ties at the shifted atoms become outright wins, which beats
    the O(grid step) cost of the repair mass for any reasonably fine grid.
    """
    if n < 2:
        raise PreconditionViolation("need at least two boxes")
    movable = [x for x in strategy.support if x < 1.0 - ATOM_TOL]
    if not movable:
        raise PreconditionViolation("no atom below 1 to shift")

    shifted_support: list[float] = []
    shifted_weights: list[float] = []
    for x, w in zip(strategy.support, strategy.weights):
        if x < 1.0 - ATOM_TOL:
            targets = [g for g in grid.points if g > x + ATOM_TOL]
            shifted_support.append(targets[0])
        else:
            shifted_support.append(x)
        shifted_weights.append(w)
    shifted = DiscreteDistribution(tuple(shifted_support), tuple(shifted_weights))

    lam = 1.0 - strategy.mean / shifted.mean
    deviation = DiscreteDistribution(
        (0.0, *shifted.support),
        (lam, *(w * (1.0 - lam) for w in shifted.weights)),
    )

    opponents = [strategy] * (n - 1)
    baseline = _static_payoff(strategy, opponents)
    payoff = _static_payoff(deviation, opponents)
    return DeviationExhibit(
        deviation=deviation,
        baseline_payoff=baseline,
        deviation_payoff=payoff,
        gain=payoff - baseline,
        note="atoms shifted one grid point up, mean repaired with mass at 0",
    )


def _raise_reservation_value(
    target: DiscreteDistribution,
    z_target: float,
    fraction: float,
    grid: StrategyGrid,
) -> Optional[DiscreteDistribution]:
    """Move a small amount of mass so the reservation value strictly rises.

    Preferred move: take mass from the lowest positive atom below z, send the
    mean-weighted share to the top atom and the rest to 0.  If everything
    below z sits on 0 already, spread an interior atom upward instead.
    """
    top = target.max_support
    below = [
        (x, w)
        for x, w in zip(target.support, target.weights)
        if ATOM_TOL < x < z_target - 1e-9
    ]
    if below and top > z_target + 1e-9:
        y, w_y = below[0]
        gamma = fraction * w_y
        eps = gamma * y / top
        rho = gamma - eps
        support = list(target.support) + [0.0]
        weights = list(target.weights) + [rho]
        weights[target.support.index(y)] -= gamma
        weights[target.support.index(top)] += eps
        return DiscreteDistribution(tuple(support), tuple(weights))

    spreadable = [
        (x, w)
        for x, w in zip(target.support, target.weights)
        if x > z_target + 1e-9 and x < 1.0 - ATOM_TOL
    ]
    if not spreadable:
        return None
    u, w_u = spreadable[0]
    higher = [g for g in grid.points if g > u + ATOM_TOL]
    if not higher:
        return None
    v = higher[0]
    gamma = fraction * w_u
    support = list(target.support) + [v, 0.0]
    weights = list(target.weights) + [gamma * u / v, gamma * (1.0 - u / v)]
    weights[target.support.index(u)] -= gamma
    return DiscreteDistribution(tuple(support), tuple(weights))


def _mixture_deviator_payoff(
    deviator: FiniteMixedStrategy,
    others: FiniteMixedStrategy,
    n: int,
    beta: float,
    cost: float,
) -> float:
    """Deviator's expected win probability when each box draws its component
    independently."""
    total = 0.0
    for dev_comp, dev_p in deviator.components:
        for opp_combo in itertools.product(others.components, repeat=n - 1):
            p = dev_p
            for _, q in opp_combo:
                p *= q
            profile = (dev_comp, *(d for d, _ in opp_combo))
            env = SearchEnvironment(n, beta, cost, profile)
            total += p * exact_outcome(env).win_prob[0]
    return total


def check_overcut_deviation(
    mix: FiniteMixedStrategy,
    n: int,
    beta: float,
    cost: float,
    grid: StrategyGrid,
) -> DeviationExhibit:
    """Refute a symmetric profile whose top induced reservation value sits
    strictly below the fully revealing one.

    The deviation reworks the top-z component so its reservation value rises
    slightly: the deviator is then visited first whenever the overcut
    component is drawn, a first-order gain against a perturbation cost that
    vanishes with the moved mass.
    """
    if n < 2:
        raise PreconditionViolation("need at least two boxes")
    mu = mix.mean
    z_top = reservation_price_binary(mu, beta, cost)
    comp_z = [
        reservation_price(d, beta, cost).value for d, _ in mix.components
    ]
    k = max(range(len(comp_z)), key=lambda i: comp_z[i])
    z_hat = comp_z[k]
    if z_hat >= z_top - 1e-9:
        raise PreconditionViolation(
            "profile already induces the maximal reservation value; "
            "no room to overcut"
        )

    baseline = _mixture_deviator_payoff(mix, mix, n, beta, cost)
    target, _ = mix.components[k]
    best: Optional[DeviationExhibit] = None
    fraction = 1.0
    for _ in range(14):
        raised = _raise_reservation_value(target, z_hat, fraction, grid)
        fraction *= 0.5
        if raised is None:
            continue
        if reservation_price(raised, beta, cost).value <= z_hat + 1e-12:
            continue
        comps = list(mix.components)
        comps[k] = (raised, comps[k][1])
        dev_mix = FiniteMixedStrategy(tuple(comps))
        payoff = _mixture_deviator_payoff(dev_mix, mix, n, beta, cost)
        exhibit = DeviationExhibit(
            deviation=raised,
            baseline_payoff=baseline,
            deviation_payoff=payoff,
            gain=payoff - baseline,
            note="top-z component overcut by shifting mass above z",
        )
        if best is None or exhibit.gain > best.gain:
            best = exhibit
        if exhibit.gain > 0.0:
            break
    if best is None:
        raise PreconditionViolation("no feasible overcut perturbation found")
    return best


def certify_epsilon_equilibrium(
    profile: Sequence[DiscreteDistribution],
    regime: str,
    grid: StrategyGrid,
    epsilon: float,
    beta: float = 1.0,
    cost: float = 0.0,
) -> CertificationReport:
    """Check every box's best-response gain against ``epsilon``.

    ``regime`` is "frictionless" or "frictions"; gains are computed over the
    corresponding candidate family with the box's actual strategy as baseline.
    """
    if regime not in ("frictionless", "frictions"):
        raise PreconditionViolation("regime must be 'frictionless' or 'frictions'")
    profile = list(profile)
    reports = []
    for i, incumbent in enumerate(profile):
        opponents = profile[:i] + profile[i + 1 :]
        if regime == "frictionless":
            rep = frictionless_best_response(opponents, grid, incumbent=incumbent)
        else:
            rep = frictions_best_response(
                opponents, grid, beta, cost, incumbent=incumbent
            )
        reports.append(rep)
    certified = all(r.gain <= epsilon for r in reports)
    return CertificationReport(certified, epsilon, regime, tuple(reports))
