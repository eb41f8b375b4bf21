"""Searcher welfare with and without search frictions.

Frictionless: the searcher keeps the best of n draws from the symmetric
equilibrium distribution,

    u_L = 1 - (1 - a)^n + n * s * (s / (mu * n))^(n/(n-1)) / (2n - 1).

With frictions, when full revelation is the equilibrium (mu at or above the
cutoff), the search is a sequence of fully revealing inspections and

    u_F = (beta * mu - c) * (1 - (beta * (1 - mu))^n) / (1 - beta * (1 - mu)).

As beta -> 1 and c -> 0, u_F tends to 1 - (1 - mu)^n, the value of learning
every prize exactly, which strictly exceeds u_L for every finite n.  A small
friction therefore helps the searcher: it forces the boxes to compete on the
order in which they get visited.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .equilibrium import frictionless_equilibrium, frictions_threshold
from .errors import PreconditionViolation

BOUNDARY_BISECT_ITERS = 200


@dataclass(frozen=True)
class WelfareComparison:
    n: int
    mu: float
    beta: float
    cost: float
    u_frictionless: float
    u_frictions: float
    winner: str

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mu": self.mu,
            "beta": self.beta,
            "cost": self.cost,
            "u_frictionless": self.u_frictionless,
            "u_frictions": self.u_frictions,
            "winner": self.winner,
        }


def frictionless_pandora_utility(n: int, mu: float) -> float:
    """Expected maximum of n draws from the symmetric equilibrium."""
    eq = frictionless_equilibrium(n, mu)
    spread = n * eq.s * (eq.s / (mu * n)) ** (n / (n - 1)) / (2 * n - 1)
    return 1.0 - (1.0 - eq.a) ** n + spread


def frictions_pandora_utility(n: int, mu: float, beta: float, cost: float) -> float:
    """Expected discounted net utility under the full-revelation equilibrium.

    Only valid when full revelation is an equilibrium; otherwise the closed
    form does not describe play and a PreconditionViolation is raised.
    """
    if n < 2:
        raise PreconditionViolation("need at least two boxes")
    if mu < frictions_threshold(n):
        raise PreconditionViolation(
            f"mu={mu:.6g} below the full-revelation cutoff "
            f"{frictions_threshold(n):.6g} for n={n}; no symmetric pure "
            "equilibrium, so the closed form does not apply"
        )
    if beta * mu <= cost:
        raise PreconditionViolation("participation requires beta*mu > cost")
    q = beta * (1.0 - mu)
    return (beta * mu - cost) * (1.0 - q**n) / (1.0 - q)


def frictions_limit_utility(n: int, mu: float) -> float:
    """Vanishing-frictions limit: the expected best of n fully revealed prizes."""
    return 1.0 - (1.0 - mu) ** n


def compare_welfare(n: int, mu: float, beta: float, cost: float) -> WelfareComparison:
    u_l = frictionless_pandora_utility(n, mu)
    u_f = frictions_pandora_utility(n, mu, beta, cost)
    if abs(u_f - u_l) <= 1e-12:
        winner = "equal"
    else:
        winner = "frictions" if u_f > u_l else "frictionless"
    return WelfareComparison(n, mu, beta, cost, u_l, u_f, winner)


def boundary_cost(n: int, mu: float, beta: float) -> Optional[float]:
    """Largest cost at which the frictional search still beats frictionless
    play, or None when even c = 0 loses at this beta."""
    u_l = frictionless_pandora_utility(n, mu)

    def excess(c: float) -> float:
        return frictions_pandora_utility(n, mu, beta, c) - u_l

    if excess(0.0) < 0.0:
        return None
    hi = beta * mu * (1.0 - 1e-12)
    if excess(hi) >= 0.0:
        return hi
    lo = 0.0
    for _ in range(BOUNDARY_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def friction_dominance_region(
    n: int, mu: float, betas: Sequence[float]
) -> list[tuple[float, Optional[float]]]:
    """Rows (beta, boundary cost): the region where frictions win.

    The frictional utility increases in beta and decreases in c, so the
    boundary is a well-defined curve; None marks betas where frictionless
    play wins even at zero cost.
    """
    return [(float(b), boundary_cost(n, mu, float(b))) for b in betas]


def figure_data(figure: int, mu: Optional[float] = None, n_max: Optional[int] = None):
    """Tables behind the two summary figures.

    Figure 1: (n, a, s) for the frictionless equilibrium, default mu = 1/2.
    Figure 2: (n, u_frictionless, u_frictions_limit, eq_applicable) at the
    vanishing-frictions limit, default mu = 1/3.  Rows are emitted for every n
    with a flag marking whether the full-revelation closed form applies there,
    rather than silently dropping or extrapolating.
    """
    if figure == 1:
        mu = 0.5 if mu is None else mu
        n_max = 50 if n_max is None else n_max
        header = ["n", "a", "s"]
        rows = []
        for n in range(2, n_max + 1):
            eq = frictionless_equilibrium(n, mu)
            rows.append((n, eq.a, eq.s))
        return header, rows
    if figure == 2:
        mu = 1.0 / 3.0 if mu is None else mu
        n_max = 15 if n_max is None else n_max
        header = ["n", "u_frictionless", "u_frictions_limit", "eq_applicable"]
        rows = []
        for n in range(2, n_max + 1):
            rows.append(
                (
                    n,
                    frictionless_pandora_utility(n, mu),
                    frictions_limit_utility(n, mu),
                    mu >= frictions_threshold(n),
                )
            )
        return header, rows
    raise PreconditionViolation("figure must be 1 or 2")
