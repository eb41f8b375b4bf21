"""Sequential search over boxes that strategically choose what to disclose.

Boxes commit to information-disclosure distributions; a searcher inspects them
in reservation-price order with fair tie-breaking.  The package solves the
symmetric equilibria in closed form, certifies them with a brute-force
best-response oracle on discretized strategy spaces, and compares searcher
welfare with and without search frictions.
"""

from .distributions import (
    BinaryPrior,
    DiscreteDistribution,
    StrategyGrid,
    binary_prior_distribution,
    mean,
    point_mass,
    profile_from_dicts,
    profile_to_dicts,
    random_garbling,
    two_point,
)
from .equilibrium import (
    FrictionlessEquilibrium,
    comparative_statics,
    discretize_equilibrium,
    equilibrium_cdf,
    equilibrium_sample,
    frictionless_equilibrium,
    frictions_threshold,
    full_info_is_equilibrium,
    solve_point_mass,
)
from .errors import EnumerationBudgetExceeded, PreconditionViolation
from .oracle import (
    BestResponseReport,
    CertificationReport,
    DeviationExhibit,
    FiniteMixedStrategy,
    certify_epsilon_equilibrium,
    check_atom_instability,
    check_overcut_deviation,
    frictionless_best_response,
    frictions_best_response,
    static_argmax_outcome,
    tie_split_win_probability,
)
from .search_engine import (
    ReservationPrice,
    SearchEnvironment,
    SearchOutcome,
    exact_outcome,
    monte_carlo_outcome,
    reservation_price,
    reservation_price_binary,
    run_search,
)
from .welfare import (
    WelfareComparison,
    boundary_cost,
    compare_welfare,
    figure_data,
    friction_dominance_region,
    frictionless_pandora_utility,
    frictions_limit_utility,
    frictions_pandora_utility,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryPrior",
    "DiscreteDistribution",
    "StrategyGrid",
    "binary_prior_distribution",
    "mean",
    "point_mass",
    "profile_from_dicts",
    "profile_to_dicts",
    "random_garbling",
    "two_point",
    "FrictionlessEquilibrium",
    "comparative_statics",
    "discretize_equilibrium",
    "equilibrium_cdf",
    "equilibrium_sample",
    "frictionless_equilibrium",
    "frictions_threshold",
    "full_info_is_equilibrium",
    "solve_point_mass",
    "EnumerationBudgetExceeded",
    "PreconditionViolation",
    "BestResponseReport",
    "CertificationReport",
    "DeviationExhibit",
    "FiniteMixedStrategy",
    "certify_epsilon_equilibrium",
    "check_atom_instability",
    "check_overcut_deviation",
    "frictionless_best_response",
    "frictions_best_response",
    "static_argmax_outcome",
    "tie_split_win_probability",
    "ReservationPrice",
    "SearchEnvironment",
    "SearchOutcome",
    "exact_outcome",
    "monte_carlo_outcome",
    "reservation_price",
    "reservation_price_binary",
    "run_search",
    "WelfareComparison",
    "boundary_cost",
    "compare_welfare",
    "figure_data",
    "friction_dominance_region",
    "frictionless_pandora_utility",
    "frictions_limit_utility",
    "frictions_pandora_utility",
]
