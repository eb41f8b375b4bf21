"""Command-line front end: equilibrium, simulate, verify, welfare, figures.

Every command is deterministic given its flags (including --seed).  Exit codes:
0 success, 1 internal error, 2 model-precondition violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Optional, Sequence

from .distributions import (
    BinaryPrior,
    StrategyGrid,
    binary_prior_distribution,
    profile_from_dicts,
    profile_to_dicts,
)
from .equilibrium import (
    discretize_equilibrium,
    frictionless_equilibrium,
    frictions_threshold,
    full_info_is_equilibrium,
)
from .errors import PreconditionViolation
from .oracle import certify_epsilon_equilibrium
from .search_engine import SearchEnvironment, exact_outcome, monte_carlo_outcome
from . import welfare as welfare_mod

DEFAULT_SEED = 20240
DEFAULT_GRID = 201


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pandora-search",
        description="Sequential search with competing information disclosure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, default=2, help="number of boxes")
        p.add_argument("--mu", type=float, default=0.5, help="prior mean in (0, 1)")
        p.add_argument("--beta", type=float, default=1.0, help="discount factor")
        p.add_argument("--cost", type=float, default=0.0, help="inspection cost")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="grid size")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_eq = sub.add_parser("equilibrium", help="symmetric equilibrium parameters")
    common(p_eq)
    p_eq.add_argument("--frictions", action="store_true")
    p_eq.add_argument(
        "--profile-out", type=str, default=None,
        help="also write the n-box symmetric profile as a JSON profile file",
    )

    p_sim = sub.add_parser("simulate", help="win probabilities and searcher utility")
    common(p_sim)
    p_sim.add_argument("--profile", type=str, default=None, help="JSON profile file")
    p_sim.add_argument(
        "--samples", type=int, default=0,
        help="Monte Carlo sample count (0 = exact enumeration)",
    )

    p_ver = sub.add_parser("verify", help="best-response certification")
    common(p_ver)
    p_ver.add_argument("--profile", type=str, default=None, help="JSON profile file")
    p_ver.add_argument("--frictions", action="store_true")
    p_ver.add_argument("--epsilon", type=float, default=None)

    p_wel = sub.add_parser("welfare", help="frictionless vs frictional welfare")
    common(p_wel)
    p_wel.add_argument(
        "--region", action="store_true",
        help="emit the (beta, boundary cost) dominance table instead",
    )

    p_fig = sub.add_parser("figures", help="summary-figure tables")
    common(p_fig)
    p_fig.add_argument("--id", type=int, choices=(1, 2), required=True)
    p_fig.add_argument("--n-max", type=int, default=None)
    p_fig.set_defaults(mu=None)  # per-figure default unless given explicitly

    return parser


def _write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(data, fmt: str, header: Optional[list] = None) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    buf = io.StringIO()
    writer = csv.writer(buf)
    if isinstance(data, dict):
        writer.writerow(sorted(data))
        writer.writerow([data[k] for k in sorted(data)])
    else:
        if header:
            writer.writerow(header)
        for row in data:
            writer.writerow(row)
    return buf.getvalue()


def _load_profile(path: Optional[str], n: int, mu: float):
    """Profile from a JSON file, or n fully revealing boxes by default."""
    if path is None:
        return tuple(binary_prior_distribution(BinaryPrior(mu)) for _ in range(n))
    with open(path) as fh:
        return profile_from_dicts(json.load(fh))


def cmd_equilibrium(args: argparse.Namespace) -> int:
    if args.frictions:
        threshold = frictions_threshold(args.n)
        if not full_info_is_equilibrium(args.n, args.mu):
            sys.stderr.write(
                f"no symmetric pure-strategy equilibrium with frictions: "
                f"mu={args.mu:.6g} is below the full-revelation cutoff "
                f"{threshold:.6g} for n={args.n}\n"
            )
            return 2
        data = {
            "n": args.n,
            "mu": args.mu,
            "threshold": threshold,
            "equilibrium": "full information",
        }
        _write_output(_dump(data, args.format), args.out)
        if args.profile_out:
            profile = [binary_prior_distribution(BinaryPrior(args.mu))] * args.n
            _write_output(json.dumps(profile_to_dicts(profile), indent=2), args.profile_out)
        return 0

    eq = frictionless_equilibrium(args.n, args.mu)
    data = {"n": eq.n, "mu": eq.mu, "a": eq.a, "s": eq.s, "branch": eq.branch}
    _write_output(_dump(data, args.format), args.out)
    if args.profile_out:
        grid = StrategyGrid.uniform(args.grid, args.mu)
        profile = [discretize_equilibrium(eq, grid)] * args.n
        _write_output(json.dumps(profile_to_dicts(profile), indent=2), args.profile_out)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile, args.n, args.mu)
    env = SearchEnvironment(len(profile), args.beta, args.cost, profile)
    if args.samples > 0:
        outcome = monte_carlo_outcome(env, args.samples, args.seed)
    else:
        outcome = exact_outcome(env)
    _write_output(_dump(outcome.to_dict(), args.format), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    grid = StrategyGrid.uniform(args.grid, args.mu)
    if args.frictions:
        profile = _load_profile(args.profile, args.n, args.mu)
        epsilon = 1e-9 if args.epsilon is None else args.epsilon
        report = certify_epsilon_equilibrium(
            profile, "frictions", grid, epsilon, beta=args.beta, cost=args.cost
        )
    else:
        if args.profile is None:
            eq = frictionless_equilibrium(args.n, args.mu)
            profile = tuple(discretize_equilibrium(eq, grid) for _ in range(args.n))
        else:
            profile = _load_profile(args.profile, args.n, args.mu)
        step = 1.0 / (args.grid - 1)
        epsilon = 5.0 * step if args.epsilon is None else args.epsilon
        report = certify_epsilon_equilibrium(profile, "frictionless", grid, epsilon)
    _write_output(_dump(report.to_dict(), args.format), args.out)
    return 0


def cmd_welfare(args: argparse.Namespace) -> int:
    if args.region:
        betas = [0.80 + 0.01 * k for k in range(21)]
        rows = welfare_mod.friction_dominance_region(args.n, args.mu, betas)
        _write_output(
            _dump(rows, args.format, header=["beta", "boundary_cost"]), args.out
        )
        return 0
    comparison = welfare_mod.compare_welfare(args.n, args.mu, args.beta, args.cost)
    _write_output(_dump(comparison.to_dict(), args.format), args.out)
    return 0


def cmd_figures(args: argparse.Namespace) -> int:
    header, rows = welfare_mod.figure_data(args.id, mu=args.mu, n_max=args.n_max)
    if args.format == "json":
        data = [dict(zip(header, row)) for row in rows]
        _write_output(_dump(data, "json"), args.out)
    else:
        _write_output(_dump(rows, "csv", header=header), args.out)
    return 0


_COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "welfare": cmd_welfare,
    "figures": cmd_figures,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PreconditionViolation as exc:
        sys.stderr.write(f"precondition violated: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

