import math

import numpy as np
import pytest

from pandora_search import (
    PreconditionViolation,
    StrategyGrid,
    comparative_statics,
    discretize_equilibrium,
    equilibrium_cdf,
    equilibrium_sample,
    frictionless_equilibrium,
    frictions_threshold,
    full_info_is_equilibrium,
    solve_point_mass,
)

GOLDEN_A = (3.0 - math.sqrt(5.0)) / 2.0


class TestSolvePointMass:
    def test_boundary_mean_gives_zero(self):
        assert solve_point_mass(2, 0.5) == 0.0

    def test_low_mean_gives_zero(self):
        assert solve_point_mass(3, 0.2) == 0.0

    def test_three_boxes_half_mean(self):
        # dividing the fixed-point equation by a leaves a^2 - 3a + 1 = 0
        assert abs(solve_point_mass(3, 0.5) - GOLDEN_A) < 1e-10

    def test_residual_sweep(self):
        for n in range(2, 13):
            for mu in (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9):
                a = solve_point_mass(n, mu)
                assert abs(mu * (1.0 - (1.0 - a) ** n) - a) <= 1e-12
                # the atom can never fall short of the deviation bound
                assert a >= mu * (1.0 - (1.0 - a) ** n) - 1e-12

    def test_large_n_converges_to_mu(self):
        assert abs(solve_point_mass(200, 0.5) - 0.5) < 0.01

    def test_rejects_bad_params(self):
        with pytest.raises(PreconditionViolation):
            solve_point_mass(1, 0.5)
        with pytest.raises(PreconditionViolation):
            solve_point_mass(3, 1.0)


class TestFrictionlessEquilibrium:
    def test_uniform_case(self):
        eq = frictionless_equilibrium(2, 0.5)
        assert eq.a == 0.0
        assert abs(eq.s - 1.0) < 1e-12
        assert abs(equilibrium_cdf(eq, 0.3) - 0.3) < 1e-12

    def test_low_mean_branch(self):
        eq = frictionless_equilibrium(2, 0.25)
        assert eq.branch == "low-mean"
        assert eq.a == 0.0
        assert abs(eq.s - 0.5) < 1e-12
        assert abs(equilibrium_cdf(eq, 0.25) - 0.5) < 1e-12

    def test_three_boxes_values(self):
        eq = frictionless_equilibrium(3, 0.5)
        assert abs(eq.a - GOLDEN_A) < 1e-9
        assert abs(eq.s - 0.5729490168751576) < 1e-9

    def test_s_identities_agree(self):
        for n in (2, 3, 5, 8):
            for mu in (0.35, 0.5, 0.65, 0.8):
                if mu * n <= 1.0:
                    continue
                eq = frictionless_equilibrium(n, mu)
                alt = n * (mu - eq.a) / (1.0 - eq.a)
                assert abs(eq.s - alt) <= 1e-10

    def test_mean_constraint(self):
        # atom at 1 plus continuous mass (1-a) * s / n must average to mu
        for n in (2, 3, 6):
            for mu in (0.3, 0.5, 0.7):
                eq = frictionless_equilibrium(n, mu)
                total_mean = eq.a + (1.0 - eq.a) * eq.s / n
                assert abs(total_mean - mu) < 1e-10


class TestCdfAndSampling:
    def test_cdf_boundaries(self):
        eq = frictionless_equilibrium(3, 0.5)
        assert equilibrium_cdf(eq, -0.1) == 0.0
        assert equilibrium_cdf(eq, 1.0) == 1.0
        assert abs(equilibrium_cdf(eq, eq.s) - (1.0 - eq.a)) < 1e-12

    def test_cdf_nondecreasing(self):
        eq = frictionless_equilibrium(4, 0.6)
        xs = np.linspace(0.0, 1.0, 200)
        vals = [equilibrium_cdf(eq, x) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_sample_mean_matches_mu(self):
        eq = frictionless_equilibrium(3, 0.5)
        draws = equilibrium_sample(eq, rng=123, size=1_000_000)
        se = draws.std(ddof=1) / math.sqrt(draws.size)
        assert abs(draws.mean() - 0.5) < 4.0 * se

    def test_scalar_sampling(self):
        eq = frictionless_equilibrium(2, 0.5)
        x = equilibrium_sample(eq, rng=7)
        assert 0.0 <= x <= 1.0


class TestDiscretize:
    def test_uniform_pattern(self):
        eq = frictionless_equilibrium(2, 0.5)
        grid = StrategyGrid.uniform(11, 0.5)
        d = discretize_equilibrium(eq, grid)
        assert abs(d.weights[0] - 0.05) < 1e-12
        assert abs(d.weights[-1] - 0.05) < 1e-12
        for w in d.weights[1:-1]:
            assert abs(w - 0.1) < 1e-12

    def test_mean_exact(self):
        for n, mu, m in ((2, 0.5, 101), (3, 0.5, 51), (4, 0.7, 201), (2, 0.25, 41)):
            eq = frictionless_equilibrium(n, mu)
            d = discretize_equilibrium(eq, StrategyGrid.uniform(m, mu))
            assert abs(d.mean - mu) <= 1e-12

    def test_atom_on_one_preserved(self):
        # spread stops short of 1, so the top weight is exactly the atom
        eq = frictionless_equilibrium(3, 0.5)
        d = discretize_equilibrium(eq, StrategyGrid.uniform(101, 0.5))
        assert abs(d.weights[-1] - eq.a) < 1e-12
        assert d.support[-1] == 1.0

    def test_step_cdf_within_one_cell(self):
        eq = frictionless_equilibrium(3, 0.5)
        grid = StrategyGrid.uniform(101, 0.5)
        d = discretize_equilibrium(eq, grid)
        for lo, hi in zip(grid.points, grid.points[1:]):
            increment = equilibrium_cdf(eq, hi) - equilibrium_cdf(eq, lo)
            gap = abs(d.cdf(lo) - equilibrium_cdf(eq, lo))
            assert gap <= increment + 1e-12


class TestFrictionsThreshold:
    def test_two_boxes(self):
        assert abs(frictions_threshold(2) - 0.5) < 1e-15

    def test_three_boxes(self):
        assert abs(frictions_threshold(3) - (1.0 - 3.0 ** -0.5)) < 1e-12

    def test_full_info_flag(self):
        assert not full_info_is_equilibrium(2, 0.4)
        assert full_info_is_equilibrium(2, 0.6)
        assert full_info_is_equilibrium(2, 0.5)

    def test_threshold_equivalent_to_share_comparison(self):
        # full revelation survives exactly when (1-mu)^(n-1) <= 1/n
        for n in (2, 3, 4, 6):
            for mu in (0.2, 0.35, 0.45, 0.55, 0.75):
                flag = full_info_is_equilibrium(n, mu)
                assert flag == ((1.0 - mu) ** (n - 1) <= 1.0 / n + 1e-12)


class TestComparativeStatics:
    def test_atom_grows_and_spread_shrinks(self):
        rows = comparative_statics(0.5, range(2, 51))
        for (_, a1, s1), (_, a2, s2) in zip(rows, rows[1:]):
            assert a2 > a1
            assert s2 < s1

    def test_first_row_uniform(self):
        rows = comparative_statics(0.5, range(2, 4))
        n, a, s = rows[0]
        assert (n, a) == (2, 0.0)
        assert abs(s - 1.0) < 1e-12
