import math
import random

import pytest

from pandora_search import (
    BinaryPrior,
    DiscreteDistribution,
    PreconditionViolation,
    StrategyGrid,
    binary_prior_distribution,
    mean,
    point_mass,
    profile_from_dicts,
    profile_to_dicts,
    random_garbling,
    two_point,
)


def rand_distribution(rng, k_max=6, hi=1.0):
    k = rng.randint(2, k_max)
    support = sorted(rng.uniform(0.0, hi) for _ in range(k))
    weights = [rng.random() + 0.05 for _ in range(k)]
    total = sum(weights)
    return DiscreteDistribution(tuple(support), tuple(w / total for w in weights))


class TestMean:
    def test_symmetric_binary(self):
        assert mean(DiscreteDistribution((0.0, 1.0), (0.5, 0.5))) == 0.5

    def test_point_mass(self):
        assert mean(point_mass(0.5)) == 0.5

    def test_four_atoms(self):
        d = DiscreteDistribution((0.0, 0.25, 0.5, 1.0), (0.15, 0.3, 0.15, 0.4))
        expected = math.fsum(x * w for x, w in zip(d.support, d.weights))
        assert abs(mean(d) - 0.55) < 1e-15
        assert abs(mean(d) - expected) < 1e-15


class TestBinaryPrior:
    @pytest.mark.parametrize("mu", [0.5, 1.0 / 3.0, 0.4])
    def test_distribution(self, mu):
        d = binary_prior_distribution(BinaryPrior(mu))
        assert d.support == (0.0, 1.0)
        assert abs(d.weights[0] - (1.0 - mu)) < 1e-15
        assert abs(d.weights[1] - mu) < 1e-15

    @pytest.mark.parametrize("mu", [0.0, 1.0, -0.1, 1.5])
    def test_rejects_degenerate(self, mu):
        with pytest.raises(PreconditionViolation):
            BinaryPrior(mu)


class TestTwoPoint:
    def test_symmetric(self):
        d = two_point(0.5, 0.0, 1.0)
        assert d.weights == (0.5, 0.5)

    def test_skewed(self):
        d = two_point(0.4, 0.0, 1.0)
        assert abs(d.weights[0] - 0.6) < 1e-15
        assert abs(d.weights[1] - 0.4) < 1e-15

    def test_interior_high_point(self):
        d = two_point(0.5, 0.0, 0.8)
        assert abs(d.weights[0] - 0.375) < 1e-15
        assert abs(d.weights[1] - 0.625) < 1e-15

    def test_mean_outside_rejected(self):
        with pytest.raises(PreconditionViolation):
            two_point(0.9, 0.0, 0.8)

    def test_endpoint_collapses(self):
        assert two_point(0.8, 0.0, 0.8).support == (0.8,)

    def test_closed_form_weights_from_extremes(self):
        rng = random.Random(5)
        for _ in range(50):
            d = rand_distribution(rng)
            lo, hi = d.support[0], d.support[-1]
            tp = two_point(d.mean, lo, hi)
            assert abs(tp.weights[-1] - (d.mean - lo) / (hi - lo)) < 1e-12
            assert abs(tp.mean - d.mean) < 1e-12


class TestConstruction:
    def test_rejects_bad_weight_sum(self):
        with pytest.raises(PreconditionViolation):
            DiscreteDistribution((0.0, 1.0), (0.5, 0.6))

    def test_rejects_out_of_range_support(self):
        with pytest.raises(PreconditionViolation):
            DiscreteDistribution((0.0, 1.2), (0.5, 0.5))

    def test_rejects_negative_weight(self):
        with pytest.raises(PreconditionViolation):
            DiscreteDistribution((0.0, 0.5, 1.0), (0.6, -0.1, 0.5))

    def test_rejects_length_mismatch(self):
        with pytest.raises(PreconditionViolation):
            DiscreteDistribution((0.0, 1.0), (1.0,))

    def test_prunes_zero_atoms(self):
        d = DiscreteDistribution((0.0, 0.5, 1.0), (0.5, 0.0, 0.5))
        assert d.support == (0.0, 1.0)

    def test_merges_near_duplicates(self):
        d = DiscreteDistribution((0.3, 0.3 + 1e-13, 1.0), (0.25, 0.25, 0.5))
        assert len(d.support) == 2
        assert abs(d.weights[0] - 0.5) < 1e-12

    def test_unsorted_input_is_sorted(self):
        d = DiscreteDistribution((1.0, 0.0), (0.4, 0.6))
        assert d.support == (0.0, 1.0)
        assert d.weights == (0.6, 0.4)

    def test_immutable(self):
        d = point_mass(0.5)
        with pytest.raises(AttributeError):
            d.support = (0.1,)


class TestGarbling:
    def test_zero_steps_identity(self):
        d = two_point(0.5, 0.0, 1.0)
        assert random_garbling(d, seed=9, steps=0) == d

    def test_full_merge_contracts_to_mean(self):
        # seed 0 makes the first step a full merge of both atoms
        d = two_point(0.5, 0.0, 1.0)
        g = random_garbling(d, seed=0, steps=1)
        assert g.support == (0.5,)
        assert g.weights == (1.0,)

    def test_mean_preserved_over_seeds(self):
        rng = random.Random(17)
        for seed in range(1000):
            base = rand_distribution(rng)
            g = random_garbling(base, seed=seed, steps=rng.randint(0, 6))
            assert abs(g.mean - base.mean) <= 1e-12

    def test_variance_never_increases(self):
        rng = random.Random(23)
        for seed in range(200):
            base = rand_distribution(rng)
            g = random_garbling(base, seed=seed, steps=rng.randint(1, 6))
            assert g.variance <= base.variance + 1e-12

    def test_negative_steps_rejected(self):
        with pytest.raises(PreconditionViolation):
            random_garbling(point_mass(0.5), seed=1, steps=-1)


class TestStrategyGrid:
    def test_uniform_contains_anchors(self):
        g = StrategyGrid.uniform(11, 0.5)
        for anchor in (0.0, 0.5, 1.0):
            assert anchor in g.points
        assert len(g.points) == 11

    def test_off_lattice_mu_inserted(self):
        g = StrategyGrid.uniform(11, 0.47)
        assert 0.47 in g.points
        assert len(g.points) == 12

    def test_rejects_missing_anchor(self):
        with pytest.raises(PreconditionViolation):
            StrategyGrid((0.0, 0.4, 1.0), 0.5)

    def test_rejects_unsorted(self):
        with pytest.raises(PreconditionViolation):
            StrategyGrid((0.0, 0.5, 0.5, 1.0), 0.5)


class TestJson:
    def test_round_trip(self):
        d = DiscreteDistribution((0.0, 0.25, 1.0), (0.2, 0.3, 0.5))
        assert DiscreteDistribution.from_dict(d.to_dict()) == d

    def test_profile_round_trip(self):
        rng = random.Random(1)
        profile = [rand_distribution(rng) for _ in range(3)]
        assert list(profile_from_dicts(profile_to_dicts(profile))) == profile
