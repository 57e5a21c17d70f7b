"""
Tests for the Poi(V_n) offspring law, Galton-Watson heights and multitype trees
"""

import numpy as np
import pytest

from src.branching import (
    AliasTable,
    HeightSample,
    SizeBiasedOffspring,
    TypedTree,
    bp_height_sample,
    generations_contained,
    height_tail,
    kill,
    killing_factor,
    matched_levels,
    mtbp_rate,
    mtbp_sample,
    offspring_pmf_distance,
    poi_vn_tail_estimate,
    prune,
    restrict_types,
    summarize_heights,
    superposition_counts,
    type_erasure_distance,
)
from src.weights import build_power_law, derived_stats, p_lambda

pytestmark = pytest.mark.unit


def fixed_offspring(value):
    """Offspring law with V_n constant"""
    return SizeBiasedOffspring(values=np.array([value]), probabilities=np.array([1.0]), table=AliasTable([1.0]))


@pytest.fixture
def five_node_tree():
    """Root with children 1, 2; node 3 under 1 and node 4 under 2"""
    return TypedTree(
        parent=np.array([-1, 0, 0, 1, 2]),
        types=np.array([1, 2, 3, 2, 3]),
        depth=np.array([0, 1, 1, 2, 2]),
        offspring=np.array([2, 1, 1, -1, -1]),
        truncated=False,
    )


class TestAliasTable:
    """Test cases for the alias table"""

    def test_law_is_exact(self, rng):
        """The table reproduces the normalized input law"""
        p = rng.dirichlet(np.ones(17))
        table = AliasTable(p * 3.0)
        np.testing.assert_allclose(table.law(), p, atol=1e-12)

    def test_degenerate_law(self, rng):
        """A point mass is always drawn"""
        table = AliasTable([0.0, 2.0, 0.0])
        assert set(table.sample(500, rng).tolist()) == {1}

    def test_sample_frequencies(self, rng):
        """Draw frequencies match the law"""
        p = np.array([0.5, 0.3, 0.15, 0.05])
        draws = AliasTable(p).sample(40000, rng)
        freq = np.bincount(draws, minlength=4) / draws.size
        np.testing.assert_allclose(freq, p, atol=0.01)

    @pytest.mark.parametrize("bad", [[], [-1.0, 2.0], [0.0, 0.0]])
    def test_invalid_input(self, bad):
        """Empty, negative and all-zero inputs are rejected"""
        with pytest.raises(ValueError):
            AliasTable(bad)


class TestOffspring:
    """Test cases for SizeBiasedOffspring"""

    def test_mean_is_one(self, power_seq):
        """E[V_n] = 1"""
        assert SizeBiasedOffspring.from_weights(power_seq).mean() == pytest.approx(1.0, rel=1e-12)

    def test_values_and_probabilities(self, small_seq):
        """v_i = w_i / nu_n with probability w_i / ell_n over i >= 2"""
        off = SizeBiasedOffspring.from_weights(small_seq)
        derived, _, _ = derived_stats(small_seq)
        assert off.values.size == small_seq.n - 1
        assert off.values[0] == pytest.approx(small_seq.weight(2) / derived.nu_n)
        assert off.probabilities.sum() == pytest.approx(1.0)

    def test_pmf(self, small_seq):
        """The exact pmf has total mass one and mean one"""
        pmf = SizeBiasedOffspring.from_weights(small_seq).pmf(200)
        assert pmf.sum() == pytest.approx(1.0)
        assert float(np.dot(np.arange(201), pmf)) == pytest.approx(1.0, rel=1e-9)

    def test_sampled_offspring_mean(self, power_seq, rng):
        """Sampled offspring average one"""
        draws = SizeBiasedOffspring.from_weights(power_seq).sample_offspring(20000, rng)
        assert abs(draws.mean() - 1.0) < 0.1

    def test_pmf_distance(self):
        """Matching frequencies are at distance zero, missing mass counts"""
        assert offspring_pmf_distance([0, 1], np.array([0.5, 0.5])) == pytest.approx(0.0)
        assert offspring_pmf_distance([0, 0], np.array([0.5])) == pytest.approx(0.5)


class TestHeights:
    """Test cases for Galton-Watson heights"""

    def test_extinct_immediately(self, rng):
        """No children means height zero"""
        sample = bp_height_sample(fixed_offspring(1e-14), 10, rng)
        assert sample == HeightSample(height=0, capped=False, censored=False, population=1)

    def test_capped(self, rng):
        """A supercritical tree hits the generation cap"""
        sample = bp_height_sample(fixed_offspring(20.0), 4, rng)
        assert sample.capped
        assert sample.height == 4

    def test_censored(self, rng):
        """The population budget stops a large tree early"""
        sample = bp_height_sample(fixed_offspring(50.0), 5, rng, population_budget=10)
        assert sample.censored
        assert sample.height == 1

    def test_invalid_cap(self, rng):
        """The cap must be positive"""
        with pytest.raises(ValueError):
            bp_height_sample(fixed_offspring(1.0), 0, rng)

    def test_height_tail(self, small_seq, rng):
        """P(height >= 1) = 1 - P(Poi(V_n) = 0), tails nonincreasing"""
        off = SizeBiasedOffspring.from_weights(small_seq)
        tail = height_tail(off, [1, 2, 4], 4000, rng)
        assert list(tail.frequencies) == sorted(tail.frequencies, reverse=True)
        expected = 1.0 - off.pmf(0)[0]
        assert abs(tail.frequencies[0] - expected) < 4.0 * np.sqrt(expected * (1 - expected) / 4000)

    def test_tail_estimate(self, power_seq, rng):
        """The empirical tail decreases and the draws average one"""
        off = SizeBiasedOffspring.from_weights(power_seq)
        est = poi_vn_tail_estimate(off, [1, 2, 4, 8], 20000, rng)
        assert list(est.tail) == sorted(est.tail, reverse=True)
        assert abs(est.mean - 1.0) < 0.1

    def test_matched_levels(self):
        """Matched levels increase and sit about (s + 1) / 2 below u"""
        levels = matched_levels([3, 4, 6, 50], 1.5)
        assert np.all(np.diff(levels) > 0)
        assert levels[-1] == pytest.approx(50 - 1.25, abs=0.05)
        with pytest.raises(ValueError):
            matched_levels([1, 2], 1.5)

    def test_matched_levels_default_to_u(self, power_seq, rng):
        """Without an exponent the fit runs on u itself"""
        est = poi_vn_tail_estimate(SizeBiasedOffspring.from_weights(power_seq), [1, 2, 4], 2000, rng)
        assert est.levels == (1.0, 2.0, 4.0)

    @pytest.mark.slow
    def test_tail_slope(self, rng):
        """The Poi(V_n) tail decays like u^{-(tau - 2)} at tau = 3.5, n = 10^5"""
        tau = 3.5
        off = SizeBiasedOffspring.from_weights(build_power_law(100_000, 3.0, tau))
        est = poi_vn_tail_estimate(off, [3, 4, 5, 6], 1_000_000, rng, exponent=tau - 2.0)
        assert abs(est.fit.slope + (tau - 2.0)) <= 0.15

    def test_summarize(self):
        """Mean height and flag counts"""
        samples = [HeightSample(2, False, False, 5), HeightSample(4, True, False, 9)]
        assert summarize_heights(samples) == (3.0, 1, 0)


class TestMultitype:
    """Test cases for multitype branching trees"""

    def test_rate(self, power_seq):
        """The percolation factor is p at (1 + delta) lambda"""
        assert mtbp_rate(power_seq, 2.0, 0.5) == pytest.approx(p_lambda(power_seq, 3.0))
        with pytest.raises(ValueError):
            mtbp_rate(power_seq, -1.0, 0.0)

    def test_invalid_arguments(self, small_seq, rng):
        """Type space, root and depth are validated"""
        with pytest.raises(ValueError):
            mtbp_sample(small_seq, 1.0, 0.0, [], 1, 3, rng)
        with pytest.raises(ValueError):
            mtbp_sample(small_seq, 1.0, 0.0, [2, 3], 1, 3, rng)
        with pytest.raises(ValueError):
            mtbp_sample(small_seq, 1.0, 0.0, [1, 99], 1, 3, rng)
        with pytest.raises(ValueError):
            mtbp_sample(small_seq, 1.0, 0.0, [1, 2], 1, -1, rng)

    def test_tree_layout(self, power_seq, rng):
        """Breadth-first order, consistent depths, types in the space"""
        space = range(2, power_seq.n + 1)
        tree = mtbp_sample(power_seq, 1.0, 0.2, space, 2, 6, rng, population_budget=5000)
        assert tree.types[0] == 2
        assert np.all(np.diff(tree.depth) >= 0)
        assert np.all(tree.depth[1:] == tree.depth[tree.parent[1:]] + 1)
        assert tree.types.min() >= 2
        assert sum(tree.generation_sizes()) == tree.size

    def test_offspring_counts_match_children(self, power_seq, rng):
        """Every expanded node records exactly the children present in the tree"""
        tree = mtbp_sample(power_seq, 0.0, 0.0, range(1, power_seq.n + 1), 1, 3, rng)
        children = np.bincount(tree.parent[1:], minlength=tree.size)
        expanded = tree.offspring >= 0
        np.testing.assert_array_equal(children[expanded], tree.offspring[expanded])
        assert np.all(children[~expanded] == 0)

    def test_generation_cap_leaves_frontier_unexpanded(self, power_seq, rng):
        """Nodes at depth max_gen keep -1 and mark the tree truncated"""
        space = range(1, power_seq.n + 1)
        for _ in range(20):
            tree = mtbp_sample(power_seq, 2.0, 0.5, space, 1, 2, rng)
            frontier = tree.depth == 2
            assert np.all(tree.offspring[frontier] == -1)
            assert np.all(tree.offspring[~frontier] >= 0)
            assert tree.truncated == bool(frontier.any())

    def test_zero_generations(self, power_seq, rng):
        """max_gen = 0 keeps only the unexpanded root"""
        tree = mtbp_sample(power_seq, 1.0, 0.0, range(1, power_seq.n + 1), 1, 0, rng)
        assert tree.size == 1
        assert tree.offspring.tolist() == [-1]
        assert tree.truncated
        assert tree.erased_offspring().size == 0

    def test_prune(self, five_node_tree):
        """Removing a node removes its subtree and recounts offspring"""
        pruned = prune(five_node_tree, np.array([True, False, True, True, True]))
        assert pruned.parent.tolist() == [-1, 0, 1]
        assert pruned.types.tolist() == [1, 3, 3]
        assert pruned.depth.tolist() == [0, 1, 2]
        assert pruned.offspring.tolist() == [1, 1, -1]

    def test_prune_keeps_root(self, five_node_tree):
        """The root survives an all-false mask"""
        pruned = prune(five_node_tree, np.zeros(5, dtype=bool))
        assert pruned.size == 1
        assert pruned.offspring.tolist() == [0]

    def test_prune_mask_size(self, five_node_tree):
        """The mask must cover every node"""
        with pytest.raises(ValueError):
            prune(five_node_tree, np.ones(3, dtype=bool))

    def test_restrict_types(self, five_node_tree):
        """Nodes outside the smaller type space disappear with their subtrees"""
        restricted = restrict_types(five_node_tree, [1, 2])
        assert restricted.types.tolist() == [1, 2, 2]
        assert generations_contained(restricted, five_node_tree)

    def test_to_tree(self, five_node_tree):
        """Node k becomes label k + 1"""
        t = five_node_tree.to_tree()
        assert t.root == 1
        assert t.edges() == [(1, 2), (1, 3), (2, 4), (3, 5)]

    def test_killing(self, power_seq, rng):
        """Killed trees are contained in the original generation by generation"""
        zeta = killing_factor(power_seq, 2.0, 0.5)
        assert zeta == pytest.approx(1.0 + 3.0 * power_seq.n ** (-power_seq.constants.eta))
        tree = mtbp_sample(power_seq, 2.0, 0.5, range(2, power_seq.n + 1), 2, 5, rng, population_budget=5000)
        killed = kill(tree, zeta, rng)
        assert generations_contained(killed, tree)
        assert kill(tree, 1.0, rng).size == tree.size
        with pytest.raises(ValueError):
            kill(tree, 0.5, rng)

    def test_superposition_mean(self, power_seq, rng):
        """Root children average p w_root W_D / ell_n"""
        space = list(range(1, power_seq.n + 1))
        counts = superposition_counts(power_seq, 0.0, 0.0, space, 1, 2000, rng)
        derived, _, _ = derived_stats(power_seq)
        rate = p_lambda(power_seq, 0.0) * power_seq.weight(1) * derived.L_n / derived.ell_n
        assert abs(counts.mean() - rate) < 5.0 * np.sqrt(rate / 2000)

    @pytest.mark.slow
    def test_type_erasure(self, small_seq, rng):
        """Erasing types from the [n] minus {1} tree gives Poi(V_n) offspring"""
        assert type_erasure_distance(small_seq, 5000, rng) < 0.06
