"""
Tests for p-trees, tilted ordered trees and the connected-component samplers
"""

import math

import numpy as np
import pytest

from src.graphgen import components
from src.tilted import (
    MODE_EXACT,
    MODE_MCMC,
    OrderedTree,
    ProbabilityVector,
    construction_law,
    degree_marginals,
    enumerate_ordered_trees,
    enumerate_rooted_trees,
    exact_connected_law,
    exact_ptree_law,
    exact_tilted_law,
    f_function,
    f_norm_histogram,
    graph_key,
    ordered_probability,
    permitted_pairs,
    rejection_connected,
    rooted_key,
    sample_connected,
    sample_ordered_ptree,
    sample_ptree,
    sample_static_graph,
    sample_tilted_ordered,
    surplus_proxy,
    tilt_weight,
    tilted_chain,
    two_stage_sample,
)
from src.experiments.validation import static_graph_law
from src.utils.stats import empirical_law, tv_distance

pytestmark = pytest.mark.unit


@pytest.fixture
def skewed():
    """q = (0.5, 0.3, 0.2) with a = 1.5"""
    return ProbabilityVector(np.array([0.5, 0.3, 0.2]), 1.5)


@pytest.fixture
def cherry():
    """Root 1 with ordered children (2, 3); vertex 4 below 2"""
    return OrderedTree(root=1, children={1: (2, 3), 2: (4,), 3: (), 4: ()})


class TestProbabilityVector:
    """Test cases for ProbabilityVector"""

    def test_from_masses(self):
        """Masses are normalized"""
        pv = ProbabilityVector.from_masses([2.0, 1.0, 1.0], 1.0)
        assert pv.q.tolist() == [0.5, 0.25, 0.25]
        assert pv.of(1) == 0.5
        assert pv.q_max == 0.5
        assert pv.norm2 == pytest.approx(math.sqrt(0.375))

    def test_uniform(self):
        """Uniform vectors have equal masses"""
        pv = ProbabilityVector.uniform(4, 2.0)
        assert pv.m == 4
        assert np.all(pv.q == 0.25)

    @pytest.mark.parametrize("q,a", [([0.5, 0.5, 0.0], 1.0), ([0.5, 0.6], 1.0), ([0.5, 0.5], 0.0)])
    def test_invalid(self, q, a):
        """Zero masses, bad totals and nonpositive a are rejected"""
        with pytest.raises(ValueError):
            ProbabilityVector(np.array(q), a)


class TestOrderedTrees:
    """Test cases for OrderedTree and the p-tree laws"""

    def test_structure(self, cherry):
        """Degrees, depth-first order and root paths"""
        assert cherry.m == 4
        assert cherry.degree(1) == 2
        assert cherry.preorder() == [1, 2, 4, 3]
        assert cherry.ancestors(4) == [1, 2, 4]
        assert cherry.edges() == [(1, 2), (1, 3), (2, 4)]

    def test_not_spanning(self):
        """Children lists must reach every label from the root"""
        with pytest.raises(ValueError):
            OrderedTree(root=1, children={1: (2,), 2: (), 3: ()})

    def test_bad_labels(self):
        """Labels must be 1..m"""
        with pytest.raises(ValueError):
            OrderedTree(root=1, children={1: (3,), 3: ()})

    def test_permitted_pairs(self, cherry):
        """Right siblings of every root-path vertex are permitted partners"""
        assert permitted_pairs(cherry) == {(2, 3), (4, 3)}

    def test_rooted_tree_count(self):
        """There are m^(m-1) rooted labeled trees"""
        assert sum(1 for _ in enumerate_rooted_trees(4)) == 64
        with pytest.raises(ValueError):
            list(enumerate_rooted_trees(7))

    def test_ptree_law(self, skewed):
        """P_tree sums to one over rooted trees"""
        law = exact_ptree_law(skewed)
        assert len(law) == 9
        assert sum(law.values()) == pytest.approx(1.0)
        marginals = degree_marginals(law, 3)
        np.testing.assert_allclose(marginals.sum(axis=1), 1.0)

    def test_ordered_law_sums_to_one(self, skewed):
        """P_ord sums to one over plane trees"""
        trees = list(enumerate_ordered_trees(3))
        assert len(trees) == 12
        assert math.fsum(ordered_probability(t, skewed) for t in trees) == pytest.approx(1.0)

    def test_sample_ptree_law(self, skewed, rng):
        """The birthday construction has law P_tree"""
        samples = [rooted_key(sample_ptree(skewed, rng)) for _ in range(6000)]
        assert tv_distance(empirical_law(samples), exact_ptree_law(skewed)) < 0.06

    @pytest.mark.slow
    def test_sample_ptree_law_at_scale(self, skewed, rng):
        """At 10^5 draws the birthday construction is within 0.01 of P_tree"""
        samples = [rooted_key(sample_ptree(skewed, rng)) for _ in range(100_000)]
        assert tv_distance(empirical_law(samples), exact_ptree_law(skewed)) < 0.01

    def test_ordered_sample_is_spanning(self, rng):
        """Sampled plane trees span 1..m"""
        pv = ProbabilityVector.uniform(12, 1.0)
        tree = sample_ordered_ptree(pv, rng)
        assert sorted(tree.preorder()) == list(range(1, 13))

    def test_single_vertex(self, rng):
        """m = 1 gives the one-vertex tree"""
        tree = sample_ptree(ProbabilityVector.uniform(1, 1.0), rng)
        assert tree.size == 1


class TestTilt:
    """Test cases for the f-function and the tilt L(t)"""

    def test_f_function(self, skewed):
        """Stack mass after each depth-first visit"""
        tree = OrderedTree(root=1, children={1: (2, 3), 2: (), 3: ()})
        f = f_function(tree, skewed)
        assert f.order == (1, 2, 3)
        np.testing.assert_allclose(f.breakpoints, [0.0, 0.5, 0.8, 1.0])
        np.testing.assert_allclose(f.values, [0.0, 0.2, 0.0])
        assert f(0.6) == pytest.approx(0.2)
        assert f.sup() == pytest.approx(0.2)
        with pytest.raises(ValueError):
            f(1.0)

    def test_f_integral_is_permitted_mass(self, rng):
        """The integral of f is the q-mass of the permitted pairs"""
        pv = ProbabilityVector.from_masses(rng.random(9) + 0.1, 2.0)
        for _ in range(10):
            tree = sample_ordered_ptree(pv, rng)
            mass = math.fsum(pv.of(i) * pv.of(j) for i, j in permitted_pairs(tree))
            assert f_function(tree, pv).integral() == pytest.approx(mass, abs=1e-14)

    def test_tilt_at_least_one(self, skewed):
        """L(t) >= 1 for every plane tree"""
        assert all(tilt_weight(t, skewed) >= 1.0 for t in enumerate_ordered_trees(3))

    def test_exact_tilted_law(self, skewed):
        """The tilted law is normalized and memoized"""
        law = exact_tilted_law(skewed)
        assert law.probabilities.sum() == pytest.approx(1.0)
        assert len(law.law()) == 12
        assert exact_tilted_law(ProbabilityVector(np.array([0.5, 0.3, 0.2]), 1.5)) is law

    def test_exact_tilted_law_size_limit(self):
        """Enumeration stops at six labels"""
        with pytest.raises(ValueError):
            exact_tilted_law(ProbabilityVector.uniform(7, 1.0))

    def test_sampler_modes(self, skewed, rng):
        """Both sampler modes return plane trees on 1..m"""
        for mode in (MODE_EXACT, MODE_MCMC, None):
            tree = sample_tilted_ordered(skewed, rng, mode=mode, burn_in=10, thin=1)
            assert tree.m == 3
        with pytest.raises(ValueError):
            sample_tilted_ordered(skewed, rng, mode="gibbs")

    def test_chain_arguments(self, skewed, rng):
        """samples and thin must be positive"""
        with pytest.raises(ValueError):
            tilted_chain(skewed, 0, rng)
        with pytest.raises(ValueError):
            tilted_chain(skewed, 5, rng, thin=0)

    @pytest.mark.slow
    def test_chain_matches_exact_law(self, skewed, rng):
        """The Metropolis chain targets the tilted law"""
        result = tilted_chain(skewed, 100_000, rng, burn_in=200, thin=5)
        assert len(result.trees) == 100_000
        assert 0.0 < result.acceptance_rate <= 1.0
        sampled = empirical_law(t.key() for t in result.trees)
        assert tv_distance(sampled, exact_tilted_law(skewed).law()) < 0.02


class TestConnected:
    """Test cases for the connected-component samplers"""

    @pytest.mark.parametrize("q", [[1 / 3, 1 / 3, 1 / 3], [0.5, 0.3, 0.2]])
    def test_construction_is_exact(self, q):
        """Tilted trees plus permitted surplus edges give P_con exactly"""
        pv = ProbabilityVector(np.array(q), 1.5)
        assert tv_distance(construction_law(pv), exact_connected_law(pv)) < 1e-9

    def test_construction_law_four_vertices(self):
        """The identity holds on four vertices too"""
        pv = ProbabilityVector(np.array([0.4, 0.3, 0.2, 0.1]), 2.0)
        assert tv_distance(construction_law(pv), exact_connected_law(pv)) < 1e-9

    def test_construction_law_size_limit(self):
        """Enumeration over surplus subsets stops at five labels"""
        with pytest.raises(ValueError):
            construction_law(ProbabilityVector.uniform(6, 1.0))

    def test_sampled_graph_is_connected(self, skewed, rng):
        """Every sample is a connected graph on 1..m"""
        for _ in range(20):
            g = sample_connected(skewed, rng)
            assert components(g, np.ones(3)).num_components == 1
            assert graph_key(g) in exact_connected_law(skewed)

    def test_rejection_sampler(self, skewed, rng):
        """Rejection sampling returns connected graphs"""
        g = rejection_connected(skewed, rng)
        assert components(g, np.ones(3)).num_components == 1

    @pytest.mark.slow
    def test_sampler_matches_rejection(self, rng):
        """The tilted-tree sampler and rejection sampling agree at 10^5 draws"""
        pv = ProbabilityVector.uniform(3, 1.5)
        sampled = empirical_law(graph_key(sample_connected(pv, rng)) for _ in range(100_000))
        rejected = empirical_law(graph_key(rejection_connected(pv, rng)) for _ in range(100_000))
        assert tv_distance(sampled, rejected) < 0.03

    def test_static_graph(self, rng):
        """Large t gives the complete graph, tiny t the empty one"""
        w = np.array([1.0, 0.5, 0.25])
        assert sample_static_graph(w, 1e6, rng).m == 3
        assert sample_static_graph(w, 1e-12, rng).m == 0

    @pytest.mark.parametrize("partition", ["coalescent", "graph"])
    def test_two_stage(self, partition, rng):
        """Two-stage samples are simple graphs on [n]"""
        g = two_stage_sample([1.0, 0.8, 0.6, 0.4], 0.5, rng, partition=partition)
        assert g.n == 4
        assert g.m <= 6

    @pytest.mark.slow
    @pytest.mark.parametrize("partition", ["coalescent", "graph"])
    def test_two_stage_law(self, partition, rng):
        """Two-stage samples have the static graph law at 10^5 draws"""
        weights = [1.0, 0.8, 0.6, 0.4]
        sampled = empirical_law(graph_key(two_stage_sample(weights, 0.5, rng, partition=partition))
                                for _ in range(100_000))
        assert tv_distance(sampled, static_graph_law(weights, 0.5)) < 0.03

    def test_two_stage_arguments(self, rng):
        """t and the weights must be positive"""
        with pytest.raises(ValueError):
            two_stage_sample([1.0, 0.5], 0.0, rng)
        with pytest.raises(ValueError):
            two_stage_sample([1.0, 0.0], 1.0, rng)
        with pytest.raises(ValueError):
            two_stage_sample([1.0, 0.5], 1.0, rng, partition="oracle")

    def test_surplus_proxy(self, skewed, rng):
        """The proxy reports a frequency in [0, 1] and a positive bound"""
        proxy = surplus_proxy(skewed, 200, rng)
        assert 0.0 <= proxy.frequency <= 1.0
        assert proxy.bound > 0.0
        assert proxy.samples == 200

    def test_norm_histogram(self, rng):
        """Counts cover every sample"""
        hist = f_norm_histogram(ProbabilityVector.uniform(10, 1.0), 100, rng, bins=10)
        assert hist.counts.sum() == 100
        assert hist.tail(0.0) == 1.0
