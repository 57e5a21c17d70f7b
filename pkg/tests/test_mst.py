"""
Tests for trees, Kruskal, the nested giant MST, attachment and cycle breaking
"""

import itertools

import numpy as np
import pytest

from src.graphgen import KERNEL_MINUS_ELL, PercolationEnsemble, SparseGraph, giant
from src.mst import (
    ATTACHED,
    EXHAUSTED,
    DuplicateWeightError,
    TreeStructure,
    UnionFind,
    algorithm1_attach,
    cbd_infty,
    cbd_law_distance,
    cbd_law_exact,
    forest_edge_set,
    kruskal,
    kruskal_by_rank,
    mst_law_exact,
    mst_of_giant,
    spanning_trees,
    total_weight,
    tree_from_parent_array,
    verify_minimax,
)
from src.utils.stats import tv_distance
from src.weights import WeightSequence, derived_stats

pytestmark = pytest.mark.unit


@pytest.fixture
def path_tree():
    """Path 1-2-3-4 rooted at 1 with weights 0.1, 0.2, 0.3"""
    weights = {(1, 2): 0.1, (2, 3): 0.2, (3, 4): 0.3}
    return TreeStructure.from_edges([1, 2, 3, 4], weights.keys(), weights=weights)


@pytest.fixture
def tiny_ensemble():
    """Five vertices: {1, 2} and {4, 5} open below 0.4, vertex 3 joined to 2 at 0.6"""
    ens = PercolationEnsemble(n=5, edges=np.array([[1, 2], [2, 3], [4, 5]]),
                              u=np.array([0.1, 0.6, 0.2]), kernel_tag=KERNEL_MINUS_ELL)
    # Constant weights 2.5 give p at lambda 0 equal to 0.4
    seq = WeightSequence(np.full(5, 2.5), 3.5)
    return ens, seq


class TestTreeStructure:
    """Test cases for TreeStructure"""

    def test_depth_height_and_path(self, path_tree):
        """Hop distances along a path"""
        assert path_tree.root == 1
        assert path_tree.depth == {1: 0, 2: 1, 3: 2, 4: 3}
        assert path_tree.height() == 3
        assert path_tree.path(4, 1) == [4, 3, 2, 1]
        assert path_tree.distance(2, 4) == 2
        assert path_tree.path(3, 3) == [3]

    def test_path_through_branch_point(self):
        """Paths between leaves pass through their common ancestor"""
        t = TreeStructure.from_edges([1, 2, 3, 4, 5], [(1, 2), (2, 3), (2, 4), (1, 5)])
        assert t.path(3, 4) == [3, 2, 4]
        assert t.path(3, 5) == [3, 2, 1, 5]
        assert t.children[2] == [3, 4]

    def test_weights(self, path_tree):
        """Edge weights are stored on the child"""
        assert path_tree.weight_of(3, 2) == pytest.approx(0.2)
        assert path_tree.total_weight() == pytest.approx(0.6)
        with pytest.raises(KeyError):
            path_tree.weight_of(1, 3)

    def test_not_a_tree(self):
        """Wrong edge counts and disconnected edge sets are rejected"""
        with pytest.raises(ValueError):
            TreeStructure.from_edges([1, 2, 3], [(1, 2)])
        with pytest.raises(ValueError, match="not connected"):
            TreeStructure.from_edges([1, 2, 3, 4], [(1, 2), (2, 1), (3, 4)])

    def test_restrict(self, path_tree):
        """Restriction keeps induced edges and roots at the shallowest vertex"""
        sub = path_tree.restrict([2, 3, 4])
        assert sub.root == 2
        assert sub.edges() == [(2, 3), (3, 4)]
        assert sub.total_weight() == pytest.approx(0.5)
        with pytest.raises(ValueError):
            path_tree.restrict([1, 3])

    def test_file_round_trip(self, temp_dir, path_tree):
        """Parent links and weights survive writing"""
        path = temp_dir / "tree.txt"
        path_tree.to_file(path)
        loaded = TreeStructure.from_file(path)
        assert loaded.edges() == path_tree.edges()
        assert loaded.weight_of(3, 4) == pytest.approx(0.3)

    def test_singleton_round_trip(self, temp_dir):
        """A single vertex writes its label"""
        path = temp_dir / "single.txt"
        TreeStructure.singleton(7).to_file(path)
        loaded = TreeStructure.from_file(path)
        assert loaded.vertices == (7,)
        assert loaded.size == 1

    def test_parent_array(self):
        """-1 marks the root"""
        t = tree_from_parent_array(np.array([-1, -1, 1, 1, 3]), root=1)
        assert t.edges() == [(1, 2), (1, 3), (3, 4)]

    def test_to_graph(self, path_tree):
        """The tree as a weighted graph"""
        g = path_tree.to_graph()
        assert g.m == 3
        assert g.edge_weight_map()[(2, 3)] == pytest.approx(0.2)

    def test_forest_helpers(self, path_tree):
        """Edge union and total weight of a forest"""
        other = TreeStructure.from_edges([5, 6], [(5, 6)], weights={(5, 6): 1.0})
        assert forest_edge_set([path_tree, other]) == {(1, 2), (2, 3), (3, 4), (5, 6)}
        assert total_weight([path_tree, other]) == pytest.approx(1.6)


class TestKruskal:
    """Test cases for kruskal and verify_minimax"""

    def test_union_find(self):
        """union reports whether sets were merged"""
        uf = UnionFind(4)
        assert uf.union(1, 2)
        assert not uf.union(2, 1)
        assert uf.find(1) == uf.find(2)

    def test_triangle(self, weighted_triangle):
        """The heaviest triangle edge is dropped"""
        forest = kruskal(weighted_triangle)
        assert len(forest) == 1
        assert forest[0].edges() == [(1, 2), (2, 3)]
        assert forest[0].total_weight() == pytest.approx(0.3)

    def test_forest_per_component(self):
        """One tree per component, isolated vertices included"""
        g = SparseGraph.from_edge_list(5, [(1, 2), (3, 4)], weights=[0.5, 0.7])
        forest = kruskal(g)
        assert [t.vertices for t in forest] == [(1, 2), (3, 4), (5,)]

    def test_duplicate_weights(self):
        """Ties make the MST ambiguous"""
        g = SparseGraph.from_edge_list(3, [(1, 2), (2, 3)], weights=[0.5, 0.5])
        with pytest.raises(DuplicateWeightError):
            kruskal(g)

    def test_missing_weights(self, diamond_graph):
        """An unweighted graph needs explicit weights"""
        with pytest.raises(ValueError):
            kruskal(diamond_graph)
        forest = kruskal(diamond_graph, [0.5, 0.1, 0.4, 0.2, 0.3])
        assert forest[0].edges() == [(1, 3), (2, 3), (3, 4)]

    def test_rank_variant_agrees(self, power_ensemble):
        """Kruskal on ranks picks the same edges"""
        g = power_ensemble.percolate(0.5)
        assert forest_edge_set(kruskal(g)) == forest_edge_set(kruskal_by_rank(g))

    def test_matches_networkx(self, power_ensemble):
        """Same spanning forest as networkx"""
        nx = pytest.importorskip("networkx")
        g = power_ensemble.percolate(0.5)
        ref = nx.Graph()
        ref.add_nodes_from(range(1, g.n + 1))
        for (i, j), u in zip(g.edges.tolist(), g.weights.tolist()):
            ref.add_edge(i, j, weight=u)
        expected = {tuple(sorted(e)) for e in nx.minimum_spanning_tree(ref).edges()}
        assert forest_edge_set(kruskal(g)) == expected

    def test_minimax_holds_for_mst(self, power_ensemble):
        """The MST of every component is its minimax tree"""
        g = power_ensemble.percolate(0.7)
        for tree in kruskal(g):
            if tree.size > 1:
                assert verify_minimax(g, None, tree)

    def test_minimax_fails_for_other_tree(self, weighted_triangle):
        """A spanning tree holding the heaviest edge is not minimax"""
        t = TreeStructure.from_edges([1, 2, 3], [(1, 2), (1, 3)],
                                     weights={(1, 2): 0.1, (1, 3): 0.3})
        assert not verify_minimax(weighted_triangle, None, t)

    def test_minimax_rejects_foreign_edge(self, weighted_triangle):
        """Tree edges must be graph edges"""
        t = TreeStructure.from_edges([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)])
        g = SparseGraph.from_edge_list(4, [(1, 2), (2, 3), (1, 3)], weights=[0.1, 0.2, 0.3])
        assert not verify_minimax(g, None, t)


class TestNestedMST:
    """Test cases for mst_of_giant"""

    def test_tree_spans_component_of_one(self, power_ensemble, power_seq):
        """The tree spans C(1) of the unpercolated graph"""
        nested = mst_of_giant(power_ensemble, power_seq, [1.0, 2.0, 4.0])
        record = giant(power_ensemble.graph, power_seq)
        assert nested.tree.root == 1
        assert nested.tree.vertices == tuple(record.vertices.tolist())

    def test_vertex_sets_match_percolated_giants(self, power_ensemble, power_seq):
        """Each vertex set is C(1) of the ensemble at p^n_lambda"""
        lambdas = [1.0, 2.0, 4.0]
        nested = mst_of_giant(power_ensemble, power_seq, lambdas)
        for k, lam in enumerate(lambdas):
            p = derived_stats(power_seq, lam)[1].p_lambda
            assert nested.p_values[k] == pytest.approx(p)
            record = giant(power_ensemble.percolate(p), power_seq)
            np.testing.assert_array_equal(nested.vertex_sets[k], record.vertices)

    def test_vertex_sets_nested(self, power_ensemble, power_seq):
        """Larger lambda gives a larger vertex set"""
        nested = mst_of_giant(power_ensemble, power_seq, [0.5, 1.0, 3.0])
        sets = [set(s.tolist()) for s in nested.vertex_sets]
        assert sets[0] <= sets[1] <= sets[2]

    def test_restriction_is_mst_of_percolated_giant(self, power_ensemble, power_seq):
        """The restricted tree is the MST of the critical-window component"""
        nested = mst_of_giant(power_ensemble, power_seq, [2.0])
        g = power_ensemble.percolate(nested.p_values[0])
        sub = g.subgraph(nested.vertex_sets[0].tolist())
        forest = kruskal(sub)
        assert len(forest) == 1
        assert nested.restriction(0).edge_set() == forest[0].edge_set()

    def test_unsorted_lambdas(self, power_ensemble, power_seq):
        """lambdas must increase"""
        with pytest.raises(ValueError):
            mst_of_giant(power_ensemble, power_seq, [2.0, 1.0])


class TestAttach:
    """Test cases for greedy attachment"""

    def test_vertex_in_giant(self, tiny_ensemble):
        """Members of C(1) are attached without edges"""
        ens, seq = tiny_ensemble
        result = algorithm1_attach(ens, seq, 0.0, 2)
        assert result.attached
        assert result.edges == []
        assert result.cluster_size == 2

    def test_attach_through_heavy_edge(self, tiny_ensemble):
        """Vertex 3 joins through the edge above the threshold"""
        ens, seq = tiny_ensemble
        result = algorithm1_attach(ens, seq, 0.0, 3)
        assert result.outcome == ATTACHED
        assert result.edges == [(2, 3)]
        assert result.cluster_size == 3

    def test_exhausted(self, tiny_ensemble):
        """A component with no way out is exhausted"""
        ens, seq = tiny_ensemble
        result = algorithm1_attach(ens, seq, 0.0, 4)
        assert result.outcome == EXHAUSTED
        assert not result.attached
        assert result.cluster_size == 2

    def test_attach_edges_are_mst_edges(self, power_ensemble, power_seq):
        """Every edge added on the way to C(1) belongs to the giant's MST"""
        nested = mst_of_giant(power_ensemble, power_seq, [1.0])
        inside = set(nested.vertex_sets[0].tolist())
        outside = [v for v in nested.tree.vertices if v not in inside][:10]
        tree_edges = nested.tree.edge_set()
        for v in outside:
            result = algorithm1_attach(power_ensemble, power_seq, 1.0, v)
            assert result.attached
            assert set(result.edges) <= tree_edges


class TestCycleBreaking:
    """Test cases for cycle breaking and exact laws"""

    def test_tree_is_untouched(self, rng):
        """A forest has nothing to delete"""
        g = SparseGraph.from_edge_list(4, [(1, 2), (2, 3), (3, 4)])
        result = cbd_infty(g, rng)
        assert result.deletions == 0
        assert result.edge_set() == {(1, 2), (2, 3), (3, 4)}

    def test_diamond_loses_two_edges(self, diamond_graph, rng):
        """A graph with surplus 2 ends as a spanning tree after two deletions"""
        result = cbd_infty(diamond_graph, rng)
        assert result.deletions == 2
        assert len(result.forest) == 1
        assert result.edge_set() in set(spanning_trees(diamond_graph))

    def test_spanning_tree_count(self, diamond_graph):
        """The diamond has 8 spanning trees"""
        assert len(spanning_trees(diamond_graph)) == 8

    def test_triangle_mst_law_uniform(self):
        """By symmetry each triangle spanning tree has probability 1/3"""
        g = SparseGraph.from_edge_list(3, [(1, 2), (2, 3), (1, 3)])
        law = mst_law_exact(g)
        assert len(law) == 3
        assert all(p == pytest.approx(1 / 3) for p in law.values())

    def test_exact_laws_agree(self, diamond_graph):
        """Cycle breaking and the MST have the same law"""
        mst = mst_law_exact(diamond_graph)
        cbd = cbd_law_exact(diamond_graph)
        assert sum(mst.values()) == pytest.approx(1.0)
        assert set(mst) <= set(spanning_trees(diamond_graph))
        assert tv_distance(mst, cbd) < 1e-12

    def test_exact_distance(self, diamond_graph, rng):
        """Exact mode reports a vanishing TV"""
        result = cbd_law_distance(diamond_graph, 0, rng, mode="exact")
        assert result.mode == "exact"
        assert result.tv < 1e-12
        assert result.support == 8

    @pytest.mark.slow
    def test_recursive_mst_law_on_k5(self):
        """Ten edges take the memoized recursion and still agree with cycle breaking"""
        g = SparseGraph.from_edge_list(5, itertools.combinations(range(1, 6), 2))
        mst = mst_law_exact(g)
        assert len(mst) == 125
        assert sum(mst.values()) == pytest.approx(1.0)
        assert tv_distance(mst, cbd_law_exact(g)) < 1e-9

    @pytest.mark.slow
    def test_monte_carlo_distance(self, diamond_graph, rng):
        """Sampled cycle breaking is close to the exact MST law"""
        result = cbd_law_distance(diamond_graph, 100_000, rng, mode="monte-carlo")
        assert result.trials == 100_000
        assert result.tv < 0.02

    def test_unknown_mode(self, diamond_graph, rng):
        """Only exact and monte-carlo modes exist"""
        with pytest.raises(ValueError):
            cbd_law_distance(diamond_graph, 10, rng, mode="approximate")
