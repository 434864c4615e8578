import numpy as np
import pytest

from graph import CensorInstance, Clustering, Graph, SbmParams, half_count


class TestGraph:
    def test_from_edges_collapses_duplicates(self):
        g = Graph.from_edges(4, [0, 1, 2, 1], [1, 0, 3, 2])
        assert g.edge_count == 3
        u, v = g.edges()
        assert u.tolist() == [0, 1, 2]
        assert v.tolist() == [1, 2, 3]

    def test_degrees_and_neighbors(self, triangle):
        assert triangle.degrees().tolist() == [2, 2, 2]
        assert triangle.neighbors(1).tolist() == [0, 2]

    @pytest.mark.parametrize('u, v', [([0], [0]), ([0], [4]), ([-1], [2])])
    def test_rejects_bad_endpoints(self, u, v):
        with pytest.raises(ValueError):
            Graph.from_edges(4, u, v)

    def test_empty(self):
        g = Graph.empty(5)
        assert g.edge_count == 0
        assert g.degrees().tolist() == [0] * 5
        assert Graph.empty(0).num_vertices == 0

    def test_adjacency_is_a_copy(self, triangle):
        adjacency = triangle.adjacency()
        adjacency[0, 1] = 0
        assert triangle.adjacency()[0, 1] == 1

    def test_induced_relabels_in_order(self, two_cliques):
        g, _ = two_cliques
        sub = g.induced([5, 3, 4])
        assert sub.num_vertices == 3
        u, v = sub.edges()
        # 5-4 is the only edge; positions 0 and 2
        assert list(zip(u.tolist(), v.tolist())) == [(0, 2)]

    def test_edge_subgraph(self, triangle):
        sub = triangle.edge_subgraph(np.array([True, False, True]))
        u, v = sub.edges()
        assert list(zip(u.tolist(), v.tolist())) == [(0, 1), (1, 2)]
        with pytest.raises(ValueError):
            triangle.edge_subgraph(np.array([True]))

    def test_arrays_are_read_only(self, triangle):
        with pytest.raises(ValueError):
            triangle.indices[0] = 2


class TestSbmParams:
    def test_two_block(self):
        params = SbmParams.two_block(7500, 10, 3)
        assert params.num_vertices == 15000
        assert params.p_in == pytest.approx(10 / 7500)
        assert params.p_out == pytest.approx(3 / 7500)
        assert params.expected_degree == 13

    def test_k_block(self):
        params = SbmParams.k_block(3000, 3, 22, 2)
        assert params.block_size == 1000
        assert params.num_vertices == 3000
        assert params.expected_degree == 26
        assert params.block_of(np.array([0, 999, 1000, 2999])).tolist() == [0, 0, 1, 2]

    def test_k_must_divide_n(self):
        with pytest.raises(ValueError, match='divide'):
            SbmParams.k_block(100, 3, 10, 1)

    @pytest.mark.parametrize('a, b', [(3, 10), (5, -1), (20, 1)])
    def test_rejects_bad_rates(self, a, b):
        with pytest.raises(ValueError):
            SbmParams.two_block(10, a, b)

    def test_equal_and_zero_rates_allowed(self):
        assert SbmParams.two_block(4, 0, 0).p_in == 0
        assert SbmParams.two_block(500, 5, 5).p_in == SbmParams.two_block(500, 5, 5).p_out


class TestClustering:
    def test_contiguous(self):
        c = Clustering.contiguous(2, 4)
        assert c.labels.tolist() == [0, 0, 0, 0, 1, 1, 1, 1]
        assert c.sizes().tolist() == [4, 4]
        assert [cls.tolist() for cls in c.classes()] == [[0, 1, 2, 3], [4, 5, 6, 7]]

    def test_labels_must_fit_k(self):
        with pytest.raises(ValueError):
            Clustering([0, 2], 2)

    def test_one_hot(self):
        c = Clustering([1, 0, 1], 2)
        assert c.one_hot().toarray().tolist() == [[0, 1], [1, 0], [0, 1]]

    def test_equality_includes_trimmed(self):
        assert Clustering([0, 1], 2) == Clustering([0, 1], 2)
        assert Clustering([0, 1], 2) != Clustering([0, 1], 2, frozenset({1}))


class TestCensorInstance:
    def test_labels_follow_edge_order(self):
        g = Graph.from_edges(4, [0, 0, 2], [1, 2, 3])
        inst = CensorInstance(g, [0, 1, 0], [0, 0, 1, 1], 0.5, 0.1)
        assert inst.half == 2
        u, v = inst.graph.edges()
        assert list(zip(u.tolist(), v.tolist(), inst.edge_labels.tolist())) == [(0, 1, 0), (0, 2, 1), (2, 3, 0)]
        assert inst.truth().labels.tolist() == [0, 0, 1, 1]

    def test_validation(self):
        g = Graph.from_edges(4, [0], [1])
        with pytest.raises(ValueError):
            CensorInstance(g, [0, 1], [0, 0, 1, 1], 0.5, 0.1)
        with pytest.raises(ValueError):
            CensorInstance(g, [0], [0, 0, 0, 1], 0.5, 0.1)
        with pytest.raises(ValueError):
            CensorInstance(g, [0], [0, 0, 1, 1], 0.5, 0.5)


def test_half_count():
    assert half_count(8) == 4
    with pytest.raises(ValueError, match='even'):
        half_count(7)
