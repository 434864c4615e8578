import math

import numpy as np
import pytest

from graph import Clustering, Graph, SbmParams, sample_sbm
from harness import gamma_correctness
from spectral import SparseSym
from twoblock import (
    TwoBlockConfig,
    correction_two,
    gamma_bound_two,
    partition_two,
    spectral_bisection,
    spectral_partition_two,
)


class TestConfig:
    def test_defaults(self):
        cfg = TwoBlockConfig(a=10, b=3)
        assert cfg.d == 13
        assert cfg.correction_threshold == pytest.approx(13 / 4)
        assert cfg.trim_threshold == pytest.approx(260)
        assert cfg.correction_rounds == 1

    @pytest.mark.parametrize('kwargs', [
        {'a': 5, 'b': 5},
        {'a': 5, 'b': 0},
        {'a': 5, 'b': 1, 'trim_factor': 0},
        {'a': 5, 'b': 1, 'correction_rounds': 0},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            TwoBlockConfig(**kwargs)


class TestSpectralPartition:
    def test_two_cliques_recovered_exactly(self, two_cliques):
        g, truth = two_cliques
        result = spectral_partition_two(g, TwoBlockConfig(a=3, b=1))
        assert gamma_correctness(result, truth).gamma == 0.0
        assert result.trimmed == frozenset()

    def test_zero_signal_gives_balanced_labeling(self):
        g, _ = sample_sbm(SbmParams.two_block(500, 5, 5), seed=3)
        # a = b has no valid rate pair; only d = a + b enters the spectral step
        result = spectral_partition_two(g, TwoBlockConfig(a=6, b=4, d=10))
        assert result.num_vertices == 1000
        assert result.sizes().tolist() == [500, 500]

    def test_halves_are_exact_and_trimmed_recorded(self, two_cliques):
        g, _ = two_cliques
        # hub 0 joined to every vertex of the second clique
        u, v = g.edges()
        hub = Graph.from_edges(8, np.concatenate([u, [0, 0, 0, 0]]), np.concatenate([v, [4, 5, 6, 7]]))
        result = spectral_partition_two(hub, TwoBlockConfig(a=3, b=1, trim_factor=1.5))
        assert result.trimmed == frozenset({0})
        assert result.sizes().tolist() == [4, 4]

    def test_odd_vertex_count_rejected(self):
        with pytest.raises(ValueError, match='even'):
            spectral_partition_two(Graph.empty(5), TwoBlockConfig(a=3, b=1))

    def test_bisection_is_deterministic(self):
        g, _ = sample_sbm(SbmParams.two_block(200, 20, 2), seed=5)
        m = SparseSym.from_graph(g)
        assert spectral_bisection(m) == spectral_bisection(m)


class TestCorrection:
    def test_empty_blue_graph_changes_nothing(self):
        part = Clustering([0, 1, 0, 1, 1, 0], 2)
        corrected = correction_two(part, Graph.empty(6), TwoBlockConfig(a=6, b=2))
        assert corrected == part

    def test_threshold_boundary(self):
        part = Clustering([0, 0, 0, 0, 1, 1, 1, 1], 2)
        cfg = TwoBlockConfig(a=6, b=2)
        # vertex 0 has ceil((a+b)/4) = 2 Blue neighbors in class 1
        blue = Graph.from_edges(8, [0, 0], [4, 5])
        assert correction_two(part, blue, cfg).labels.tolist() == [1, 0, 0, 0, 1, 1, 1, 1]
        # one neighbor short of the threshold
        blue = Graph.from_edges(8, [0], [4])
        assert correction_two(part, blue, cfg) == part

    def test_flips_are_simultaneous(self):
        part = Clustering([0, 0, 0, 0, 1, 1, 1, 1], 2)
        blue = Graph.from_edges(8, [0, 0, 1], [4, 5, 4])
        corrected = correction_two(part, blue, TwoBlockConfig(a=6, b=2))
        assert corrected.labels.tolist() == [1, 0, 0, 0, 0, 1, 1, 1]

    def test_extra_rounds_continue_from_previous(self):
        part = Clustering([0, 0, 0, 0, 1, 1, 1, 1], 2)
        blue = Graph.from_edges(8, [0, 0, 1], [4, 5, 4])
        corrected = correction_two(part, blue, TwoBlockConfig(a=6, b=2, correction_rounds=2))
        # after round one 0 and 4 swapped sides, so each sees one opposite neighbor
        assert corrected.labels.tolist() == [1, 0, 0, 0, 0, 1, 1, 1]

    def test_keeps_trimmed_set(self):
        part = Clustering([0, 1], 2, frozenset({1}))
        assert correction_two(part, Graph.empty(2), TwoBlockConfig(a=6, b=2)).trimmed == frozenset({1})

    def test_rejects_mismatch(self):
        cfg = TwoBlockConfig(a=6, b=2)
        with pytest.raises(ValueError):
            correction_two(Clustering([0, 1, 2], 3), Graph.empty(3), cfg)
        with pytest.raises(ValueError):
            correction_two(Clustering([0, 1], 2), Graph.empty(4), cfg)


class TestPartitionTwo:
    def test_empty_graph(self):
        result = partition_two(Graph.empty(10), 5, 1, seed=0)
        assert result.sizes().sum() == 10
        assert result.sizes().tolist() == [5, 5]

    def test_strong_signal(self):
        g, truth = sample_sbm(SbmParams.two_block(500, 60, 5), seed=21)
        result = partition_two(g, 60, 5, seed=21)
        assert gamma_correctness(result, truth).gamma <= 0.1

    def test_reproducible(self):
        g, _ = sample_sbm(SbmParams.two_block(300, 30, 3), seed=2)
        assert partition_two(g, 30, 3, seed=4) == partition_two(g, 30, 3, seed=4)

    @pytest.mark.slow
    def test_mean_gamma_against_bound(self):
        params = SbmParams.two_block(2000, 50, 5)
        gammas = []
        for seed in range(20):
            g, truth = sample_sbm(params, seed)
            gammas.append(gamma_correctness(partition_two(g, 50, 5, seed), truth).gamma)
        assert np.mean(gammas) <= 2 * gamma_bound_two(50, 5)


class TestGammaBound:
    def test_values(self):
        assert gamma_bound_two(5, 5) == 1.0
        assert gamma_bound_two(10, 3) == 1.0
        assert gamma_bound_two(100, 10) == pytest.approx(2 * math.exp(-0.072 * 8100 / 110))
        assert gamma_bound_two(100, 10) == pytest.approx(9.96e-3, rel=1e-3)

    def test_rejects_bad_rates(self):
        with pytest.raises(ValueError):
            gamma_bound_two(3, 10)
