import numpy as np
import pytest

from common import SelectionError
from graph import Graph
from multiblock import (
    CandidateSet,
    MultiConfig,
    blue_density_filter,
    concentrated_floor,
    induced_edge_count,
    rank_by_blue_count,
    select_disjoint,
)


def test_candidate_vertices_are_sorted_unique():
    c = CandidateSet([5, 1, 5, 3], source_column=2)
    assert c.vertices.tolist() == [1, 3, 5]
    assert c.size == 3
    assert c.overlap(CandidateSet([3, 4, 5], 0)) == 2


def test_induced_edge_count(two_cliques):
    g, _ = two_cliques
    assert induced_edge_count(g, [0, 1, 4]) == 1
    assert induced_edge_count(g, [0, 1, 2, 3]) == 6
    assert induced_edge_count(g, []) == 0


def test_identical_candidates_keep_first_half_by_column():
    blue = Graph.from_edges(4, [0, 1], [1, 2])
    candidates = [CandidateSet([0, 1, 2], column) for column in (3, 1, 2, 0)]
    kept = blue_density_filter(candidates, blue)
    assert [c.source_column for c in kept] == [0, 1]
    assert all(c.blue_edge_count == 2 for c in kept)


def test_filter_keeps_denser_set():
    # triangle on 0..2 and a single edge 4-5
    blue = Graph.from_edges(8, [0, 0, 1, 4], [1, 2, 2, 5])
    dense = CandidateSet([0, 1, 2, 3], source_column=7)
    sparse = CandidateSet([3, 4, 5, 6], source_column=1)
    kept = blue_density_filter([sparse, dense], blue)
    assert [c.source_column for c in kept] == [7]
    assert kept[0].blue_edge_count == 3


def test_rank_orders_every_candidate():
    blue = Graph.from_edges(6, [0, 0, 3], [1, 2, 4])
    ranked = rank_by_blue_count(
        [CandidateSet([3, 4], 5), CandidateSet([0, 1, 2], 9), CandidateSet([1, 2], 0)], blue
    )
    assert [(c.source_column, c.blue_edge_count) for c in ranked] == [(9, 2), (5, 1), (0, 0)]


def test_filter_needs_candidates():
    with pytest.raises(ValueError):
        blue_density_filter([], Graph.empty(3))


def test_disjoint_candidates_all_accepted():
    candidates = [CandidateSet(range(4 * i, 4 * i + 4), i) for i in range(3)]
    chosen = select_disjoint(candidates, 3, overlap_limit=1)
    assert [c.source_column for c in chosen] == [0, 1, 2]


def test_duplicates_fail_selection():
    candidates = [CandidateSet([0, 1, 2], i) for i in range(4)]
    assert [c.source_column for c in select_disjoint(candidates, 1, 1)] == [0]
    with pytest.raises(SelectionError) as info:
        select_disjoint(candidates, 2, 1)
    assert (info.value.accepted, info.value.required) == (1, 2)


def test_greedy_scan_order():
    candidates = [
        CandidateSet([0, 1, 2, 3], 0),
        CandidateSet([0, 1, 2, 4], 1),     # overlap 3 with the first: rejected
        CandidateSet([2, 3, 5, 6], 2),     # overlap 2: accepted
        CandidateSet([7, 8, 9, 10], 3),
        CandidateSet([8, 9, 10, 11], 4),
    ]
    chosen = select_disjoint(candidates, 2, overlap_limit=3)
    assert [c.source_column for c in chosen] == [0, 2]


def test_concentrated_floor():
    cfg = MultiConfig.from_rates(300, 15, 3, 3000)
    s = 10
    shares = [0.925 * s, 0.0375 * s, 0.0375 * s]
    within = sum(x * (x - 1) / 2 for x in shares)
    expected = within * 300 / 6000 + (s * (s - 1) / 2 - within) * 15 / 6000
    assert concentrated_floor(cfg, s) == pytest.approx(expected)
    assert concentrated_floor(cfg) == pytest.approx(
        concentrated_floor(cfg, cfg.set_size)
    )


def test_concentrated_sets_rank_above_spread_sets():
    # four blocks of 40 vertices
    rng = np.random.default_rng(8)
    k, size, p_in, p_out = 4, 40, 0.5, 0.05
    blocks = np.repeat(np.arange(k), size)
    u, v = np.triu_indices(k * size, 1)
    p = np.where(blocks[u] == blocks[v], p_in, p_out)
    keep = rng.random(u.size) < p
    blue = Graph.from_edges(k * size, u[keep], v[keep])
    concentrated = CandidateSet(np.arange(size), 0)
    spread = CandidateSet(np.concatenate([np.arange(i * size, i * size + size // k) for i in range(k)]), 1)
    ranked = rank_by_blue_count([spread, concentrated], blue)
    assert ranked[0].source_column == 0
