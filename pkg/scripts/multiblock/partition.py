"""
k-community recovery.

The graph is colored Red/Blue and its vertices split into Y and Z. The Red
Z-by-Y bipartite matrix gives approximate blocks of Z, Red edges inside Z
correct them, and Blue Y-Z edges assign the vertices of Y.
"""

import math
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from common import get_logger
from graph import Clustering, Graph, color_edges, split_vertices, substream
from spectral import BipartiteSparse, Subspace, project, top_left_singular_space, trim_bipartite
from .candidates import (
    CandidateSet,
    blue_density_filter,
    concentrated_floor,
    rank_by_blue_count,
    select_disjoint,
)
from .config import MultiConfig

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ColumnSpace:
    """Top-k left singular space of the trimmed Y1 columns, and the Y2 columns left for projection."""

    space: Subspace
    y1_columns: np.ndarray
    y2_columns: np.ndarray
    trimmed_rows: FrozenSet[int]
    trimmed_columns: FrozenSet[int]


def column_space(b_matrix: BipartiteSparse, cfg: MultiConfig, seed: int) -> ColumnSpace:
    """
    Split the columns into Y1/Y2, trim A1 at trim_factor * d and take the
    top-k left singular space of the trimmed A1.

    trimmed_columns holds positions in b_matrix's column order.
    """
    rng = substream(seed, 'splitting', index=1)
    in_y1 = rng.random(b_matrix.cols) < 0.5
    y1 = np.flatnonzero(in_y1)
    y2 = np.flatnonzero(~in_y1)

    a1, trimmed_rows, trimmed_local = trim_bipartite(b_matrix.select_columns(y1), cfg.trim_threshold)
    space = top_left_singular_space(a1, cfg.k, tol=cfg.tol)
    logger.debug(
        f"Singular space of {a1.rows}x{a1.cols} block: values {np.round(space.values, 4).tolist()}"
    )
    return ColumnSpace(
        space=space,
        y1_columns=y1,
        y2_columns=y2,
        trimmed_rows=trimmed_rows,
        trimmed_columns=frozenset(int(y1[c]) for c in trimmed_local),
    )


def draw_columns(y2_columns: np.ndarray, cfg: MultiConfig, seed: int) -> np.ndarray:
    """m columns of Y2 drawn without replacement (all of them if fewer), in draw order."""
    rng = substream(seed, 'spectral')
    count = min(cfg.m, y2_columns.size)
    return y2_columns[rng.choice(y2_columns.size, size=count, replace=False)]


def top_coordinates(vector: np.ndarray, size: int) -> np.ndarray:
    """Positions of the size largest entries; ties by position ascending."""
    order = np.lexsort((np.arange(vector.size), -vector))
    return np.sort(order[:size])


def spectral_partition_multi(
    b_matrix: BipartiteSparse,
    z_vertices: Sequence[int],
    blue_in_z: Graph,
    cfg: MultiConfig,
    seed: int,
    columns: Optional[ColumnSpace] = None
) -> List[CandidateSet]:
    """
    Approximate blocks of Z from the Red Z-by-Y matrix.

    Each drawn column minus the constant column_offset is projected onto the
    singular space; its top set_size coordinates form a candidate. The
    upper half of candidates by induced Blue edge count is scanned greedily
    for k sets with pairwise overlap below overlap_limit. When the upper
    half alone cannot supply k sets (all candidates of a block may share
    one low count), the scan continues into discarded candidates whose count
    reaches the concentrated-set floor, unless cfg.reserve is off.

    Args:
        b_matrix: Rows indexed by Z, columns by Y
        z_vertices: Vertex ids of the rows, in row order
        blue_in_z: Blue graph induced on Z, in row order
        cfg: Pipeline constants
        seed: Seed for the column split and draw substreams
        columns: Precomputed column_space for the same matrix and seed

    Returns:
        k candidate sets of row positions

    Raises:
        SelectionError: If fewer than k compatible sets exist
    """
    if len(z_vertices) != b_matrix.rows or blue_in_z.num_vertices != b_matrix.rows:
        raise ValueError(
            f"Z has {len(z_vertices)} vertices and {blue_in_z.num_vertices} Blue vertices "
            f"for a matrix with {b_matrix.rows} rows"
        )

    if columns is None:
        columns = column_space(b_matrix, cfg, seed)
    drawn = draw_columns(columns.y2_columns, cfg, seed)
    size = min(cfg.set_size, b_matrix.rows)

    candidates = []
    for j in drawn.tolist():
        projected = project(columns.space, b_matrix.column(j) - cfg.column_offset)
        candidates.append(CandidateSet(top_coordinates(projected, size), source_column=j))

    if not cfg.reserve:
        kept = blue_density_filter(candidates, blue_in_z) if candidates else []
        logger.debug(f"{len(candidates)} candidates, {len(kept)} kept by Blue count")
        return select_disjoint(kept, cfg.k, cfg.overlap_limit)

    ranked = rank_by_blue_count(candidates, blue_in_z)
    keep = math.ceil(len(ranked) / 2)
    floor = concentrated_floor(cfg, size)
    reserve = [c for c in ranked[keep:] if c.blue_edge_count >= floor]
    logger.debug(
        f"{len(candidates)} candidates, {keep} kept by Blue count, "
        f"{len(reserve)} in reserve above floor {floor:.1f}"
    )
    return select_disjoint(ranked[:keep] + reserve, cfg.k, cfg.overlap_limit)


def correction_multi(sets: Sequence[np.ndarray], red_in_z: Graph) -> Clustering:
    """
    Assign every vertex of Z to the set holding most of its Red neighbors.

    Sets are row positions in Z and may overlap; ties go to the lowest index.
    """
    k = len(sets)
    if k < 1:
        raise ValueError("correction_multi needs at least one set")
    size = red_in_z.num_vertices
    membership = np.zeros((size, k))
    for i, members in enumerate(sets):
        members = np.asarray(members, dtype=np.int64)
        if members.size and (members.min() < 0 or members.max() >= size):
            raise ValueError(f"set {i} has positions outside 0..{size - 1}")
        membership[members, i] = 1.0
    counts = red_in_z.adjacency() @ membership
    return Clustering(np.argmax(counts, axis=1), k)


def merge_multi(
    z_clustering: Clustering,
    blue_yz: BipartiteSparse,
    y_vertices: Sequence[int],
    z_vertices: Sequence[int],
    cfg: MultiConfig
) -> Clustering:
    """
    Label Y from Blue Y-Z edges and pass Z labels through.

    A vertex of Y takes the lowest class i with at least merge_threshold
    Blue neighbors in class i of Z; with no such class it takes the class
    with most neighbors (lowest index on ties).

    Args:
        z_clustering: Labels of Z in row order of blue_yz's columns
        blue_yz: Rows indexed by Y, columns by Z
        y_vertices: Vertex ids of the rows
        z_vertices: Vertex ids of the columns
        cfg: Pipeline constants

    Returns:
        Clustering of all len(y_vertices) + len(z_vertices) vertices
    """
    y_vertices = np.asarray(y_vertices, dtype=np.int64)
    z_vertices = np.asarray(z_vertices, dtype=np.int64)
    if blue_yz.rows != y_vertices.size or blue_yz.cols != z_vertices.size:
        raise ValueError(
            f"matrix is {blue_yz.rows}x{blue_yz.cols} for |Y|={y_vertices.size}, |Z|={z_vertices.size}"
        )
    if z_clustering.num_vertices != z_vertices.size:
        raise ValueError("z_clustering must label every vertex of Z")

    counts = np.asarray((blue_yz.matrix @ z_clustering.one_hot()).todense())
    qualifies = counts >= cfg.merge_threshold
    y_labels = np.where(qualifies.any(axis=1), np.argmax(qualifies, axis=1), np.argmax(counts, axis=1))
    logger.debug(
        f"Merged {y_vertices.size} vertices, {int(qualifies.any(axis=1).sum())} above threshold "
        f"{cfg.merge_threshold:g}"
    )

    labels = np.zeros(y_vertices.size + z_vertices.size, dtype=np.int64)
    labels[z_vertices] = z_clustering.labels
    labels[y_vertices] = y_labels
    return Clustering(labels, z_clustering.k)


def partition_multi(
    g: Graph,
    a: float,
    b: float,
    k: int,
    seed: int,
    cfg: Optional[MultiConfig] = None
) -> Clustering:
    """
    Recover k blocks of g.

    Args:
        g: Observed graph
        a: Within-block rate
        b: Cross-block rate
        k: Number of blocks
        seed: Seed for the coloring, splitting and spectral substreams
        cfg: Optional constants; defaults from MultiConfig.from_rates

    Returns:
        k-clustering of all vertices; trimmed records vertices dropped by
        the bipartite trimming

    Raises:
        SelectionError: If the spectral step cannot find k compatible sets
    """
    if cfg is None:
        cfg = MultiConfig.from_rates(a, b, k, g.num_vertices)
    elif cfg.k != k:
        raise ValueError(f"config is for k={cfg.k}, partition requested k={k}")
    red, blue = color_edges(g, seed)
    y, z = split_vertices(g.num_vertices, seed)
    logger.debug(f"Split {g.num_vertices} vertices into |Y|={y.size}, |Z|={z.size}")

    b_matrix = BipartiteSparse.from_graph(red, z, y)
    columns = column_space(b_matrix, cfg, seed)
    chosen = spectral_partition_multi(b_matrix, z, blue.induced(z), cfg, seed, columns)
    z_clustering = correction_multi([c.vertices for c in chosen], red.induced(z))
    merged = merge_multi(z_clustering, BipartiteSparse.from_graph(blue, y, z), y, z, cfg)

    trimmed = {int(z[r]) for r in columns.trimmed_rows} | {int(y[c]) for c in columns.trimmed_columns}
    return Clustering(merged.labels, k, frozenset(trimmed))


def column_signal(cfg: MultiConfig, z_labels: np.ndarray, block: int) -> np.ndarray:
    """
    Expected centered column for a Y2 vertex of the given block:
    +(a-b)/2n on Z vertices of that block, -(a-b)/2n elsewhere.
    """
    step = (cfg.a - cfg.b) / (2 * cfg.n)
    return np.where(np.asarray(z_labels) == block, step, -step)


def gamma_bound_components(a: float, b: float, k: int) -> Tuple[float, float]:
    """
    (correction, merge) bounds 2k exp(-c (a-b)^2 / (k(a+b))) with c = 0.04
    and c = 0.0324, each clamped to [0, 1].
    """
    if b < 0 or a < b or a + b <= 0:
        raise ValueError(f"rates must satisfy a >= b >= 0 and a > 0, got a={a}, b={b}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    exponent = (a - b) ** 2 / (k * (a + b))
    return (
        min(1.0, 2 * k * math.exp(-0.04 * exponent)),
        min(1.0, 2 * k * math.exp(-0.0324 * exponent)),
    )


def gamma_bound_multi(a: float, b: float, k: int) -> float:
    """The weaker of the correction and merge bounds."""
    return max(gamma_bound_components(a, b, k))
