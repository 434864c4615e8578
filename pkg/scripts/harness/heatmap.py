"""
Block-density heatmaps of a clustered graph, written as ASCII PGM.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np

from graph import Clustering, Graph

PGM_LINE_WIDTH = 70


def heatmap_counts(g: Graph, c: Clustering, bins: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Edge and vertex-pair counts per cell after ordering vertices by label.

    Vertices are stably sorted by label and cut into bins equal slices.
    Off-diagonal cells are symmetric, so the upper triangle (diagonal
    included) sums to the edge count.

    Returns:
        (edges, pairs), both bins x bins
    """
    if bins < 1:
        raise ValueError(f"bins must be at least 1, got {bins}")
    if c.num_vertices != g.num_vertices:
        raise ValueError(f"clustering has {c.num_vertices} vertices, graph {g.num_vertices}")

    total = g.num_vertices
    position = np.empty(total, dtype=np.int64)
    position[np.argsort(c.labels, kind='stable')] = np.arange(total)
    cell = position * bins // max(total, 1)

    u, v = g.edges()
    edges = np.zeros((bins, bins), dtype=np.int64)
    np.add.at(edges, (cell[u], cell[v]), 1)
    edges = edges + edges.T - np.diag(np.diag(edges))

    sizes = np.bincount(cell, minlength=bins).astype(np.int64)
    pairs = np.outer(sizes, sizes)
    np.fill_diagonal(pairs, sizes * (sizes - 1) // 2)
    return edges, pairs


def density_heatmap(g: Graph, c: Clustering, bins: int) -> np.ndarray:
    """
    Grayscale grid of per-cell edge density, 0 at the densest cell and 255
    where a cell has no edges.
    """
    edges, pairs = heatmap_counts(g, c, bins)
    density = np.divide(edges, pairs, out=np.zeros(edges.shape), where=pairs > 0)
    peak = density.max()
    if peak == 0:
        return np.full(edges.shape, 255, dtype=np.uint8)
    return np.rint(255 * (1 - density / peak)).astype(np.uint8)


def write_pgm(grid: np.ndarray, path: Union[str, Path]) -> None:
    """Write a grayscale grid as plain (P2) PGM with maxval 255."""
    grid = np.asarray(grid)
    if grid.ndim != 2:
        raise ValueError(f"grid must be two-dimensional, got shape {grid.shape}")
    height, width = grid.shape
    lines = ["P2", f"{width} {height}", "255"]
    for row in grid.tolist():
        line = ""
        for value in row:
            token = str(int(value))
            if line and len(line) + 1 + len(token) > PGM_LINE_WIDTH:
                lines.append(line)
                line = token
            else:
                line = f"{line} {token}" if line else token
        lines.append(line)
    with open(path, 'w', newline='\n') as f:
        f.write("\n".join(lines) + "\n")
