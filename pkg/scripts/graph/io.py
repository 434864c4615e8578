"""
Plain-text readers and writers for graphs, clusterings and censor instances.

Graph file: first line 'N M', then M lines 'u v' with 0-based u < v.
Clustering file: N lines, one label per line, trimmed vertices suffixed ' *'.
Censor file: a graph file followed by M lines 'u v y'.
All files are ASCII with LF line endings.
"""

from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from .model import CensorInstance, Clustering, Graph

PathLike = Union[str, Path]


def _graph_lines(g: Graph) -> List[str]:
    u, v = g.edges()
    lines = [f"{g.num_vertices} {g.edge_count}"]
    lines.extend(f"{a} {b}" for a, b in zip(u.tolist(), v.tolist()))
    return lines


def _write_lines(path: PathLike, lines: List[str]) -> None:
    with open(path, 'w', newline='\n') as f:
        f.write("\n".join(lines) + "\n")


def _ints(line: str, count: int, path: PathLike, lineno: int) -> List[int]:
    parts = line.split()
    if len(parts) != count:
        raise ValueError(f"{path}:{lineno}: expected {count} integers, got '{line.strip()}'")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ValueError(f"{path}:{lineno}: non-integer value in '{line.strip()}'")


def _parse_graph(lines: List[str], path: PathLike) -> Tuple[Graph, int]:
    if not lines:
        raise ValueError(f"{path}: empty graph file")
    n, m = _ints(lines[0], 2, path, 1)
    if len(lines) < 1 + m:
        raise ValueError(f"{path}: header declares {m} edges, found {len(lines) - 1} lines")
    us = np.empty(m, dtype=np.int64)
    vs = np.empty(m, dtype=np.int64)
    for i in range(m):
        u, v = _ints(lines[1 + i], 2, path, 2 + i)
        if not 0 <= u < v < n:
            raise ValueError(f"{path}:{2 + i}: edge must satisfy 0 <= u < v < {n}")
        us[i], vs[i] = u, v
    graph = Graph.from_edges(n, us, vs)
    if graph.edge_count != m:
        raise ValueError(f"{path}: duplicate edges in file")
    return graph, 1 + m


def write_graph(g: Graph, path: PathLike) -> None:
    _write_lines(path, _graph_lines(g))


def read_graph(path: PathLike) -> Graph:
    """
    Read a graph file.

    Raises:
        ValueError: With file and line number for malformed content
    """
    lines = Path(path).read_text().splitlines()
    graph, used = _parse_graph(lines, path)
    if any(line.strip() for line in lines[used:]):
        raise ValueError(f"{path}:{used + 1}: unexpected content after edge list")
    return graph


def write_clustering(c: Clustering, path: PathLike) -> None:
    lines = [
        f"{label} *" if v in c.trimmed else str(label)
        for v, label in enumerate(c.labels.tolist())
    ]
    _write_lines(path, lines)


def read_clustering(path: PathLike, k: Optional[int] = None) -> Clustering:
    """
    Read a clustering file; k defaults to the largest label plus one.
    """
    labels, trimmed = [], []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) == 2 and parts[1] == '*':
            trimmed.append(len(labels))
        elif len(parts) != 1:
            raise ValueError(f"{path}:{lineno}: expected 'label' or 'label *', got '{line}'")
        try:
            labels.append(int(parts[0]))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-integer label '{parts[0]}'")
    if k is None:
        k = max(labels) + 1 if labels else 1
    return Clustering(np.array(labels, dtype=np.int64), k, frozenset(trimmed))


def write_censor(inst: CensorInstance, path: PathLike) -> None:
    u, v = inst.graph.edges()
    lines = _graph_lines(inst.graph)
    lines.extend(
        f"{a} {b} {y}" for a, b, y in zip(u.tolist(), v.tolist(), inst.edge_labels.tolist())
    )
    _write_lines(path, lines)


def read_censor_observations(path: PathLike) -> Tuple[Graph, np.ndarray]:
    """
    Read a censor file into (graph, edge_labels aligned with graph.edges()).

    The hidden labeling is not part of the file; pair the result with a
    clustering file for evaluation.
    """
    lines = Path(path).read_text().splitlines()
    graph, used = _parse_graph(lines, path)
    m = graph.edge_count
    if len(lines) < used + m:
        raise ValueError(f"{path}: expected {m} labeled edge lines after the graph")

    eu, ev = graph.edges()
    position = {(a, b): i for i, (a, b) in enumerate(zip(eu.tolist(), ev.tolist()))}
    labels = np.full(m, -1, dtype=np.int8)
    for i in range(m):
        lineno = used + i + 1
        u, v, y = _ints(lines[used + i], 3, path, lineno)
        if (u, v) not in position:
            raise ValueError(f"{path}:{lineno}: ({u}, {v}) is not an edge of the graph")
        if y not in (0, 1):
            raise ValueError(f"{path}:{lineno}: label must be 0 or 1, got {y}")
        labels[position[(u, v)]] = y
    if np.any(labels < 0):
        raise ValueError(f"{path}: some edges carry no label")
    return graph, labels
