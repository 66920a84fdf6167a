"""Ways to obtain a valid state covariance: graph-Laplacian GMRFs,
seeded random SPD matrices for property testing, diagonal baselines,
and text-file ingestion.

File formats (UTF-8, '#' comment lines ignored):
  dense matrix:  first line n, then n whitespace-separated rows of n reals
  edge list:     first line n, then one "i j weight" triple per line,
                 0-based node indices, undirected
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    MatrixParseError,
    NonPositiveVarianceError,
    SelfLoopError,
)
from .linalg import CovarianceMatrix, build_covariance

DEFAULT_CONDITION_CAP = 1e6


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on nodes 0..n-1. No self-loops, no
    duplicate edges, strictly positive weights."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        edges = []
        seen = set()
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise IndexOutOfRangeError(f"edge endpoint ({i}, {j}) outside [0, {self.n})")
            if i == j:
                raise SelfLoopError(f"self-loop at node {i}")
            if w <= 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"edge ({i}, {j}) listed twice (undirected)")
            seen.add(key)
            edges.append((i, j, w))
        object.__setattr__(self, "edges", tuple(edges))

    def laplacian(self) -> np.ndarray:
        lap = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            lap[i, i] += w
            lap[j, j] += w
            lap[i, j] -= w
            lap[j, i] -= w
        return lap


def gmrf_covariance(g: Graph, epsilon: float) -> CovarianceMatrix:
    """Covariance of the Gaussian field whose precision is the weighted
    graph Laplacian plus epsilon * I.

    The Laplacian is PSD, so any epsilon > 0 makes the precision SPD and
    the inverse a valid covariance.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive (the Laplacian alone is singular)")
    precision = g.laplacian()
    precision[np.diag_indices_from(precision)] += epsilon
    sigma = cho_solve(cho_factor(precision, lower=True), np.eye(g.n))
    return build_covariance(sigma)


def random_spd(n: int, seed: int, condition_cap: float = DEFAULT_CONDITION_CAP) -> CovarianceMatrix:
    """Seeded random SPD matrix G G^T + delta I with delta set from a
    Gershgorin bound so the condition number provably stays under
    condition_cap. Same seed, same matrix, byte for byte."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if condition_cap < 1:
        raise ValueError("condition_cap must be at least 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n))
    a = g @ g.T
    # lambda_max <= max absolute row sum, so delta = bound / (cap - 1)
    # pins (lambda_max + delta) / delta <= cap.
    bound = float(np.max(np.sum(np.abs(a), axis=1)))
    delta = bound / max(condition_cap - 1.0, 1e-9)
    if delta <= 0.0:
        delta = 1.0
    a[np.diag_indices_from(a)] += delta
    return build_covariance(a)


def diagonal_covariance(variances) -> CovarianceMatrix:
    """Covariance of independent states: diag(variances)."""
    v = np.asarray(variances, dtype=np.float64).reshape(-1)
    if v.size < 1:
        raise ValueError("need at least one variance")
    if np.any(v <= 0):
        raise NonPositiveVarianceError("all variances must be strictly positive")
    return build_covariance(np.diag(v))


def _data_lines(path: str):
    """Yield (line_number, stripped_text) for non-comment, non-blank lines."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            yield lineno, text


def _parse_int(token: str, lineno: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise MatrixParseError(f"expected an integer, got {token!r}", lineno, column) from None


def _parse_float(token: str, lineno: int, column: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise MatrixParseError(f"expected a number, got {token!r}", lineno, column) from None


def load_covariance(path: str) -> CovarianceMatrix:
    """Read a dense-matrix text file and validate it as a covariance."""
    lines = _data_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MatrixParseError("empty file", 1) from None
    tokens = header.split()
    if len(tokens) != 1:
        raise MatrixParseError("first line must hold the dimension only", lineno, 1)
    n = _parse_int(tokens[0], lineno, 1)
    if n < 1:
        raise MatrixParseError(f"dimension must be positive, got {n}", lineno, 1)
    rows = []
    for lineno, text in lines:
        tokens = text.split()
        if len(tokens) != n:
            raise MatrixParseError(
                f"row {len(rows)} has {len(tokens)} entries, expected {n}", lineno, len(tokens)
            )
        rows.append([_parse_float(t, lineno, c + 1) for c, t in enumerate(tokens)])
        if len(rows) == n:
            break
    if len(rows) != n:
        raise MatrixParseError(f"found {len(rows)} rows, expected {n}", lineno if rows else 1)
    leftover = next(lines, None)
    if leftover is not None:
        raise MatrixParseError("unexpected content after last row", leftover[0], 1)
    return build_covariance(np.array(rows))


def format_covariance(cov: CovarianceMatrix) -> str:
    """Dense-matrix text form; values round-trip exactly through
    load_covariance (shortest repr)."""
    lines = [str(cov.n)]
    for row in cov.entries:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def save_covariance(cov: CovarianceMatrix, path: str):
    """Write the dense-matrix text format to a file."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_covariance(cov))


def load_graph(path: str) -> Graph:
    """Read an edge-list text file and validate it as a Graph."""
    lines = _data_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MatrixParseError("empty file", 1) from None
    tokens = header.split()
    if len(tokens) != 1:
        raise MatrixParseError("first line must hold the node count only", lineno, 1)
    n = _parse_int(tokens[0], lineno, 1)
    edges = []
    for lineno, text in lines:
        tokens = text.split()
        if len(tokens) != 3:
            raise MatrixParseError(
                f"expected 'i j weight', got {len(tokens)} tokens", lineno, len(tokens)
            )
        i = _parse_int(tokens[0], lineno, 1)
        j = _parse_int(tokens[1], lineno, 2)
        w = _parse_float(tokens[2], lineno, 3)
        edges.append((i, j, w))
    return Graph(n=n, edges=tuple(edges))


def path_graph(n: int, weight: float = 1.0) -> Graph:
    """Chain 0-1-2-...-(n-1)."""
    return Graph(n=n, edges=tuple((i, i + 1, weight) for i in range(n - 1)))


def ring_graph(n: int, weight: float = 1.0) -> Graph:
    """Cycle through all n nodes; needs n >= 3 to avoid a duplicate edge."""
    if n < 3:
        raise ValueError("ring needs at least 3 nodes")
    return Graph(n=n, edges=tuple((i, (i + 1) % n, weight) for i in range(n)))
