"""Unnormalised PageRank and its variance-weighted variant (HAL).

Both scores solve ``x_i = (1 - d) + d * sum_j share(j -> i) * x_j`` by
synchronous iteration from the all-ones vector. They differ only in how
a citing paper ``j`` splits its score across its references:

* PageRank: evenly, ``1 / |Out(j)|``.
* HAL: in proportion to each reference's variance weight,
  ``S2(i) / sum_{k in Out(j)} S2(k)``; if every reference of ``j`` has
  weight 0 the split falls back to even.

Papers citing nothing in the graph pass nothing on (no teleport
redistribution), so scores are not normalised to sum to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .corpus import split_lines
from .errors import ParameterError, RankingError
from .graph import CitationGraph

ALGORITHMS = ("pagerank", "hal")

DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200


class WeightedGraph:
    """A citation graph with a non-negative weight on every edge."""

    def __init__(self, graph: CitationGraph, weights: Mapping[tuple[str, str], float]):
        missing = [e for e in graph.edges if e not in weights]
        if missing:
            raise RankingError(f"edge {missing[0][0]!r} -> {missing[0][1]!r} has no weight")
        bad = [e for e in graph.edges if not (weights[e] >= 0 and math.isfinite(weights[e]))]
        if bad:
            raise RankingError(f"edge {bad[0][0]!r} -> {bad[0][1]!r} has invalid weight {weights[bad[0]]!r}")
        self.graph = graph
        self.weights = {e: float(weights[e]) for e in graph.edges}

    def weight(self, u: str, v: str) -> float:
        return self.weights[(u, v)]

    @classmethod
    def uniform(cls, graph: CitationGraph, value: float = 1.0) -> "WeightedGraph":
        return cls(graph, dict.fromkeys(graph.edges, value))


@dataclass(frozen=True)
class RankVector:
    scores: dict[str, float]
    algorithm: str
    damping: float | None
    iterations: int
    converged: bool
    residual: float

    def ranked(self) -> list[str]:
        """Ids by descending score, ties by id."""
        return sorted(self.scores, key=lambda v: (-self.scores[v], v))

    def positions(self) -> dict[str, int]:
        return {v: i + 1 for i, v in enumerate(self.ranked())}

    def __getitem__(self, node: str) -> float:
        return self.scores[node]


def _check_params(d: float, tol: float, max_iter: int):
    if not (isinstance(d, (int, float)) and 0 < d < 1):
        raise ParameterError(f"damping must lie strictly between 0 and 1, got {d!r}", module="ranking")
    if not (isinstance(tol, (int, float)) and tol > 0):
        raise ParameterError(f"tol must be positive, got {tol!r}", module="ranking")
    if isinstance(max_iter, bool) or not isinstance(max_iter, int) or max_iter < 1:
        raise ParameterError(f"max_iter must be a positive integer, got {max_iter!r}", module="ranking")


def pagerank_shares(graph: CitationGraph) -> dict[tuple[str, str], float]:
    return {(u, v): 1.0 / graph.out_degree(u) for u, v in graph.edges}


def hal_shares(wgraph: WeightedGraph) -> dict[tuple[str, str], float]:
    g = wgraph.graph
    shares = {}
    for u in g.nodes:
        refs = g.out_neighbors(u)
        if not refs:
            continue
        total = sum(wgraph.weight(u, v) for v in refs)
        for v in refs:
            shares[(u, v)] = wgraph.weight(u, v) / total if total > 0 else 1.0 / len(refs)
    return shares


def _power_iterate(graph: CitationGraph, shares: Mapping[tuple[str, str], float], algorithm: str,
                   d: float, tol: float, max_iter: int) -> RankVector:
    nodes = graph.nodes
    index = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    edges = graph.edges
    src = np.fromiter((index[u] for u, _ in edges), dtype=np.intp, count=len(edges))
    dst = np.fromiter((index[v] for _, v in edges), dtype=np.intp, count=len(edges))
    w = np.fromiter((shares[e] for e in edges), dtype=float, count=len(edges))

    x = np.ones(n)
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        # bincount sums in edge order, which keeps the result reproducible
        inflow = np.bincount(dst, weights=w * x[src], minlength=n)
        new = (1.0 - d) + d * inflow
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            converged = True
            break
    scores = {v: float(x[i]) for i, v in enumerate(nodes)}
    return RankVector(scores, algorithm, float(d), it, converged, residual)


def pagerank(graph: CitationGraph, d: float = DEFAULT_DAMPING, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> RankVector:
    """Classic PageRank in the ``(1 - d) + d * sum`` form.

    Stops when the L1 change between sweeps drops below *tol*; hitting
    *max_iter* first returns the last iterate with ``converged=False``.
    """
    _check_params(d, tol, max_iter)
    return _power_iterate(graph, pagerank_shares(graph), "pagerank", d, tol, max_iter)


def hal_rank(wgraph: WeightedGraph, d: float = DEFAULT_DAMPING, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> RankVector:
    _check_params(d, tol, max_iter)
    return _power_iterate(wgraph.graph, hal_shares(wgraph), "hal", d, tol, max_iter)


def dumps_rank_tsv(rv: RankVector) -> bytes:
    lines = ["id\tscore\talgorithm"]
    lines += [f"{v}\t{rv.scores[v]!r}\t{rv.algorithm}" for v in rv.ranked()]
    return ("\n".join(lines) + "\n").encode("utf-8")


def loads_rank_tsv(data: bytes) -> RankVector:
    """Inverse of :func:`dumps_rank_tsv`; iteration metadata is not stored in the TSV."""
    scores = {}
    algorithm = None
    for i, line in enumerate(split_lines(data.decode("utf-8"))):
        if not line.strip() or (i == 0 and line.startswith("id\t")):
            continue
        pid, score, algo = line.split("\t")
        if algorithm is None:
            algorithm = algo
        elif algo != algorithm:
            raise RankingError(f"mixed algorithms in rank file: {algorithm!r} and {algo!r}")
        scores[pid] = float(score)
    return RankVector(dict(sorted(scores.items())), algorithm or "pagerank", None, 0, True, 0.0)
