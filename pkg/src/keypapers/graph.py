"""Directed citation graph, weak components and the two bibliometric projections.

Edges always run citing -> cited, so ``in_neighbors(v)`` are the papers
citing ``v`` and ``out_neighbors(v)`` its references.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .corpus import Corpus
from .errors import GraphError


class CitationGraph:
    """Immutable simple digraph with a publication year on every node."""

    def __init__(self, years: Mapping[str, int], edges: Iterable[tuple[str, str]],
                 titles: Mapping[str, str] | None = None):
        self._years = {v: int(years[v]) for v in sorted(years)}
        titles = titles or {}
        self._titles = {v: titles.get(v, "") for v in self._years}
        edge_set = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on {u!r}")
            if u not in self._years or v not in self._years:
                raise GraphError(f"edge {u!r} -> {v!r} has an endpoint outside the node set")
            edge_set.add((u, v))
        self._edges = tuple(sorted(edge_set))
        out_adj: dict[str, list[str]] = {v: [] for v in self._years}
        in_adj: dict[str, list[str]] = {v: [] for v in self._years}
        for u, v in self._edges:
            out_adj[u].append(v)
            in_adj[v].append(u)
        # edges are sorted, so out lists are already sorted; in lists need it
        self._out = {v: tuple(ns) for v, ns in out_adj.items()}
        self._in = {v: tuple(sorted(ns)) for v, ns in in_adj.items()}

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self._years)

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return self._edges

    @property
    def years(self) -> dict[str, int]:
        return dict(self._years)

    @property
    def titles(self) -> dict[str, str]:
        return dict(self._titles)

    def __len__(self) -> int:
        return len(self._years)

    def __contains__(self, node) -> bool:
        return node in self._years

    def __eq__(self, other) -> bool:
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return self._years == other._years and self._edges == other._edges and self._titles == other._titles

    def __repr__(self) -> str:
        return f"CitationGraph(nodes={len(self)}, edges={len(self._edges)})"

    def _check(self, node: str):
        if node not in self._years:
            raise GraphError(f"unknown node {node!r}")

    def year(self, node: str) -> int:
        self._check(node)
        return self._years[node]

    def title(self, node: str) -> str:
        self._check(node)
        return self._titles[node]

    def in_neighbors(self, node: str) -> tuple[str, ...]:
        self._check(node)
        return self._in[node]

    def out_neighbors(self, node: str) -> tuple[str, ...]:
        self._check(node)
        return self._out[node]

    def in_degree(self, node: str) -> int:
        return len(self.in_neighbors(node))

    def out_degree(self, node: str) -> int:
        return len(self.out_neighbors(node))

    def induced(self, nodes: Iterable[str]) -> "CitationGraph":
        keep = set(nodes)
        for v in keep:
            self._check(v)
        return CitationGraph(
            {v: self._years[v] for v in keep},
            [(u, v) for u, v in self._edges if u in keep and v in keep],
            {v: self._titles[v] for v in keep},
        )

    def reversed(self) -> "CitationGraph":
        return CitationGraph(self._years, [(v, u) for u, v in self._edges], self._titles)


def build_graph(corpus: Corpus) -> CitationGraph:
    return CitationGraph(
        {pid: p.year for pid, p in corpus.papers.items()},
        [(c.citing_id, c.cited_id) for c in corpus.citations],
        {pid: p.title for pid, p in corpus.papers.items()},
    )


def weakly_connected_components(graph: CitationGraph) -> list[tuple[str, ...]]:
    """Components ignoring direction, largest first; equal sizes ordered by smallest id."""
    seen: set[str] = set()
    comps = []
    for start in graph.nodes:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in graph.out_neighbors(v) + graph.in_neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(tuple(sorted(comp)))
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def largest_component(graph: CitationGraph) -> CitationGraph:
    if len(graph) == 0:
        return graph
    comps = weakly_connected_components(graph)
    if len(comps[0]) == len(graph):
        return graph
    return graph.induced(comps[0])


@dataclass(frozen=True)
class UndirectedProjection:
    """Weighted simple undirected graph; ``weights`` keys are ``(a, b)`` with ``a < b``."""

    nodes: tuple[str, ...]
    weights: dict[tuple[str, str], int] = field(default_factory=dict)

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.weights}

    def weight(self, a: str, b: str) -> int:
        return self.weights.get((min(a, b), max(a, b)), 0)

    def to_undirected(self) -> "UndirectedGraph":
        return UndirectedGraph(self.nodes, self.weights)


def _pair_projection(graph: CitationGraph, groups) -> UndirectedProjection:
    weights: dict[tuple[str, str], int] = {}
    for members in groups:
        for a, b in combinations(members, 2):
            weights[(a, b)] = weights.get((a, b), 0) + 1
    return UndirectedProjection(graph.nodes, dict(sorted(weights.items())))


def co_citation_projection(graph: CitationGraph) -> UndirectedProjection:
    """Link two papers once for every paper whose reference list holds both."""
    return _pair_projection(graph, (graph.out_neighbors(v) for v in graph.nodes))


def bibliographic_coupling_projection(graph: CitationGraph) -> UndirectedProjection:
    """Link two papers once for every reference they share."""
    return _pair_projection(graph, (graph.in_neighbors(v) for v in graph.nodes))


class UndirectedGraph:
    """Simple unweighted undirected graph used by the clustering code."""

    def __init__(self, nodes: Iterable[str], edges: Iterable[tuple[str, str]]):
        self.nodes = tuple(sorted(set(nodes)))
        adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        for a, b in edges:
            if a == b:
                continue
            if a not in adj or b not in adj:
                raise GraphError(f"edge {a!r} -- {b!r} has an endpoint outside the node set")
            adj[a].add(b)
            adj[b].add(a)
        self.adj = {v: frozenset(ns) for v, ns in adj.items()}
        self.edges = tuple(sorted((a, b) for a in self.nodes for b in self.adj[a] if a < b))

    @classmethod
    def from_citation_graph(cls, graph: CitationGraph) -> "UndirectedGraph":
        """Drop direction and merge reciprocal citations into one edge."""
        return cls(graph.nodes, graph.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: str) -> int:
        return len(self.adj[v])

    def __len__(self) -> int:
        return len(self.nodes)

    def __repr__(self) -> str:
        return f"UndirectedGraph(nodes={len(self.nodes)}, edges={self.m})"
