"""Modularity-based community detection on the undirected citation view.

Two methods are provided:

``girvan_newman``
    divisive; repeatedly deletes the edge with the highest shortest-path
    edge betweenness and keeps the component split with the best modularity.
    Cost grows roughly as O(m^2 n), so it is meant for small graphs.
``fast_greedy``
    agglomerative; merges the pair of communities with the largest
    modularity gain until no merge improves Q.

Ties are resolved lexicographically in both, so results depend only on the
input graph.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ClusteringError, ParameterError
from .graph import CitationGraph, UndirectedGraph

METHODS = ("girvan_newman", "fast_greedy")

# relative slack for treating two betweenness sums as equal
_BETWEENNESS_RTOL = 1e-9


@dataclass(frozen=True)
class ClusterPartition:
    assignment: dict[str, int]
    k: int
    modularity: float
    method: str
    history: tuple[float, ...] = field(default=(), compare=False)

    def clusters(self) -> list[tuple[str, ...]]:
        groups: list[list[str]] = [[] for _ in range(self.k)]
        for v in sorted(self.assignment):
            groups[self.assignment[v]].append(v)
        return [tuple(g) for g in groups]


def _as_undirected(graph) -> UndirectedGraph:
    if isinstance(graph, UndirectedGraph):
        return graph
    if isinstance(graph, CitationGraph):
        return UndirectedGraph.from_citation_graph(graph)
    if hasattr(graph, "to_undirected"):
        return graph.to_undirected()
    raise TypeError(f"cannot cluster a {type(graph).__name__}")


def _modularity_exact(g: UndirectedGraph, assignment: Mapping[str, int]) -> Fraction:
    m = g.m
    intra: dict[int, int] = {}
    degree: dict[int, int] = {}
    for v in g.nodes:
        c = assignment[v]
        degree[c] = degree.get(c, 0) + g.degree(v)
    for a, b in g.edges:
        if assignment[a] == assignment[b]:
            c = assignment[a]
            intra[c] = intra.get(c, 0) + 1
    return sum((Fraction(intra.get(c, 0), m) - Fraction(d, 2 * m) ** 2 for c, d in degree.items()),
               Fraction(0))


def modularity(graph, assignment: Mapping[str, int]) -> float:
    """Newman-Girvan Q of *assignment* on the undirected view of *graph*.

    Computed in exact rational arithmetic and rounded once, so a
    single-community partition gives exactly 0.0.
    """
    g = _as_undirected(graph)
    if g.m == 0:
        raise ClusteringError("modularity is undefined on a graph with no edges")
    missing = [v for v in g.nodes if v not in assignment]
    if missing:
        raise ClusteringError(f"assignment misses {len(missing)} node(s), e.g. {missing[0]!r}")
    return float(_modularity_exact(g, assignment))


def _canonical(groups: Iterable[Iterable[str]]) -> dict[str, int]:
    """Number clusters 0..k-1 in order of their smallest member id."""
    ordered = sorted((sorted(grp) for grp in groups), key=lambda grp: grp[0])
    return {v: i for i, grp in enumerate(ordered) for v in grp}


def _components(nodes: Iterable[str], adj: Mapping[str, set[str]]) -> list[list[str]]:
    seen: set[str] = set()
    out = []
    for s in nodes:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(comp)
    return out


def _edge_betweenness(nodes: list[str], adj: Mapping[str, set[str]]) -> dict[tuple[str, str], float]:
    """Brandes accumulation restricted to *nodes* (a union of whole components)."""
    nbrs = {v: sorted(adj[v]) for v in nodes}
    eb: dict[tuple[str, str], float] = {}
    for v in nodes:
        for w in nbrs[v]:
            if v < w:
                eb[(v, w)] = 0.0
    for s in sorted(nodes):
        order = []
        preds: dict[str, list[str]] = {s: []}
        sigma = {s: 1}
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v] + 1
            for w in nbrs[v]:
                dw = dist.get(w)
                if dw is None:
                    dist[w] = dv
                    sigma[w] = sigma[v]
                    preds[w] = [v]
                    queue.append(w)
                elif dw == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                c = sigma[v] * coeff
                eb[(v, w) if v < w else (w, v)] += c
                delta[v] += c
    return eb


def _pick_edge(eb: Mapping[tuple[str, str], float]) -> tuple[str, str]:
    top = max(eb.values())
    floor = top - _BETWEENNESS_RTOL * max(1.0, abs(top))
    return min(e for e, val in eb.items() if val >= floor)


def girvan_newman(graph, target: str | int = "max_modularity") -> ClusterPartition:
    """Divisive clustering by iterated removal of the most central edge.

    *target* is ``"max_modularity"`` (return the best split seen over the
    whole removal sequence) or an integer n (return the first split with at
    least n components).
    """
    g = _as_undirected(graph)
    if g.m == 0:
        raise ClusteringError("girvan_newman needs at least one edge")
    want_k = None
    if target != "max_modularity":
        if isinstance(target, bool) or not isinstance(target, int) or not 1 <= target <= len(g):
            raise ParameterError(f"cluster target must be 'max_modularity' or an int in [1, {len(g)}], got {target!r}",
                                 module="clustering")
        want_k = target

    adj = {v: set(ns) for v, ns in g.adj.items()}
    comps = _components(g.nodes, adj)
    best = _canonical(comps)
    best_q = _modularity_exact(g, best)
    history = [float(best_q)]
    if want_k is not None and len(comps) >= want_k:
        return ClusterPartition(best, len(comps), float(best_q), "girvan_newman", tuple(history))

    eb = _edge_betweenness(list(g.nodes), adj)
    n_comp = len(comps)
    while eb:
        u, v = _pick_edge(eb)
        adj[u].discard(v)
        adj[v].discard(u)
        del eb[(u, v)]
        # only the component(s) that lost the edge need fresh betweenness
        touched = _components([u, v], adj)
        local = [x for comp in touched for x in comp]
        for x in local:
            for y in adj[x]:
                if x < y:
                    del eb[(x, y)]
        eb.update(_edge_betweenness(local, adj))
        if len(touched) == 1:
            continue
        n_comp += 1
        assignment = _canonical(_components(g.nodes, adj))
        q = _modularity_exact(g, assignment)
        history.append(float(q))
        if want_k is not None:
            if n_comp >= want_k:
                return ClusterPartition(assignment, n_comp, float(q), "girvan_newman", tuple(history))
        elif q > best_q:
            best, best_q = assignment, q
    k = max(best.values()) + 1
    return ClusterPartition(best, k, float(best_q), "girvan_newman", tuple(history))


def fast_greedy(graph) -> ClusterPartition:
    """Agglomerative modularity maximisation.

    The gain of merging communities i and j is
    ``l_ij / m - d_i * d_j / (2 m^2)``; we rank merges by the integer
    ``2 m l_ij - d_i d_j`` (same sign and order) so ties are exact.
    """
    g = _as_undirected(graph)
    if g.m == 0:
        raise ClusteringError("fast_greedy needs at least one edge")
    m = g.m
    index = {v: i for i, v in enumerate(g.nodes)}
    members: dict[int, list[str]] = {i: [v] for i, v in enumerate(g.nodes)}
    deg = {i: g.degree(v) for i, v in enumerate(g.nodes)}
    links: dict[int, dict[int, int]] = {i: {} for i in members}
    for a, b in g.edges:
        i, j = index[a], index[b]
        links[i][j] = links[i].get(j, 0) + 1
        links[j][i] = links[j].get(i, 0) + 1

    q = -sum(Fraction(d, 2 * m) ** 2 for d in deg.values())
    history = [float(q)]
    while True:
        best_pair, best_score = None, 0
        for i in sorted(links):
            for j, l_ij in links[i].items():
                if j <= i:
                    continue
                score = 2 * m * l_ij - deg[i] * deg[j]
                if score > best_score or (score == best_score and best_pair is not None and (i, j) < best_pair):
                    best_pair, best_score = (i, j), score
        if best_pair is None:
            break
        i, j = best_pair
        for k, l_jk in links.pop(j).items():
            del links[k][j]
            if k == i:
                continue
            links[i][k] = links[i].get(k, 0) + l_jk
            links[k][i] = links[k].get(i, 0) + l_jk
        deg[i] += deg.pop(j)
        members[i].extend(members.pop(j))
        q += Fraction(best_score, 2 * m * m)
        history.append(float(q))

    assignment = _canonical(members.values())
    return ClusterPartition(assignment, len(members), modularity(g, assignment), "fast_greedy", tuple(history))


def cluster(graph, method: str = "fast_greedy", target: str | int = "max_modularity") -> ClusterPartition:
    if method == "fast_greedy":
        if target != "max_modularity":
            raise ParameterError("fast_greedy only supports the max_modularity stop rule", module="clustering")
        return fast_greedy(graph)
    if method == "girvan_newman":
        return girvan_newman(graph, target)
    raise ParameterError(f"unknown clustering method {method!r}; expected one of {METHODS}", module="clustering")


def dumps_partition(partition: ClusterPartition) -> bytes:
    obj = {
        "method": partition.method,
        "k": partition.k,
        "modularity": partition.modularity,
        "assignment": dict(sorted(partition.assignment.items())),
    }
    return (json.dumps(obj, indent=1) + "\n").encode("utf-8")


def loads_partition(data: bytes) -> ClusterPartition:
    obj = json.loads(data.decode("utf-8"))
    try:
        assignment = {str(v): int(c) for v, c in obj["assignment"].items()}
        return ClusterPartition(assignment, int(obj["k"]), float(obj["modularity"]), str(obj["method"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ClusteringError(f"malformed partition file: {exc}") from exc
