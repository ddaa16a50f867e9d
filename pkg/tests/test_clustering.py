import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from helpers import BARBELL, TWO_TRIANGLES
from keypapers.clustering import (ClusterPartition, cluster, dumps_partition, fast_greedy, girvan_newman,
                                  loads_partition, modularity)
from keypapers.errors import ClusteringError, ParameterError
from keypapers.graph import CitationGraph, UndirectedGraph
from oracles import best_partition, matrix_modularity, set_partitions

TRIANGLES = [{"a", "b", "c"}, {"d", "e", "f"}]


def groups(p: ClusterPartition):
    return [set(c) for c in p.clusters()]


def test_single_community_is_zero(barbell):
    assert modularity(barbell, dict.fromkeys(barbell.nodes, 0)) == 0.0


def test_two_triangles_q(two_triangles):
    assignment = {v: 0 if v in "abc" else 1 for v in "abcdef"}
    assert modularity(two_triangles, assignment) == 0.5
    assert modularity(two_triangles, dict.fromkeys("abcdef", 0)) == 0.0


def test_modularity_errors():
    g = UndirectedGraph("ab", [])
    with pytest.raises(ClusteringError):
        modularity(g, {"a": 0, "b": 0})
    with pytest.raises(ClusteringError, match="misses"):
        modularity(UndirectedGraph("ab", [("a", "b")]), {"a": 0})


def test_modularity_accepts_citation_graph():
    g = CitationGraph(dict.fromkeys("abc", 2000), [("a", "b"), ("b", "a"), ("c", "b")])
    # reciprocal pair collapses: undirected edges {a,b}, {b,c}
    assert modularity(g, {"a": 0, "b": 0, "c": 1}) == float(matrix_modularity("abc", [("a", "b"), ("b", "c")],
                                                                               [["a", "b"], ["c"]]))


def test_gn_barbell(barbell):
    p = girvan_newman(barbell)
    assert groups(p) == TRIANGLES
    assert p.modularity == pytest.approx(5 / 14, abs=1e-15)
    # bridge is the first (and only) edge removed before the split
    assert p.history[:2] == (0.0, 5 / 14)


def test_gn_two_triangles(two_triangles):
    p = girvan_newman(two_triangles)
    assert groups(p) == TRIANGLES
    assert p.modularity == 0.5


def test_gn_single_edge():
    p = girvan_newman(UndirectedGraph("AB", [("A", "B")]))
    assert p.k == 1
    assert p.modularity == 0.0


def test_gn_fixed_k(barbell):
    p = girvan_newman(barbell, 2)
    assert groups(p) == TRIANGLES
    p6 = girvan_newman(barbell, 6)
    assert p6.k == 6
    with pytest.raises(ParameterError):
        girvan_newman(barbell, 7)


def test_methods_reject_edgeless():
    g = UndirectedGraph("abc", [])
    with pytest.raises(ClusteringError):
        girvan_newman(g)
    with pytest.raises(ClusteringError):
        fast_greedy(g)


def test_fast_greedy_fixtures(two_triangles, barbell):
    assert groups(fast_greedy(two_triangles)) == TRIANGLES
    assert fast_greedy(two_triangles).modularity == 0.5
    assert groups(fast_greedy(barbell)) == TRIANGLES


def test_fast_greedy_k4_single_community():
    k4 = UndirectedGraph("abcd", itertools.combinations("abcd", 2))
    p = fast_greedy(k4)
    assert p.k == 1
    # brute force: every proper split of K4 has Q <= 0
    assert all(matrix_modularity("abcd", k4.edges, part) <= 0 for part in set_partitions("abcd"))


def test_isolated_nodes_get_own_cluster():
    g = UndirectedGraph("abcz", [("a", "b"), ("b", "c")])
    for p in (fast_greedy(g), girvan_newman(g)):
        assert {"z"} in groups(p)
        assert sorted(p.assignment) == ["a", "b", "c", "z"]


def test_cluster_dispatch(barbell):
    assert cluster(barbell, "fast_greedy").method == "fast_greedy"
    assert cluster(barbell, "girvan_newman", 3).k == 3
    with pytest.raises(ParameterError):
        cluster(barbell, "louvain")
    with pytest.raises(ParameterError):
        cluster(barbell, "fast_greedy", 2)


def test_partition_roundtrip(barbell):
    p = fast_greedy(barbell)
    assert loads_partition(dumps_partition(p)) == p


@st.composite
def small_graphs(draw, max_nodes=8):
    n = draw(st.integers(2, max_nodes))
    nodes = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(nodes, 2))
    edges = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    return UndirectedGraph(nodes, edges)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_reported_q_matches_oracle(g):
    for p in (fast_greedy(g), girvan_newman(g)):
        assert sorted(p.assignment) == list(g.nodes)
        assert set(p.assignment.values()) == set(range(p.k))
        oracle = float(matrix_modularity(g.nodes, g.edges, p.clusters()))
        assert abs(p.modularity - oracle) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_fast_greedy_final_q_dominates_trajectory(g):
    p = fast_greedy(g)
    assert all(p.modularity >= q - 1e-12 for q in p.history)
    assert list(p.history) == sorted(p.history)
    # and never beats the exhaustive optimum
    best = matrix_modularity(g.nodes, g.edges, best_partition(g.nodes, g.edges))
    assert p.modularity <= float(best) + 1e-12


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_nodes=7))
def test_gn_best_over_its_own_splits(g):
    p = girvan_newman(g)
    assert p.modularity == max(p.history)


@settings(max_examples=40, deadline=None)
@given(small_graphs(), st.text(alphabet="xyz", min_size=1, max_size=3))
def test_gn_equivariant_under_order_preserving_relabel(g, prefix):
    relabel = {v: prefix + v for v in g.nodes}
    h = UndirectedGraph(relabel.values(), [(relabel[a], relabel[b]) for a, b in g.edges])
    p, q = girvan_newman(g), girvan_newman(h)
    assert {relabel[v]: c for v, c in p.assignment.items()} == q.assignment
    assert p.modularity == q.modularity


@pytest.mark.parametrize("seed", range(5))
def test_gn_equivariant_under_permutation_on_clique_ring(seed):
    # four K4s joined in a ring: the best split is unique, whatever the labels
    base = [f"k{c}{i}" for c in range(4) for i in range(4)]
    edges = [(f"k{c}{i}", f"k{c}{j}") for c in range(4) for i, j in itertools.combinations(range(4), 2)]
    edges += [(f"k{c}3", f"k{(c + 1) % 4}0") for c in range(4)]
    perm = base[:]
    random.Random(seed).shuffle(perm)
    relabel = dict(zip(base, perm))
    g = UndirectedGraph(base, edges)
    h = UndirectedGraph(perm, [(relabel[a], relabel[b]) for a, b in edges])
    mapped = sorted(sorted(relabel[v] for v in c) for c in girvan_newman(g).clusters())
    assert mapped == sorted(sorted(c) for c in girvan_newman(h).clusters())


def test_gn_betweenness_matches_networkx_first_cut():
    g = nx.karate_club_graph()
    ug = UndirectedGraph([f"n{v:02d}" for v in g.nodes], [(f"n{a:02d}", f"n{b:02d}") for a, b in g.edges])
    eb = nx.edge_betweenness_centrality(g, normalized=False)
    top = max(eb.values())
    expected = min(tuple(sorted((f"n{a:02d}", f"n{b:02d}"))) for (a, b), v in eb.items() if v == top)
    from keypapers.clustering import _edge_betweenness, _pick_edge
    ours = _edge_betweenness(list(ug.nodes), {v: set(ns) for v, ns in ug.adj.items()})
    assert _pick_edge(ours) == expected
    for (a, b), v in eb.items():
        key = tuple(sorted((f"n{a:02d}", f"n{b:02d}")))
        assert ours[key] == pytest.approx(2 * v)
