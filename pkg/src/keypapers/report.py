"""Key-paper tables, PageRank-vs-HAL comparison and graph export.

Exported node sizes are a linear map of the chosen score onto
``[size_min, size_max]`` so that a viewer (Gephi, Cytoscape, Graphviz)
draws more important papers larger. No layout or rendering happens here.
"""

from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Mapping

from .clustering import ClusterPartition
from .errors import ParameterError, ReportError
from .graph import CitationGraph
from .ranking import RankVector
from .temporal import TemporalProfile

EXPORT_FORMATS = ("graphml", "dot", "json")
SIZE_MIN = 4.0
SIZE_MAX = 40.0

REPORT_COLUMNS = ("cluster", "rank", "id", "title", "year", "indeg", "s2", "pr", "hal")
COMPARISON_COLUMNS = ("id", "citations", "s2", "pr", "hal", "delta", "pr_rank", "hal_rank", "rank_delta")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value).replace("\t", " ").replace("\r", " ").replace("\n", " ")


def _tsv(columns, rows) -> bytes:
    lines = ["\t".join(columns)]
    lines += ["\t".join(_cell(v) for v in row) for row in rows]
    return ("\n".join(lines) + "\n").encode("utf-8")


@dataclass(frozen=True)
class KeyPaper:
    id: str
    title: str
    year: int | None
    indeg: int | None
    s2: float | None
    pr: float | None
    hal: float | None
    pr_rank: int | None
    hal_rank: int | None


@dataclass(frozen=True)
class KeyPaperReport:
    by: str
    k: int
    clusters: dict[int, list[KeyPaper]] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def rows(self):
        for c in sorted(self.clusters):
            for pos, kp in enumerate(self.clusters[c], 1):
                yield (c, pos, kp.id, kp.title, kp.year, kp.indeg, kp.s2, kp.pr, kp.hal)

    def to_tsv(self) -> bytes:
        return _tsv(REPORT_COLUMNS, self.rows())


def _within_positions(members, rv: RankVector | None) -> dict[str, int]:
    if rv is None:
        return {}
    order = sorted(members, key=lambda v: (-rv.scores[v], v))
    return {v: i + 1 for i, v in enumerate(order)}


def top_k_per_cluster(partition: ClusterPartition, ranks: RankVector, k: int, *,
                      companion: RankVector | None = None, graph: CitationGraph | None = None,
                      profiles: Mapping[str, TemporalProfile] | None = None) -> KeyPaperReport:
    """The *k* best papers of every cluster under *ranks*.

    *companion* is the other algorithm's vector; when given, both scores and
    both within-cluster rank positions are filled in. *graph* and
    *profiles* supply titles, years, in-degrees and S2.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ParameterError(f"top-k must be a positive integer, got {k!r}", module="report")
    missing = [v for v in partition.assignment if v not in ranks.scores]
    if missing:
        raise ReportError(f"{ranks.algorithm} scores missing for {len(missing)} node(s), e.g. {missing[0]!r}")
    if companion is not None and any(v not in companion.scores for v in partition.assignment):
        raise ReportError(f"{companion.algorithm} scores do not cover the partition")
    by_algo = {ranks.algorithm: ranks}
    if companion is not None:
        by_algo[companion.algorithm] = companion
    pr, hal = by_algo.get("pagerank"), by_algo.get("hal")

    clusters = {}
    for c, members in enumerate(partition.clusters()):
        pr_pos = _within_positions(members, pr)
        hal_pos = _within_positions(members, hal)
        chosen = sorted(members, key=lambda v: (-ranks.scores[v], v))[:k]
        clusters[c] = [
            KeyPaper(
                id=v,
                title=graph.title(v) if graph is not None else "",
                year=graph.year(v) if graph is not None else None,
                indeg=graph.in_degree(v) if graph is not None else None,
                s2=profiles[v].s2 if profiles is not None and v in profiles else None,
                pr=pr.scores[v] if pr else None,
                hal=hal.scores[v] if hal else None,
                pr_rank=pr_pos.get(v),
                hal_rank=hal_pos.get(v),
            )
            for v in chosen
        ]
    meta = {"clusters": partition.k, "method": partition.method, "modularity": partition.modularity}
    return KeyPaperReport(ranks.algorithm, k, clusters, meta)


@dataclass(frozen=True)
class ComparisonRow:
    id: str
    citations: int
    s2: float
    pr: float
    hal: float
    pr_rank: int
    hal_rank: int

    @property
    def delta(self) -> float:
        return self.hal - self.pr

    @property
    def rank_delta(self) -> int:
        """Positive when HAL places the paper higher than PageRank does."""
        return self.pr_rank - self.hal_rank

    def as_tuple(self):
        return (self.id, self.citations, self.s2, self.pr, self.hal, self.delta,
                self.pr_rank, self.hal_rank, self.rank_delta)


def compare_scores(pr: RankVector, hal: RankVector, profiles: Mapping[str, TemporalProfile],
                   sort_by: str = "hal") -> list[ComparisonRow]:
    if set(pr.scores) != set(hal.scores):
        raise ReportError("PageRank and HAL vectors cover different node sets")
    pr_pos, hal_pos = pr.positions(), hal.positions()
    rows = []
    for v in pr.scores:
        prof = profiles.get(v)
        rows.append(ComparisonRow(
            id=v,
            citations=prof.histogram.total if prof else 0,
            s2=prof.s2 if prof else 0.0,
            pr=pr.scores[v],
            hal=hal.scores[v],
            pr_rank=pr_pos[v],
            hal_rank=hal_pos[v],
        ))
    keys = {
        "id": lambda r: r.id,
        "pr": lambda r: (r.pr_rank, r.id),
        "hal": lambda r: (r.hal_rank, r.id),
        "delta": lambda r: (-r.delta, r.id),
        "citations": lambda r: (-r.citations, r.id),
    }
    if sort_by not in keys:
        raise ParameterError(f"cannot sort comparison by {sort_by!r}", module="report")
    return sorted(rows, key=keys[sort_by])


def comparison_tsv(rows) -> bytes:
    return _tsv(COMPARISON_COLUMNS, (r.as_tuple() for r in rows))


def node_sizes(scores: Mapping[str, float], size_min: float = SIZE_MIN,
               size_max: float = SIZE_MAX) -> dict[str, float]:
    if not scores:
        return {}
    lo, hi = min(scores.values()), max(scores.values())
    if hi == lo:
        return dict.fromkeys(scores, float(size_min))
    span = size_max - size_min
    return {v: size_min + span * (s - lo) / (hi - lo) for v, s in scores.items()}


def _node_table(graph, partition, pr, hal, size_by, size_min, size_max):
    for name, rv in (("pagerank", pr), ("hal", hal)):
        if any(v not in rv.scores for v in graph.nodes):
            raise ReportError(f"{name} scores do not cover the exported graph")
    if any(v not in partition.assignment for v in graph.nodes):
        raise ReportError("partition does not cover the exported graph")
    if size_by not in ("pr", "hal"):
        raise ParameterError(f"size-by must be 'pr' or 'hal', got {size_by!r}", module="report")
    driver = pr if size_by == "pr" else hal
    sizes = node_sizes({v: driver.scores[v] for v in graph.nodes}, size_min, size_max)
    return [
        {"id": v, "label": graph.title(v), "year": graph.year(v), "cluster": partition.assignment[v],
         "pr": pr.scores[v], "hal": hal.scores[v], "size": sizes[v]}
        for v in graph.nodes
    ]


def _graphml(nodes, edges) -> bytes:
    root = ET.Element("graphml", {"xmlns": "http://graphml.graphdrawing.org/xmlns"})
    keys = [("label", "node", "string"), ("year", "node", "int"), ("cluster", "node", "int"),
            ("pr", "node", "double"), ("hal", "node", "double"), ("size", "node", "double"),
            ("weight", "edge", "double")]
    for name, target, kind in keys:
        ET.SubElement(root, "key", {"id": name, "for": target, "attr.name": name, "attr.type": kind})
    g = ET.SubElement(root, "graph", {"id": "G", "edgedefault": "directed"})
    for n in nodes:
        el = ET.SubElement(g, "node", {"id": n["id"]})
        for name in ("label", "year", "cluster", "pr", "hal", "size"):
            ET.SubElement(el, "data", {"key": name}).text = _cell(n[name]) if name != "label" else n["label"]
    for i, e in enumerate(edges):
        el = ET.SubElement(g, "edge", {"id": f"e{i}", "source": e["source"], "target": e["target"]})
        ET.SubElement(el, "data", {"key": "weight"}).text = repr(e["weight"])
    ET.indent(root)
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue() + b"\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", " ") + '"'


def _dot(nodes, edges) -> bytes:
    out = ["digraph landscape {"]
    for n in nodes:
        attrs = (f"width={n['size'] / 10:.4f}, label={_dot_quote(n['label'] or n['id'])}, "
                 f"year={n['year']}, cluster={n['cluster']}, pr={n['pr']!r}, hal={n['hal']!r}, "
                 f"size={n['size']!r}")
        out.append(f"  {_dot_quote(n['id'])} [{attrs}];")
    for e in edges:
        out.append(f"  {_dot_quote(e['source'])} -> {_dot_quote(e['target'])} [weight={e['weight']!r}];")
    out.append("}")
    return ("\n".join(out) + "\n").encode("utf-8")


def export_graph(graph: CitationGraph, partition: ClusterPartition, pr: RankVector, hal: RankVector,
                 format: str = "graphml", *, profiles: Mapping[str, TemporalProfile] | None = None,
                 size_by: str = "hal", size_min: float = SIZE_MIN, size_max: float = SIZE_MAX) -> bytes:
    """Serialise the clustered, scored graph.

    Edge weight is the cited paper's S2 when *profiles* is given, else 1.0.
    """
    if format not in EXPORT_FORMATS:
        raise ReportError(f"unknown export format {format!r}; expected one of {EXPORT_FORMATS}")
    nodes = _node_table(graph, partition, pr, hal, size_by, size_min, size_max)
    edges = [{"source": u, "target": v, "weight": profiles[v].s2 if profiles else 1.0}
             for u, v in graph.edges]
    if format == "graphml":
        return _graphml(nodes, edges)
    if format == "dot":
        return _dot(nodes, edges)
    return (json.dumps({"nodes": nodes, "edges": edges}, ensure_ascii=False, indent=1) + "\n").encode("utf-8")


def read_graph_json(data: bytes) -> dict:
    obj = json.loads(data.decode("utf-8"))
    if not isinstance(obj, dict) or "nodes" not in obj or "edges" not in obj:
        raise ReportError("graph JSON needs 'nodes' and 'edges'")
    return obj


def read_graphml(data: bytes) -> dict:
    """Parse a GraphML file written by :func:`export_graph` back into the JSON shape."""
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    root = ET.fromstring(data)
    types = {k.get("id"): k.get("attr.type") for k in root.findall("g:key", ns)}
    cast = {"int": int, "double": float, "string": lambda s: s or ""}
    graph = root.find("g:graph", ns)
    nodes = []
    for el in graph.findall("g:node", ns):
        n = {"id": el.get("id")}
        for d in el.findall("g:data", ns):
            n[d.get("key")] = cast[types[d.get("key")]](d.text)
        n.setdefault("label", "")
        nodes.append(n)
    edges = []
    for el in graph.findall("g:edge", ns):
        w = el.find("g:data", ns)
        edges.append({"source": el.get("source"), "target": el.get("target"), "weight": float(w.text)})
    return {"nodes": nodes, "edges": edges}
