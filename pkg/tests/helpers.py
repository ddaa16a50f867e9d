import json
import random

from keypapers.graph import CitationGraph

BARBELL = [("a", "b"), ("a", "c"), ("b", "c"), ("d", "e"), ("d", "f"), ("e", "f"), ("c", "d")]
TWO_TRIANGLES = BARBELL[:-1]


def jsonl(*records) -> bytes:
    return ("\n".join(json.dumps(r) for r in records) + "\n").encode()


def rec(pid, year=2000, cites=(), keywords=("kw",), **extra):
    return {"id": pid, "title": f"Paper {pid}", "authors": ["Doe, J"], "year": year,
            "keywords": list(keywords), "cites": list(cites), **extra}


def random_digraph(rng: random.Random, n: int, p: float, dangling_free=False) -> CitationGraph:
    nodes = [f"n{i:03d}" for i in range(n)]
    edges = {(u, v) for u in nodes for v in nodes if u != v and rng.random() < p}
    if dangling_free:
        have_out = {u for u, _ in edges}
        for u in nodes:
            if u not in have_out:
                edges.add((u, rng.choice([v for v in nodes if v != u])))
    years = {v: rng.randint(1970, 2015) for v in nodes}
    return CitationGraph(years, edges)
