"""Command-line driver.

``keypapers run`` executes the whole pipeline:

    ingest -> largest weak component -> cluster -> temporal profiles
           -> PageRank + HAL -> key-paper report, comparison, graph export

The other subcommands run one stage each and exchange the same files, all
kept in ``--out-dir``:

    ingest   corpus.jsonl, ingest.json
    cluster  component.jsonl, partition.json
    rank     profiles.jsonl, rank_pagerank.tsv, rank_hal.tsv
    report   key_papers.tsv, comparison.tsv
    export   graph.{graphml,dot,json}
    synth    corpus.jsonl
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import clustering, corpus as corpus_mod, ranking, report, synth, temporal
from .errors import KeyPapersError, ParameterError
from .graph import build_graph, largest_component

log = logging.getLogger("keypapers")

CLUSTER_METHODS = {"fast": "fast_greedy", "gn": "girvan_newman"}


@dataclass(frozen=True)
class PipelineConfig:
    input: Path
    format: str = "jsonl"
    keyword_filter: bool = True
    cluster_method: str = "fast"
    clusters: int | None = None
    variance_mode: str = "citing_years"
    damping: float = ranking.DEFAULT_DAMPING
    tol: float = ranking.DEFAULT_TOL
    max_iter: int = ranking.DEFAULT_MAX_ITER
    top_k: int = 5
    out_dir: Path = Path("out")
    export: str = "graphml"
    size_by: str = "hal"
    seed: int | None = None

    def validate(self):
        if self.format not in corpus_mod.FORMATS:
            raise ParameterError(f"--format must be one of {corpus_mod.FORMATS}")
        if self.cluster_method not in CLUSTER_METHODS:
            raise ParameterError(f"--cluster-method must be one of {tuple(CLUSTER_METHODS)}")
        if self.clusters is not None:
            if self.cluster_method != "gn":
                raise ParameterError("--clusters (fixed cluster count) requires --cluster-method gn")
            if self.clusters < 1:
                raise ParameterError("--clusters must be >= 1")
        if self.variance_mode not in temporal.VARIANCE_MODES:
            raise ParameterError(f"--variance-mode must be one of {temporal.VARIANCE_MODES}")
        if not 0 < self.damping < 1:
            raise ParameterError(f"--damping must lie strictly between 0 and 1, got {self.damping}")
        if not self.tol > 0:
            raise ParameterError(f"--tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ParameterError(f"--max-iter must be >= 1, got {self.max_iter}")
        if self.top_k < 1:
            raise ParameterError(f"--top-k must be >= 1, got {self.top_k}")
        if self.export not in report.EXPORT_FORMATS:
            raise ParameterError(f"--export must be one of {report.EXPORT_FORMATS}")
        if self.size_by not in ("pr", "hal"):
            raise ParameterError("--size-by must be 'pr' or 'hal'")

    @property
    def cluster_target(self):
        return self.clusters if self.clusters is not None else "max_modularity"


def _write_all(out_dir: Path, artifacts: dict[str, bytes]):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, data in artifacts.items():
        (out_dir / name).write_bytes(data)
        log.info("wrote %s", out_dir / name)


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=1, sort_keys=True) + "\n").encode("utf-8")


def _ingest(cfg: PipelineConfig):
    raw = corpus_mod.load_corpus(cfg.input, cfg.format)
    filtered = corpus_mod.filter_keywordless(raw) if cfg.keyword_filter else raw
    return raw, filtered


def _component(corp):
    full = build_graph(corp)
    comp = largest_component(full)
    return full, comp, corpus_mod.subset(corp, comp.nodes, "largest_component")


def _rank(graph, cfg: PipelineConfig):
    profiles = temporal.compute_profiles(graph, cfg.variance_mode)
    pr = ranking.pagerank(graph, cfg.damping, cfg.tol, cfg.max_iter)
    hal = ranking.hal_rank(temporal.annotate_weights(graph, profiles), cfg.damping, cfg.tol, cfg.max_iter)
    return profiles, pr, hal


def _report_artifacts(graph, partition, profiles, pr, hal, cfg: PipelineConfig) -> dict[str, bytes]:
    key = report.top_k_per_cluster(partition, hal, cfg.top_k, companion=pr, graph=graph, profiles=profiles)
    rows = report.compare_scores(pr, hal, profiles)
    return {"key_papers.tsv": key.to_tsv(), "comparison.tsv": report.comparison_tsv(rows)}


def _export_artifact(graph, partition, profiles, pr, hal, cfg: PipelineConfig) -> dict[str, bytes]:
    data = report.export_graph(graph, partition, pr, hal, cfg.export, profiles=profiles, size_by=cfg.size_by)
    return {f"graph.{cfg.export}": data}


def run(cfg: PipelineConfig) -> dict:
    """Run every stage in memory, then write all artifacts at once."""
    cfg.validate()
    raw, filtered = _ingest(cfg)
    full, graph, comp_corpus = _component(filtered)
    partition = clustering.cluster(graph, CLUSTER_METHODS[cfg.cluster_method], cfg.cluster_target)
    profiles, pr, hal = _rank(graph, cfg)

    summary = {
        "papers_read": len(raw),
        "papers_after_filter": len(filtered),
        "graph_nodes": len(full),
        "graph_edges": len(full.edges),
        "component_nodes": len(graph),
        "component_edges": len(graph.edges),
        "cluster_method": partition.method,
        "clusters": partition.k,
        "modularity": partition.modularity,
        "variance_mode": cfg.variance_mode,
        "damping": cfg.damping,
        "pagerank": {"iterations": pr.iterations, "converged": pr.converged, "residual": pr.residual},
        "hal": {"iterations": hal.iterations, "converged": hal.converged, "residual": hal.residual},
        "ingest": filtered.provenance.stats,
    }
    artifacts = {
        "corpus.jsonl": corpus_mod.serialize_jsonl(filtered),
        "component.jsonl": corpus_mod.serialize_jsonl(comp_corpus),
        "partition.json": clustering.dumps_partition(partition),
        "profiles.jsonl": temporal.dumps_profiles(profiles),
        "rank_pagerank.tsv": ranking.dumps_rank_tsv(pr),
        "rank_hal.tsv": ranking.dumps_rank_tsv(hal),
    }
    artifacts.update(_report_artifacts(graph, partition, profiles, pr, hal, cfg))
    artifacts.update(_export_artifact(graph, partition, profiles, pr, hal, cfg))
    artifacts["summary.json"] = _json_bytes(summary)
    _write_all(cfg.out_dir, artifacts)
    return summary


def _print_summary(s: dict):
    print(f"papers: {s['papers_read']} read, {s['papers_after_filter']} after keyword filter")
    print(f"graph: {s['graph_nodes']} nodes, {s['graph_edges']} edges")
    print(f"largest component: {s['component_nodes']} nodes, {s['component_edges']} edges")
    print(f"clusters: {s['clusters']} ({s['cluster_method']}), modularity {s['modularity']:.6f}")
    for algo in ("pagerank", "hal"):
        r = s[algo]
        state = "converged" if r["converged"] else "NOT converged"
        print(f"{algo}: {r['iterations']} iterations, {state}, residual {r['residual']:.3e}")


# single-stage commands


def _stage_dir(args) -> Path:
    return Path(args.input) if Path(args.input).is_dir() else Path(args.input).parent


def _cmd_run(args, cfg):
    _print_summary(run(cfg))


def _cmd_ingest(args, cfg):
    cfg.validate()
    raw, filtered = _ingest(cfg)
    _write_all(cfg.out_dir, {
        "corpus.jsonl": corpus_mod.serialize_jsonl(filtered),
        "ingest.json": _json_bytes({"source": raw.provenance.source, "format": raw.provenance.format,
                                    "papers_read": len(raw), "filters": list(filtered.provenance.filters),
                                    "stats": filtered.provenance.stats}),
    })
    print(f"papers: {len(raw)} read, {len(filtered)} after keyword filter, "
          f"{len(filtered.citations)} citations")


def _cmd_cluster(args, cfg):
    cfg.validate()
    corp = corpus_mod.load_corpus(cfg.input, cfg.format)
    _, graph, comp_corpus = _component(corp)
    partition = clustering.cluster(graph, CLUSTER_METHODS[cfg.cluster_method], cfg.cluster_target)
    _write_all(cfg.out_dir, {"component.jsonl": corpus_mod.serialize_jsonl(comp_corpus),
                             "partition.json": clustering.dumps_partition(partition)})
    print(f"clusters: {partition.k} ({partition.method}), modularity {partition.modularity:.6f}")


def _cmd_rank(args, cfg):
    cfg.validate()
    graph = build_graph(corpus_mod.load_corpus(cfg.input, cfg.format))
    profiles, pr, hal = _rank(graph, cfg)
    _write_all(cfg.out_dir, {"profiles.jsonl": temporal.dumps_profiles(profiles),
                             "rank_pagerank.tsv": ranking.dumps_rank_tsv(pr),
                             "rank_hal.tsv": ranking.dumps_rank_tsv(hal)})
    for rv in (pr, hal):
        print(f"{rv.algorithm}: {rv.iterations} iterations, converged={rv.converged}")


def _load_stage(src: Path):
    graph = build_graph(corpus_mod.load_corpus(src / "component.jsonl"))
    partition = clustering.loads_partition((src / "partition.json").read_bytes())
    profiles = temporal.loads_profiles((src / "profiles.jsonl").read_bytes())
    pr = ranking.loads_rank_tsv((src / "rank_pagerank.tsv").read_bytes())
    hal = ranking.loads_rank_tsv((src / "rank_hal.tsv").read_bytes())
    return graph, partition, profiles, pr, hal


def _cmd_report(args, cfg):
    cfg.validate()
    _write_all(cfg.out_dir, _report_artifacts(*_load_stage(_stage_dir(args)), cfg))


def _cmd_export(args, cfg):
    cfg.validate()
    _write_all(cfg.out_dir, _export_artifact(*_load_stage(_stage_dir(args)), cfg))


def _cmd_synth(args, cfg):
    try:
        spec = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParameterError(f"synth spec is not valid JSON: {exc}") from exc
    targets, anchors = synth.spec_from_json(spec, cfg.seed)
    corp = synth.generate(targets, anchors)
    _write_all(cfg.out_dir, {"corpus.jsonl": corpus_mod.serialize_jsonl(corp)})
    print(f"synthetic corpus: {len(corp)} papers, {len(corp.citations)} citations")


COMMANDS = {
    "run": (_cmd_run, "full pipeline"),
    "ingest": (_cmd_ingest, "parse and filter an export"),
    "cluster": (_cmd_cluster, "largest component + community detection"),
    "rank": (_cmd_rank, "temporal profiles, PageRank and HAL scores"),
    "report": (_cmd_report, "key papers per cluster and score comparison"),
    "export": (_cmd_export, "graph file with score-sized nodes"),
    "synth": (_cmd_synth, "generate a synthetic corpus from a JSON spec"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True,
                        help="corpus file/dir (run, ingest, cluster, rank), stage directory (report, export) "
                             "or spec JSON (synth)")
    common.add_argument("--format", default="jsonl", choices=corpus_mod.FORMATS)
    common.add_argument("--no-keyword-filter", dest="keyword_filter", action="store_false",
                        help="keep papers without keywords")
    common.add_argument("--cluster-method", default="fast", choices=tuple(CLUSTER_METHODS))
    common.add_argument("--clusters", type=int, default=None,
                        help="stop Girvan-Newman at this many clusters instead of at peak modularity")
    common.add_argument("--variance-mode", default="citing_years", choices=temporal.VARIANCE_MODES)
    common.add_argument("--damping", type=float, default=ranking.DEFAULT_DAMPING)
    common.add_argument("--tol", type=float, default=ranking.DEFAULT_TOL)
    common.add_argument("--max-iter", type=int, default=ranking.DEFAULT_MAX_ITER)
    common.add_argument("--top-k", type=int, default=5)
    common.add_argument("--out-dir", default=None, help="artifact directory (default: ./out, or the stage dir)")
    common.add_argument("--export", default="graphml", choices=report.EXPORT_FORMATS)
    common.add_argument("--size-by", default="hal", choices=("pr", "hal"))
    common.add_argument("--seed", type=int, default=None, help="base seed for synth targets without one")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="keypapers", description="Key-paper extraction from citation clusters")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def config_from_args(args) -> PipelineConfig:
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
    elif args.command in ("report", "export"):
        out_dir = _stage_dir(args)
    else:
        out_dir = Path("out")
    return PipelineConfig(
        input=Path(args.input), format=args.format, keyword_filter=args.keyword_filter,
        cluster_method=args.cluster_method, clusters=args.clusters, variance_mode=args.variance_mode,
        damping=args.damping, tol=args.tol, max_iter=args.max_iter, top_k=args.top_k, out_dir=out_dir,
        export=args.export, size_by=args.size_by, seed=args.seed,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = config_from_args(args)
    try:
        COMMANDS[args.command][0](args, cfg)
    except KeyPapersError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: [io] {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
