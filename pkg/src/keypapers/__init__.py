"""Key-paper extraction from clustered citation networks.

Papers are ranked twice: with classic PageRank, and with HAL, a PageRank
variant in which every citation's share is weighted by the variance of the
cited paper's citation years.
"""

from .clustering import ClusterPartition, fast_greedy, girvan_newman, modularity
from .corpus import CitationRecord, Corpus, PaperRecord, filter_keywordless, load_corpus, parse_records
from .graph import (CitationGraph, UndirectedGraph, UndirectedProjection, bibliographic_coupling_projection,
                    build_graph, co_citation_projection, largest_component)
from .ranking import RankVector, WeightedGraph, hal_rank, pagerank
from .report import compare_scores, export_graph, top_k_per_cluster
from .temporal import (CitationHistogram, CitationPeriod, TemporalProfile, annotate_weights, citation_histogram,
                       citation_variance, compute_profiles, detect_periods, max_year, temporal_profile)

__version__ = "0.1.0"

__all__ = [
    "CitationGraph", "CitationHistogram", "CitationPeriod", "CitationRecord", "ClusterPartition", "Corpus",
    "PaperRecord", "RankVector", "TemporalProfile", "UndirectedGraph", "UndirectedProjection", "WeightedGraph",
    "annotate_weights", "bibliographic_coupling_projection", "build_graph", "citation_histogram",
    "citation_variance", "co_citation_projection", "compare_scores", "compute_profiles", "detect_periods",
    "export_graph", "fast_greedy", "filter_keywordless", "girvan_newman", "hal_rank", "largest_component",
    "load_corpus", "max_year", "modularity", "pagerank", "parse_records", "temporal_profile", "top_k_per_cluster",
]
