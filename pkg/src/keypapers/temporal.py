"""Citation-year histograms, trend periods and the per-paper variance weight.

For a paper ``v`` the histogram counts the publication years of the papers
citing ``v``. The peak count sets a threshold (10% of the peak by default);
a trend period opens at the first year whose count is strictly above the
threshold and closes at the first later year strictly below it. A period's
length is ``(last_year + 1) - start_year`` where ``last_year`` is that
closing year. Several "mountains" yield several periods.

The weight attached to every edge into ``v`` is a population variance
``S2`` over one of three samples (``VARIANCE_MODES``).
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .corpus import split_lines
from .errors import ParameterError, TemporalError
from .graph import CitationGraph
from .ranking import WeightedGraph

VARIANCE_MODES = ("citing_years", "citing_years_in_periods", "period_lengths")
DEFAULT_THRESHOLD = Fraction(1, 10)


@dataclass(frozen=True)
class CitationHistogram:
    owner: str
    counts: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __bool__(self) -> bool:
        return any(self.counts.values())

    def years(self) -> list[int]:
        """The histogram expanded back into one year per citation."""
        return [y for y, c in sorted(self.counts.items()) for _ in range(c)]


@dataclass(frozen=True)
class CitationPeriod:
    start_year: int
    last_year: int
    length: int

    def __post_init__(self):
        if self.start_year > self.last_year:
            raise TemporalError(f"period starts after it ends: {self.start_year} > {self.last_year}")
        if self.length != self.last_year + 1 - self.start_year:
            raise TemporalError("period length must equal (last_year + 1) - start_year")

    @classmethod
    def between(cls, start_year: int, last_year: int) -> "CitationPeriod":
        return cls(start_year, last_year, last_year + 1 - start_year)

    def __contains__(self, year: int) -> bool:
        return self.start_year <= year <= self.last_year


@dataclass(frozen=True)
class TemporalProfile:
    owner: str
    histogram: CitationHistogram
    max_year: tuple[int, int] | None
    periods: tuple[CitationPeriod, ...]
    s2: float
    mode: str

    def to_json(self) -> dict:
        return {
            "id": self.owner,
            "histogram": {str(y): c for y, c in sorted(self.histogram.counts.items())},
            "my": list(self.max_year) if self.max_year else None,
            "periods": [[p.start_year, p.last_year, p.length] for p in self.periods],
            "s2": self.s2,
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "TemporalProfile":
        hist = CitationHistogram(obj["id"], {int(y): int(c) for y, c in obj["histogram"].items()})
        my = tuple(obj["my"]) if obj.get("my") else None
        periods = tuple(CitationPeriod(*p) for p in obj["periods"])
        return cls(obj["id"], hist, my, periods, float(obj["s2"]), obj["mode"])


def citation_histogram(graph: CitationGraph, node: str) -> CitationHistogram:
    counts: dict[int, int] = {}
    for u in graph.in_neighbors(node):
        y = graph.year(u)
        counts[y] = counts.get(y, 0) + 1
    return CitationHistogram(node, dict(sorted(counts.items())))


def max_year(hist: CitationHistogram) -> tuple[int, int]:
    """Year with the most citations and that count; ties go to the earliest year."""
    if not hist:
        raise TemporalError(f"paper {hist.owner!r} has no citations")
    year, count = min(hist.counts.items(), key=lambda yc: (-yc[1], yc[0]))
    return year, count


def detect_periods(hist: CitationHistogram, threshold: Fraction = DEFAULT_THRESHOLD) -> list[CitationPeriod]:
    """Threshold scan over the histogram's year range plus one trailing year.

    A count equal to the threshold neither opens nor closes a period.
    """
    _, peak = max_year(hist)
    threshold = Fraction(threshold)
    num, den = threshold.numerator, threshold.denominator
    # compare count against threshold * peak in integers
    lo, hi = min(hist.counts), max(hist.counts)
    periods = []
    start = None
    for y in range(lo, hi + 2):
        scaled = hist.counts.get(y, 0) * den
        if start is None:
            if scaled > num * peak:
                start = y
        elif scaled < num * peak:
            periods.append(CitationPeriod.between(start, y))
            start = None
    assert start is None, "trailing zero year always closes an open period"
    return periods


def citation_variance(sample: Iterable[float]) -> float:
    """Population variance (divide by n); 0.0 for samples of size 0 or 1."""
    data = list(sample)
    if len(data) < 2:
        return 0.0
    return float(statistics.pvariance(data))


def variance_sample(hist: CitationHistogram, periods: Sequence[CitationPeriod], mode: str) -> list[int]:
    if mode == "citing_years":
        return hist.years()
    if mode == "citing_years_in_periods":
        return [y for y in hist.years() if any(y in p for p in periods)]
    if mode == "period_lengths":
        return [p.length for p in periods]
    raise ParameterError(f"unknown variance mode {mode!r}; expected one of {VARIANCE_MODES}", module="temporal")


def temporal_profile(graph: CitationGraph, node: str, mode: str = "citing_years",
                     threshold: Fraction = DEFAULT_THRESHOLD) -> TemporalProfile:
    if mode not in VARIANCE_MODES:
        raise ParameterError(f"unknown variance mode {mode!r}; expected one of {VARIANCE_MODES}", module="temporal")
    hist = citation_histogram(graph, node)
    if not hist:
        return TemporalProfile(node, hist, None, (), 0.0, mode)
    periods = tuple(detect_periods(hist, threshold))
    s2 = citation_variance(variance_sample(hist, periods, mode))
    return TemporalProfile(node, hist, max_year(hist), periods, s2, mode)


def compute_profiles(graph: CitationGraph, mode: str = "citing_years",
                     threshold: Fraction = DEFAULT_THRESHOLD) -> dict[str, TemporalProfile]:
    return {v: temporal_profile(graph, v, mode, threshold) for v in graph.nodes}


def annotate_weights(graph: CitationGraph, profiles: Mapping[str, TemporalProfile]) -> WeightedGraph:
    """Put the cited paper's S2 on every edge pointing at it."""
    weights = {}
    for u, v in graph.edges:
        prof = profiles.get(v)
        if prof is None:
            raise TemporalError(f"no temporal profile for cited paper {v!r}")
        weights[(u, v)] = prof.s2
    return WeightedGraph(graph, weights)


def dumps_profiles(profiles: Mapping[str, TemporalProfile]) -> bytes:
    lines = [json.dumps(profiles[v].to_json()) for v in sorted(profiles)]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def loads_profiles(data: bytes) -> dict[str, TemporalProfile]:
    out = {}
    for line in split_lines(data.decode("utf-8")):
        if line.strip():
            prof = TemporalProfile.from_json(json.loads(line))
            out[prof.owner] = prof
    return out
