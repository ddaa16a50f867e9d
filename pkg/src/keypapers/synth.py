"""Synthetic corpora with controlled citation-year profiles.

Randomness comes from SplitMix64 (Steele, Lea & Flood 2014), reproduced
below so that a seed yields the same corpus in any implementation:

    state += 0x9E3779B97F4A7C15            (mod 2**64)
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2**64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB  (mod 2**64)
    return z ^ (z >> 31)

Integers in ``[0, n)`` are drawn by rejection: discard outputs
``>= 2**64 - (2**64 mod n)`` and return the remainder mod n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .corpus import YEAR_MAX, YEAR_MIN, CitationRecord, Corpus, PaperRecord, Provenance
from .errors import SynthError

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        return lo + self.randbelow(hi - lo + 1)


@dataclass(frozen=True)
class Burst:
    center_year: int
    width: int

    def validate(self):
        if self.width < 0:
            raise SynthError(f"burst width must be >= 0, got {self.width}")
        _check_years(self.center_year - self.width, self.center_year + self.width)

    def draw(self, rng: SplitMix64, n: int) -> list[int]:
        return [rng.randint(self.center_year - self.width, self.center_year + self.width) for _ in range(n)]


@dataclass(frozen=True)
class Uniform:
    start_year: int
    end_year: int

    def validate(self):
        if self.start_year > self.end_year:
            raise SynthError(f"uniform range is empty: {self.start_year} > {self.end_year}")
        _check_years(self.start_year, self.end_year)

    def draw(self, rng: SplitMix64, n: int) -> list[int]:
        return [rng.randint(self.start_year, self.end_year) for _ in range(n)]


@dataclass(frozen=True)
class Bimodal:
    """Two bursts; the first gets ceil(n/2) citations, the second the rest."""

    first: Burst
    second: Burst

    def validate(self):
        self.first.validate()
        self.second.validate()

    def draw(self, rng: SplitMix64, n: int) -> list[int]:
        head = (n + 1) // 2
        return self.first.draw(rng, head) + self.second.draw(rng, n - head)


Shape = Union[Burst, Uniform, Bimodal]


def _check_years(lo: int, hi: int):
    if lo < YEAR_MIN or hi > YEAR_MAX:
        raise SynthError(f"years {lo}..{hi} fall outside [{YEAR_MIN}, {YEAR_MAX}]")


@dataclass(frozen=True)
class ProfileSpec:
    total_citations: int
    shape: Shape
    seed: int = 0

    def validate(self):
        if isinstance(self.total_citations, bool) or not isinstance(self.total_citations, int) \
                or self.total_citations < 0:
            raise SynthError(f"total_citations must be a non-negative integer, got {self.total_citations!r}")
        self.shape.validate()


@dataclass(frozen=True)
class TargetSpec:
    paper_id: str
    profile: ProfileSpec
    year: int = 1980
    also_cites: tuple[str, ...] = field(default=())


def generate(targets: Sequence[TargetSpec], anchors: Mapping[str, int] | None = None) -> Corpus:
    """Build a corpus in which each target is cited exactly ``total_citations`` times.

    Every citing paper cites its target plus the target's ``also_cites``
    ids. Ids in ``also_cites`` that are not targets become plain "anchor"
    papers, with years from *anchors* (default 1980).
    """
    anchors = dict(anchors or {})
    target_ids = [t.paper_id for t in targets]
    if len(set(target_ids)) != len(target_ids):
        raise SynthError("target ids must be unique")
    papers: dict[str, PaperRecord] = {}
    for t in targets:
        t.profile.validate()
        if t.paper_id in t.also_cites:
            raise SynthError(f"target {t.paper_id!r} cannot co-cite itself")
        _check_years(t.year, t.year)
        papers[t.paper_id] = PaperRecord(t.paper_id, f"Synthetic target {t.paper_id}", ("Synthetic",),
                                         t.year, ("synthetic",))
    for t in targets:
        for a in t.also_cites:
            if a not in papers:
                year = anchors.get(a, 1980)
                _check_years(year, year)
                papers[a] = PaperRecord(a, f"Synthetic anchor {a}", ("Synthetic",), year, ("synthetic",))

    citations = []
    for t in targets:
        rng = SplitMix64(t.profile.seed)
        for i, year in enumerate(t.profile.shape.draw(rng, t.profile.total_citations)):
            cid = f"{t.paper_id}/c{i:05d}"
            if cid in papers:
                raise SynthError(f"generated id {cid!r} collides with an existing paper")
            papers[cid] = PaperRecord(cid, f"Citer {i} of {t.paper_id}", ("Synthetic",), year, ("synthetic",))
            citations.extend(CitationRecord(cid, ref) for ref in (t.paper_id, *t.also_cites))

    stats = {"records_read": len(papers), "records_kept": len(papers), "records_dropped": 0,
             "citations_read": len(citations), "citations_kept": len(citations), "citations_dropped": 0,
             "reasons": {}}
    return Corpus(papers, tuple(citations), Provenance("<synth>", "synth", stats))


def _shape_from_json(obj: Mapping) -> Shape:
    kind = obj.get("kind")
    try:
        if kind == "burst":
            return Burst(int(obj["center_year"]), int(obj["width"]))
        if kind == "uniform":
            return Uniform(int(obj["start_year"]), int(obj["end_year"]))
        if kind == "bimodal":
            return Bimodal(_shape_from_json({"kind": "burst", **obj["first"]}),
                           _shape_from_json({"kind": "burst", **obj["second"]}))
    except (KeyError, TypeError, ValueError) as exc:
        raise SynthError(f"bad {kind} shape: {exc}") from exc
    raise SynthError(f"unknown shape kind {kind!r}")


def spec_from_json(obj: Mapping, seed: int | None = None) -> tuple[list[TargetSpec], dict[str, int]]:
    """Read a synth spec file.

    ``{"seed": 7, "anchors": {"Z": 1975}, "targets": [{"id": "A",
    "total_citations": 100, "shape": {"kind": "burst", "center_year": 2005,
    "width": 1}, "year": 1980, "seed": 1, "also_cites": ["Z"]}]}``

    Targets without their own seed get ``base + index``, where base is
    *seed* if given, else the file's ``seed``, else 0.
    """
    if not isinstance(obj, Mapping) or not isinstance(obj.get("targets"), list):
        raise SynthError("synth spec needs a 'targets' list")
    base = seed if seed is not None else int(obj.get("seed", 0))
    targets = []
    for i, t in enumerate(obj["targets"]):
        try:
            profile = ProfileSpec(int(t["total_citations"]), _shape_from_json(t["shape"]),
                                  int(t.get("seed", base + i)))
            targets.append(TargetSpec(str(t["id"]), profile, int(t.get("year", 1980)),
                                      tuple(t.get("also_cites", ()))))
        except (KeyError, TypeError, ValueError) as exc:
            raise SynthError(f"bad target #{i}: {exc}") from exc
    anchors = {str(k): int(v) for k, v in obj.get("anchors", {}).items()}
    return targets, anchors
