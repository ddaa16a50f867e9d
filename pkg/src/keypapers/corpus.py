"""Parsing of offline bibliographic exports into a validated corpus.

Two on-disk shapes are understood:

* ``jsonl``: one record per line,
  ``{"id", "title", "authors", "year", "keywords", "venue"?, "cites"}``.
* ``tsv``: ``records.tsv`` (``id, year, title, authors, keywords`` with
  ``;``-joined lists) plus ``edges.tsv`` (``citing_id, cited_id``).

Bad lines never abort a parse; they are dropped and tallied in
``Corpus.provenance.stats`` under a reason key. Duplicate ids and an empty
result are the only hard failures.
"""

from __future__ import annotations

import io
import json
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import BinaryIO, Iterable

from .errors import CorpusError, DuplicateIdError, EmptyCorpusError

YEAR_MIN = 1000
YEAR_MAX = 3000

FORMATS = ("jsonl", "tsv")


@dataclass(frozen=True)
class PaperRecord:
    id: str
    title: str
    authors: tuple[str, ...]
    year: int
    keywords: tuple[str, ...] = ()
    venue: str | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise CorpusError("paper id must be a non-empty string")
        if not YEAR_MIN <= self.year <= YEAR_MAX:
            raise CorpusError(f"paper {self.id!r}: year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}]")


@dataclass(frozen=True)
class CitationRecord:
    citing_id: str
    cited_id: str

    def __post_init__(self):
        if self.citing_id == self.cited_id:
            raise CorpusError(f"self-citation on {self.citing_id!r}")


@dataclass(frozen=True)
class Provenance:
    source: str
    format: str
    stats: dict = field(default_factory=dict)
    filters: tuple[str, ...] = ()


@dataclass(frozen=True)
class Corpus:
    papers: dict[str, PaperRecord]
    citations: tuple[CitationRecord, ...]
    provenance: Provenance = field(default_factory=lambda: Provenance("<memory>", "memory"))

    def __post_init__(self):
        for c in self.citations:
            if c.citing_id not in self.papers or c.cited_id not in self.papers:
                raise CorpusError(f"citation {c.citing_id!r} -> {c.cited_id!r} references an unknown paper")

    def __len__(self) -> int:
        return len(self.papers)

    def same_content(self, other: "Corpus") -> bool:
        """Equality ignoring provenance."""
        return self.papers == other.papers and self.citations == other.citations

    def cites_of(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {pid: [] for pid in self.papers}
        for c in self.citations:
            out[c.citing_id].append(c.cited_id)
        return out


def split_lines(text: str) -> list[str]:
    """Split on ``\n`` only; ``str.splitlines`` would also break on U+2028 etc. inside titles."""
    return [line[:-1] if line.endswith("\r") else line for line in text.split("\n")]


class _Tally:
    def __init__(self):
        self.records_read = 0
        self.citations_read = 0
        self.reasons: Counter[str] = Counter()

    def drop(self, reason: str, n: int = 1):
        self.reasons[reason] += n


def _decode(data: bytes | BinaryIO) -> str:
    if not isinstance(data, (bytes, bytearray)):
        try:
            data = data.read()
        except OSError as exc:
            raise CorpusError(f"cannot read input: {exc}") from exc
    try:
        return bytes(data).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"input is not valid UTF-8: {exc}") from exc


def _str_list(value, what: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValueError(f"bad_{what}")
    return tuple(value)


def _record_from_obj(obj) -> tuple[PaperRecord, tuple[str, ...]]:
    """Validate one decoded JSON object; raises ValueError(reason) on failure."""
    if not isinstance(obj, dict):
        raise ValueError("malformed")
    pid = obj.get("id")
    if not isinstance(pid, str) or not pid:
        raise ValueError("bad_id")
    if "year" not in obj:
        raise ValueError("missing_year")
    year = obj["year"]
    if isinstance(year, bool) or not isinstance(year, int) or not YEAR_MIN <= year <= YEAR_MAX:
        raise ValueError("bad_year")
    title = obj.get("title", "")
    if not isinstance(title, str):
        raise ValueError("bad_title")
    venue = obj.get("venue")
    if venue is not None and not isinstance(venue, str):
        raise ValueError("bad_venue")
    rec = PaperRecord(
        id=pid,
        title=title,
        authors=_str_list(obj.get("authors", []), "authors"),
        year=year,
        keywords=_str_list(obj.get("keywords", []), "keywords"),
        venue=venue,
    )
    return rec, _str_list(obj.get("cites", []), "cites")


def _assemble(records, raw_edges: Iterable[tuple[str, str]], tally: _Tally, source: str, fmt: str) -> Corpus:
    papers: dict[str, PaperRecord] = {}
    for rec in records:
        if rec.id in papers:
            raise DuplicateIdError(rec.id)
        papers[rec.id] = rec
    if not papers:
        raise EmptyCorpusError(f"no valid records in {source}")

    citations = []
    for citing, cited in raw_edges:
        tally.citations_read += 1
        if citing == cited:
            tally.drop("self_citation")
        elif citing not in papers or cited not in papers:
            tally.drop("dangling_citation")
        else:
            citations.append(CitationRecord(citing, cited))

    n_cite_drops = tally.reasons["self_citation"] + tally.reasons["dangling_citation"]
    stats = {
        "records_read": tally.records_read,
        "records_kept": len(papers),
        "records_dropped": tally.records_read - len(papers),
        "citations_read": tally.citations_read,
        "citations_kept": len(citations),
        "citations_dropped": n_cite_drops,
        "reasons": dict(sorted((k, v) for k, v in tally.reasons.items() if v)),
    }
    return Corpus(papers, tuple(citations), Provenance(source, fmt, stats))


def _parse_jsonl(text: str, source: str) -> Corpus:
    tally = _Tally()
    records, edges, seen = [], [], set()
    for line in split_lines(text):
        if not line.strip():
            continue
        tally.records_read += 1
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            tally.drop("malformed")
            continue
        try:
            rec, cites = _record_from_obj(obj)
        except ValueError as exc:
            tally.drop(str(exc))
            # a broken record's outgoing citations are still counted as lost
            if isinstance(obj, dict) and isinstance(obj.get("cites"), list):
                n = len(obj["cites"])
                tally.citations_read += n
                tally.drop("dangling_citation", n)
            continue
        if rec.id in seen:
            raise DuplicateIdError(rec.id)
        seen.add(rec.id)
        records.append(rec)
        edges.extend((rec.id, c) for c in cites)
    return _assemble(records, edges, tally, source, "jsonl")


def _split_list(cell: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in cell.split(";") if p.strip())


def _parse_tsv(records_text: str, edges_text: str, source: str) -> Corpus:
    tally = _Tally()
    records = []
    for i, line in enumerate(split_lines(records_text)):
        if not line.strip():
            continue
        cols = line.split("\t")
        if i == 0 and cols[:2] == ["id", "year"]:
            continue
        tally.records_read += 1
        if len(cols) != 5:
            tally.drop("malformed")
            continue
        pid, year_s, title, authors, keywords = cols
        if not pid:
            tally.drop("bad_id")
            continue
        if not year_s.strip():
            tally.drop("missing_year")
            continue
        try:
            year = int(year_s)
        except ValueError:
            tally.drop("bad_year")
            continue
        if not YEAR_MIN <= year <= YEAR_MAX:
            tally.drop("bad_year")
            continue
        records.append(PaperRecord(pid, title, _split_list(authors), year, _split_list(keywords)))

    edges = []
    for i, line in enumerate(split_lines(edges_text)):
        if not line.strip():
            continue
        cols = line.split("\t")
        if i == 0 and cols[0] == "citing_id":
            continue
        if len(cols) != 2 or not cols[0] or not cols[1]:
            tally.citations_read += 1
            tally.drop("malformed_edge")
            continue
        edges.append((cols[0], cols[1]))
    corpus = _assemble(records, edges, tally, source, "tsv")
    stats = corpus.provenance.stats
    stats["citations_dropped"] += tally.reasons["malformed_edge"]
    return corpus


def parse_records(data: bytes | BinaryIO, format: str = "jsonl", *,
                  edges: bytes | BinaryIO | None = None, source: str = "<stream>") -> Corpus:
    """Parse an export into a Corpus.

    For ``format="tsv"`` *data* is the records table and *edges* the edge
    list (an absent edge list means no citations).
    """
    if format not in FORMATS:
        raise CorpusError(f"unknown input format {format!r}; expected one of {FORMATS}")
    text = _decode(data)
    if format == "jsonl":
        return _parse_jsonl(text, source)
    edges_text = _decode(edges) if edges is not None else ""
    return _parse_tsv(text, edges_text, source)


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Read a corpus from disk.

    A TSV corpus may be given as a directory holding ``records.tsv`` and
    ``edges.tsv`` or as the records file itself with ``edges.tsv`` beside it.
    """
    path = Path(path)
    try:
        if format == "tsv":
            rec_path = path / "records.tsv" if path.is_dir() else path
            edge_path = rec_path.with_name("edges.tsv")
            edge_bytes = edge_path.read_bytes() if edge_path.exists() else b""
            return parse_records(rec_path.read_bytes(), "tsv", edges=edge_bytes, source=str(rec_path))
        return parse_records(path.read_bytes(), format, source=str(path))
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc


def filter_keywordless(corpus: Corpus) -> Corpus:
    keep = {pid: p for pid, p in corpus.papers.items() if p.keywords}
    cites = tuple(c for c in corpus.citations if c.citing_id in keep and c.cited_id in keep)
    stats = dict(corpus.provenance.stats)
    stats["keywordless_removed"] = len(corpus.papers) - len(keep)
    stats["keywordless_citations_removed"] = len(corpus.citations) - len(cites)
    prov = replace(corpus.provenance, stats=stats, filters=corpus.provenance.filters + ("keywordless",))
    return Corpus(keep, cites, prov)


def serialize_jsonl(corpus: Corpus) -> bytes:
    buf = io.StringIO()
    cites = corpus.cites_of()
    for pid, p in corpus.papers.items():
        obj = {"id": p.id, "title": p.title, "authors": list(p.authors), "year": p.year,
               "keywords": list(p.keywords)}
        if p.venue is not None:
            obj["venue"] = p.venue
        obj["cites"] = cites[pid]
        buf.write(json.dumps(obj, ensure_ascii=False))
        buf.write("\n")
    return buf.getvalue().encode("utf-8")


def serialize_tsv(corpus: Corpus) -> tuple[bytes, bytes]:
    """Return ``(records.tsv, edges.tsv)`` bytes. Venue is not carried."""
    rows = ["id\tyear\ttitle\tauthors\tkeywords"]
    for p in corpus.papers.values():
        rows.append("\t".join([p.id, str(p.year), p.title, ";".join(p.authors), ";".join(p.keywords)]))
    edges = ["citing_id\tcited_id"] + [f"{c.citing_id}\t{c.cited_id}" for c in corpus.citations]
    return ("\n".join(rows) + "\n").encode("utf-8"), ("\n".join(edges) + "\n").encode("utf-8")


def subset(corpus: Corpus, ids: Iterable[str], label: str) -> Corpus:
    """Restrict a corpus to *ids*, keeping only citations inside the subset."""
    ids = set(ids)
    keep = {pid: p for pid, p in corpus.papers.items() if pid in ids}
    cites = tuple(c for c in corpus.citations if c.citing_id in ids and c.cited_id in ids)
    prov = replace(corpus.provenance, filters=corpus.provenance.filters + (label,))
    return Corpus(keep, cites, prov)
