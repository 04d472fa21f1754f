"""Parsers and alignment for extracted relations and article metadata.

Three input shapes are understood:

* causal-assertion files: one JSON record per line with ``subject``,
  ``object``, ``relation_type`` and an ``evidence`` list of
  ``{sentence, pmid}`` entries;
* knowledge-graph relation files: one JSON record per line with ``subject``,
  ``object``, ``relation_type``, ``pair_kind``, ``sentence``, ``pmid``;
* article metadata: a CSV table with header
  ``pmid,title,abstract,authors,publish_time,journal``.

Parsing never aborts on a bad line: rejects are collected with line numbers
so that record count + reject count always equals the input line count.
Record ids are derived from (file index, line number), which keeps builds
deterministic and provenance debuggable.
"""

from __future__ import annotations

import csv
import enum
import json
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, FormatError

PUBMED_URL = "https://pubmed.ncbi.nlm.nih.gov/{pmid}/"

METADATA_COLUMNS = ("pmid", "title", "abstract", "authors", "publish_time", "journal")

_DATE_PREFIX = re.compile(r"^(\d{4})(?:-(\d{2}))?(?:-(\d{2}))?$")


class Source(enum.Enum):
    CAUSAL_ASSERTION = "causal_assertion"
    KNOWLEDGE_GRAPH = "knowledge_graph"


class PairKind(enum.Enum):
    PROTEIN_PROTEIN = "protein_protein"
    CHEMICAL_GENE = "chemical_gene"
    CHEMICAL_DISEASE = "chemical_disease"
    GENE_DISEASE = "gene_disease"


KG_PAIR_KINDS = {
    PairKind.CHEMICAL_GENE,
    PairKind.CHEMICAL_DISEASE,
    PairKind.GENE_DISEASE,
}


@dataclass
class EvidenceDoc:
    id: str
    sentence: str
    pmid: str | None = None
    url: str | None = None
    article: "ArticleMeta | None" = None

    @property
    def aligned(self) -> bool:
        return self.article is not None


@dataclass
class ArticleMeta:
    pmid: str
    title: str = ""
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    publish_time: str = ""
    journal: str = ""


@dataclass
class RelationRecord:
    id: str
    subject: str
    object: str
    relation: str
    source: Source
    pair_kind: PairKind
    evidence_ids: list[str]
    subject_display: str = ""
    object_display: str = ""


@dataclass
class Reject:
    line_no: int
    reason: str


@dataclass
class ParseResult:
    records: list[RelationRecord]
    docs: list[EvidenceDoc]
    rejects: list[Reject]


@dataclass
class MetadataResult:
    articles: list[ArticleMeta]
    warnings: list[str]


class AliasMap:
    """Case-insensitive alias -> canonical map, flattened so no alias maps
    to another alias."""

    def __init__(self, pairs: dict[str, str] | None = None):
        raw = {a.strip().casefold(): c.strip().casefold() for a, c in (pairs or {}).items()}
        self._map: dict[str, str] = {}
        for alias in raw:
            target = raw[alias]
            seen = {alias}
            while target in raw:
                if target in seen:
                    raise ConfigError(f"alias cycle through {alias!r}")
                seen.add(target)
                target = raw[target]
            self._map[alias] = target

    def resolve(self, term: str) -> str:
        return self._map.get(term, term)

    def __len__(self) -> int:
        return len(self._map)


def load_aliases(source: str | Path | Iterable[str]) -> AliasMap:
    """Read ``alias<TAB>canonical`` pairs, one per line; blank lines ignored."""
    if isinstance(source, Path):
        lines: Iterable[str] = source.read_text(encoding="utf-8").splitlines()
    elif isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = source
    pairs = {}
    for line in lines:
        line = line.rstrip("\n")
        if not line.strip():
            continue
        alias, sep, canonical = line.partition("\t")
        if not sep or not alias.strip() or not canonical.strip():
            raise ConfigError(f"bad alias line (want alias<TAB>canonical): {line!r}")
        pairs[alias] = canonical
    return AliasMap(pairs)


def _pubmed_url(pmid: str | None) -> str | None:
    return PUBMED_URL.format(pmid=pmid) if pmid else None


def _clean_pmid(value) -> str | None:
    if value is None:
        return None
    text = str(value).strip()
    return text or None


def _load_line(raw: str) -> dict:
    obj = json.loads(raw)
    if not isinstance(obj, dict):
        raise ValueError("record is not an object")
    return obj


def _lines_of(stream: str | Path | Iterable[str]) -> Iterable[str]:
    if isinstance(stream, Path):
        return stream.read_text(encoding="utf-8").splitlines()
    if isinstance(stream, str):
        return stream.splitlines()
    return stream


def parse_causal_assertions(
    stream: str | Path | Iterable[str], file_index: int = 0
) -> ParseResult:
    """Parse protein-protein causal assertions, one JSON record per line."""
    records, docs, rejects = [], [], []
    for line_no, raw in enumerate(_lines_of(stream), start=1):
        if not raw.strip():
            rejects.append(Reject(line_no, "blank line"))
            continue
        try:
            obj = _load_line(raw)
        except ValueError as exc:
            rejects.append(Reject(line_no, f"bad JSON: {exc}"))
            continue
        subject = str(obj.get("subject", "") or "").strip()
        obj_name = str(obj.get("object", "") or "").strip()
        relation = str(obj.get("relation_type", "") or "").strip()
        if not subject or not obj_name:
            rejects.append(Reject(line_no, "empty subject or object"))
            continue
        if not relation:
            rejects.append(Reject(line_no, "missing relation_type"))
            continue
        evidence = obj.get("evidence")
        if not isinstance(evidence, list) or not evidence:
            rejects.append(Reject(line_no, "missing or empty evidence list"))
            continue
        rec_id = f"ca{file_index}:{line_no}"
        rec_docs = []
        for j, entry in enumerate(evidence):
            if not isinstance(entry, dict):
                continue
            sentence = str(entry.get("sentence", "") or "").strip()
            if not sentence:
                continue
            pmid = _clean_pmid(entry.get("pmid"))
            rec_docs.append(
                EvidenceDoc(f"{rec_id}:{j}", sentence, pmid=pmid, url=_pubmed_url(pmid))
            )
        if not rec_docs:
            rejects.append(Reject(line_no, "no usable evidence sentences"))
            continue
        docs.extend(rec_docs)
        records.append(
            RelationRecord(
                id=rec_id,
                subject=subject,
                object=obj_name,
                relation=relation,
                source=Source.CAUSAL_ASSERTION,
                pair_kind=PairKind.PROTEIN_PROTEIN,
                evidence_ids=[d.id for d in rec_docs],
                subject_display=subject,
                object_display=obj_name,
            )
        )
    return ParseResult(records, docs, rejects)


def parse_kg_relations(
    stream: str | Path | Iterable[str], file_index: int = 0
) -> ParseResult:
    """Parse knowledge-graph relations, one JSON record per line."""
    records, docs, rejects = [], [], []
    for line_no, raw in enumerate(_lines_of(stream), start=1):
        if not raw.strip():
            rejects.append(Reject(line_no, "blank line"))
            continue
        try:
            obj = _load_line(raw)
        except ValueError as exc:
            rejects.append(Reject(line_no, f"bad JSON: {exc}"))
            continue
        subject = str(obj.get("subject", "") or "").strip()
        obj_name = str(obj.get("object", "") or "").strip()
        relation = str(obj.get("relation_type", "") or "").strip()
        kind_token = str(obj.get("pair_kind", "") or "").strip().casefold()
        sentence = str(obj.get("sentence", "") or "").strip()
        if not subject or not obj_name:
            rejects.append(Reject(line_no, "empty subject or object"))
            continue
        if not relation:
            rejects.append(Reject(line_no, "missing relation_type"))
            continue
        try:
            pair_kind = PairKind(kind_token)
        except ValueError:
            rejects.append(Reject(line_no, f"unknown pair_kind: {kind_token!r}"))
            continue
        if pair_kind not in KG_PAIR_KINDS:
            rejects.append(Reject(line_no, f"pair_kind {kind_token!r} not valid for KG input"))
            continue
        if not sentence:
            rejects.append(Reject(line_no, "missing sentence"))
            continue
        rec_id = f"kg{file_index}:{line_no}"
        pmid = _clean_pmid(obj.get("pmid"))
        doc = EvidenceDoc(f"{rec_id}:0", sentence, pmid=pmid, url=_pubmed_url(pmid))
        docs.append(doc)
        records.append(
            RelationRecord(
                id=rec_id,
                subject=subject,
                object=obj_name,
                relation=relation,
                source=Source.KNOWLEDGE_GRAPH,
                pair_kind=pair_kind,
                evidence_ids=[doc.id],
                subject_display=subject,
                object_display=obj_name,
            )
        )
    return ParseResult(records, docs, rejects)


def _valid_date_prefix(value: str) -> bool:
    m = _DATE_PREFIX.match(value)
    if not m:
        return False
    _, month, day = m.groups()
    if month is not None and not 1 <= int(month) <= 12:
        return False
    if day is not None and not 1 <= int(day) <= 31:
        return False
    return True


def parse_article_metadata(stream: str | Path | Iterable[str]) -> MetadataResult:
    """Parse the article-metadata CSV; duplicates keep the first occurrence."""
    if isinstance(stream, Path):
        lines: Iterable[str] = stream.read_text(encoding="utf-8").splitlines()
    elif isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = stream
    reader = csv.DictReader(lines)
    header = [h.strip().casefold() for h in (reader.fieldnames or [])]
    for column in METADATA_COLUMNS:
        if column not in header:
            raise FormatError(f"metadata file is missing required column: {column}")
    articles, warnings = [], []
    seen: set[str] = set()
    for row in reader:
        row = {(k or "").strip().casefold(): (v or "") for k, v in row.items()}
        pmid = row["pmid"].strip()
        if not pmid:
            warnings.append("row with empty pmid skipped")
            continue
        if pmid in seen:
            warnings.append(f"duplicate pmid {pmid}: keeping first occurrence")
            continue
        seen.add(pmid)
        publish_time = row["publish_time"].strip()
        if publish_time and not _valid_date_prefix(publish_time):
            warnings.append(f"pmid {pmid}: unparseable publish_time {publish_time!r} dropped")
            publish_time = ""
        authors = [a.strip() for a in row["authors"].split(";") if a.strip()]
        articles.append(
            ArticleMeta(
                pmid=pmid,
                title=row["title"].strip(),
                abstract=row["abstract"].strip(),
                authors=authors,
                publish_time=publish_time,
                journal=row["journal"].strip(),
            )
        )
    return MetadataResult(articles, warnings)


def canonical_form(term: str, aliases: AliasMap | None = None) -> str:
    """trim -> case-fold -> alias lookup; identity when no alias matches."""
    folded = term.strip().casefold()
    return aliases.resolve(folded) if aliases is not None else folded


def canonicalize(
    records: list[RelationRecord], aliases: AliasMap | None = None
) -> list[RelationRecord]:
    """Replace subject/object with canonical forms, keeping display surfaces.

    Idempotent: canonical forms pass through unchanged on a second run.
    """
    out = []
    for rec in records:
        out.append(
            replace(
                rec,
                subject=canonical_form(rec.subject, aliases),
                object=canonical_form(rec.object, aliases),
                subject_display=rec.subject_display or rec.subject,
                object_display=rec.object_display or rec.object,
            )
        )
    return out


def align_by_pmid(docs: list[EvidenceDoc], articles: list[ArticleMeta]) -> list[EvidenceDoc]:
    """Link each evidence doc to its article metadata via the PubMed id.

    Docs without a pmid, or with a pmid absent from the metadata, stay
    unaligned; that is a flag, never an error.
    """
    by_pmid = {}
    for article in articles:
        by_pmid.setdefault(article.pmid, article)
    for doc in docs:
        doc.article = by_pmid.get(doc.pmid) if doc.pmid else None
    return docs
