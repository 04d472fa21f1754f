"""Three-layer hierarchical index with faceted filtering.

The document layer stores evidence sentences joined to article metadata, the
phrase layer keeps one term tuple per relation record plus derived
keyword-in-abstract tuples, and the type layer registers entities and the
functional types grounded by :mod:`semviz.semantics`.

Every query funnels through :meth:`Index.resolve`, which turns a
:class:`FilterContext` (conjunctive field constraints plus optional free
text) into the sorted set of matching evidence-doc ids. The index is
immutable once built; reads are safe from any number of threads.
"""

from __future__ import annotations

import json
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import BuildError, FormatError, NotFoundError, QueryError
from .ingest import (
    ArticleMeta,
    EvidenceDoc,
    PairKind,
    RelationRecord,
    Source,
    align_by_pmid,
)
from .taxonomy import Metatype, Taxonomy, default_taxonomy

INDEX_FORMAT = "semviz-index"
INDEX_VERSION = 1

# Fields usable as FilterContext constraints and as aggregation facets.
FILTER_FIELDS = (
    "subject",
    "object",
    "relation_type",
    "metatype",
    "role_subject",
    "role_object",
    "role_enzyme",
    "role_substrate",
    "chemical",
    "gene",
    "disease",
    "journal",
    "author",
    "publish_time",
    "functional_type",
    "pair_kind",
    "source",
    "abstract_keyword",
)

# Facet-only fields: valid for tag clouds but not as filter constraints,
# since their terms are derived per selected functional type.
SECOND_ORDER_FIELDS = ("upstream_regulator", "opposite_upstream_regulator")

FACET_FIELDS = FILTER_FIELDS + SECOND_ORDER_FIELDS

_TOKEN = re.compile(r"[^\W_]+")

_PAIR_ROLES = {
    PairKind.CHEMICAL_GENE: ("chemical", "gene"),
    PairKind.CHEMICAL_DISEASE: ("chemical", "disease"),
    PairKind.GENE_DISEASE: ("gene", "disease"),
}


def tokenize(text: str, stopwords: frozenset[str] = frozenset()) -> list[str]:
    """Split on non-alphanumeric boundaries, case-fold, drop tokens under
    two characters. No stemming: gene symbols must survive verbatim."""
    return [
        t
        for t in _TOKEN.findall(text.casefold())
        if len(t) >= 2 and t not in stopwords
    ]


def month_bucket(publish_time: str) -> str:
    """Month-granularity facet value (YYYY-MM prefix, or what is known)."""
    return publish_time[:7]


@dataclass(frozen=True)
class FilterContext:
    """Conjunctive field constraints plus an optional free-text query."""

    constraints: frozenset[tuple[str, str]] = frozenset()
    text: str | None = None

    @classmethod
    def of(cls, *pairs: tuple[str, str], text: str | None = None) -> "FilterContext":
        return cls(frozenset(pairs), text)

    def add(self, field_name: str, term: str) -> "FilterContext":
        return FilterContext(self.constraints | {(field_name, term)}, self.text)

    def without_field(self, field_name: str) -> "FilterContext":
        kept = frozenset(c for c in self.constraints if c[0] != field_name)
        return FilterContext(kept, self.text)

    def terms_for(self, field_name: str) -> list[str]:
        return sorted(t for f, t in self.constraints if f == field_name)


@dataclass
class EvidenceSet:
    """Resolved search state: sorted doc ids, record ids derived lazily."""

    doc_ids: tuple[str, ...]
    _index: "Index"
    _record_ids: tuple[str, ...] | None = field(default=None, repr=False)

    @property
    def record_ids(self) -> tuple[str, ...]:
        if self._record_ids is None:
            owners = {self._index.record_id_of(d) for d in self.doc_ids}
            self._record_ids = tuple(sorted(owners))
        return self._record_ids

    def __len__(self) -> int:
        return len(self.doc_ids)


def _intersect(base: tuple[str, ...], other: tuple[str, ...]) -> tuple[str, ...]:
    """Intersection of two sorted id tuples via binary search on the larger."""
    if len(base) > len(other):
        base, other = other, base
    out = []
    for item in base:
        pos = bisect_left(other, item)
        if pos < len(other) and other[pos] == item:
            out.append(item)
    return tuple(out)


class Index:
    """Immutable faceted index over relation records and evidence docs."""

    def __init__(self) -> None:
        self.taxonomy: Taxonomy = default_taxonomy()
        self.stopwords: frozenset[str] = frozenset()
        self._records: dict[str, RelationRecord] = {}
        self._docs: dict[str, EvidenceDoc] = {}
        self._articles: dict[str, ArticleMeta] = {}
        self._postings: dict[str, dict[str, tuple[str, ...]]] = {}
        self._display: dict[str, dict[str, str]] = {}
        self._text: dict[str, tuple[str, ...]] = {}
        self._all_doc_ids: tuple[str, ...] = ()
        self._record_of: dict[str, str] = {}
        self._records_by_object: dict[str, tuple[str, ...]] = {}
        self._records_by_subject: dict[str, tuple[str, ...]] = {}
        self._entity_display: dict[str, str] = {}
        self.functional_types: list = []
        self._ft_by_name: dict[str, list] = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        records: list[RelationRecord],
        docs: list[EvidenceDoc],
        articles: list[ArticleMeta],
        taxonomy: Taxonomy | None = None,
        stopwords: Iterable[str] = (),
    ) -> "Index":
        """Build the full index; deterministic and input-order independent.

        Inputs must be the canonical, aligned outputs of ingest: duplicate
        record ids, dangling evidence references, shared or orphaned docs
        all violate that contract and fail the build.
        """
        index = cls()
        index.taxonomy = taxonomy or default_taxonomy()
        index.stopwords = frozenset(t.casefold() for t in stopwords)

        for doc in docs:
            if doc.id in index._docs:
                raise BuildError(f"duplicate doc id: {doc.id}")
            index._docs[doc.id] = doc
        for article in articles:
            index._articles.setdefault(article.pmid, article)
        for rec in records:
            if rec.id in index._records:
                raise BuildError(f"duplicate record id: {rec.id}")
            index._records[rec.id] = rec

        for rec in index.records():
            for doc_id in rec.evidence_ids:
                if doc_id not in index._docs:
                    raise BuildError(f"record {rec.id} references unknown doc {doc_id}")
                if doc_id in index._record_of:
                    raise BuildError(
                        f"doc {doc_id} is claimed by records "
                        f"{index._record_of[doc_id]} and {rec.id}"
                    )
                index._record_of[doc_id] = rec.id
        orphans = set(index._docs) - set(index._record_of)
        if orphans:
            raise BuildError(f"docs without an owning record: {sorted(orphans)[:5]}")

        index._all_doc_ids = tuple(sorted(index._docs))
        index._build_postings()

        from .semantics import ground_functional_types

        ground_functional_types(index)
        return index

    def _post(self, sink: dict, field_name: str, term: str, display: str, doc_ids) -> None:
        if not term:
            return
        sink.setdefault(field_name, {}).setdefault(term, set()).update(doc_ids)
        self._display.setdefault(field_name, {}).setdefault(term, display)

    def _build_postings(self) -> None:
        sink: dict[str, dict[str, set]] = {}
        by_object: dict[str, list[str]] = {}
        by_subject: dict[str, list[str]] = {}

        for rec in self.records():
            self._entity_display.setdefault(rec.subject, rec.subject_display or rec.subject)
            self._entity_display.setdefault(rec.object, rec.object_display or rec.object)
            by_object.setdefault(rec.object, []).append(rec.id)
            by_subject.setdefault(rec.subject, []).append(rec.id)

            rt = self.taxonomy.lookup(rec.relation)
            rel_term = rec.relation.casefold()
            rel_display = rt.name if self.taxonomy.known(rec.relation) else rec.relation
            ids = rec.evidence_ids

            self._post(sink, "subject", rec.subject, self._entity_display[rec.subject], ids)
            self._post(sink, "object", rec.object, self._entity_display[rec.object], ids)
            self._post(sink, "relation_type", rel_term, rel_display, ids)
            self._post(sink, "metatype", rt.metatype.value, rt.metatype.value, ids)
            self._post(sink, "pair_kind", rec.pair_kind.value, rec.pair_kind.value, ids)
            self._post(sink, "source", rec.source.value, rec.source.value, ids)
            if rt.metatype is Metatype.REGULATE_ACTIVITY:
                self._post(sink, "role_subject", rec.subject, self._entity_display[rec.subject], ids)
                self._post(sink, "role_object", rec.object, self._entity_display[rec.object], ids)
            elif rt.metatype is Metatype.MODIFICATION:
                self._post(sink, "role_enzyme", rec.subject, self._entity_display[rec.subject], ids)
                self._post(sink, "role_substrate", rec.object, self._entity_display[rec.object], ids)
            kind_roles = _PAIR_ROLES.get(rec.pair_kind)
            if kind_roles:
                self._post(sink, kind_roles[0], rec.subject, self._entity_display[rec.subject], ids)
                self._post(sink, kind_roles[1], rec.object, self._entity_display[rec.object], ids)

        text: dict[str, set] = {}
        for doc_id in self._all_doc_ids:
            doc = self._docs[doc_id]
            for token in tokenize(doc.sentence, self.stopwords):
                text.setdefault(token, set()).add(doc_id)
            article = doc.article
            if article is None:
                continue
            self._post(sink, "journal", article.journal.casefold(), article.journal, [doc_id])
            for author in article.authors:
                self._post(sink, "author", author.casefold(), author, [doc_id])
            bucket = month_bucket(article.publish_time)
            self._post(sink, "publish_time", bucket, bucket, [doc_id])
            for token in tokenize(article.title, self.stopwords):
                text.setdefault(token, set()).add(doc_id)
            for token in tokenize(article.abstract, self.stopwords):
                text.setdefault(token, set()).add(doc_id)
                self._post(sink, "abstract_keyword", token, token, [doc_id])

        self._postings = {
            f: {t: tuple(sorted(ids)) for t, ids in terms.items()}
            for f, terms in sink.items()
        }
        self._text = {t: tuple(sorted(ids)) for t, ids in text.items()}
        self._records_by_object = {k: tuple(sorted(v)) for k, v in by_object.items()}
        self._records_by_subject = {k: tuple(sorted(v)) for k, v in by_subject.items()}

    def register_functional_types(self, fts: list) -> None:
        """Type-layer hook used by semantics grounding; adds the
        ``functional_type`` postings."""
        self.functional_types = fts
        self._ft_by_name = {}
        for ft in fts:
            key = ft.display_name.casefold()
            self._ft_by_name.setdefault(key, []).append(ft)
            existing = self._postings.setdefault("functional_type", {}).get(key, ())
            merged = tuple(sorted(set(existing) | set(ft.doc_ids)))
            self._postings["functional_type"][key] = merged
            self._display.setdefault("functional_type", {}).setdefault(key, ft.display_name)

    # -- lookups -----------------------------------------------------------

    def records(self) -> Iterator[RelationRecord]:
        for rid in sorted(self._records):
            yield self._records[rid]

    def record_by_id(self, record_id: str) -> RelationRecord:
        try:
            return self._records[record_id]
        except KeyError:
            raise NotFoundError(f"unknown record id: {record_id}") from None

    def record_id_of(self, doc_id: str) -> str:
        return self._record_of[doc_id]

    def record_ids_with_object(self, canonical: str) -> tuple[str, ...]:
        return self._records_by_object.get(canonical, ())

    def record_ids_with_subject(self, canonical: str) -> tuple[str, ...]:
        return self._records_by_subject.get(canonical, ())

    def entity_display(self, canonical: str) -> str:
        return self._entity_display.get(canonical, canonical)

    def evidence_of(self, record_ids: Iterable[str]) -> tuple[str, ...]:
        ids: set[str] = set()
        for rid in record_ids:
            ids.update(self._records[rid].evidence_ids)
        return tuple(sorted(ids))

    def posting(self, field_name: str, term: str) -> tuple[str, ...]:
        return self._postings.get(field_name, {}).get(term.strip().casefold(), ())

    def field_terms(self, field_name: str) -> Iterable[tuple[str, tuple[str, ...]]]:
        """(term, doc_ids) pairs for one field, term-sorted for determinism."""
        terms = self._postings.get(field_name, {})
        for term in sorted(terms):
            yield term, terms[term]

    def display_term(self, field_name: str, term: str) -> str:
        return self._display.get(field_name, {}).get(term, term)

    def functional_type_by_name(self, name: str):
        """Look up a grounded functional type by display name
        (case-insensitive). Name collisions resolve to the first type in
        (object, polarity, metatype) order."""
        matches = self._ft_by_name.get(name.strip().casefold())
        if not matches:
            raise NotFoundError(f"unknown functional type: {name!r}")
        return sorted(matches, key=lambda ft: ft.key)[0]

    def regulation_graph(self, relation_filter: Iterable[str] | None = None):
        """Memoized signed regulation graph over the given relation types."""
        from .pathways import DEFAULT_RELATION_FILTER, build_graph

        key = frozenset(
            name.strip().casefold() for name in (relation_filter or DEFAULT_RELATION_FILTER)
        )
        cache = self.__dict__.setdefault("_graph_cache", {})
        if key not in cache:
            cache[key] = build_graph(self, key)
        return cache[key]

    @property
    def all_doc_ids(self) -> tuple[str, ...]:
        return self._all_doc_ids

    @property
    def articles(self) -> dict[str, ArticleMeta]:
        return self._articles

    def doc_count(self) -> int:
        return len(self._docs)

    def record_count(self) -> int:
        return len(self._records)

    # -- queries -----------------------------------------------------------

    def resolve(self, ctx: FilterContext) -> EvidenceSet:
        """Intersect all constraint postings, then the text-token sets.

        Free text matches docs containing every query token; an empty
        context resolves to the whole corpus.
        """
        sets: list[tuple[str, ...]] = []
        for field_name, term in ctx.constraints:
            if field_name not in FILTER_FIELDS:
                raise QueryError(f"unknown filter field: {field_name!r}", field=field_name)
            sets.append(self.posting(field_name, term))
        if ctx.text:
            for token in tokenize(ctx.text, self.stopwords):
                sets.append(self._text.get(token, ()))
        if not sets:
            return EvidenceSet(self._all_doc_ids, self)
        sets.sort(key=len)
        result = sets[0]
        for other in sets[1:]:
            if not result:
                break
            result = _intersect(result, other)
        return EvidenceSet(result, self)

    def get_document(self, doc_id: str) -> EvidenceDoc:
        try:
            return self._docs[doc_id]
        except KeyError:
            raise NotFoundError(f"unknown doc id: {doc_id}") from None

    # -- persistence -------------------------------------------------------

    def to_payload(self) -> dict:
        records = []
        for rec in self.records():
            records.append(
                {
                    "id": rec.id,
                    "subject": rec.subject,
                    "object": rec.object,
                    "relation": rec.relation,
                    "source": rec.source.value,
                    "pair_kind": rec.pair_kind.value,
                    "evidence_ids": list(rec.evidence_ids),
                    "subject_display": rec.subject_display,
                    "object_display": rec.object_display,
                }
            )
        docs = []
        for doc_id in self._all_doc_ids:
            doc = self._docs[doc_id]
            docs.append(
                {"id": doc.id, "sentence": doc.sentence, "pmid": doc.pmid, "url": doc.url}
            )
        articles = []
        for pmid in sorted(self._articles):
            a = self._articles[pmid]
            articles.append(
                {
                    "pmid": a.pmid,
                    "title": a.title,
                    "abstract": a.abstract,
                    "authors": list(a.authors),
                    "publish_time": a.publish_time,
                    "journal": a.journal,
                }
            )
        return {
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "taxonomy": self.taxonomy.to_config(),
            "stopwords": sorted(self.stopwords),
            "records": records,
            "docs": docs,
            "articles": articles,
        }

    def save(self, path: str | Path) -> Path:
        """Write the artifact directory. Canonical JSON keeps builds from
        identical inputs byte-identical and round-trips bit-exactly."""
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        target = path / "index.json"
        blob = json.dumps(
            self.to_payload(), ensure_ascii=False, sort_keys=True, separators=(",", ":")
        )
        target.write_text(blob + "\n", encoding="utf-8")
        return target

    @classmethod
    def load(cls, path: str | Path) -> "Index":
        path = Path(path)
        if path.is_dir():
            path = path / "index.json"
        if not path.exists():
            raise FormatError(f"index artifact not found: {path}")
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise FormatError(f"corrupt index artifact {path}: {exc}") from None
        if payload.get("format") != INDEX_FORMAT or payload.get("version") != INDEX_VERSION:
            raise FormatError(f"unsupported index artifact version in {path}")

        from .taxonomy import load_taxonomy

        taxonomy = load_taxonomy(json.dumps(payload["taxonomy"]))
        articles = [ArticleMeta(**a) for a in payload["articles"]]
        docs = [EvidenceDoc(**d) for d in payload["docs"]]
        records = [
            RelationRecord(
                id=r["id"],
                subject=r["subject"],
                object=r["object"],
                relation=r["relation"],
                source=Source(r["source"]),
                pair_kind=PairKind(r["pair_kind"]),
                evidence_ids=list(r["evidence_ids"]),
                subject_display=r["subject_display"],
                object_display=r["object_display"],
            )
            for r in payload["records"]
        ]
        align_by_pmid(docs, articles)
        return cls.build(records, docs, articles, taxonomy, payload.get("stopwords", ()))
