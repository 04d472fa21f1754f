"""Visualization-facing aggregations over a resolved evidence set.

Everything here is a pure function of (index, filter context, params):
tag-cloud term counts, heat-map co-occurrence matrices, paged evidence
tables, corpus metrics, and publish-date histograms. Counts are
evidence-doc frequencies by default with a distinct-article variant where
flagged; shading/sizing is left to UI layers, the engine returns raw counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import QueryError
from .indexing import (
    FACET_FIELDS,
    FILTER_FIELDS,
    SECOND_ORDER_FIELDS,
    FilterContext,
    Index,
)
from .semantics import opposite_upstream_regulators, upstream_regulators


@dataclass(frozen=True)
class TermCount:
    term: str
    count: int


@dataclass(frozen=True)
class HeatMatrix:
    x_terms: list[str]
    y_terms: list[str]
    cells: list[list[int]]  # cells[y][x]


@dataclass(frozen=True)
class TableRow:
    doc_id: str
    sentence: str
    url: str | None
    pmid: str | None
    subject: str
    object: str
    relation: str


@dataclass(frozen=True)
class TablePage:
    rows: list[TableRow]
    total: int
    page: int
    page_size: int


@dataclass(frozen=True)
class Metrics:
    evidence_count: int
    article_count: int


def _article_count(index: Index, doc_ids) -> int:
    pmids = set()
    for doc_id in doc_ids:
        pmid = index.get_document(doc_id).pmid
        if pmid:
            pmids.add(pmid)
    return len(pmids)


def _field_counts(
    index: Index, ctx: FilterContext, field: str, by_articles: bool
) -> list[tuple[str, str, int]]:
    """(term key, display, count) for every term of a field with count > 0,
    ordered count desc then key asc."""
    resolved = index.resolve(ctx)
    whole_corpus = len(resolved) == index.doc_count()
    doc_set = set(resolved.doc_ids)
    counts = []
    for key, posting in index.field_terms(field):
        if by_articles:
            matched = posting if whole_corpus else [d for d in posting if d in doc_set]
            n = _article_count(index, matched)
        elif whole_corpus:
            n = len(posting)
        else:
            n = sum(1 for d in posting if d in doc_set)
        if n > 0:
            counts.append((key, index.display_term(field, key), n))
    counts.sort(key=lambda item: (-item[2], item[0]))
    return counts


def _second_order_counts(
    index: Index, ctx: FilterContext, field: str, by_articles: bool
) -> list[tuple[str, str, int]]:
    names = ctx.terms_for("functional_type")
    if len(names) != 1:
        raise QueryError(
            f"{field} tag cloud needs exactly one functional_type constraint",
            field="functional_type",
        )
    ft = index.functional_type_by_name(names[0])
    regs = (
        upstream_regulators(index, ft)
        if field == "upstream_regulator"
        else opposite_upstream_regulators(index, ft)
    )
    scope = set(index.resolve(ctx.without_field("functional_type")).doc_ids)
    per_entity: dict[str, set[str]] = {}
    for hit in regs.hits:
        docs = [d for d in index.evidence_of(hit.record_ids) if d in scope]
        per_entity.setdefault(hit.entity, set()).update(docs)
    counts = []
    for entity, docs in per_entity.items():
        n = _article_count(index, docs) if by_articles else len(docs)
        if n > 0:
            counts.append((entity, index.entity_display(entity), n))
    counts.sort(key=lambda item: (-item[2], item[0]))
    return counts


def tag_cloud(
    index: Index,
    ctx: FilterContext,
    field: str,
    k: int | None = None,
    by_articles: bool = False,
) -> list[TermCount]:
    """Top-k terms of a facet over the resolved evidence set.

    Count is the number of evidence docs carrying the term (distinct
    articles when ``by_articles``); order is count desc, term asc. The
    second-order facets (upstream_regulator, opposite_upstream_regulator)
    require exactly one functional_type constraint in the context, which
    selects the type; the remaining constraints scope the evidence.
    """
    if field not in FACET_FIELDS:
        raise QueryError(f"unknown facet field: {field!r}", field=field)
    if k is not None and k < 1:
        raise QueryError("k must be >= 1", field="k")
    if field in SECOND_ORDER_FIELDS:
        counts = _second_order_counts(index, ctx, field, by_articles)
    else:
        counts = _field_counts(index, ctx, field, by_articles)
    if k is not None:
        counts = counts[:k]
    return [TermCount(display, n) for _, display, n in counts]


def heat_map(
    index: Index,
    ctx: FilterContext,
    field_x: str,
    field_y: str,
    kx: int = 10,
    ky: int = 10,
) -> HeatMatrix:
    """Co-occurrence matrix over the top marginal terms of two facets.

    cell(y, x) counts docs matching the context plus both term constraints;
    rows and columns left with no nonzero cell are dropped.
    """
    if field_x == field_y:
        raise QueryError("heat map axes must be distinct fields", field=field_x)
    for f in (field_x, field_y):
        if f not in FILTER_FIELDS:
            raise QueryError(f"field not usable as a heat map axis: {f!r}", field=f)
    if kx < 1 or ky < 1:
        raise QueryError("kx and ky must be >= 1")
    resolved = set(index.resolve(ctx).doc_ids)
    x_marginal = _field_counts(index, ctx, field_x, by_articles=False)[:kx]
    y_marginal = _field_counts(index, ctx, field_y, by_articles=False)[:ky]

    rows = []
    for y_key, _, _ in y_marginal:
        base = resolved.intersection(index.posting(field_y, y_key))
        rows.append([len(base.intersection(index.posting(field_x, x_key)))
                     for x_key, _, _ in x_marginal])

    keep_y = [i for i, row in enumerate(rows) if any(row)]
    rows = [rows[i] for i in keep_y]
    y_terms = [y_marginal[i][1] for i in keep_y]
    keep_x = [j for j in range(len(x_marginal)) if any(row[j] for row in rows)]
    cells = [[row[j] for j in keep_x] for row in rows]
    x_terms = [x_marginal[j][1] for j in keep_x]
    return HeatMatrix(x_terms=x_terms, y_terms=y_terms, cells=cells)


def data_table(index: Index, ctx: FilterContext, page: int = 0, page_size: int = 20) -> TablePage:
    """Stable-ordered evidence rows (pmid asc, doc id asc), page-sliced.

    A page past the end yields no rows but still reports the true total.
    """
    if page < 0:
        raise QueryError("page must be >= 0", field="page")
    if page_size < 1:
        raise QueryError("page_size must be >= 1", field="page_size")
    resolved = index.resolve(ctx)
    ordered = sorted(resolved.doc_ids, key=lambda d: (index.get_document(d).pmid or "", d))
    total = len(ordered)
    window = ordered[page * page_size : (page + 1) * page_size]
    rows = []
    for doc_id in window:
        doc = index.get_document(doc_id)
        rec = index.record_by_id(index.record_id_of(doc_id))
        rows.append(
            TableRow(
                doc_id=doc_id,
                sentence=doc.sentence,
                url=doc.url,
                pmid=doc.pmid,
                subject=index.entity_display(rec.subject),
                object=index.entity_display(rec.object),
                relation=index.display_term("relation_type", rec.relation.casefold()),
            )
        )
    return TablePage(rows=rows, total=total, page=page, page_size=page_size)


def metrics(index: Index, ctx: FilterContext) -> Metrics:
    """Evidence count and distinct-article count of the resolved set.

    Docs without a pmid count as evidence but belong to no article.
    """
    resolved = index.resolve(ctx)
    return Metrics(
        evidence_count=len(resolved),
        article_count=_article_count(index, resolved.doc_ids),
    )


def date_histogram(
    index: Index, ctx: FilterContext, granularity: str = "month"
) -> list[tuple[str, int]]:
    """Publish-time buckets of the resolved docs, ascending.

    Unaligned or undated docs are reported in a trailing "unknown" bucket.
    """
    if granularity not in ("year", "month"):
        raise QueryError(f"granularity must be year or month, got {granularity!r}",
                         field="granularity")
    width = 4 if granularity == "year" else 7
    buckets: dict[str, int] = {}
    unknown = 0
    for doc_id in index.resolve(ctx).doc_ids:
        article = index.get_document(doc_id).article
        if article is None or not article.publish_time:
            unknown += 1
            continue
        key = article.publish_time[:width]
        buckets[key] = buckets.get(key, 0) + 1
    out = sorted(buckets.items())
    if unknown:
        out.append(("unknown", unknown))
    return out
