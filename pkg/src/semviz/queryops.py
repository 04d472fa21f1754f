"""Single execution core behind the HTTP endpoints and the CLI.

Each operation takes the index plus a plain payload dict and returns a
plain, JSON-ready dict, so CLI output and endpoint responses carry
identical content. Payload validation raises :class:`QueryError` with the
offending field; the transport layers translate that into structured
errors.
"""

from __future__ import annotations

import json

from . import aggregate, pathways, semantics
from .errors import QueryError
from .indexing import FilterContext, Index


def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, no whitespace. Identical payloads
    yield identical bytes, which is what makes replay testing possible."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def parse_context(payload: dict) -> FilterContext:
    filters = payload.get("filters", [])
    if not isinstance(filters, list):
        raise QueryError("filters must be a list of {field, term}", field="filters")
    pairs = []
    for i, item in enumerate(filters):
        if not isinstance(item, dict) or "field" not in item or "term" not in item:
            raise QueryError(f"filters[{i}] must carry field and term", field="filters")
        field, term = str(item["field"]), str(item["term"])
        if not term.strip():
            raise QueryError(f"filters[{i}] has an empty term", field=field)
        pairs.append((field, term))
    text = payload.get("text")
    if text is not None and not isinstance(text, str):
        raise QueryError("text must be a string", field="text")
    return FilterContext(frozenset(pairs), text or None)


def _int_param(payload: dict, name: str, default: int, minimum: int) -> int:
    value = payload.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            value = int(value)
        except (TypeError, ValueError):
            raise QueryError(f"{name} must be an integer", field=name) from None
    if value < minimum:
        raise QueryError(f"{name} must be >= {minimum}", field=name)
    return value


def _bool_param(payload: dict, name: str, default: bool) -> bool:
    value = payload.get(name, default)
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        token = value.strip().casefold()
        if token in ("true", "1", "yes"):
            return True
        if token in ("false", "0", "no"):
            return False
    raise QueryError(f"{name} must be a boolean", field=name)


def op_stats(index: Index) -> dict:
    m = aggregate.metrics(index, FilterContext())
    return {
        "evidence_count": m.evidence_count,
        "article_count": m.article_count,
        "functional_type_count": len(index.functional_types),
        "record_count": index.record_count(),
    }


def op_tagcloud(index: Index, payload: dict) -> dict:
    field = payload.get("field")
    if not field:
        raise QueryError("field is required", field="field")
    k = _int_param(payload, "k", 30, 1)
    by_articles = _bool_param(payload, "by_articles", False)
    ctx = parse_context(payload)
    terms = aggregate.tag_cloud(index, ctx, str(field), k, by_articles)
    return {
        "field": field,
        "k": k,
        "terms": [{"term": t.term, "count": t.count} for t in terms],
    }


def op_heatmap(index: Index, payload: dict) -> dict:
    x, y = payload.get("x"), payload.get("y")
    if not x or not y:
        raise QueryError("x and y facet fields are required", field="x" if not x else "y")
    kx = _int_param(payload, "kx", 10, 1)
    ky = _int_param(payload, "ky", 10, 1)
    ctx = parse_context(payload)
    matrix = aggregate.heat_map(index, ctx, str(x), str(y), kx, ky)
    return {
        "x": x,
        "y": y,
        "x_terms": matrix.x_terms,
        "y_terms": matrix.y_terms,
        "cells": matrix.cells,
    }


def op_table(index: Index, payload: dict) -> dict:
    page = _int_param(payload, "page", 0, 0)
    page_size = _int_param(payload, "page_size", 20, 1)
    ctx = parse_context(payload)
    result = aggregate.data_table(index, ctx, page, page_size)
    return {
        "total": result.total,
        "page": result.page,
        "page_size": result.page_size,
        "rows": [
            {
                "doc_id": r.doc_id,
                "sentence": r.sentence,
                "url": r.url,
                "pmid": r.pmid,
                "subject": r.subject,
                "object": r.object,
                "relation": r.relation,
            }
            for r in result.rows
        ],
    }


def op_metrics(index: Index, payload: dict) -> dict:
    m = aggregate.metrics(index, parse_context(payload))
    return {"evidence_count": m.evidence_count, "article_count": m.article_count}


def op_histogram(index: Index, payload: dict) -> dict:
    granularity = str(payload.get("granularity", "month"))
    buckets = aggregate.date_histogram(index, parse_context(payload), granularity)
    return {
        "granularity": granularity,
        "buckets": [{"bucket": b, "count": n} for b, n in buckets],
    }


def _ft_summary(ft: semantics.FunctionalType) -> dict:
    return {
        "name": ft.display_name,
        "object": ft.object,
        "object_display": ft.object_display,
        "polarity": ft.polarity.value,
        "metatype": ft.metatype.value,
        "specific_relation": ft.specific_relation,
        "member_count": len(ft.members),
        "evidence_count": len(ft.doc_ids),
    }


def op_functional_types(index: Index, payload: dict) -> dict:
    q = str(payload.get("q", "") or "").strip().casefold()
    k = _int_param(payload, "k", 0, 0)  # 0 = unlimited
    fts = sorted(index.functional_types, key=lambda ft: (ft.display_name.casefold(), ft.key))
    if q:
        fts = [ft for ft in fts if q in ft.display_name.casefold()]
    if k:
        fts = fts[:k]
    return {"functional_types": [_ft_summary(ft) for ft in fts]}


def op_upstream(index: Index, name: str, opposite: bool = False) -> dict:
    ft = index.functional_type_by_name(name)
    regs = (
        semantics.opposite_upstream_regulators(index, ft)
        if opposite
        else semantics.upstream_regulators(index, ft)
    )
    summary = _ft_summary(ft)
    summary["members"] = [
        {"entity": m.entity, "display": m.display, "record_count": len(m.record_ids)}
        for m in ft.members
    ]
    return {
        "functional_type": summary,
        "direction": "opposite" if opposite else "same",
        "note": regs.note,
        "hits": [
            {
                "entity": h.entity,
                "display": index.entity_display(h.entity),
                "via_member": h.via_member,
                "via_display": index.entity_display(h.via_member),
                "record_ids": list(h.record_ids),
                "evidence_count": len(index.evidence_of(h.record_ids)),
            }
            for h in regs.hits
        ],
    }


def _doc_payload(index: Index, doc_id: str) -> dict:
    doc = index.get_document(doc_id)
    payload = {
        "id": doc.id,
        "sentence": doc.sentence,
        "pmid": doc.pmid,
        "url": doc.url,
        "aligned": doc.aligned,
    }
    if doc.article is not None:
        payload["article"] = {
            "pmid": doc.article.pmid,
            "title": doc.article.title,
            "journal": doc.article.journal,
            "publish_time": doc.article.publish_time,
            "authors": list(doc.article.authors),
        }
    return payload


def op_doc(index: Index, doc_id: str) -> dict:
    return _doc_payload(index, doc_id)


def _relations_param(payload: dict) -> frozenset[str]:
    raw = payload.get("relations")
    if raw is None:
        return pathways.DEFAULT_RELATION_FILTER
    if isinstance(raw, str):
        names = [part.strip() for part in raw.split(",") if part.strip()]
    elif isinstance(raw, list):
        names = [str(part).strip() for part in raw if str(part).strip()]
    else:
        raise QueryError("relations must be a list or comma-separated string",
                         field="relations")
    if not names:
        raise QueryError("relations must name at least one relation type", field="relations")
    return frozenset(names)


def op_pathways(index: Index, payload: dict) -> dict:
    target = str(payload.get("target", "") or "").strip()
    if not target:
        raise QueryError("target entity is required", field="target")
    target_key = target.casefold()
    # the serving surface caps pathway node-length at 5 regardless of request
    max_depth = min(
        _int_param(payload, "max_depth", pathways.MAX_PATHWAY_NODES, 2),
        pathways.MAX_PATHWAY_NODES,
    )
    budget = _int_param(payload, "budget", pathways.DEFAULT_WALK_BUDGET, 1)
    k = _int_param(payload, "k", 10, 1)
    by_articles = _bool_param(payload, "by_articles", False)
    start = str(payload.get("start", "") or "").strip().casefold()
    graph = index.regulation_graph(_relations_param(payload))

    depth = pathways.effective_depth(graph, target_key, max_depth, budget)
    estimate = pathways.walk_count_estimate(graph, target_key, depth)
    regulators = pathways.top_members(graph, target_key, k, upstream=False,
                                      index=index, by_articles=by_articles)
    upstream = pathways.top_members(graph, target_key, k, upstream=True,
                                    index=index, by_articles=by_articles)
    paths = pathways.enumerate_pathways(graph, target_key, depth)
    if start:
        paths = [p for p in paths if p.nodes[0] == start]
    include_evidence = _bool_param(payload, "evidence", bool(start))

    listed = []
    for p in paths:
        entry = {
            "nodes": [index.entity_display(n) for n in p.nodes],
            "relations": [e.relation for e in p.edges],
            "net_polarity": p.net_polarity.value,
            "length": p.length,
        }
        if include_evidence:
            entry["first_edge_evidence"] = [
                _doc_payload(index, d)
                for d in index.evidence_of(p.edges[0].record_ids)
            ]
        listed.append(entry)
    return {
        "target": target_key,
        "target_display": index.entity_display(target_key),
        "max_depth": max_depth,
        "budget": budget,
        "effective_depth": depth,
        "walk_estimate": estimate,
        "regulators": [
            {"entity": e, "display": index.entity_display(e), "count": n}
            for e, n in regulators
        ],
        "upstream": [
            {"entity": e, "display": index.entity_display(e), "count": n}
            for e, n in upstream
        ],
        "pathway_count": len(listed),
        "pathways": listed,
    }
