"""Command-line entry point: build indices, query them headlessly, serve.

``build`` is the only writer; everything else loads the artifact read-only.
Query subcommands print the same content the HTTP endpoints return, as
pretty JSON on stdout.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import ingest, queryops, report, webapi
from .errors import SemvizError
from .indexing import FilterContext, Index
from .taxonomy import default_taxonomy, load_taxonomy


def _fail(exc: Exception, code: int = 2) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SemvizError as exc:
            _fail(exc)

    return wrapper


def _emit(result: dict) -> None:
    click.echo(json.dumps(result, indent=2, sort_keys=True, ensure_ascii=False))


def _parse_filters(filters: tuple[str, ...]) -> list[dict]:
    pairs = []
    for raw in filters:
        field, sep, term = raw.partition("=")
        if not sep or not field.strip() or not term.strip():
            raise click.BadParameter(f"expected field=term, got {raw!r}", param_hint="--filter")
        pairs.append({"field": field.strip(), "term": term.strip()})
    return pairs


def _query_options(fn):
    fn = click.option("--text", default=None, help="Free-text query (AND of tokens).")(fn)
    fn = click.option(
        "--filter",
        "filters",
        multiple=True,
        metavar="FIELD=TERM",
        help="Facet constraint; repeatable, conjunctive.",
    )(fn)
    fn = click.option(
        "--index",
        "index_path",
        envvar="SEMVIZ_INDEX",
        required=True,
        type=click.Path(exists=True, path_type=Path),
        help="Index artifact directory (or set SEMVIZ_INDEX).",
    )(fn)
    return fn


def _payload(filters: tuple[str, ...], text: str | None, **extra) -> dict:
    payload: dict = {"filters": _parse_filters(filters)}
    if text:
        payload["text"] = text
    payload.update({k: v for k, v in extra.items() if v is not None})
    return payload


@click.group()
def main() -> None:
    """Semantic-relation exploration engine."""


@main.command()
@click.option("--ca", "ca_files", multiple=True, type=click.Path(exists=True, path_type=Path),
              help="Causal-assertion JSONL file; repeatable.")
@click.option("--kg", "kg_files", multiple=True, type=click.Path(exists=True, path_type=Path),
              help="Knowledge-graph relation JSONL file; repeatable.")
@click.option("--meta", "meta_file", type=click.Path(exists=True, path_type=Path),
              help="Article metadata CSV.")
@click.option("--aliases", "alias_file", type=click.Path(exists=True, path_type=Path),
              help="alias<TAB>canonical pairs.")
@click.option("--taxonomy", "taxonomy_file", type=click.Path(exists=True, path_type=Path),
              help="Relation-type config (YAML/JSON); built-in default when omitted.")
@click.option("--stopwords", "stopword_file", type=click.Path(exists=True, path_type=Path),
              help="Optional stopword list, one token per line.")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path),
              help="Output directory for the index artifact.")
@_guarded
def build(ca_files, kg_files, meta_file, alias_file, taxonomy_file, stopword_file, out_dir):
    """Build a deterministic index artifact from extraction dumps."""
    if taxonomy_file is not None:
        taxonomy = load_taxonomy(Path(taxonomy_file))
    else:
        taxonomy = default_taxonomy()
        click.echo("warning: no --taxonomy given, using the built-in default", err=True)
    aliases = ingest.load_aliases(Path(alias_file)) if alias_file else None
    stopwords = (
        [w.strip() for w in Path(stopword_file).read_text(encoding="utf-8").splitlines() if w.strip()]
        if stopword_file
        else ()
    )

    records, docs = [], []
    rejects = {"causal_assertions": [], "kg_relations": [], "metadata_warnings": []}
    for i, path in enumerate(ca_files):
        result = ingest.parse_causal_assertions(Path(path), file_index=i)
        records += result.records
        docs += result.docs
        rejects["causal_assertions"] += [
            {"file": str(path), "line": r.line_no, "reason": r.reason} for r in result.rejects
        ]
    for i, path in enumerate(kg_files):
        result = ingest.parse_kg_relations(Path(path), file_index=i)
        records += result.records
        docs += result.docs
        rejects["kg_relations"] += [
            {"file": str(path), "line": r.line_no, "reason": r.reason} for r in result.rejects
        ]
    articles = []
    if meta_file:
        meta = ingest.parse_article_metadata(Path(meta_file))
        articles = meta.articles
        rejects["metadata_warnings"] = meta.warnings

    records = ingest.canonicalize(records, aliases)
    ingest.align_by_pmid(docs, articles)
    index = Index.build(records, docs, articles, taxonomy, stopwords)
    index.save(out_dir)

    rejects["counts"] = {
        "records": index.record_count(),
        "docs": index.doc_count(),
        "articles": len(articles),
        "functional_types": len(index.functional_types),
        "rejected_lines": len(rejects["causal_assertions"]) + len(rejects["kg_relations"]),
    }
    (Path(out_dir) / "rejects.json").write_text(
        queryops.canonical_json(rejects) + "\n", encoding="utf-8"
    )
    click.echo(
        f"indexed {index.record_count()} records, {index.doc_count()} docs, "
        f"{len(index.functional_types)} functional types -> {out_dir}"
    )
    if rejects["counts"]["rejected_lines"]:
        click.echo(
            f"rejected {rejects['counts']['rejected_lines']} lines "
            f"(see {Path(out_dir) / 'rejects.json'})",
            err=True,
        )


@main.command()
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_guarded
def serve(index_path, port, host):
    """Serve the HTTP query API over an index artifact."""
    webapi.serve(index_path, port=port, host=host)


@main.group()
def query() -> None:
    """Run one aggregation or pathway query headlessly."""


@query.command()
@_query_options
@click.option("--field", required=True, help="Facet field to count.")
@click.option("-k", default=30, show_default=True)
@click.option("--by-articles", is_flag=True, help="Rank by distinct articles, not docs.")
@_guarded
def tagcloud(index_path, filters, text, field, k, by_articles):
    """Top-k term counts for one facet."""
    index = Index.load(index_path)
    _emit(queryops.op_tagcloud(
        index, _payload(filters, text, field=field, k=k, by_articles=by_articles)))


@query.command()
@_query_options
@click.option("--x", "x_field", required=True, help="Facet on the x axis.")
@click.option("--y", "y_field", required=True, help="Facet on the y axis.")
@click.option("--kx", default=10, show_default=True)
@click.option("--ky", default=10, show_default=True)
@_guarded
def heatmap(index_path, filters, text, x_field, y_field, kx, ky):
    """Co-occurrence matrix over two facets."""
    index = Index.load(index_path)
    _emit(queryops.op_heatmap(
        index, _payload(filters, text, x=x_field, y=y_field, kx=kx, ky=ky)))


@query.command()
@_query_options
@click.option("--page", default=0, show_default=True)
@click.option("--page-size", default=20, show_default=True)
@_guarded
def table(index_path, filters, text, page, page_size):
    """Paged evidence table (sentence, URL, relation columns)."""
    index = Index.load(index_path)
    _emit(queryops.op_table(index, _payload(filters, text, page=page, page_size=page_size)))


@query.command()
@_query_options
@_guarded
def metrics(index_path, filters, text):
    """Evidence and distinct-article counts for a context."""
    index = Index.load(index_path)
    _emit(queryops.op_metrics(index, _payload(filters, text)))


@query.command()
@_query_options
@click.option("--granularity", type=click.Choice(["year", "month"]), default="month",
              show_default=True)
@_guarded
def histogram(index_path, filters, text, granularity):
    """Publish-date histogram of the resolved evidence."""
    index = Index.load(index_path)
    _emit(queryops.op_histogram(index, _payload(filters, text, granularity=granularity)))


@query.command(name="functional-types")
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--q", default="", help="Substring filter on the display name.")
@click.option("-k", default=0, show_default=True, help="Limit (0 = all).")
@_guarded
def functional_types(index_path, q, k):
    """List grounded functional types."""
    index = Index.load(index_path)
    _emit(queryops.op_functional_types(index, {"q": q, "k": k}))


@query.command()
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--name", required=True, help="Functional type display name.")
@_guarded
def upstream(index_path, name):
    """Same-polarity upstream regulators of a functional type."""
    index = Index.load(index_path)
    _emit(queryops.op_upstream(index, name, opposite=False))


@query.command(name="opposite-upstream")
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--name", required=True, help="Functional type display name.")
@_guarded
def opposite_upstream(index_path, name):
    """Opposite-polarity upstream regulators of a functional type."""
    index = Index.load(index_path)
    _emit(queryops.op_upstream(index, name, opposite=True))


@query.command()
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--target", required=True, help="Target entity name.")
@click.option("--max-depth", default=5, show_default=True)
@click.option("--budget", default=10_000, show_default=True)
@click.option("-k", default=10, show_default=True)
@click.option("--relations", default=None, help="Comma-separated relation filter.")
@click.option("--start", default="", help="Only pathways starting at this entity.")
@click.option("--evidence/--no-evidence", "evidence", default=None,
              help="Force first-edge evidence on or off.")
@_guarded
def pathways(index_path, target, max_depth, budget, k, relations, start, evidence):
    """Bounded pathway search ending at a target entity."""
    index = Index.load(index_path)
    payload = {"target": target, "max_depth": max_depth, "budget": budget,
               "k": k, "start": start}
    if relations is not None:
        payload["relations"] = relations
    if evidence is not None:
        payload["evidence"] = evidence
    _emit(queryops.op_pathways(index, payload))


@query.command()
@click.option("--index", "index_path", envvar="SEMVIZ_INDEX", required=True,
              type=click.Path(exists=True, path_type=Path))
@click.option("--id", "doc_id", required=True, help="Evidence doc id.")
@_guarded
def doc(index_path, doc_id):
    """Fetch one evidence doc with its article metadata."""
    index = Index.load(index_path)
    _emit(queryops.op_doc(index, doc_id))


@main.command(name="report")
@_query_options
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path),
              help="Directory for figures and CSVs.")
@click.option("--field", "cloud_fields", multiple=True,
              help="Tag-cloud facet; repeatable (default subject/object/relation_type/functional_type).")
@click.option("--x", "x_field", default="subject", show_default=True)
@click.option("--y", "y_field", default="object", show_default=True)
@click.option("-k", default=30, show_default=True)
@click.option("--kx", default=10, show_default=True)
@click.option("--ky", default=10, show_default=True)
@click.option("--granularity", type=click.Choice(["year", "month"]), default="month",
              show_default=True)
@_guarded
def report_cmd(index_path, filters, text, out_dir, cloud_fields, x_field, y_field,
               k, kx, ky, granularity):
    """Render tag clouds, heat map, and histogram to PNG + CSV files."""
    index = Index.load(index_path)
    pairs = frozenset((f["field"], f["term"]) for f in _parse_filters(filters))
    ctx = FilterContext(pairs, text or None)
    fields = cloud_fields or ("subject", "object", "relation_type", "functional_type")
    written = report.write_report(index, ctx, out_dir, tuple(fields),
                                  x_field, y_field, k, kx, ky, granularity)
    for path in written:
        click.echo(str(path))


if __name__ == "__main__":
    main()
