"""Read-only HTTP service over a loaded index.

The protocol is stateless: every request carries its full filter context,
so responses are pure functions of (index artifact, request body) and can
be cached or replayed byte-for-byte. Malformed requests come back as
structured errors, never stack traces.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from . import queryops
from .errors import NotFoundError, QueryError
from .indexing import Index


def _json(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=queryops.canonical_json(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, code: str, message: str, field: str | None = None) -> Response:
    body = {"error": {"code": code, "message": message}}
    if field:
        body["error"]["field"] = field
    return _json(body, status_code)


def create_app(index: Index) -> FastAPI:
    app = FastAPI(title="semviz", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(QueryError)
    async def _query_error(request: Request, exc: QueryError) -> Response:
        return _error(400, "bad_request", str(exc), exc.field)

    @app.exception_handler(NotFoundError)
    async def _not_found(request: Request, exc: NotFoundError) -> Response:
        return _error(404, "not_found", str(exc))

    @app.exception_handler(RequestValidationError)
    async def _invalid(request: Request, exc: RequestValidationError) -> Response:
        errors = exc.errors()
        field = ".".join(str(p) for p in errors[0]["loc"]) if errors else None
        return _error(400, "bad_request", "malformed request body", field)

    @app.exception_handler(Exception)
    async def _boom(request: Request, exc: Exception) -> Response:
        return _error(500, "internal_error", f"{type(exc).__name__}: {exc}")

    @app.get("/api/stats")
    async def stats() -> Response:
        return _json(queryops.op_stats(index))

    @app.post("/api/agg/tagcloud")
    async def agg_tagcloud(payload: dict = Body(...)) -> Response:
        return _json(queryops.op_tagcloud(index, payload))

    @app.post("/api/agg/heatmap")
    async def agg_heatmap(payload: dict = Body(...)) -> Response:
        return _json(queryops.op_heatmap(index, payload))

    @app.post("/api/agg/table")
    async def agg_table(payload: dict = Body(...)) -> Response:
        return _json(queryops.op_table(index, payload))

    @app.post("/api/agg/metrics")
    async def agg_metrics(payload: dict = Body(...)) -> Response:
        return _json(queryops.op_metrics(index, payload))

    @app.post("/api/agg/histogram")
    async def agg_histogram(payload: dict = Body(...)) -> Response:
        return _json(queryops.op_histogram(index, payload))

    @app.get("/api/functional-types")
    async def functional_types(q: str = "", k: int = 0) -> Response:
        return _json(queryops.op_functional_types(index, {"q": q, "k": k}))

    @app.get("/api/functional-types/{name}/upstream")
    async def ft_upstream(name: str) -> Response:
        return _json(queryops.op_upstream(index, name, opposite=False))

    @app.get("/api/functional-types/{name}/opposite-upstream")
    async def ft_opposite_upstream(name: str) -> Response:
        return _json(queryops.op_upstream(index, name, opposite=True))

    @app.get("/api/pathways")
    async def pathway_search(
        target: str = "",
        max_depth: int = 5,
        budget: int = 10_000,
        k: int = 10,
        relations: str | None = None,
        start: str = "",
        evidence: str | None = None,
        by_articles: bool = False,
    ) -> Response:
        payload: dict = {
            "target": target,
            "max_depth": max_depth,
            "budget": budget,
            "k": k,
            "start": start,
            "by_articles": by_articles,
        }
        if relations is not None:
            payload["relations"] = relations
        if evidence is not None:
            payload["evidence"] = evidence
        return _json(queryops.op_pathways(index, payload))

    @app.get("/api/doc/{doc_id}")
    async def doc(doc_id: str) -> Response:
        return _json(queryops.op_doc(index, doc_id))

    return app


def serve(index_path: str | Path, port: int = 8080, host: str = "127.0.0.1") -> None:
    """Load the artifact read-only once, then serve until interrupted."""
    import uvicorn

    index = Index.load(index_path)
    uvicorn.run(create_app(index), host=host, port=port, log_level="info")
