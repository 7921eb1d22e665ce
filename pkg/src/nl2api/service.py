"""HTTP service over the pipeline.

Endpoints (all bodies UTF-8 JSON):

    POST /query    {"query": ...}            full pipeline; ?trace=1 includes the trace
    POST /route    {"query": ...}            stage 1 only
    POST /command  {"query": ..., "api_id": ...}   stage 2 only
    POST /execute  {"command": {...}}        validate + execute an edited command
    GET  /catalog                            id + display_name listing
    GET  /catalog/{api_id}                   full API spec
    GET  /healthz                            liveness

A clarification is a normal outcome, not an error: clients branch on the
body's "kind", so /query answers 200 for answered, clarify and failed alike.
Fault statuses: 400 empty query, 404 unknown api_id, 503 backend
unreachable. The backend credential is read from the environment by the
backend itself and never appears in any response.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .catalog import api_to_obj
from .command import command_from_obj, serialize_command, validate_command
from .errors import (
    BackendUnreachable,
    CommandInvalid,
    CommandParseError,
    Nl2ApiError,
    UnknownApiId,
)
from .router.pipeline import Pipeline
from .store import execute


class QueryRequest(BaseModel):
    query: str


class CommandRequest(BaseModel):
    query: str
    api_id: str


class ExecuteRequest(BaseModel):
    command: dict


def create_app(pipeline: Pipeline, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="nl2api", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    def _require_query(text: str) -> str:
        if not text or not text.strip():
            raise HTTPException(status_code=400, detail="query must be non-empty")
        return text

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/catalog")
    def catalog_listing():
        return {
            "version": pipeline.catalog.version,
            "apis": [
                {"api_id": api.api_id, "display_name": api.display_name}
                for api in pipeline.catalog.apis
            ],
        }

    @app.get("/catalog/{api_id}")
    def catalog_entry(api_id: str):
        try:
            spec = pipeline.catalog.get(api_id)
        except UnknownApiId as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return api_to_obj(spec)

    @app.post("/query")
    def query(request: QueryRequest, trace: int = Query(default=0)):
        _require_query(request.query)
        outcome = pipeline.answer(request.query)
        body = outcome.to_obj(include_trace=bool(trace))
        if outcome.command is not None:
            body["canonical"] = serialize_command(outcome.command)
        return body

    @app.post("/route")
    def route(request: QueryRequest):
        _require_query(request.query)
        try:
            outcome = pipeline.route(request.query)
        except BackendUnreachable as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc
        except Nl2ApiError as exc:
            raise HTTPException(status_code=502, detail=str(exc)) from exc
        return outcome.to_obj()

    @app.post("/command")
    def command(request: CommandRequest):
        _require_query(request.query)
        try:
            pipeline.catalog.get(request.api_id)
        except UnknownApiId as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        try:
            cmd = pipeline.command(request.query, request.api_id)
        except CommandInvalid as exc:
            return {"violations": exc.report.to_obj()}
        except BackendUnreachable as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc
        return {"command": cmd.to_obj(), "canonical": serialize_command(cmd)}

    @app.post("/execute")
    def execute_command(request: ExecuteRequest):
        try:
            cmd = command_from_obj(request.command)
        except CommandParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        try:
            spec = pipeline.catalog.get(cmd.api_id)
        except UnknownApiId as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        report = validate_command(cmd, spec)
        if not report.empty:
            return {"violations": report.to_obj()}
        if pipeline.store is None:
            raise HTTPException(status_code=503, detail="no store configured")
        try:
            table = execute(pipeline.store, cmd, spec)
        except UnknownApiId as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return {
            "command": cmd.to_obj(),
            "canonical": serialize_command(cmd),
            "table": table.to_obj(),
        }

    return app
