"""HTTP service backing scripts and the browser workbench.

Stateless: every request carries the full document text. Endpoints:
POST /api/parse, POST /api/complete, POST /api/check, GET /api/health; the
workbench bundle (when built) is served from the root path.
"""

from __future__ import annotations

import os
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .api import TargetError, UnsupportedDocument, execute_check
from .sema import analyze, completions

DEFAULT_PORT = 8077


class ParseRequest(BaseModel):
    text: str


class CompleteRequest(BaseModel):
    text: str
    offset: int


class CheckRequest(BaseModel):
    text: str
    property: str = "all"
    target: str = "all"
    mode: str = "filtered"
    max_points: int | None = None
    horizon: int | None = None
    budget: int | None = None


def _ui_dir() -> Path | None:
    env = os.environ.get("SLEEC_UI_DIR")
    candidates = [Path(env)] if env else []
    candidates.append(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    for c in candidates:
        if c.is_dir() and (c / "index.html").is_file():
            return c
    return None


def create_app() -> FastAPI:
    app = FastAPI(title="sleec", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/parse")
    def parse_endpoint(req: ParseRequest) -> dict:
        analysis = analyze(req.text)
        return {
            "diagnostics": [d.to_json() for d in analysis.diagnostics],
            "symbols": analysis.table.to_json(),
        }

    @app.post("/api/complete")
    def complete_endpoint(req: CompleteRequest) -> dict:
        items = completions(req.text, req.offset)
        return {"items": [item.to_json() for item in items]}

    @app.post("/api/check")
    def check_endpoint(req: CheckRequest) -> dict:
        try:
            outcome = execute_check(
                req.text,
                prop=req.property,
                target=req.target,
                mode=req.mode,
                max_points=req.max_points,
                horizon=req.horizon,
                budget=req.budget,
            )
        except (TargetError, UnsupportedDocument) as e:
            raise HTTPException(status_code=422, detail=str(e))
        return outcome.to_json()

    ui = _ui_dir()
    if ui is not None:
        app.mount("/", StaticFiles(directory=str(ui), html=True), name="workbench")
    else:

        @app.get("/")
        def index() -> dict:
            return {
                "service": "sleec",
                "endpoints": ["/api/parse", "/api/complete", "/api/check", "/api/health"],
                "workbench": "not built (frontend/dist missing)",
            }

    return app


def serve(port: int | None = None, host: str = "127.0.0.1") -> None:
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port or int(os.environ.get("SLEEC_PORT", DEFAULT_PORT)))
