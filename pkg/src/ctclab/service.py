"""HTTP front end: run and validate scenario configs over JSON.

The service wraps the same run_scenario call the CLI uses. It never
writes files on behalf of callers: output_path in a submitted config is
echoed back but ignored, and file: payload descriptors are resolved
against the server's filesystem.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import CtcLabError, PayloadError
from .models import (ScenarioConfig, ScenarioReport, ValidationFinding,
                     schema_document, validate_raw_config)
from .scenarios import run_scenario


def create_app() -> FastAPI:
    app = FastAPI(
        title="ctc-lab",
        version=__version__,
        description="Fixed points, spectral recursions, and purification "
                    "probes for quantum systems interacting with a closed "
                    "timelike curve.",
    )

    @app.exception_handler(PayloadError)
    async def _payload_error(request: Request, exc: PayloadError):
        return JSONResponse(status_code=400,
                            content={"detail": f"payload error: {exc}"})

    @app.exception_handler(OSError)
    async def _os_error(request: Request, exc: OSError):
        return JSONResponse(status_code=400,
                            content={"detail": f"file access failed: {exc}"})

    @app.exception_handler(CtcLabError)
    async def _numerical_error(request: Request, exc: CtcLabError):
        return JSONResponse(status_code=500,
                            content={"detail": f"numerical failure: {exc}"})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/schema")
    def schema() -> dict:
        return schema_document()

    @app.post("/validate")
    async def validate(request: Request) -> dict:
        try:
            raw = await request.json()
        except ValueError:
            return JSONResponse(status_code=400,
                                content={"detail": "body is not valid JSON"})
        findings = validate_raw_config(raw)
        return {
            "valid": not findings,
            "findings": [f.model_dump() for f in findings],
        }

    @app.post("/run", response_model=ScenarioReport)
    def run(config: ScenarioConfig) -> ScenarioReport:
        return run_scenario(config)

    return app


app = create_app()
