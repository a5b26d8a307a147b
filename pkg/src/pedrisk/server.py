"""Stateless HTTP facade: POST a pedigree and queries, get posteriors back.

Every request carries its own pedigree and optional model, so identical
requests give identical responses and nothing is stored server-side.
Validation failures return 400 with the offending field, histories with
probability zero return 422 with an explanation, oversized bodies 413.
"""

from __future__ import annotations

import argparse

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict
from typing import Literal

from .inference import InfeasibleEvidenceError
from .models import model_catalog
from .pedigree import pedigree_from_dict
from .risk import RiskQueryError
from .service import analysis_response, resolve_model

__all__ = ["app", "create_app", "main"]

MAX_BODY_BYTES = 1 << 20


class PhenotypeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["affected", "unaffected"]
    age: float


class IndividualModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    sex: str = "U"
    father: str | None = None
    mother: str | None = None
    phenotype: PhenotypeModel | None = None
    genotypes: list[str] | None = None
    twin_group: str | None = None


class TestModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    result: Literal["positive", "negative"]
    sensitivity: float
    specificity: float


class PedigreeModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    individuals: list[IndividualModel] = []
    tests: list[TestModel] = []


class QueryModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["posterior", "risk", "joint"]
    individual: str | None = None
    individuals: list[str] | None = None
    tau: float | None = None
    tmax: float | None = None
    dt: float | None = None


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pedigree: PedigreeModel
    model: dict | None = None
    queries: list[QueryModel] = []


def create_app() -> FastAPI:
    app = FastAPI(title="pedrisk", version="1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def reject_oversize(request: Request, call_next):
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit() and int(declared) > MAX_BODY_BYTES:
            return _oversize()
        if request.method == "POST":
            body = await request.body()
            if len(body) > MAX_BODY_BYTES:
                return _oversize()
        return await call_next(request)

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        detail = [
            {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.exception_handler(InfeasibleEvidenceError)
    async def on_impossible(request: Request, exc: InfeasibleEvidenceError):
        return JSONResponse(
            status_code=422,
            content={
                "detail": {
                    "reason": "impossible_evidence",
                    "log_evidence": "-inf",
                    "explanation": str(exc),
                }
            },
        )

    @app.exception_handler(RiskQueryError)
    async def on_bad_risk_query(request: Request, exc: RiskQueryError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"reason": "risk_query_invalid", "message": str(exc)}},
        )

    @app.exception_handler(ValueError)
    async def on_domain_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"reason": "validation", "message": str(exc)}},
        )

    @app.exception_handler(KeyError)
    async def on_unknown_id(request: Request, exc: KeyError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"reason": "validation", "message": str(exc.args[0])}},
        )

    @app.post("/v1/analyze")
    async def analyze(request: AnalyzeRequest) -> dict:
        pedigree = pedigree_from_dict(request.pedigree.model_dump())
        bundle = resolve_model(request.model)
        queries = [q.model_dump(exclude_none=True) for q in request.queries]
        return analysis_response(pedigree, bundle, queries)

    @app.get("/v1/models")
    async def models() -> list[dict]:
        return model_catalog()

    return app


def _oversize() -> JSONResponse:
    return JSONResponse(
        status_code=413,
        content={"detail": {"reason": "oversize", "limit_bytes": MAX_BODY_BYTES}},
    )


#: Ready-made application so ``uvicorn pedrisk.server:app`` just works.
app = create_app()


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description="Run the pedigree analysis HTTP service.")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--bind", default="127.0.0.1")
    args = parser.parse_args(argv)

    import uvicorn

    uvicorn.run(create_app(), host=args.bind, port=args.port)


if __name__ == "__main__":
    main()
