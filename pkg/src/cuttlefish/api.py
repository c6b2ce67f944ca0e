"""HTTP front for the planner service.

Submission endpoints return the content-addressed job id; clients poll
the matching GET endpoint until the job leaves the queue.  Payload
problems are reported with a 400 and the offending field; unknown ids
with a 404.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .explain import QuestionError
from .serialize import SchemaError
from .service import PROBLEM, QUESTION, PlannerService, SubmitError
from .store import QUEUED
from .tariff import validate_tariff


def _job_body(service: PlannerService, record) -> dict:
    body = {
        "job_id": record.id,
        "kind": record.kind,
        "status": record.status,
        "attempts": record.attempts,
    }
    if record.status == QUEUED:
        body["position"] = service.store.queue_position(record.id)
    if record.result is not None:
        body["result"] = record.result
    if record.error is not None:
        body["error"] = record.error
    return body


def create_app(service: PlannerService) -> FastAPI:
    app = FastAPI(title="cuttlefish", docs_url=None, redoc_url=None)

    @app.exception_handler(SchemaError)
    async def _schema_error(request: Request, exc: SchemaError):
        return JSONResponse(status_code=400, content={"error": str(exc), "field": exc.field})

    @app.exception_handler(SubmitError)
    async def _submit_error(request: Request, exc: SubmitError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(QuestionError)
    async def _question_error(request: Request, exc: QuestionError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    async def _json_object(request: Request) -> dict:
        try:
            payload = await request.json()
        except Exception:
            raise SchemaError("body", "expected a JSON object")
        if not isinstance(payload, dict):
            raise SchemaError("body", "expected a JSON object")
        return payload

    @app.post("/problems")
    async def submit_problem(request: Request):
        record, created = service.submit_problem(await _json_object(request))
        return JSONResponse(
            status_code=202 if created else 200,
            content={"job_id": record.id, "status": record.status, "created": created},
        )

    @app.get("/problems/{job_id}")
    async def get_problem(job_id: str):
        record = service.store.get(job_id)
        if record is None or record.kind != PROBLEM:
            return JSONResponse(status_code=404, content={"error": f"unknown problem {job_id!r}"})
        return _job_body(service, record)

    @app.post("/questions")
    async def submit_question(request: Request):
        record, created = service.submit_question(await _json_object(request))
        return JSONResponse(
            status_code=202 if created else 200,
            content={"job_id": record.id, "status": record.status, "created": created},
        )

    @app.get("/questions/{job_id}")
    async def get_question(job_id: str):
        record = service.store.get(job_id)
        if record is None or record.kind != QUESTION:
            return JSONResponse(status_code=404, content={"error": f"unknown question {job_id!r}"})
        return _job_body(service, record)

    @app.get("/tariff")
    async def get_tariff():
        tariff = service.tariff
        violations = validate_tariff(tariff, "agile")
        return {
            "tariff": tariff.canonical_dict(),
            "agile_violations": [
                {
                    "timestep": v.timestep,
                    "field": v.field,
                    "price_mp_per_kwh": v.price,
                    "message": v.message,
                }
                for v in violations
            ],
        }

    @app.get("/health")
    async def health():
        return {"status": "ok", "jobs": service.store.counts()}

    return app
