"""HTTP wire protocol for the annotation service.

JSON request/response bodies over a local port. Endpoints:

    POST /api/annotators     {"annotator_id": ...}          register (idempotent)
    GET  /api/tasks/next     ?annotator_id=...              {"task": {...} | null}
    POST /api/submissions    {task_id, annotator_id, labels}
    GET  /api/taxonomy       full taxonomy tree (definitions, examples)
    GET  /api/progress       [?annotator_id=...]
    GET  /api/export         the collection as text/csv

Label payloads mirror the label vector: ``{"no_error": bool, "flags":
{"A1": bool, ...}}`` with absent flags meaning false. Validation failures
come back as 422 with the violation list; unknown annotators/tasks as
404; submitting someone else's task as 403.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from ..taxonomy import ErrorCode, LabelVector, export_taxonomy, parse_code
from .store import (
    AnnotationStore,
    LabelValidationError,
    TaskOwnershipError,
    UnknownAnnotatorError,
    UnknownTaskError,
)


class RegisterPayload(BaseModel):
    annotator_id: str


class LabelsPayload(BaseModel):
    no_error: bool
    flags: dict[str, bool] = {}

    def to_vector(self) -> LabelVector:
        flags: dict[ErrorCode, bool] = {}
        for token, value in self.flags.items():
            try:
                code = parse_code(token)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            flags[code] = value
        return LabelVector(no_error=self.no_error, flags=flags)


class SubmissionPayload(BaseModel):
    task_id: str
    annotator_id: str
    labels: LabelsPayload


def create_app(store: AnnotationStore) -> FastAPI:
    app = FastAPI(title="simperr annotation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/annotators")
    def register(payload: RegisterPayload):
        try:
            created = store.register(payload.annotator_id)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return {"annotator_id": payload.annotator_id, "created": created}

    @app.get("/api/tasks/next")
    def next_task(annotator_id: str = Query(...)):
        try:
            task = store.next_task(annotator_id)
        except UnknownAnnotatorError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return {"task": task.client_payload() if task is not None else None}

    @app.post("/api/submissions")
    def submit(payload: SubmissionPayload):
        try:
            ack = store.submit(
                payload.task_id, payload.annotator_id, payload.labels.to_vector()
            )
        except UnknownAnnotatorError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except UnknownTaskError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except TaskOwnershipError as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from None
        except LabelValidationError as exc:
            raise HTTPException(
                status_code=422,
                detail={"message": "invalid label vector", "violations": exc.violations},
            ) from None
        return ack

    @app.get("/api/taxonomy")
    def taxonomy():
        return export_taxonomy()

    @app.get("/api/progress")
    def progress(annotator_id: str | None = Query(default=None)):
        try:
            return store.progress(annotator_id)
        except UnknownAnnotatorError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.get("/api/export")
    def export():
        return Response(content=store.export(), media_type="text/csv")

    return app
