"""HTTP facade over the analysis pipeline.

Sessions are immutable after creation: the upload is parsed and aggregated
once, and every GET for the same session and request returns byte-identical
bodies (responses are rendered to bytes and cached). Clustering results are
cached per canonicalized weight vector so slider jitter cannot defeat the
cache. All errors share the shape {code, message, detail}.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .clustering import (
    Dendrogram,
    agglomerate,
    boundaries_for_cut,
    cluster_metrics,
    cut,
    leaf_order,
)
from .ingest import Dataset, EntityAxis, parse_fixation_csv, pivot_entities
from .layout import assign_subgrid, build_matrix_layout, layout_to_json
from .metrics import (
    METRIC_IDS,
    MetricTable,
    WeightVector,
    aggregate,
    merge_metrics,
    normalize,
)
from .similarity import metric_correlations, pairwise_similarity, combined_distance

MAX_UPLOAD_BYTES = 32 * 1024 * 1024
DEFAULT_MATRIX_KEY = "__input_order__"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def _body(obj: Any) -> bytes:
    return json.dumps(obj, separators=(",", ":")).encode("utf-8")


def _json_response(payload: bytes, status: int = 200) -> Response:
    return Response(content=payload, status_code=status, media_type="application/json")


class ClusterRequest(BaseModel):
    weights: dict[str, float]
    linkage: str = "average"
    k: int | None = None
    form: str = "weighted_sum"


@dataclass
class _Session:
    session_id: str
    dataset: Dataset
    table: MetricTable  # normalized
    metric_display_order: tuple[int, ...]  # metric indices, dendrogram leaf order
    metrics_body: bytes
    lock: threading.Lock = dc_field(default_factory=threading.Lock)
    correlations_body: bytes | None = None
    dendrograms: dict[str, Dendrogram] = dc_field(default_factory=dict)
    cluster_bodies: dict[str, bytes] = dc_field(default_factory=dict)
    matrix_bodies: dict[str, bytes] = dc_field(default_factory=dict)


def _metric_display_order(table: MetricTable) -> tuple[int, ...]:
    """Metric ordering for the sub-grid: correlation-clustered when there
    are enough entities to correlate, canonical otherwise."""
    if table.n_entities < 3:
        return tuple(range(len(METRIC_IDS)))
    corr = metric_correlations(table)
    return leaf_order(cluster_metrics(corr))


def _build_session(session_id: str, dataset: Dataset, combine: str) -> _Session:
    table = normalize(aggregate(dataset, combine=combine))
    metrics_body = _body(
        {
            "session_id": session_id,
            "entities": list(table.entities),
            "metric_order": list(METRIC_IDS),
            "values": [[float(v) for v in row] for row in table.values],
            "normalized": [[float(v) for v in row] for row in table.normalized],
            "defined_counts": [
                [int(c) for c in row] for row in table.defined_counts
            ]
            if table.defined_counts is not None
            else None,
            "warnings": list(table.warnings),
        }
    )
    return _Session(
        session_id=session_id,
        dataset=dataset,
        table=table,
        metric_display_order=_metric_display_order(table),
        metrics_body=metrics_body,
    )


def _layout_body(
    session: _Session, entity_order: tuple[int, ...], boundaries: tuple[int, ...]
) -> bytes:
    tensor = pairwise_similarity(session.table)
    metric_ids = tuple(METRIC_IDS[i] for i in session.metric_display_order)
    layout = build_matrix_layout(
        tensor,
        entity_order,
        assign_subgrid(metric_ids),
        group_boundaries=boundaries,
    )
    return _body(layout_to_json(layout))


def create_app(
    persist_dir: str | Path | None = None,
    max_upload_bytes: int = MAX_UPLOAD_BYTES,
) -> FastAPI:
    app = FastAPI(title="gazegroup service", docs_url=None, redoc_url=None)
    # the browser client may be served from a different origin; responses
    # carry no credentials, so a permissive policy is safe here
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()
    persist = Path(persist_dir) if persist_dir is not None else None
    if persist is not None:
        persist.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            {"code": exc.code, "message": exc.message, "detail": exc.detail},
            status_code=exc.status,
        )

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(_request: Request, exc: StarletteHTTPException) -> JSONResponse:
        return JSONResponse(
            {"code": "http_error", "message": str(exc.detail), "detail": None},
            status_code=exc.status_code,
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(
        _request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        return JSONResponse(
            {
                "code": "invalid_request",
                "message": "request validation failed",
                "detail": jsonable_encoder(exc.errors()),
            },
            status_code=422,
        )

    def _get_session(session_id: str) -> _Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}", None)
        return session

    @app.post("/sessions", status_code=201)
    async def create_session(
        request: Request,
        entity: str = "participant",
        combine: str = "mean",
        strict: bool = False,
    ):
        data = await request.body()
        if len(data) > max_upload_bytes:
            raise ApiError(
                413,
                "payload_too_large",
                f"upload exceeds {max_upload_bytes} bytes",
                {"size": len(data)},
            )
        if entity not in ("participant", "stimulus"):
            raise ApiError(422, "invalid_entity_axis", f"bad entity axis {entity!r}", None)
        if combine not in ("mean", "median"):
            raise ApiError(422, "invalid_combine", f"bad aggregation rule {combine!r}", None)
        dataset, report = parse_fixation_csv(data, strict=strict)
        if dataset is None:
            raise ApiError(
                400,
                "validation_failed",
                "fixation CSV rejected",
                {
                    "errors": [[row, msg] for row, msg in report.errors],
                    "warnings": [[row, msg] for row, msg in report.warnings],
                },
            )
        if entity == "stimulus":
            dataset = pivot_entities(dataset, EntityAxis.STIMULUS)
        session_id = uuid.uuid4().hex[:12]
        try:
            session = _build_session(session_id, dataset, combine)
        except ValueError as exc:
            raise ApiError(400, "unusable_dataset", str(exc), None)
        with registry_lock:
            sessions[session_id] = session
        if persist is not None:
            (persist / f"{session_id}.csv").write_bytes(data)
        return _json_response(
            _body(
                {
                    "session_id": session_id,
                    "entities": list(session.table.entities),
                    "n_fixations": report.n_fixations,
                    "warnings": [[row, msg] for row, msg in report.warnings],
                }
            ),
            status=201,
        )

    @app.get("/sessions/{session_id}/metrics")
    async def get_metrics(session_id: str):
        return _json_response(_get_session(session_id).metrics_body)

    @app.post("/sessions/{session_id}/cluster")
    async def post_cluster(session_id: str, body: ClusterRequest):
        session = _get_session(session_id)
        try:
            weights = WeightVector(body.weights)
        except ValueError as exc:
            raise ApiError(422, "invalid_weights", str(exc), None)
        if body.linkage not in ("single", "complete", "average"):
            raise ApiError(422, "invalid_linkage", f"bad linkage {body.linkage!r}", None)
        if body.form not in ("weighted_sum", "euclidean"):
            raise ApiError(422, "invalid_form", f"bad combination form {body.form!r}", None)
        p = session.table.n_entities
        if body.k is not None and not 1 <= body.k <= p:
            raise ApiError(422, "invalid_k", f"k must be in [1, {p}]", None)

        dendro_key = f"{weights.cache_key()}|{body.linkage}|{body.form}"
        public_key = dendro_key + (f"|k={body.k}" if body.k is not None else "")
        with session.lock:
            cached = session.cluster_bodies.get(public_key)
        if cached is not None:
            return _json_response(cached)

        with session.lock:
            dendro = session.dendrograms.get(dendro_key)
        if dendro is None:
            dm = combined_distance(session.table, weights, form=body.form)
            dendro = agglomerate(dm, body.linkage)
        order = leaf_order(dendro)
        labels = cut(dendro, body.k) if body.k is not None else None
        boundaries = (
            boundaries_for_cut(dendro, labels) if labels is not None else ()
        )
        wavg = merge_metrics(session.table, weights)
        response_body = _body(
            {
                "key": public_key,
                "linkage": body.linkage,
                "form": body.form,
                "weights": {m: w for m, w in weights.weights},
                "merges": dendro.to_linkage_rows(),
                "leaf_order": list(order),
                "entity_order": [session.table.entities[i] for i in order],
                "entities": list(session.table.entities),
                "labels": [int(v) for v in labels] if labels is not None else None,
                "group_boundaries": list(boundaries),
                "wavg": [float(v) for v in wavg],
            }
        )
        matrix_body = _layout_body(session, order, boundaries)
        with session.lock:
            session.dendrograms.setdefault(dendro_key, dendro)
            session.cluster_bodies.setdefault(public_key, response_body)
            session.matrix_bodies.setdefault(public_key, matrix_body)
            stored = session.cluster_bodies[public_key]
        if persist is not None:
            digest = hashlib.sha1(public_key.encode("utf-8")).hexdigest()[:12]
            (persist / f"{session_id}-{digest}.layout.json").write_bytes(matrix_body)
        return _json_response(stored)

    @app.get("/sessions/{session_id}/matrix")
    async def get_matrix(session_id: str, key: str | None = None):
        session = _get_session(session_id)
        cache_key = key if key is not None else DEFAULT_MATRIX_KEY
        with session.lock:
            cached = session.matrix_bodies.get(cache_key)
        if cached is not None:
            return _json_response(cached)
        if key is not None:
            raise ApiError(404, "unknown_cluster_key", f"no clustering {key!r}", None)
        body = _layout_body(session, tuple(range(session.table.n_entities)), ())
        with session.lock:
            session.matrix_bodies.setdefault(cache_key, body)
            stored = session.matrix_bodies[cache_key]
        return _json_response(stored)

    @app.get("/sessions/{session_id}/scanpaths/{participant_id}/{stimulus_id}")
    async def get_scanpath(session_id: str, participant_id: str, stimulus_id: str):
        session = _get_session(session_id)
        scanpath = session.dataset.scanpath(participant_id, stimulus_id)
        if scanpath is None:
            raise ApiError(
                404,
                "unknown_scanpath",
                f"no scanpath for ({participant_id!r}, {stimulus_id!r})",
                None,
            )
        return _json_response(
            _body(
                {
                    "participant_id": scanpath.participant_id,
                    "stimulus_id": scanpath.stimulus_id,
                    "fixations": [
                        {
                            "x": f.x,
                            "y": f.y,
                            "onset_ms": f.onset_ms,
                            "duration_ms": f.duration_ms,
                        }
                        for f in scanpath.fixations
                    ],
                }
            )
        )

    @app.get("/sessions/{session_id}/correlations")
    async def get_correlations(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            cached = session.correlations_body
        if cached is not None:
            return _json_response(cached)
        try:
            corr = metric_correlations(session.table)
        except ValueError as exc:
            raise ApiError(422, "too_few_entities", str(exc), None)
        body = _body(
            {
                "metric_order": list(corr.metric_order),
                "values": [[float(v) for v in row] for row in corr.values],
                "display_order": list(session.metric_display_order),
                "warnings": list(corr.warnings),
            }
        )
        with session.lock:
            if session.correlations_body is None:
                session.correlations_body = body
            stored = session.correlations_body
        return _json_response(stored)

    return app


app = create_app()
