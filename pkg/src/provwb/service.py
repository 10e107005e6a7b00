"""Session-oriented HTTP API: load provenance and trees, compress, and
compare what-if valuations over full vs. compressed provenance.

All payloads use the same JSON formats as the files the CLI reads.
Errors come back as ``{"error": {"code", "message", "details"}}``.
"""

from __future__ import annotations

import json
import statistics
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import (
    ProvenanceBundle,
    Valuation,
    bundle_from_obj,
    bundle_size,
    bundle_to_obj,
    evaluate_bundle,
    valuation_from_obj,
    valuation_to_obj,
)
from .errors import EvaluationError, ParseError, ValidationError
from .optimizer import AbstractionResult, diagnostics_obj, optimize
from .tree import (
    AbstractionTree,
    default_meta_valuation,
    induced_valuation,
    tree_from_obj,
)

TIMING_REPEATS = 5


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: list | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.details = details or []
        super().__init__(message)


@dataclass
class Session:
    id: str
    bundle: ProvenanceBundle | None = None
    tree: AbstractionTree | None = None
    baseline: Valuation = field(default_factory=Valuation)
    result: AbstractionResult | None = None
    baseline_values: dict[str, float] | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def refresh_baseline(self) -> None:
        if self.bundle is not None:
            self.baseline_values, _ = evaluate_bundle(self.bundle, self.baseline)
        else:
            self.baseline_values = None


def _timed_evaluation(bundle: ProvenanceBundle, val: Valuation) -> tuple[dict[str, float], float]:
    """Values plus the median wall-clock duration of TIMING_REPEATS passes."""
    durations = []
    values: dict[str, float] = {}
    for _ in range(TIMING_REPEATS):
        values, duration = evaluate_bundle(bundle, val)
        durations.append(duration)
    return values, statistics.median(durations)


def _group_payload(session: Session) -> list[dict]:
    """Assignment-screen payload: each meta-variable with its leaves,
    their baseline values, and the group's default (the average)."""
    result = session.result
    assert result is not None and session.bundle is not None
    defaults = default_meta_valuation(session.bundle, result.mapping, session.baseline)
    groups: dict[str, list[str]] = {}
    for leaf, meta in result.mapping.items():
        groups.setdefault(meta, []).append(leaf)
    return [
        {
            "meta": meta,
            "default": defaults.value(meta),
            "leaves": [
                {"name": leaf, "baseline": session.baseline.value(leaf)}
                for leaf in sorted(leaves)
            ],
        }
        for meta, leaves in sorted(groups.items())
    ]


def snapshot_session(session: Session) -> dict:
    """JSON-serializable snapshot; compression results are recomputable
    and deliberately not persisted."""
    return {
        "id": session.id,
        "bundle": bundle_to_obj(session.bundle) if session.bundle else None,
        "tree": session.tree.to_obj() if session.tree else None,
        "baseline": valuation_to_obj(session.baseline),
    }


def restore_session(obj: dict) -> Session:
    session = Session(id=obj["id"])
    if obj.get("bundle"):
        session.bundle = bundle_from_obj(obj["bundle"])
    if obj.get("tree"):
        session.tree = tree_from_obj(obj["tree"])
    if obj.get("baseline"):
        session.baseline = valuation_from_obj(obj["baseline"])
    session.refresh_baseline()
    return session


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="provenance what-if workbench")
    sessions: dict[str, Session] = {}

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message, "details": exc.details}},
        )

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"no session {session_id!r}")
        return session

    async def read_json(request: Request) -> object:
        try:
            return json.loads(await request.body())
        except json.JSONDecodeError as exc:
            raise ApiError(422, "invalid_json", f"request body is not valid JSON: {exc.msg}")

    def invalid(exc: Exception) -> ApiError:
        return ApiError(422, "invalid_input", str(exc))

    @app.post("/api/sessions", status_code=201)
    async def create_session():
        session = Session(id=uuid.uuid4().hex)
        sessions[session.id] = session
        return {"id": session.id}

    @app.get("/api/sessions/{session_id}")
    async def get_state(session_id: str):
        s = get_session(session_id)
        return {
            "id": s.id,
            "size": bundle_size(s.bundle) if s.bundle else None,
            "tree": s.tree.to_obj() if s.tree else None,
            "baseline": valuation_to_obj(s.baseline),
            "compression": s.result.to_obj() if s.result else None,
        }

    @app.put("/api/sessions/{session_id}/provenance")
    async def put_provenance(session_id: str, request: Request):
        s = get_session(session_id)
        obj = await read_json(request)
        try:
            bundle = bundle_from_obj(obj)
        except ParseError as exc:
            raise invalid(exc)
        with s.lock:
            s.bundle = bundle
            s.result = None
            s.refresh_baseline()
        return {"size": bundle_size(bundle), "variables": sorted(bundle.variables)}

    @app.put("/api/sessions/{session_id}/tree")
    async def put_tree(session_id: str, request: Request):
        s = get_session(session_id)
        obj = await read_json(request)
        try:
            tree = tree_from_obj(obj)
        except (ParseError, ValidationError) as exc:
            raise invalid(exc)
        with s.lock:
            s.tree = tree
            s.result = None
        return {"leaves": list(tree.leaves), "nodes": len(tree.nodes)}

    @app.put("/api/sessions/{session_id}/baseline")
    async def put_baseline(session_id: str, request: Request):
        s = get_session(session_id)
        obj = await read_json(request)
        try:
            baseline = valuation_from_obj(obj)
        except ParseError as exc:
            raise invalid(exc)
        with s.lock:
            s.baseline = baseline
            s.refresh_baseline()
        return {"values": s.baseline_values}

    @app.get("/api/sessions/{session_id}/baseline-results")
    async def baseline_results(session_id: str):
        s = get_session(session_id)
        if s.bundle is None:
            raise ApiError(409, "no_provenance", "load provenance first")
        return {"values": s.baseline_values}

    @app.post("/api/sessions/{session_id}/compress")
    async def compress(session_id: str, request: Request):
        s = get_session(session_id)
        obj = await read_json(request)
        if s.bundle is None or s.tree is None:
            raise ApiError(409, "not_ready", "both provenance and a tree are required")
        bound = obj.get("bound") if isinstance(obj, dict) else None
        if not isinstance(bound, int) or isinstance(bound, bool) or bound < 1:
            raise ApiError(422, "invalid_bound", "bound must be an integer ≥ 1")
        with s.lock:
            try:
                s.result = optimize(s.bundle, s.tree, bound)
            except ValidationError as exc:
                raise invalid(exc)
            payload = s.result.to_obj()
            diag = s.result.diagnostics
            payload["original_size"] = diag.full_size
            payload["min_size"] = diag.min_size
            payload["groups"] = _group_payload(s)
        return payload

    @app.get("/api/sessions/{session_id}/metavars")
    async def metavars(session_id: str):
        s = get_session(session_id)
        if s.result is None:
            raise ApiError(409, "no_compression", "run compression first")
        return {"cut": list(s.result.cut.nodes), "groups": _group_payload(s)}

    @app.get("/api/sessions/{session_id}/diagnostics")
    async def diagnostics(session_id: str):
        s = get_session(session_id)
        if s.result is None:
            raise ApiError(409, "no_compression", "run compression first")
        return diagnostics_obj(s.result)

    @app.post("/api/sessions/{session_id}/evaluate")
    async def evaluate(session_id: str, request: Request):
        s = get_session(session_id)
        obj = await read_json(request)
        if s.bundle is None:
            raise ApiError(409, "no_provenance", "load provenance first")
        if not isinstance(obj, dict):
            raise ApiError(422, "invalid_input", "request body must be an object")
        target = obj.get("target", "both")
        if target not in ("full", "compressed", "both"):
            raise ApiError(422, "invalid_target", f"unknown target {target!r}")
        raw = obj.get("assignments", {})
        try:
            assignments = valuation_from_obj({"assignments": raw}).assignments
        except ParseError as exc:
            raise invalid(exc)

        result = s.result
        allowed = set(s.bundle.variables)
        if result is not None:
            allowed |= set(result.cut.nodes)
        unknown = sorted(set(assignments) - allowed)
        if unknown:
            raise ApiError(422, "unknown_variables", "unknown variable names", unknown)

        if target in ("compressed", "both"):
            if result is None:
                raise ApiError(409, "no_compression", "run compression first")
            if not result.feasible:
                raise ApiError(409, "infeasible", "no feasible compression for the current bound")

        if result is not None:
            meta_val = default_meta_valuation(s.bundle, result.mapping, s.baseline)
            meta_val = meta_val.with_overrides(assignments)
            full_val = induced_valuation(meta_val, result.mapping)
        else:
            meta_val = s.baseline.with_overrides(assignments)
            full_val = meta_val

        baseline_values = s.baseline_values or {}

        def section(bundle: ProvenanceBundle, val: Valuation) -> dict:
            try:
                values, duration = _timed_evaluation(bundle, val)
            except EvaluationError as exc:
                raise invalid(exc)
            return {
                "values": values,
                "deltas": {k: v - baseline_values.get(k, 0.0) for k, v in values.items()},
                "duration_s": duration,
                "size": bundle_size(bundle),
            }

        payload: dict = {"target": target}
        if target in ("full", "both"):
            payload["full"] = section(s.bundle, full_val)
        if target in ("compressed", "both"):
            assert result is not None
            payload["compressed"] = section(result.compressed, meta_val)
        if target == "both":
            t_full = payload["full"]["duration_s"]
            t_comp = payload["compressed"]["duration_s"]
            payload["speedup_pct"] = 100.0 * (1.0 - t_comp / t_full) if t_full > 0 else 0.0
        return payload

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="dashboard")

    return app
