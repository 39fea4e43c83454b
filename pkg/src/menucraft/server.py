"""HTTP service over the engine: sessions, validation, optimization, hotkeys.

All JSON responses are rendered by the same canonical serializer the engine
uses on disk, so API output is byte-identical to the library's. Turns are
synchronous; a second submit to a busy session is refused with 409 rather
than queued.
"""

from __future__ import annotations

import threading
from dataclasses import replace
from pathlib import Path

from fastapi import Body, FastAPI, Response

from menucraft.constraints import (
    constraint_set_from_obj,
    validate as validate_doc,
    violation_to_obj,
)
from menucraft.hotkeys import assign_hotkeys, conventions_from_obj
from menucraft.model import document_from_obj, document_to_obj, dumps_canonical
from menucraft.optimizer import (
    command_spec_from_obj,
    layout_spec_from_obj,
    layout_to_document,
    layout_to_obj,
    optimize,
    params_from_obj,
)
from menucraft.prompts import (
    BUILTIN_TEMPLATES,
    TEMPLATE_SLOTS,
    InteractionKind,
    InteractionRequest,
    load_template_overrides,
)
from menucraft.providers import (
    HttpProvider,
    ProviderError,
    provider_cfg_from_obj,
)
from menucraft.session import (
    Session,
    load as load_session,
    new_session,
    save,
    session_to_obj,
    submit,
    summary,
    turn_result_to_obj,
)

DEFAULT_PORT = 8787


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra

    def to_obj(self) -> dict:
        body = {"code": self.code, "message": self.message}
        body.update(self.extra)
        return {"error": body}


class CanonicalJSONResponse(Response):
    media_type = "application/json"

    def render(self, content) -> bytes:
        return dumps_canonical(content).encode("utf-8")


class SessionStore:
    """In-memory sessions with optional directory persistence and per-session
    submit locks (non-blocking: a busy session refuses the second caller)."""

    def __init__(self, directory: str | Path | None, provider_factory, templates=None):
        self._dir = Path(directory) if directory else None
        self._provider_factory = provider_factory
        self._templates = templates
        self._sessions: dict[str, Session] = {}
        self._providers: dict = {}
        self._locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()
        if self._dir and self._dir.is_dir():
            for path in sorted(self._dir.glob("*.json")):
                self._remember(load_session(path))

    def _remember(self, session: Session) -> None:
        self._sessions[session.id] = session
        self._locks.setdefault(session.id, threading.Lock())
        if session.id not in self._providers:
            self._providers[session.id] = self._provider_factory(session.provider_cfg)

    def _persist(self, session: Session) -> None:
        if self._dir:
            save(session, self._dir)

    def create(self, constraints, provider_cfg, repair_rounds) -> Session:
        session = new_session(
            constraints=constraints,
            provider_cfg=provider_cfg,
            repair_rounds=repair_rounds,
        )
        with self._mutex:
            self._remember(session)
        self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise ApiError(404, "session_not_found", f"no session {session_id!r}")

    def summaries(self) -> list[dict]:
        out = [summary(s) for s in self._sessions.values()]
        out.sort(key=lambda s: (-s["updated"], s["id"]))
        return out

    def submit_turn(self, session_id: str, req: InteractionRequest, seed: int, constraints=None):
        with self._mutex:
            session = self.get(session_id)
            lock = self._locks[session_id]
            provider = self._providers[session_id]
        if not lock.acquire(blocking=False):
            raise ApiError(
                409, "session_busy", f"a turn is already running on {session_id!r}"
            )
        try:
            if constraints is not None:
                session = replace(session, constraints=constraints)
            try:
                updated, result = submit(
                    session, req, provider, seed=seed, templates=self._templates
                )
            except ProviderError as exc:
                partial = getattr(exc, "partial_session", None)
                if partial is not None:
                    self._sessions[session_id] = partial
                    self._persist(partial)
                raise
            self._sessions[session_id] = updated
            self._persist(updated)
            return result
        finally:
            lock.release()


def _require_obj(payload, name: str) -> dict:
    if not isinstance(payload, dict):
        raise ApiError(400, "validation_error", f"{name} must be a JSON object")
    return payload


def _engine(call):
    """Engine errors become 400s; provider errors keep their own mapping."""
    try:
        return call()
    except (ApiError, ProviderError):
        raise
    except ValueError as exc:
        raise ApiError(400, "validation_error", str(exc)) from exc


def _request_from_obj(body: dict, session: Session) -> tuple[InteractionRequest, int]:
    kind_name = body.get("kind")
    try:
        kind = InteractionKind(kind_name)
    except ValueError:
        raise ApiError(400, "validation_error", f"unknown interaction kind {kind_name!r}")
    seed = body.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ApiError(400, "validation_error", "'seed' must be an integer")

    def str_list(name):
        value = body.get(name)
        if value is None:
            return None
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise ApiError(400, "validation_error", f"{name!r} must be a list of strings")
        return tuple(value)

    context_doc = session.current_doc
    if body.get("context_doc") is not None:
        context_doc = _engine(lambda: document_from_obj(body["context_doc"]))
    top_k = body.get("top_k")
    if top_k is not None and (isinstance(top_k, bool) or not isinstance(top_k, int)):
        raise ApiError(400, "validation_error", "'top_k' must be an integer")
    req = _engine(
        lambda: InteractionRequest(
            kind=kind,
            topic=body.get("topic"),
            constraints=session.constraints,
            commands=str_list("commands"),
            tabs=str_list("tabs"),
            context_doc=context_doc,
            free_text=body.get("free_text"),
            top_k=top_k,
        )
    )
    return req, seed


def create_app(
    sessions_dir: str | Path | None = None,
    provider_factory=None,
    template_dir: str | Path | None = None,
    allow_origins: tuple[str, ...] = (),
) -> FastAPI:
    templates = load_template_overrides(template_dir) if template_dir else None
    store = SessionStore(
        sessions_dir,
        provider_factory or (lambda cfg: HttpProvider(cfg)),
        templates=templates,
    )
    app = FastAPI(default_response_class=CanonicalJSONResponse)
    app.state.store = store
    if allow_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(allow_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ApiError)
    def _api_error(_request, exc: ApiError):
        return CanonicalJSONResponse(exc.to_obj(), status_code=exc.status)

    @app.exception_handler(ProviderError)
    def _provider_error(_request, exc: ProviderError):
        error = ApiError(
            502, "provider_error", exc.detail, provider_kind=exc.kind
        )
        return CanonicalJSONResponse(error.to_obj(), status_code=error.status)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(payload: dict | None = Body(default=None)):
        body = payload or {}
        _require_obj(body, "body")
        constraints = _engine(
            lambda: constraint_set_from_obj(body.get("constraints", []))
        )
        provider_cfg = _engine(
            lambda: provider_cfg_from_obj(body.get("provider_cfg", {}))
        )
        repair_rounds = body.get("repair_rounds", 2)
        if isinstance(repair_rounds, bool) or not isinstance(repair_rounds, int):
            raise ApiError(400, "validation_error", "'repair_rounds' must be an integer")
        session = _engine(
            lambda: store.create(constraints, provider_cfg, repair_rounds)
        )
        return {"id": session.id}

    @app.get("/sessions")
    def get_sessions():
        return {"sessions": store.summaries()}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_to_obj(store.get(session_id))

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, payload: dict = Body(...)):
        body = _require_obj(payload, "body")
        session = store.get(session_id)
        constraints = None
        if "constraints" in body:
            constraints = _engine(
                lambda: constraint_set_from_obj(body["constraints"])
            )
            session = replace(session, constraints=constraints)
        req, seed = _request_from_obj(body, session)
        result = _engine(
            lambda: store.submit_turn(session_id, req, seed, constraints=constraints)
        )
        return turn_result_to_obj(result)

    @app.post("/validate")
    def post_validate(payload: dict = Body(...)):
        body = _require_obj(payload, "body")
        doc = _engine(lambda: document_from_obj(body.get("doc")))
        constraints = _engine(
            lambda: constraint_set_from_obj(body.get("constraints", []))
        )
        violations = validate_doc(doc, constraints)
        return {"violations": [violation_to_obj(v) for v in violations]}

    @app.post("/optimize")
    def post_optimize(payload: dict = Body(...)):
        body = _require_obj(payload, "body")
        spec = _engine(lambda: command_spec_from_obj(body.get("spec")))
        layout_spec = _engine(lambda: layout_spec_from_obj(body.get("layout_spec")))
        params = _engine(lambda: params_from_obj(body.get("params")))
        topic = body.get("topic", "")
        if not isinstance(topic, str):
            raise ApiError(400, "validation_error", "'topic' must be a string")
        layout = _engine(lambda: optimize(spec, layout_spec, params))
        doc = _engine(lambda: layout_to_document(layout, layout_spec, topic))
        return {"layout": layout_to_obj(layout), "document": document_to_obj(doc)}

    @app.post("/hotkeys")
    def post_hotkeys(payload: dict = Body(...)):
        body = _require_obj(payload, "body")
        doc = _engine(lambda: document_from_obj(body.get("doc")))
        table = None
        if body.get("conventions") is not None:
            table = _engine(lambda: conventions_from_obj(body["conventions"]))
        assigned = _engine(lambda: assign_hotkeys(doc, table))
        return document_to_obj(assigned)

    @app.get("/templates")
    def get_templates():
        merged = dict(BUILTIN_TEMPLATES)
        if templates:
            merged.update(templates)
        return {
            "templates": [
                {
                    "kind": kind.value,
                    "template": merged[kind],
                    "slots": TEMPLATE_SLOTS[kind],
                }
                for kind in BUILTIN_TEMPLATES
            ]
        }

    return app
