"""Session state and the render → generate → parse → validate turn pipeline.

A submit appends the rendered designer prompt, asks the provider for a
reply, parses it, and validates any resulting document against the
session's constraints. While violations (or a parse mismatch) remain and
repair rounds are left, the violation description is sent back as a new
designer turn and the reply is re-parsed — the conversational correction
done manually in the source dialogues, mechanized. History is append-only;
corrections are new turns, never rewrites.
"""

from __future__ import annotations

import json
import secrets
import time
from dataclasses import dataclass, replace
from pathlib import Path

from menucraft.constraints import (
    ConstraintSet,
    Violation,
    constraint_set_from_obj,
    constraint_set_to_obj,
    describe_violations,
    validate,
    violation_to_obj,
)
from menucraft.model import (
    MenuDocument,
    SchemaError,
    document_from_obj,
    document_to_obj,
    dumps_canonical,
)
from menucraft.parsing import (
    MenuReply,
    NameListReply,
    ParsedReply,
    ProseReply,
    ReplyMismatchError,
    SuggestionReply,
    parse_reply,
)
from menucraft.prompts import (
    ROLE_DESIGNER,
    InteractionRequest,
    Message,
    Transcript,
    init_prompt,
    message_from_obj,
    message_to_obj,
    render,
)
from menucraft.providers import (
    ProviderConfig,
    ProviderError,
    provider_cfg_from_obj,
    provider_cfg_to_obj,
)

DEFAULT_REPAIR_ROUNDS = 2


@dataclass(frozen=True)
class Session:
    id: str
    transcript: Transcript
    current_doc: MenuDocument | None = None
    constraints: ConstraintSet = ConstraintSet()
    provider_cfg: ProviderConfig = ProviderConfig()
    repair_rounds: int = DEFAULT_REPAIR_ROUNDS
    created: float = 0.0
    updated: float = 0.0

    def __post_init__(self) -> None:
        if self.repair_rounds < 0:
            raise ValueError("repair_rounds must be non-negative")


@dataclass(frozen=True)
class TurnResult:
    reply: ParsedReply
    doc: MenuDocument | None
    violations: tuple[Violation, ...]
    rounds_used: int
    repaired: bool
    error: str | None = None


def new_session(
    constraints: ConstraintSet = ConstraintSet(),
    provider_cfg: ProviderConfig | None = None,
    repair_rounds: int = DEFAULT_REPAIR_ROUNDS,
    clock=time.time,
) -> Session:
    now = clock()
    return Session(
        id=secrets.token_hex(16),
        transcript=Transcript((init_prompt(),)),
        constraints=constraints,
        provider_cfg=provider_cfg or ProviderConfig(),
        repair_rounds=repair_rounds,
        created=now,
        updated=now,
    )


_FORMAT_FIX = (
    "I could not read your reply in the requested format ({detail}). "
    "Please answer again using exactly the requested format."
)


def _parse_and_validate(text: str, req: InteractionRequest, constraints: ConstraintSet):
    """One reply through parse + validate: (reply, violations, error_detail)."""
    try:
        reply = parse_reply(text, req.kind)
    except ReplyMismatchError as exc:
        return exc.fallback, [], str(exc)
    if isinstance(reply, MenuReply):
        return reply, validate(reply.doc, constraints), None
    return reply, [], None


def submit(
    session: Session,
    req: InteractionRequest,
    provider,
    seed: int = 0,
    templates=None,
    clock=time.time,
) -> tuple[Session, TurnResult]:
    """Run one designer turn, repairing violations conversationally.

    Provider errors propagate; the exception carries the session with the
    partial transcript under ``partial_session``.
    """
    t = session.transcript.append(render(req, seed=seed, templates=templates))

    def ask(current: Transcript) -> Transcript:
        try:
            reply_msg = provider.generate(current)
        except ProviderError as exc:
            exc.partial_session = _touched(session, current, session.current_doc, clock)
            raise
        return current.append(reply_msg)

    t = ask(t)
    reply, violations, error = _parse_and_validate(
        t.messages[-1].text, req, session.constraints
    )
    first_violations = list(violations)
    rounds_used = 0

    while rounds_used < session.repair_rounds and (violations or error):
        if error:
            corrective = _FORMAT_FIX.format(detail=error)
        else:
            corrective = describe_violations(violations)
        t = ask(t.append(Message(ROLE_DESIGNER, corrective)))
        rounds_used += 1
        reply, violations, error = _parse_and_validate(
            t.messages[-1].text, req, session.constraints
        )

    repaired = rounds_used >= 1 and violations != first_violations
    doc = reply.doc if isinstance(reply, MenuReply) else None
    clean = all(v.severity != "error" for v in violations)
    current_doc = doc if (doc is not None and clean) else session.current_doc
    updated_session = _touched(session, t, current_doc, clock)
    result = TurnResult(
        reply=reply,
        doc=doc,
        violations=tuple(violations),
        rounds_used=rounds_used,
        repaired=repaired,
        error=error,
    )
    return updated_session, result


def _touched(session: Session, t: Transcript, doc: MenuDocument | None, clock) -> Session:
    return replace(session, transcript=t, current_doc=doc, updated=clock())


# --- persistence --------------------------------------------------------------

def session_to_obj(session: Session) -> dict:
    return {
        "id": session.id,
        "created": session.created,
        "updated": session.updated,
        "repair_rounds": session.repair_rounds,
        "constraints": constraint_set_to_obj(session.constraints),
        "provider_cfg": provider_cfg_to_obj(session.provider_cfg),
        "transcript": [message_to_obj(m) for m in session.transcript],
        "current_doc": (
            document_to_obj(session.current_doc) if session.current_doc else None
        ),
    }


_SESSION_KEYS = {
    "id",
    "created",
    "updated",
    "repair_rounds",
    "constraints",
    "provider_cfg",
    "transcript",
    "current_doc",
}


def session_from_obj(obj) -> Session:
    if not isinstance(obj, dict):
        raise SchemaError("session must be an object")
    unknown = set(obj) - _SESSION_KEYS
    if unknown:
        raise SchemaError(f"unknown key {sorted(unknown)[0]!r}")
    for required in ("id", "transcript"):
        if required not in obj:
            raise SchemaError(f"missing key {required!r}")
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise SchemaError("'id' must be a non-empty string", "$.id")
    if not isinstance(obj["transcript"], list):
        raise SchemaError("'transcript' must be a list", "$.transcript")
    try:
        transcript = Transcript(
            tuple(message_from_obj(m) for m in obj["transcript"])
        )
        constraints = constraint_set_from_obj(obj.get("constraints", []))
        provider_cfg = provider_cfg_from_obj(obj.get("provider_cfg", {}))
        raw_doc = obj.get("current_doc")
        current_doc = document_from_obj(raw_doc) if raw_doc is not None else None
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    repair_rounds = obj.get("repair_rounds", DEFAULT_REPAIR_ROUNDS)
    if not isinstance(repair_rounds, int) or isinstance(repair_rounds, bool):
        raise SchemaError("'repair_rounds' must be an integer", "$.repair_rounds")
    created = obj.get("created", 0.0)
    updated = obj.get("updated", 0.0)
    for name, value in (("created", created), ("updated", updated)):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{name!r} must be a number", f"$.{name}")
    return Session(
        id=obj["id"],
        transcript=transcript,
        current_doc=current_doc,
        constraints=constraints,
        provider_cfg=provider_cfg,
        repair_rounds=repair_rounds,
        created=float(created),
        updated=float(updated),
    )


def save(session: Session, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{session.id}.json"
    path.write_text(dumps_canonical(session_to_obj(session)) + "\n", encoding="utf-8")
    return path


def load(path: str | Path) -> Session:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise SchemaError(f"cannot read session file {path}: {exc}") from exc
    return session_from_obj(obj)


def summary(session: Session) -> dict:
    return {
        "id": session.id,
        "created": session.created,
        "updated": session.updated,
        "turns": len(session.transcript),
        "has_doc": session.current_doc is not None,
        "constraints": len(session.constraints),
    }


def list_sessions(directory: str | Path) -> list[dict]:
    """Summaries of every session file, most recently updated first."""
    directory = Path(directory)
    if not directory.is_dir():
        return []
    summaries = []
    for path in sorted(directory.glob("*.json")):
        try:
            summaries.append(summary(load(path)))
        except SchemaError as exc:
            raise SchemaError(f"bad session file {path}: {exc}") from exc
    summaries.sort(key=lambda s: (-s["updated"], s["id"]))
    return summaries


def delete(directory: str | Path, session_id: str) -> bool:
    path = Path(directory) / f"{session_id}.json"
    if path.is_file():
        path.unlink()
        return True
    return False


# --- result serialization ------------------------------------------------------

def reply_to_obj(reply: ParsedReply) -> dict:
    if isinstance(reply, MenuReply):
        return {
            "type": "menu",
            "doc": document_to_obj(reply.doc),
            "prose_before": reply.prose_before,
            "prose_after": reply.prose_after,
            "warnings": list(reply.warnings),
        }
    if isinstance(reply, SuggestionReply):
        return {
            "type": "suggestions",
            "entries": [[name, text] for name, text in reply.entries],
        }
    if isinstance(reply, NameListReply):
        return {"type": "names", "names": list(reply.names)}
    if isinstance(reply, ProseReply):
        return {"type": "prose", "text": reply.text}
    raise TypeError(f"not a ParsedReply: {type(reply).__name__}")


def turn_result_to_obj(result: TurnResult) -> dict:
    return {
        "reply": reply_to_obj(result.reply),
        "doc": document_to_obj(result.doc) if result.doc is not None else None,
        "violations": [violation_to_obj(v) for v in result.violations],
        "rounds_used": result.rounds_used,
        "repaired": result.repaired,
        "error": result.error,
    }
