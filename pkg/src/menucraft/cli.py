"""Command-line entry points: design turns, offline tools, and the server.

Every command accepts --json for machine-readable output. Exit status is 0
on success, 1 on engine errors (and on validation findings for `validate`),
2 on usage errors.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from menucraft.constraints import (
    Constraint,
    ConstraintError,
    ConstraintSet,
    ExactTabCount,
    ForbiddenHotkeys,
    MaxCommandsPerTab,
    RequiredPlacement,
    RequiredTabs,
    UniqueCommandNames,
    UniqueHotkeys,
    constraint_set_from_obj,
    validate,
    violation_to_obj,
)
from menucraft.hotkeys import assign_hotkeys, load_conventions
from menucraft.model import (
    deserialize,
    document_to_obj,
    dumps_canonical,
    serialize,
)
from menucraft.optimizer import (
    LayoutSpec,
    OptimizerParams,
    command_spec_from_obj,
    layout_to_document,
    layout_to_obj,
    optimize as optimize_layout,
)
from menucraft.prompts import InteractionKind, InteractionRequest
from menucraft.providers import HttpProvider, ProviderError, load_script
from menucraft.server import DEFAULT_PORT, create_app
from menucraft.session import (
    Session,
    delete as delete_session,
    list_sessions,
    new_session,
    session_from_obj,
    session_to_obj,
    submit,
    turn_result_to_obj,
)

DEFAULT_SESSIONS_DIR = Path.home() / ".menucraft" / "sessions"


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


def parse_constraint(text: str) -> Constraint:
    """One constraint from the CLI form, e.g. "MaxCommandsPerTab:6"."""
    name, _, rest = text.partition(":")
    try:
        if name == "MaxCommandsPerTab":
            return MaxCommandsPerTab(int(rest))
        if name == "ExactTabCount":
            return ExactTabCount(int(rest))
        if name == "RequiredTabs":
            return RequiredTabs(tuple(t.strip() for t in rest.split(",") if t.strip()))
        if name == "RequiredPlacement":
            command, _, tab = rest.partition(":")
            if not command or not tab:
                raise ValueError("expected RequiredPlacement:<command>:<tab>")
            return RequiredPlacement(command, tab)
        if name == "UniqueHotkeys":
            return UniqueHotkeys()
        if name == "UniqueCommandNames":
            return UniqueCommandNames(rest) if rest else UniqueCommandNames()
        if name == "ForbiddenHotkeys":
            from menucraft.model import parse_hotkey

            keys = [parse_hotkey(h.strip()) for h in rest.split(",") if h.strip()]
            if not keys:
                raise ValueError("expected ForbiddenHotkeys:<hotkey>[,...]")
            return ForbiddenHotkeys(frozenset(keys))
    except (ValueError, ConstraintError) as exc:
        raise click.UsageError(f"bad constraint {text!r}: {exc}") from exc
    raise click.UsageError(f"unknown constraint type {name!r}")


def _load_session_file(path: Path) -> Session:
    try:
        return session_from_obj(json.loads(path.read_text(encoding="utf-8")))
    except ValueError as exc:
        raise _fail(f"cannot load session {path}: {exc}") from exc


def _save_session_file(session: Session, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        dumps_canonical(session_to_obj(session)) + "\n", encoding="utf-8"
    )


def _echo_json(obj) -> None:
    click.echo(dumps_canonical(obj))


@click.group()
@click.version_option(package_name="menucraft")
def main() -> None:
    """AI-assisted menu design engine."""


@main.command()
@click.option("--topic", required=True, help="What the app is for.")
@click.option("--tabs", type=int, default=None, help="Exact tab count to request.")
@click.option(
    "--constraint",
    "constraint_texts",
    multiple=True,
    help='Constraint like "MaxCommandsPerTab:6"; repeatable.',
)
@click.option(
    "--session",
    "session_file",
    type=click.Path(path_type=Path),
    default=None,
    help="Session file to continue and update.",
)
@click.option(
    "--script",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Scripted provider file instead of a live back end.",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Print the full turn result.")
def design(topic, tabs, constraint_texts, session_file, script, seed, as_json):
    """Run a topic-design turn and print the resulting document."""
    constraints = [ExactTabCount(tabs)] if tabs else []
    constraints += [parse_constraint(t) for t in constraint_texts]
    if session_file and session_file.exists():
        session = _load_session_file(session_file)
        if constraints:
            session = replace(session, constraints=ConstraintSet(tuple(constraints)))
    else:
        session = new_session(constraints=ConstraintSet(tuple(constraints)))
    provider = load_script(script) if script else HttpProvider(session.provider_cfg)
    req = InteractionRequest(
        kind=InteractionKind.TOPIC_DESIGN,
        topic=topic,
        constraints=session.constraints,
    )
    try:
        session, result = submit(session, req, provider, seed=seed)
    except ProviderError as exc:
        raise _fail(str(exc)) from exc
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    if session_file:
        _save_session_file(session, session_file)
    if as_json:
        _echo_json(turn_result_to_obj(result))
        return
    if result.doc is not None:
        click.echo(serialize(result.doc))
    else:
        click.echo(getattr(result.reply, "text", ""))
    for violation in result.violations:
        click.echo(f"violation: {violation.message}", err=True)


@main.command()
@click.option(
    "--spec",
    "spec_file",
    required=True,
    type=click.Path(exists=True, path_type=Path),
    help="Command spec JSON (commands, frequency, association).",
)
@click.option("--tabs", required=True, help="Comma-separated tab names.")
@click.option("--capacity", type=int, default=None, help="Max commands per tab.")
@click.option("--alpha", type=float, default=1.0, show_default=True)
@click.option("--beta", type=float, default=1.0, show_default=True)
@click.option("--lambda", "lambda_", type=float, default=1.0, show_default=True)
@click.option("--gamma", type=float, default=1.0, show_default=True)
@click.option("--move-budget", type=int, default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--topic", default="", help="Topic recorded on the document.")
@click.option("--json", "as_json", is_flag=True)
def optimize(
    spec_file, tabs, capacity, alpha, beta, lambda_, gamma, move_budget, seed, topic, as_json
):
    """Place commands into tabs to minimize the layout objective."""
    try:
        spec = command_spec_from_obj(json.loads(spec_file.read_text(encoding="utf-8")))
        layout_spec = LayoutSpec(
            tuple(t.strip() for t in tabs.split(",") if t.strip()), capacity
        )
        params = OptimizerParams(alpha, beta, lambda_, gamma, move_budget, seed)
        layout = optimize_layout(spec, layout_spec, params)
        doc = layout_to_document(layout, layout_spec, topic)
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    if as_json:
        _echo_json(
            {"layout": layout_to_obj(layout), "document": document_to_obj(doc)}
        )
        return
    click.echo(serialize(doc))
    click.echo(f"objective: {layout.objective}")


@main.command()
@click.option(
    "--doc",
    "doc_file",
    required=True,
    type=click.Path(exists=True, path_type=Path),
    help="Document JSON in the canonical schema.",
)
@click.option(
    "--conventions",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Convention table JSON replacing the built-in one.",
)
@click.option("--json", "as_json", is_flag=True)
def hotkeys(doc_file, conventions, as_json):
    """Assign collision-free hotkeys to every command of a document."""
    try:
        doc = deserialize(doc_file.read_text(encoding="utf-8"))
        table = load_conventions(conventions) if conventions else None
        assigned = assign_hotkeys(doc, table)
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    if as_json:
        _echo_json(document_to_obj(assigned))
    else:
        click.echo(serialize(assigned))


@main.command("validate")
@click.option(
    "--doc",
    "doc_file",
    required=True,
    type=click.Path(exists=True, path_type=Path),
)
@click.option(
    "--constraints",
    "constraints_file",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Constraint list JSON.",
)
@click.option("--constraint", "constraint_texts", multiple=True)
@click.option("--json", "as_json", is_flag=True)
def validate_command(doc_file, constraints_file, constraint_texts, as_json):
    """Check a document against constraints; exit 0 only when clean."""
    items: list[Constraint] = []
    try:
        doc = deserialize(doc_file.read_text(encoding="utf-8"))
        if constraints_file:
            loaded = constraint_set_from_obj(
                json.loads(constraints_file.read_text(encoding="utf-8"))
            )
            items.extend(loaded)
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    items.extend(parse_constraint(t) for t in constraint_texts)
    violations = validate(doc, ConstraintSet(tuple(items)))
    if as_json:
        _echo_json({"violations": [violation_to_obj(v) for v in violations]})
    else:
        for violation in violations:
            click.echo(violation.message)
    if violations:
        sys.exit(1)


@main.group("session")
def session_group() -> None:
    """Inspect and manage saved sessions."""


_DIR_OPTION = click.option(
    "--dir",
    "directory",
    type=click.Path(path_type=Path),
    default=DEFAULT_SESSIONS_DIR,
    show_default=True,
    help="Directory of session files.",
)


@session_group.command("list")
@_DIR_OPTION
@click.option("--json", "as_json", is_flag=True)
def session_list(directory, as_json):
    """List sessions, most recently updated first."""
    try:
        summaries = list_sessions(directory)
    except ValueError as exc:
        raise _fail(str(exc)) from exc
    if as_json:
        _echo_json({"sessions": summaries})
        return
    for entry in summaries:
        click.echo(
            f"{entry['id']}  turns={entry['turns']}  "
            f"doc={'yes' if entry['has_doc'] else 'no'}"
        )


@session_group.command("show")
@click.argument("session_id")
@_DIR_OPTION
@click.option("--json", "as_json", is_flag=True)
def session_show(session_id, directory, as_json):
    """Print one session in full."""
    path = Path(directory) / f"{session_id}.json"
    if not path.is_file():
        raise _fail(f"no session {session_id!r} in {directory}")
    session = _load_session_file(path)
    _echo_json(session_to_obj(session)) if as_json else click.echo(
        dumps_canonical(session_to_obj(session))
    )


@session_group.command("delete")
@click.argument("session_id")
@_DIR_OPTION
@click.option("--json", "as_json", is_flag=True)
def session_delete(session_id, directory, as_json):
    """Remove one session file."""
    removed = delete_session(directory, session_id)
    if not removed:
        raise _fail(f"no session {session_id!r} in {directory}")
    if as_json:
        _echo_json({"deleted": session_id})
    else:
        click.echo(f"deleted {session_id}")


@main.command()
@click.option("--port", type=int, default=DEFAULT_PORT, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option(
    "--sessions",
    "sessions_dir",
    type=click.Path(path_type=Path),
    default=DEFAULT_SESSIONS_DIR,
    show_default=True,
)
@click.option(
    "--script",
    type=click.Path(exists=True, path_type=Path),
    default=None,
    help="Serve every session from this scripted provider file.",
)
@click.option(
    "--templates",
    "template_dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory of template override files.",
)
@click.option("--allow-origin", "allow_origins", multiple=True)
@click.option("--json", "as_json", is_flag=True, help="Print the effective config.")
def serve(port, host, sessions_dir, script, template_dir, allow_origins, as_json):
    """Run the HTTP API."""
    import uvicorn

    if script:
        provider_factory = lambda cfg: load_script(script)  # noqa: E731
    else:
        provider_factory = None
    app = create_app(
        sessions_dir=sessions_dir,
        provider_factory=provider_factory,
        template_dir=template_dir,
        allow_origins=tuple(allow_origins),
    )
    if as_json:
        _echo_json(
            {
                "host": host,
                "port": port,
                "sessions_dir": str(sessions_dir),
                "script": str(script) if script else None,
            }
        )
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
