"""Dialogue types and the designer-prompt templates for each interaction kind.

Templates are plain text with `{{slot}}` placeholders. Rendering fills the
slots from an InteractionRequest; a directory of override files (one per
kind, `<Kind>.txt`) can replace any built-in template at startup.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping

from menucraft.constraints import (
    ConstraintSet,
    ExactTabCount,
    UniqueHotkeys,
    constraint_clause,
)
from menucraft.model import MenuDocument

ROLE_SYSTEM = "system"
ROLE_DESIGNER = "designer"
ROLE_ASSISTANT = "assistant"
_ROLES = (ROLE_SYSTEM, ROLE_DESIGNER, ROLE_ASSISTANT)


class PromptError(ValueError):
    """An InteractionRequest is missing a field its kind requires."""


class InteractionKind(str, Enum):
    TOPIC_DESIGN = "TopicDesign"
    COMMAND_DESIGN = "CommandDesign"
    COMMAND_RECOMMEND = "CommandRecommend"
    NAME_RECOMMEND = "NameRecommend"
    HOTKEY_RECOMMEND = "HotkeyRecommend"
    ELABORATE = "Elaborate"
    FREE_FORM = "FreeForm"


@dataclass(frozen=True)
class Message:
    role: str
    text: str

    def __post_init__(self) -> None:
        if self.role not in _ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.text:
            raise ValueError("message text must be non-empty")


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "messages", tuple(self.messages))
        if self.messages and self.messages[0].role != ROLE_SYSTEM:
            raise ValueError("a transcript must start with the system message")
        for m in self.messages[1:]:
            if m.role == ROLE_SYSTEM:
                raise ValueError("only the first message may have the system role")

    def __iter__(self):
        return iter(self.messages)

    def __len__(self) -> int:
        return len(self.messages)

    def append(self, message: Message) -> "Transcript":
        return Transcript(self.messages + (message,))

    def last(self, role: str) -> Message | None:
        for m in reversed(self.messages):
            if m.role == role:
                return m
        return None


def window(t: Transcript, max_chars: int) -> Transcript:
    """Keep the system message plus the newest messages within the budget.

    Oldest non-system messages go first, two at a time so designer/assistant
    exchanges drop together.
    """
    if not t.messages:
        return t
    system = t.messages[0]
    if max_chars < len(system.text):
        raise ValueError("window budget is smaller than the system message")
    rest = list(t.messages[1:])
    while rest and len(system.text) + sum(len(m.text) for m in rest) > max_chars:
        del rest[: 2 if len(rest) >= 2 else 1]
    return Transcript((system, *rest))


@dataclass(frozen=True)
class InteractionRequest:
    kind: InteractionKind
    topic: str | None = None
    constraints: ConstraintSet = ConstraintSet()
    commands: tuple[str, ...] | None = None
    tabs: tuple[str, ...] | None = None
    context_doc: MenuDocument | None = None
    free_text: str | None = None
    top_k: int | None = None

    def __post_init__(self) -> None:
        if self.commands is not None:
            object.__setattr__(self, "commands", tuple(self.commands))
        if self.tabs is not None:
            object.__setattr__(self, "tabs", tuple(self.tabs))


_INIT_PROMPT = (
    "I want you to act as an AI-Assisted Menu Designer, called MenuCraft. "
    "You will come up with design ideas for menu user interfaces that make "
    "apps easier to use. You may suggest menu design apps for a topic, "
    "arrange commands as linear or hierarchal menus, group the commands as "
    "tabs, suggest command names, add or suggest hot keys for the commands, "
    "and so on - but the aim is to design a menu that users find satisfying "
    "to use, meaning select good names for commands, prioritize frequently "
    "used commands for each tab of menu as the top, and put commands with "
    "close logical operations in the same tab. If you understand the your "
    "responsibilities, introduce yourself in short and asks for the user "
    "request."
)


def init_prompt() -> Message:
    return Message(ROLE_SYSTEM, _INIT_PROMPT)


MENU_FORMAT_STANZA = "```json\nTab: list of commands\n```"
RECOMMEND_FORMAT_STANZA = "```json\ncommand name: reason\n```"
ELABORATE_FORMAT_STANZA = "```\ntab name, command: short elaboration\n```"

BUILTIN_TEMPLATES: dict[InteractionKind, str] = {
    InteractionKind.TOPIC_DESIGN: (
        "Create a menu for a {{topic}}{{tab_count}}.{{constraints}} "
        "Please answer in the following format:\n" + MENU_FORMAT_STANZA
    ),
    InteractionKind.COMMAND_DESIGN: (
        "Design a menu for a {{topic}} only based on the provided commands "
        "and tabs. Each tab should have the most frequently used commands as "
        "its top, and commands with close logical operations should be "
        "grouped together as tabs. To show some of the commands in a tab are "
        "more related, you may use some subgroups for each tab."
        "{{constraints}}\n\n"
        "Commands provided (unordered):\n[{{commands}}]\n"
        "Tabs provided (unordered):\n[{{tabs}}]\n"
        "Please answer in the following format:\n" + MENU_FORMAT_STANZA
    ),
    InteractionKind.COMMAND_RECOMMEND: (
        "My app menu design already includes {{existing}} under the "
        "`{{tab}}` tab. What other commands should I include under this "
        "tab?{{constraints}}\n"
        "Please answer in the following format\n" + RECOMMEND_FORMAT_STANZA
    ),
    InteractionKind.NAME_RECOMMEND: (
        "There is a nameless tab on my menu design that includes commands "
        "such as {{examples}}. Please suggest top best {{top_k}} names for "
        "this tab.{{constraints}}"
    ),
    InteractionKind.HOTKEY_RECOMMEND: (
        "Add shortcut for each command{{unique_clause}}.{{constraints}}"
    ),
    InteractionKind.ELABORATE: (
        "Provide a short elaboration on the designed menu commands{{scope}}."
        "{{constraints}} The format should be as follows:\n"
        + ELABORATE_FORMAT_STANZA
    ),
}

# Slot metadata surfaced alongside raw templates (the UI's palette).
TEMPLATE_SLOTS: dict[InteractionKind, list[dict]] = {
    InteractionKind.TOPIC_DESIGN: [
        {"name": "topic", "required": True, "description": "what the app is for"},
        {"name": "tab_count", "required": False, "description": "filled from an ExactTabCount constraint"},
        {"name": "constraints", "required": False, "description": "remaining constraint clauses"},
    ],
    InteractionKind.COMMAND_DESIGN: [
        {"name": "topic", "required": True, "description": "what the app is for"},
        {"name": "commands", "required": True, "description": "command names, shuffled"},
        {"name": "tabs", "required": True, "description": "tab names, shuffled"},
        {"name": "constraints", "required": False, "description": "constraint clauses"},
    ],
    InteractionKind.COMMAND_RECOMMEND: [
        {"name": "existing", "required": True, "description": "commands already under the tab"},
        {"name": "tab", "required": True, "description": "the tab to extend"},
        {"name": "constraints", "required": False, "description": "constraint clauses"},
    ],
    InteractionKind.NAME_RECOMMEND: [
        {"name": "examples", "required": True, "description": "sample commands from the nameless tab"},
        {"name": "top_k", "required": True, "description": "how many names to suggest"},
        {"name": "constraints", "required": False, "description": "constraint clauses"},
    ],
    InteractionKind.HOTKEY_RECOMMEND: [
        {"name": "unique_clause", "required": False, "description": "filled from a UniqueHotkeys constraint"},
        {"name": "constraints", "required": False, "description": "remaining constraint clauses"},
    ],
    InteractionKind.ELABORATE: [
        {"name": "scope", "required": False, "description": "filled from the topic"},
        {"name": "constraints", "required": False, "description": "constraint clauses"},
    ],
}

_SLOT_RE = re.compile(r"\{\{(\w+)\}\}")


def _fill(template: str, values: Mapping[str, str]) -> str:
    return _SLOT_RE.sub(lambda m: values.get(m.group(1), m.group(0)), template)


def _clauses(constraints, exclude: type | None = None) -> str:
    parts = [
        constraint_clause(c)
        for c in constraints
        if exclude is None or not isinstance(c, exclude)
    ]
    return "".join(f" {p}" for p in parts)


def _quoted_list(names, quote: str) -> str:
    quoted = [f"{quote}{n}{quote}" for n in names]
    if len(quoted) == 1:
        return quoted[0]
    return ", ".join(quoted[:-1]) + " and " + quoted[-1]


def _require(req: InteractionRequest, field_name: str) -> None:
    if getattr(req, field_name) in (None, (), ""):
        raise PromptError(
            f"{req.kind.value} request requires {field_name}"
        )


def render(
    req: InteractionRequest,
    seed: int = 0,
    templates: Mapping[InteractionKind, str] | None = None,
) -> Message:
    """Produce the designer message for a request. Deterministic per seed."""
    if req.kind is InteractionKind.FREE_FORM:
        _require(req, "free_text")
        return Message(ROLE_DESIGNER, req.free_text)

    table = dict(BUILTIN_TEMPLATES)
    if templates:
        table.update(templates)
    template = table[req.kind]
    values: dict[str, str] = {}

    if req.kind is InteractionKind.TOPIC_DESIGN:
        _require(req, "topic")
        values["topic"] = req.topic
        exact = req.constraints.find(ExactTabCount)
        values["tab_count"] = f" with {exact.n} tabs" if exact else ""
        values["constraints"] = _clauses(req.constraints, exclude=ExactTabCount)
    elif req.kind is InteractionKind.COMMAND_DESIGN:
        _require(req, "topic")
        _require(req, "commands")
        _require(req, "tabs")
        rng = random.Random(seed)
        commands = list(req.commands)
        tabs = list(req.tabs)
        rng.shuffle(commands)
        rng.shuffle(tabs)
        values["topic"] = req.topic
        values["commands"] = ", ".join(f"`{c}`" for c in commands)
        values["tabs"] = ", ".join(f"`{t}`" for t in tabs)
        values["constraints"] = _clauses(req.constraints)
    elif req.kind is InteractionKind.COMMAND_RECOMMEND:
        _require(req, "commands")
        _require(req, "tabs")
        values["existing"] = _quoted_list(req.commands, "`")
        values["tab"] = req.tabs[0]
        values["constraints"] = _clauses(req.constraints)
    elif req.kind is InteractionKind.NAME_RECOMMEND:
        _require(req, "commands")
        _require(req, "top_k")
        values["examples"] = _quoted_list(req.commands, '"')
        values["top_k"] = str(req.top_k)
        values["constraints"] = _clauses(req.constraints)
    elif req.kind is InteractionKind.HOTKEY_RECOMMEND:
        _require(req, "context_doc")
        unique = req.constraints.find(UniqueHotkeys)
        values["unique_clause"] = (
            ", two different commands must not have the same shortcut"
            if unique
            else ""
        )
        values["constraints"] = _clauses(req.constraints, exclude=UniqueHotkeys)
    elif req.kind is InteractionKind.ELABORATE:
        _require(req, "context_doc")
        values["scope"] = f" for the {req.topic}" if req.topic else ""
        values["constraints"] = _clauses(req.constraints)
    else:  # pragma: no cover - enum is closed
        raise PromptError(f"unsupported kind {req.kind!r}")

    return Message(ROLE_DESIGNER, _fill(template, values))


def load_template_overrides(directory: str | Path) -> dict[InteractionKind, str]:
    """Read `<Kind>.txt` files from a directory; absent kinds keep built-ins."""
    path = Path(directory)
    if not path.is_dir():
        raise FileNotFoundError(f"template directory not found: {path}")
    overrides: dict[InteractionKind, str] = {}
    for kind in BUILTIN_TEMPLATES:
        candidate = path / f"{kind.value}.txt"
        if candidate.is_file():
            overrides[kind] = candidate.read_text(encoding="utf-8")
    return overrides


def message_to_obj(m: Message) -> dict:
    return {"role": m.role, "text": m.text}


def message_from_obj(obj) -> Message:
    if not isinstance(obj, dict):
        raise ValueError("message must be an object")
    return Message(str(obj.get("role")), str(obj.get("text")))
