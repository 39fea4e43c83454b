"""Menu document model: tabs, commands, groups, hotkeys, canonical JSON form.

Every other part of the engine builds on these value types. Documents are
immutable after construction; edits produce new documents.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

MODIFIER_ORDER = ("Ctrl", "Alt", "Shift", "Meta")
MAX_GROUP_DEPTH = 3

_FUNCTION_KEY_RE = re.compile(r"^f([1-9]|1[0-2])$", re.IGNORECASE)


class ModelError(ValueError):
    """An invariant of the menu model was violated."""


class HotkeyError(ModelError):
    """A hotkey string could not be parsed."""


class SchemaError(ModelError):
    """Document JSON did not match the canonical schema."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Hotkey:
    """A keyboard shortcut: zero or more modifiers plus one key.

    The key is either a single printable character (stored uppercase) or a
    function-key token F1..F12. The canonical text form lists modifiers in
    the fixed order Ctrl, Alt, Shift, Meta joined with "+", then the key.
    """

    modifiers: frozenset[str] = frozenset()
    key: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "modifiers", frozenset(self.modifiers))
        unknown = self.modifiers - set(MODIFIER_ORDER)
        if unknown:
            raise HotkeyError(f"unknown modifier: {sorted(unknown)[0]!r}")
        key = self.key
        if not key:
            raise HotkeyError("empty key")
        if _FUNCTION_KEY_RE.match(key):
            key = "F" + key[1:]
        elif len(key) == 1 and not key.isspace():
            key = key.upper()
        else:
            raise HotkeyError(f"invalid key: {key!r}")
        object.__setattr__(self, "key", key)

    def render(self) -> str:
        mods = [m for m in MODIFIER_ORDER if m in self.modifiers]
        return "+".join(mods + [self.key])

    def __str__(self) -> str:
        return self.render()


def parse_hotkey(text: str) -> Hotkey:
    """Parse a hotkey string like "ctrl+shift+s" into its canonical form.

    Parsing is case-insensitive; rendering the result gives the canonical
    string (e.g. "Ctrl+Shift+S"). Raises HotkeyError for unknown modifier
    tokens, duplicate modifiers, or a missing/invalid key.
    """
    if not text or not text.strip():
        raise HotkeyError("empty hotkey string")
    parts = text.strip().split("+")
    *mod_parts, key_part = parts
    canon_by_lower = {m.lower(): m for m in MODIFIER_ORDER}
    mods: set[str] = set()
    for raw in mod_parts:
        mod = canon_by_lower.get(raw.strip().lower())
        if mod is None:
            raise HotkeyError(f"unknown modifier: {raw.strip()!r}")
        if mod in mods:
            raise HotkeyError(f"duplicate modifier: {mod}")
        mods.add(mod)
    return Hotkey(frozenset(mods), key_part.strip())


@dataclass(frozen=True)
class Command:
    """A leaf menu entry. Hotkey, frequency and elaboration are optional."""

    name: str
    hotkey: Hotkey | None = None
    frequency: float | None = None
    elaboration: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("command name must be non-empty")
        if self.frequency is not None and self.frequency < 0:
            raise ModelError(f"command {self.name!r}: frequency must be non-negative")


@dataclass(frozen=True)
class Group:
    """A named group of items nested inside a tab (or another group)."""

    name: str
    items: tuple[MenuItem, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("group name must be non-empty")
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ModelError(f"group {self.name!r} must not be empty")
        if _group_depth(self) > MAX_GROUP_DEPTH:
            raise ModelError(
                f"group {self.name!r} exceeds the nesting limit of {MAX_GROUP_DEPTH}"
            )


MenuItem = Union[Command, Group]


def _group_depth(item: MenuItem) -> int:
    if isinstance(item, Command):
        return 0
    return 1 + max(_group_depth(child) for child in item.items)


@dataclass(frozen=True)
class Tab:
    """A top-level menu. Item order is significant; an empty tab is legal."""

    name: str
    items: tuple[MenuItem, ...] = ()

    def __post_init__(self) -> None:
        if not self.name:
            raise ModelError("tab name must be non-empty")
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class MenuDocument:
    """A whole menu system: an application topic plus ordered tabs."""

    app_topic: str = ""
    tabs: tuple[Tab, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "tabs", tuple(self.tabs))
        seen: dict[str, str] = {}
        for tab in self.tabs:
            key = tab.name.lower()
            if key in seen:
                raise ModelError(
                    f"duplicate tab name: {tab.name!r} collides with {seen[key]!r}"
                )
            seen[key] = tab.name

    def tab(self, name: str) -> Tab | None:
        """Look up a tab by name, case-insensitively."""
        wanted = name.lower()
        for tab in self.tabs:
            if tab.name.lower() == wanted:
                return tab
        return None


@dataclass(frozen=True)
class CommandPath:
    """Address of one command: tab name, enclosing group names, command name."""

    tab: str
    groups: tuple[str, ...] = ()
    command: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "groups", tuple(self.groups))

    def __str__(self) -> str:
        return "/".join((self.tab, *self.groups, self.command))


def leaf_commands(doc: MenuDocument) -> list[tuple[CommandPath, Command]]:
    """All commands of the document in document order, descending into groups."""
    out: list[tuple[CommandPath, Command]] = []

    def walk(items: tuple[MenuItem, ...], tab: str, groups: tuple[str, ...]) -> None:
        for item in items:
            if isinstance(item, Command):
                out.append((CommandPath(tab, groups, item.name), item))
            else:
                walk(item.items, tab, groups + (item.name,))

    for tab in doc.tabs:
        walk(tab.items, tab.name, ())
    return out


def resolve_path(doc: MenuDocument, path: CommandPath) -> Command | None:
    """First command matching the path in document order, or None."""
    for candidate, command in leaf_commands(doc):
        if candidate == path:
            return command
    return None


# --- canonical JSON serialization ------------------------------------------

def _item_to_obj(item: MenuItem) -> dict:
    if isinstance(item, Command):
        return {
            "kind": "command",
            "name": item.name,
            "hotkey": item.hotkey.render() if item.hotkey else None,
            "frequency": item.frequency,
            "elaboration": item.elaboration,
        }
    return {
        "kind": "group",
        "name": item.name,
        "items": [_item_to_obj(child) for child in item.items],
    }


def document_to_obj(doc: MenuDocument) -> dict:
    """The canonical JSON object form (keys in schema order)."""
    return {
        "app_topic": doc.app_topic,
        "tabs": [
            {"name": tab.name, "items": [_item_to_obj(i) for i in tab.items]}
            for tab in doc.tabs
        ],
    }


def dumps_canonical(obj) -> str:
    """The one JSON text style used everywhere: two-space indent, UTF-8."""
    return json.dumps(obj, indent=2, ensure_ascii=False)


def serialize(doc: MenuDocument) -> str:
    """Canonical JSON text for a document; deserialize() inverts it exactly."""
    return dumps_canonical(document_to_obj(doc))


def _require(obj: dict, key: str, types, path: str, *, nullable: bool = False):
    if key not in obj:
        raise SchemaError(f"missing key {key!r}", path)
    value = obj[key]
    if value is None and nullable:
        return None
    if not isinstance(value, types) or isinstance(value, bool):
        raise SchemaError(f"{key!r} has the wrong type", f"{path}.{key}")
    return value


def _item_from_obj(obj, path: str, depth: int) -> MenuItem:
    if not isinstance(obj, dict):
        raise SchemaError("item must be an object", path)
    kind = _require(obj, "kind", str, path)
    if kind == "command":
        allowed = {"kind", "name", "hotkey", "frequency", "elaboration"}
        extra = set(obj) - allowed
        if extra:
            raise SchemaError(f"unknown key {sorted(extra)[0]!r}", path)
        name = _require(obj, "name", str, path)
        hotkey_text = _require(obj, "hotkey", str, path, nullable=True)
        frequency = _require(obj, "frequency", (int, float), path, nullable=True)
        elaboration = _require(obj, "elaboration", str, path, nullable=True)
        try:
            hotkey = parse_hotkey(hotkey_text) if hotkey_text is not None else None
            return Command(name, hotkey, frequency, elaboration)
        except ModelError as exc:
            raise SchemaError(str(exc), path) from exc
    if kind == "group":
        extra = set(obj) - {"kind", "name", "items"}
        if extra:
            raise SchemaError(f"unknown key {sorted(extra)[0]!r}", path)
        if depth >= MAX_GROUP_DEPTH:
            raise SchemaError(
                f"group nesting exceeds the limit of {MAX_GROUP_DEPTH}", path
            )
        name = _require(obj, "name", str, path)
        raw_items = _require(obj, "items", list, path)
        items = [
            _item_from_obj(child, f"{path}.items[{i}]", depth + 1)
            for i, child in enumerate(raw_items)
        ]
        try:
            return Group(name, tuple(items))
        except ModelError as exc:
            raise SchemaError(str(exc), path) from exc
    raise SchemaError(f"unknown item kind {kind!r}", f"{path}.kind")


def document_from_obj(obj) -> MenuDocument:
    if not isinstance(obj, dict):
        raise SchemaError("document must be an object")
    extra = set(obj) - {"app_topic", "tabs"}
    if extra:
        raise SchemaError(f"unknown key {sorted(extra)[0]!r}")
    app_topic = _require(obj, "app_topic", str, "$")
    raw_tabs = _require(obj, "tabs", list, "$")
    tabs = []
    for i, raw_tab in enumerate(raw_tabs):
        path = f"$.tabs[{i}]"
        if not isinstance(raw_tab, dict):
            raise SchemaError("tab must be an object", path)
        extra = set(raw_tab) - {"name", "items"}
        if extra:
            raise SchemaError(f"unknown key {sorted(extra)[0]!r}", path)
        name = _require(raw_tab, "name", str, path)
        raw_items = _require(raw_tab, "items", list, path)
        items = [
            _item_from_obj(child, f"{path}.items[{j}]", 0)
            for j, child in enumerate(raw_items)
        ]
        try:
            tabs.append(Tab(name, tuple(items)))
        except ModelError as exc:
            raise SchemaError(str(exc), path) from exc
    try:
        return MenuDocument(app_topic, tuple(tabs))
    except ModelError as exc:
        raise SchemaError(str(exc), "$.tabs") from exc


def deserialize(text: str) -> MenuDocument:
    """Parse canonical document JSON; SchemaError names the offending path."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return document_from_obj(obj)
