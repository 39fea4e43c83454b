"""Collision-free hotkey assignment over whole documents.

Assignment walks commands in document order. Each command first consults a
convention table (well-known pairs like Undo / Ctrl+Z), then descends a
deterministic candidate ladder built from the letters of its name; the
first candidate not already in use wins. Pre-set hotkeys are never touched
and reserve their slot before anything is assigned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from menucraft.model import (
    Command,
    CommandPath,
    Group,
    Hotkey,
    MenuDocument,
    MenuItem,
    ModelError,
    Tab,
    leaf_commands,
    parse_hotkey,
)


class AssignmentError(ValueError):
    """No free candidate remained for a command."""

    def __init__(self, message: str, path: CommandPath):
        super().__init__(message)
        self.path = path


def normalize_name(name: str) -> str:
    """Lookup form of a command name: trailing "..." trimmed, lowercased."""
    name = name.strip()
    while name.endswith("..."):
        name = name[:-3].rstrip()
    return name.lower()


@dataclass(frozen=True)
class ConventionTable:
    """Well-known command-name to hotkey pairs, keyed by normalized name."""

    entries: tuple[tuple[str, Hotkey], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))

    def lookup(self, command_name: str) -> Hotkey | None:
        wanted = normalize_name(command_name)
        for name, hotkey in self.entries:
            if name == wanted:
                return hotkey
        return None

    def __len__(self) -> int:
        return len(self.entries)


def conventions_from_obj(obj) -> ConventionTable:
    if not isinstance(obj, dict):
        raise ModelError("convention table must be an object of name: hotkey")
    entries = []
    for name, text in obj.items():
        if not isinstance(name, str) or not isinstance(text, str):
            raise ModelError("convention table must map names to hotkey strings")
        entries.append((normalize_name(name), parse_hotkey(text)))
    return ConventionTable(tuple(entries))


def load_conventions(path: str | Path) -> ConventionTable:
    with open(path, encoding="utf-8") as fh:
        return conventions_from_obj(json.load(fh))


def builtin_conventions() -> ConventionTable:
    text = resources.files("menucraft").joinpath("data/conventions.json").read_text(
        encoding="utf-8"
    )
    return conventions_from_obj(json.loads(text))


def candidate_hotkeys(name: str, table: ConventionTable):
    """Candidates for a command, best first; finite, deterministic."""
    hit = table.lookup(name)
    if hit is not None:
        yield hit
    letters = [c for c in name if c.isalpha()]
    if not letters:
        return
    first, rest = letters[0], letters[1:]
    yield Hotkey(frozenset({"Ctrl"}), first)
    yield Hotkey(frozenset({"Ctrl", "Shift"}), first)
    for c in rest:
        yield Hotkey(frozenset({"Ctrl"}), c)
        yield Hotkey(frozenset({"Ctrl", "Shift"}), c)
    for c in letters:
        yield Hotkey(frozenset({"Ctrl", "Alt"}), c)


def assign_hotkeys(
    doc: MenuDocument, table: ConventionTable | None = None
) -> MenuDocument:
    """Give every command a hotkey, keeping all hotkeys pairwise distinct.

    Commands that already carry a hotkey keep it; those hotkeys are reserved
    up front, so a later preset beats an earlier ladder choice. Presets are
    trusted: if the input already holds duplicates, they are preserved as-is.
    """
    if table is None:
        table = builtin_conventions()
    used = {cmd.hotkey.render() for _path, cmd in leaf_commands(doc) if cmd.hotkey}

    def fill(items: tuple[MenuItem, ...], tab: str, groups: tuple[str, ...]):
        out = []
        for item in items:
            if isinstance(item, Group):
                out.append(
                    Group(item.name, tuple(fill(item.items, tab, groups + (item.name,))))
                )
            elif item.hotkey is not None:
                out.append(item)
            else:
                out.append(replace(item, hotkey=_pick(item, tab, groups, table, used)))
        return out

    tabs = tuple(Tab(t.name, tuple(fill(t.items, t.name, ()))) for t in doc.tabs)
    return MenuDocument(doc.app_topic, tabs)


def _pick(
    command: Command,
    tab: str,
    groups: tuple[str, ...],
    table: ConventionTable,
    used: set[str],
) -> Hotkey:
    for candidate in candidate_hotkeys(command.name, table):
        rendered = candidate.render()
        if rendered not in used:
            used.add(rendered)
            return candidate
    path = CommandPath(tab, groups, command.name)
    raise AssignmentError(f"no free hotkey candidate for command {path}", path)


def find_collisions(doc: MenuDocument) -> list[tuple[Hotkey, list[CommandPath]]]:
    """Hotkeys held by two or more commands, with every holder's path."""
    holders: dict[str, tuple[Hotkey, list[CommandPath]]] = {}
    for path, cmd in leaf_commands(doc):
        if cmd.hotkey is None:
            continue
        entry = holders.setdefault(cmd.hotkey.render(), (cmd.hotkey, []))
        entry[1].append(path)
    return [(hotkey, paths) for hotkey, paths in holders.values() if len(paths) >= 2]
