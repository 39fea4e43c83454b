"""Declarative design constraints and the validator that reports violations.

Constraints travel in two directions: rendered forward into designer prompts
as natural-language clauses, and checked backward against parsed replies,
where each breach becomes a Violation whose message can be sent verbatim as
a corrective dialogue turn.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from menucraft.model import (
    CommandPath,
    Hotkey,
    MenuDocument,
    Tab,
    leaf_commands,
    parse_hotkey,
)

SCOPE_GLOBAL = "global"
SCOPE_PER_TAB = "per-tab"


class ConstraintError(ValueError):
    """A constraint definition (or its JSON form) is invalid."""


@dataclass(frozen=True)
class MaxCommandsPerTab:
    """No tab may hold more than `limit` commands, counted through groups."""

    limit: int

    def __post_init__(self) -> None:
        if self.limit < 1:
            raise ConstraintError("MaxCommandsPerTab limit must be positive")


@dataclass(frozen=True)
class ExactTabCount:
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConstraintError("ExactTabCount n must be positive")


@dataclass(frozen=True)
class RequiredTabs:
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ConstraintError("RequiredTabs needs at least one name")


@dataclass(frozen=True)
class RequiredPlacement:
    command: str
    tab: str

    def __post_init__(self) -> None:
        if not self.command or not self.tab:
            raise ConstraintError("RequiredPlacement needs a command and a tab")


@dataclass(frozen=True)
class UniqueHotkeys:
    """No two commands anywhere in the document may share a hotkey."""


@dataclass(frozen=True)
class UniqueCommandNames:
    scope: str = SCOPE_GLOBAL

    def __post_init__(self) -> None:
        if self.scope not in (SCOPE_GLOBAL, SCOPE_PER_TAB):
            raise ConstraintError(f"unknown scope {self.scope!r}")


@dataclass(frozen=True)
class ForbiddenHotkeys:
    hotkeys: frozenset[Hotkey]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hotkeys", frozenset(self.hotkeys))


Constraint = Union[
    MaxCommandsPerTab,
    ExactTabCount,
    RequiredTabs,
    RequiredPlacement,
    UniqueHotkeys,
    UniqueCommandNames,
    ForbiddenHotkeys,
]


@dataclass(frozen=True)
class Violation:
    """One breach of one constraint, with a message fit for a chat turn."""

    constraint: Constraint
    paths: tuple[Union[CommandPath, str], ...]
    message: str
    severity: str = "error"

    def path_strings(self) -> list[str]:
        return [str(p) for p in self.paths]


@dataclass(frozen=True)
class ConstraintSet:
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def __iter__(self):
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def __bool__(self) -> bool:
        return bool(self.constraints)

    def find(self, cls) -> Constraint | None:
        for c in self.constraints:
            if isinstance(c, cls):
                return c
        return None


def _tab_leaves(tab: Tab) -> list[tuple[CommandPath, object]]:
    return [
        (path, cmd)
        for path, cmd in leaf_commands(MenuDocument("", (tab,)))
    ]


def _join_phrase(parts: list[str]) -> str:
    if len(parts) == 1:
        return parts[0]
    return ", ".join(parts[:-1]) + " and " + parts[-1]


def _names_phrase(names: list[str]) -> str:
    return _join_phrase([f"`{n}`" for n in names])


def _check_max_commands(c: MaxCommandsPerTab, doc: MenuDocument) -> list[Violation]:
    out = []
    for tab in doc.tabs:
        count = len(_tab_leaves(tab))
        if count > c.limit:
            out.append(
                Violation(
                    c,
                    (tab.name,),
                    f"Tabs should not have more than {c.limit} commands each: "
                    f"the `{tab.name}` tab has {count} commands.",
                )
            )
    return out


def _check_exact_tab_count(c: ExactTabCount, doc: MenuDocument) -> list[Violation]:
    if len(doc.tabs) == c.n:
        return []
    return [
        Violation(
            c,
            tuple(tab.name for tab in doc.tabs),
            f"The menu should have exactly {c.n} tabs, but it has {len(doc.tabs)}.",
        )
    ]


def _check_required_tabs(c: RequiredTabs, doc: MenuDocument) -> list[Violation]:
    present = {tab.name.lower() for tab in doc.tabs}
    return [
        Violation(
            c,
            (name,),
            f"The menu should include a `{name}` tab, but it is missing.",
        )
        for name in c.names
        if name.lower() not in present
    ]


def _check_required_placement(c: RequiredPlacement, doc: MenuDocument) -> list[Violation]:
    tab = doc.tab(c.tab)
    if tab is None:
        return [
            Violation(
                c,
                (c.tab,),
                f"There should be a `{c.command}` command in the `{c.tab}` tab, "
                f"but there is no `{c.tab}` tab.",
            )
        ]
    wanted = c.command.lower()
    for _path, cmd in _tab_leaves(tab):
        if cmd.name.lower() == wanted:
            return []
    return [
        Violation(
            c,
            (tab.name,),
            f"There should be a `{c.command}` command in the `{c.tab}` tab, "
            f"but it is missing.",
        )
    ]


def _check_unique_hotkeys(c: UniqueHotkeys, doc: MenuDocument) -> list[Violation]:
    by_hotkey: dict[str, list[tuple[CommandPath, object]]] = {}
    for path, cmd in leaf_commands(doc):
        if cmd.hotkey is not None:
            by_hotkey.setdefault(cmd.hotkey.render(), []).append((path, cmd))
    out = []
    for rendered, holders in by_hotkey.items():
        if len(holders) < 2:
            continue
        names = _join_phrase([f"`{cmd.name}` (in `{path.tab}`)" for path, cmd in holders])
        out.append(
            Violation(
                c,
                tuple(path for path, _ in holders),
                f"The same shortcut must not be shared by two commands, even in "
                f"different tabs: {names} share a same shortcut (`{rendered}`).",
            )
        )
    return out


def _check_unique_command_names(c: UniqueCommandNames, doc: MenuDocument) -> list[Violation]:
    groups: dict[tuple, list[CommandPath]] = {}
    for path, cmd in leaf_commands(doc):
        if c.scope == SCOPE_PER_TAB:
            key = (path.tab.lower(), cmd.name.lower())
        else:
            key = (cmd.name.lower(),)
        groups.setdefault(key, []).append(path)
    out = []
    for key, paths in groups.items():
        if len(paths) < 2:
            continue
        name = paths[0].command
        if c.scope == SCOPE_PER_TAB:
            detail = f"`{name}` appears {len(paths)} times in the `{paths[0].tab}` tab"
            rule = "Command names must be unique within each tab"
        else:
            detail = f"`{name}` appears {len(paths)} times"
            rule = "Command names must be unique across the menu"
        out.append(Violation(c, tuple(paths), f"{rule}: {detail}."))
    return out


def _check_forbidden_hotkeys(c: ForbiddenHotkeys, doc: MenuDocument) -> list[Violation]:
    banned = {hk.render() for hk in c.hotkeys}
    out = []
    for path, cmd in leaf_commands(doc):
        if cmd.hotkey is not None and cmd.hotkey.render() in banned:
            out.append(
                Violation(
                    c,
                    (path,),
                    f"The shortcut `{cmd.hotkey.render()}` must not be used: "
                    f"it is assigned to `{cmd.name}` (in `{path.tab}`).",
                )
            )
    return out


_CHECKERS = {
    MaxCommandsPerTab: _check_max_commands,
    ExactTabCount: _check_exact_tab_count,
    RequiredTabs: _check_required_tabs,
    RequiredPlacement: _check_required_placement,
    UniqueHotkeys: _check_unique_hotkeys,
    UniqueCommandNames: _check_unique_command_names,
    ForbiddenHotkeys: _check_forbidden_hotkeys,
}


def validate(doc: MenuDocument, cs: ConstraintSet) -> list[Violation]:
    """All violations, in constraint order then document order. Pure."""
    out: list[Violation] = []
    for constraint in cs:
        out.extend(_CHECKERS[type(constraint)](constraint, doc))
    return out


def describe_violations(vs: list[Violation]) -> str:
    """Corrective prose for a designer turn: one sentence per violation."""
    if not vs:
        raise ValueError("describe_violations needs at least one violation")
    return "\n".join(v.message for v in vs)


def constraints_to_prompt_clauses(cs: ConstraintSet) -> list[str]:
    """Natural-language clause per constraint, for embedding in prompts."""
    return [constraint_clause(c) for c in cs]


def constraint_clause(c: Constraint) -> str:
    if isinstance(c, MaxCommandsPerTab):
        return f"Tabs should not have more than {c.limit} commands each."
    if isinstance(c, ExactTabCount):
        return f"The menu should have exactly {c.n} tabs."
    if isinstance(c, RequiredTabs):
        if len(c.names) == 1:
            return f"The menu should include a `{c.names[0]}` tab."
        return f"The menu should include the tabs {_names_phrase(list(c.names))}."
    if isinstance(c, RequiredPlacement):
        return f"There should be a `{c.command}` command in the `{c.tab}` tab in the app."
    if isinstance(c, UniqueHotkeys):
        return "Two different commands must not have the same shortcut."
    if isinstance(c, UniqueCommandNames):
        if c.scope == SCOPE_PER_TAB:
            return "Command names must be unique within each tab."
        return "Command names must be unique across the menu."
    if isinstance(c, ForbiddenHotkeys):
        rendered = ", ".join(sorted(f"`{hk.render()}`" for hk in c.hotkeys))
        return f"Do not use the following shortcuts: {rendered}."
    raise ConstraintError(f"unknown constraint type {type(c).__name__}")


# --- JSON form ---------------------------------------------------------------

def constraint_to_obj(c: Constraint) -> dict:
    if isinstance(c, MaxCommandsPerTab):
        return {"type": "MaxCommandsPerTab", "limit": c.limit}
    if isinstance(c, ExactTabCount):
        return {"type": "ExactTabCount", "n": c.n}
    if isinstance(c, RequiredTabs):
        return {"type": "RequiredTabs", "names": list(c.names)}
    if isinstance(c, RequiredPlacement):
        return {"type": "RequiredPlacement", "command": c.command, "tab": c.tab}
    if isinstance(c, UniqueHotkeys):
        return {"type": "UniqueHotkeys"}
    if isinstance(c, UniqueCommandNames):
        return {"type": "UniqueCommandNames", "scope": c.scope}
    if isinstance(c, ForbiddenHotkeys):
        return {"type": "ForbiddenHotkeys", "hotkeys": sorted(hk.render() for hk in c.hotkeys)}
    raise ConstraintError(f"unknown constraint type {type(c).__name__}")


def constraint_from_obj(obj) -> Constraint:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConstraintError("constraint must be an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "MaxCommandsPerTab":
            return MaxCommandsPerTab(int(obj["limit"]))
        if kind == "ExactTabCount":
            return ExactTabCount(int(obj["n"]))
        if kind == "RequiredTabs":
            return RequiredTabs(tuple(str(n) for n in obj["names"]))
        if kind == "RequiredPlacement":
            return RequiredPlacement(str(obj["command"]), str(obj["tab"]))
        if kind == "UniqueHotkeys":
            return UniqueHotkeys()
        if kind == "UniqueCommandNames":
            return UniqueCommandNames(str(obj.get("scope", SCOPE_GLOBAL)))
        if kind == "ForbiddenHotkeys":
            return ForbiddenHotkeys(frozenset(parse_hotkey(h) for h in obj["hotkeys"]))
    except KeyError as exc:
        raise ConstraintError(f"constraint {kind!r} is missing field {exc.args[0]!r}") from exc
    raise ConstraintError(f"unknown constraint type {kind!r}")


def constraint_set_to_obj(cs: ConstraintSet) -> list[dict]:
    return [constraint_to_obj(c) for c in cs]


def constraint_set_from_obj(obj) -> ConstraintSet:
    if not isinstance(obj, list):
        raise ConstraintError("constraint set must be a list")
    return ConstraintSet(tuple(constraint_from_obj(item) for item in obj))


def violation_to_obj(v: Violation) -> dict:
    return {
        "constraint": constraint_to_obj(v.constraint),
        "paths": v.path_strings(),
        "message": v.message,
        "severity": v.severity,
    }
