"""Payload extraction and lenient parsing of free-form assistant replies.

Replies wrap their structured payload in prose, and the payload itself is
often almost-JSON: unquoted keys, single quotes, trailing commas, or a
string whose closing quote never arrives before the end of the line. The
parser here accepts exactly those relaxations and nothing else; input that
is already strict JSON parses to the same value json.loads would produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from menucraft.model import (
    Command,
    Group,
    MenuDocument,
    ModelError,
    Tab,
    parse_hotkey,
)
from menucraft.prompts import InteractionKind


class ParseError(ValueError):
    """Payload text the lenient grammar cannot accept."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


class NormalizeError(ValueError):
    """A parsed tree that does not describe a menu."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.message = message
        self.path = path


@dataclass(frozen=True)
class MenuReply:
    doc: MenuDocument
    prose_before: str
    prose_after: str
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class SuggestionReply:
    entries: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class NameListReply:
    names: tuple[str, ...]


@dataclass(frozen=True)
class ProseReply:
    text: str


ParsedReply = Union[MenuReply, SuggestionReply, NameListReply, ProseReply]


class ReplyMismatchError(ValueError):
    """Reply carries a payload whose shape does not fit the expected kind.

    The prose fallback is attached so callers can keep the turn.
    """

    def __init__(self, message: str, fallback: ProseReply):
        super().__init__(message)
        self.fallback = fallback


# --- lenient JSON ------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?")
_ESCAPES = {
    '"': '"',
    "'": "'",
    "/": "/",
    "\\": "\\",
    "b": "\b",
    "f": "\f",
    "n": "\n",
    "r": "\r",
    "t": "\t",
}
_WS = " \t\r\n"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        # Set when an unterminated string ended in a comma: the comma is
        # handed back to the enclosing container as its separator.
        self.pending_comma = False

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def skip_ws(self) -> None:
        while not self.at_end() and self.text[self.pos] in _WS:
            self.advance()

    def take_pending_comma(self) -> bool:
        if self.pending_comma:
            self.pending_comma = False
            return True
        return False

    # values ------------------------------------------------------------

    def parse_value(self):
        self.skip_ws()
        c = self.peek()
        if not c:
            raise self.error("unexpected end of input")
        if c == "{":
            return self.parse_object()
        if c == "[":
            return self.parse_array()
        if c in "\"'":
            return self.parse_string(recover_separator=True)
        if c == "-" or c.isdigit():
            return self.parse_number()
        m = _IDENT_RE.match(self.text, self.pos)
        if m:
            word = m.group(0)
            if word in ("true", "false", "null"):
                for _ in word:
                    self.advance()
                return {"true": True, "false": False, "null": None}[word]
            raise self.error(f"unexpected token {word!r}")
        raise self.error(f"unexpected character {c!r}")

    def parse_object(self) -> dict:
        self.advance()  # {
        result: dict = {}
        self.skip_ws()
        if self.peek() == "}":
            self.advance()
            return result
        while True:
            self.skip_ws()
            key = self.parse_key()
            self.skip_ws()
            if self.peek() != ":":
                raise self.error("expected ':' after object key")
            self.advance()
            result[key] = self.parse_value()
            self.skip_ws()
            if self.take_pending_comma():
                self.skip_ws()
                if self.peek() == "}":
                    self.advance()
                    return result
                continue
            c = self.peek()
            if c == ",":
                self.advance()
                self.skip_ws()
                if self.peek() == "}":  # trailing comma
                    self.advance()
                    return result
                continue
            if c == "}":
                self.advance()
                return result
            if not c:
                raise self.error("unterminated object")
            raise self.error("expected ',' or '}' in object")

    def parse_array(self) -> list:
        self.advance()  # [
        items: list = []
        self.skip_ws()
        if self.peek() == "]":
            self.advance()
            return items
        while True:
            items.append(self.parse_value())
            self.skip_ws()
            if self.take_pending_comma():
                self.skip_ws()
                if self.peek() == "]":
                    self.advance()
                    return items
                continue
            c = self.peek()
            if c == ",":
                self.advance()
                self.skip_ws()
                if self.peek() == "]":  # trailing comma
                    self.advance()
                    return items
                continue
            if c == "]":
                self.advance()
                return items
            if not c:
                raise self.error("unterminated array")
            raise self.error("expected ',' or ']' in array")

    def parse_key(self) -> str:
        c = self.peek()
        if not c:
            raise self.error("unexpected end of input in object")
        if c in "\"'":
            return self.parse_string(recover_separator=False)
        m = _IDENT_RE.match(self.text, self.pos)
        if m:
            for _ in m.group(0):
                self.advance()
            return m.group(0)
        raise self.error("expected object key")

    def parse_string(self, recover_separator: bool) -> str:
        quote = self.advance()
        buf: list[str] = []
        while not self.at_end():
            c = self.peek()
            if c == "\n":
                break  # unterminated: the string ends at end-of-line
            self.advance()
            if c == quote:
                return "".join(buf)
            if c == "\\":
                buf.append(self.parse_escape())
            else:
                buf.append(c)
        content = "".join(buf)
        if recover_separator:
            stripped = content.rstrip(" \t")
            if stripped.endswith(","):
                # The comma was meant as the list separator, not content.
                self.pending_comma = True
                content = stripped[:-1].rstrip(" \t")
        return content

    def parse_escape(self) -> str:
        if self.at_end():
            raise self.error("unterminated escape sequence")
        c = self.advance()
        if c in _ESCAPES:
            return _ESCAPES[c]
        if c == "u":
            code = self.parse_hex4()
            if 0xD800 <= code <= 0xDBFF and self.text.startswith("\\u", self.pos):
                mark = (self.pos, self.line, self.col)
                self.advance()
                self.advance()
                low = self.parse_hex4()
                if 0xDC00 <= low <= 0xDFFF:
                    return chr(0x10000 + ((code - 0xD800) << 10) + (low - 0xDC00))
                self.pos, self.line, self.col = mark
            return chr(code)
        raise self.error(f"invalid escape sequence \\{c}")

    def parse_hex4(self) -> int:
        digits = self.text[self.pos : self.pos + 4]
        if len(digits) < 4 or any(d not in "0123456789abcdefABCDEF" for d in digits):
            raise self.error("invalid \\u escape")
        for _ in digits:
            self.advance()
        return int(digits, 16)

    def parse_number(self):
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise self.error("invalid number")
        token = m.group(0)
        for _ in token:
            self.advance()
        if "." in token or "e" in token or "E" in token:
            return float(token)
        return int(token)


def lenient_parse(payload_text: str):
    """Parse almost-JSON into Python values; strict JSON parses unchanged."""
    parser = _Parser(payload_text)
    parser.skip_ws()
    if parser.at_end():
        raise parser.error("empty payload")
    value = parser.parse_value()
    parser.pending_comma = False  # a top-level value has no enclosing list
    parser.skip_ws()
    if not parser.at_end():
        raise parser.error("unexpected content after the value")
    return value


# --- payload extraction ------------------------------------------------------

_FENCE_RE = re.compile(
    r"```[ \t]*[A-Za-z0-9_+-]*[ \t]*\r?\n(.*?)(?:\r?\n)?```",
    re.DOTALL,
)


def _scan_balanced(text: str, start: int) -> int | None:
    """End index (exclusive) of the bracketed region opening at `start`."""
    depth = 0
    i = start
    in_string = False
    quote = ""
    while i < len(text):
        c = text[i]
        if in_string:
            if c == "\n" or c == quote:
                in_string = False
            elif c == "\\":
                i += 1
        elif c in "\"'":
            in_string = True
            quote = c
        elif c in "{[":
            depth += 1
        elif c in "}]":
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return None


def extract_payload(reply_text: str) -> tuple[str, str, str]:
    """Split a reply into (payload, prose_before, prose_after).

    The payload is the first fenced code block if any, else the first
    balanced {...} or [...] region; strings inside the region follow the
    lenient rule that an unclosed string ends at end-of-line. With no
    payload the whole text lands in prose_before and payload is "".
    """
    m = _FENCE_RE.search(reply_text)
    if m:
        return m.group(1), reply_text[: m.start()], reply_text[m.end() :]
    search = 0
    while True:
        starts = [i for i in (reply_text.find("{", search), reply_text.find("[", search)) if i != -1]
        if not starts:
            return "", reply_text, ""
        start = min(starts)
        end = _scan_balanced(reply_text, start)
        if end is not None:
            return reply_text[start:end], reply_text[:start], reply_text[end:]
        search = start + 1


# --- normalization into MenuDocument -----------------------------------------

def normalize_menu(tree, warnings: list[str] | None = None) -> MenuDocument:
    """Shape a parsed reply tree into a MenuDocument.

    Accepted item shapes per tab: a bare string (command name), an object
    with "name" plus optional "shortcut"/"hotkey", "frequency" and
    "elaboration", or a single-key object mapping a group name to a list.
    An unparseable shortcut downgrades to a warning; the command is kept
    without a hotkey.
    """
    if warnings is None:
        warnings = []
    if not isinstance(tree, dict):
        raise NormalizeError("menu payload must map tab names to command lists", "$")
    if not tree:
        raise NormalizeError("menu payload has no tabs", "$")
    tabs = []
    for tab_name, value in tree.items():
        path = f"$.{tab_name}"
        if not isinstance(tab_name, str) or not tab_name.strip():
            raise NormalizeError("tab name must be a non-empty string", "$")
        if not isinstance(value, list):
            raise NormalizeError("tab value must be a list of commands", path)
        items = tuple(
            _normalize_item(v, f"{path}[{i}]", 1, warnings)
            for i, v in enumerate(value)
        )
        try:
            tabs.append(Tab(tab_name.strip(), items))
        except ModelError as exc:
            raise NormalizeError(str(exc), path) from exc
    try:
        return MenuDocument("", tuple(tabs))
    except ModelError as exc:
        raise NormalizeError(str(exc), "$") from exc


def _normalize_item(value, path: str, depth: int, warnings: list[str]):
    if isinstance(value, str):
        name = value.strip()
        if not name:
            raise NormalizeError("command name must be non-empty", path)
        return Command(name)
    if isinstance(value, dict) and "name" in value:
        return _normalize_command_obj(value, path, warnings)
    if isinstance(value, dict) and len(value) == 1:
        (group_name, members), = value.items()
        if isinstance(members, list):
            if not isinstance(group_name, str) or not group_name.strip():
                raise NormalizeError("group name must be a non-empty string", path)
            items = tuple(
                _normalize_item(v, f"{path}.{group_name}[{i}]", depth + 1, warnings)
                for i, v in enumerate(members)
            )
            try:
                return Group(group_name.strip(), items)
            except ModelError as exc:
                raise NormalizeError(str(exc), path) from exc
    raise NormalizeError(
        "item must be a command name, a command object, or a group", path
    )


def _normalize_command_obj(value: dict, path: str, warnings: list[str]) -> Command:
    known = {"name", "shortcut", "hotkey", "frequency", "elaboration"}
    unknown = set(value) - known
    if unknown:
        raise NormalizeError(
            f"unknown command field {sorted(unknown)[0]!r}", path
        )
    name = value["name"]
    if not isinstance(name, str) or not name.strip():
        raise NormalizeError("command name must be a non-empty string", path)
    raw_hotkey = value.get("shortcut", value.get("hotkey"))
    hotkey = None
    if raw_hotkey is not None:
        if not isinstance(raw_hotkey, str):
            raise NormalizeError("shortcut must be a string", path)
        try:
            hotkey = parse_hotkey(raw_hotkey)
        except ModelError as exc:
            warnings.append(
                f"{path}: dropped unparseable shortcut {raw_hotkey!r} ({exc})"
            )
    frequency = value.get("frequency")
    if frequency is not None and (
        isinstance(frequency, bool) or not isinstance(frequency, (int, float))
    ):
        raise NormalizeError("frequency must be a number", path)
    elaboration = value.get("elaboration")
    if elaboration is not None and not isinstance(elaboration, str):
        raise NormalizeError("elaboration must be a string", path)
    try:
        return Command(
            name.strip(),
            hotkey=hotkey,
            frequency=float(frequency) if frequency is not None else None,
            elaboration=elaboration,
        )
    except ModelError as exc:
        raise NormalizeError(str(exc), path) from exc


def document_to_reply_tree(doc: MenuDocument) -> dict:
    """The reply-shaped tree for a document: tab name -> list of items."""
    return {tab.name: [_item_to_reply(i) for i in tab.items] for tab in doc.tabs}


def _item_to_reply(item):
    if isinstance(item, Group):
        return {item.name: [_item_to_reply(i) for i in item.items]}
    if item.hotkey is not None:
        return {"name": item.name, "shortcut": item.hotkey.render()}
    return item.name


# --- reply dispatch -----------------------------------------------------------

_MENU_KINDS = frozenset(
    {
        InteractionKind.TOPIC_DESIGN,
        InteractionKind.COMMAND_DESIGN,
        InteractionKind.HOTKEY_RECOMMEND,
    }
)


def parse_reply(reply_text: str, expected: InteractionKind):
    """Parse a reply according to the interaction kind that prompted it.

    A reply with no structured payload degrades to ProseReply; a payload
    whose shape contradicts the expected kind raises ReplyMismatchError
    with the ProseReply fallback attached.
    """
    payload, before, after = extract_payload(reply_text)
    has_payload = bool(payload.strip())

    if expected in _MENU_KINDS:
        if not has_payload:
            return ProseReply(reply_text)
        return _menu_reply(reply_text, payload, before, after)

    if expected is InteractionKind.COMMAND_RECOMMEND:
        if not has_payload:
            return ProseReply(reply_text)
        return _suggestion_reply(reply_text, payload)

    if expected is InteractionKind.NAME_RECOMMEND:
        if has_payload:
            return _name_list_from_payload(reply_text, payload)
        names = _scan_name_list(reply_text)
        if names:
            return NameListReply(tuple(names))
        return ProseReply(reply_text)

    if expected is InteractionKind.ELABORATE:
        if has_payload:
            try:
                return _suggestion_reply(reply_text, payload)
            except ReplyMismatchError:
                pass
        entries = _scan_elaboration_lines(reply_text)
        if entries:
            return SuggestionReply(tuple(entries))
        return ProseReply(reply_text)

    # FreeForm: recognize a menu opportunistically, never raise.
    if has_payload:
        try:
            return _menu_reply(reply_text, payload, before, after)
        except ReplyMismatchError:
            pass
    return ProseReply(reply_text)


def _menu_reply(reply_text: str, payload: str, before: str, after: str) -> MenuReply:
    warnings: list[str] = []
    try:
        tree = lenient_parse(payload)
        doc = normalize_menu(tree, warnings)
    except (ParseError, NormalizeError) as exc:
        raise ReplyMismatchError(
            f"expected a menu payload: {exc}", ProseReply(reply_text)
        ) from exc
    return MenuReply(doc, before, after, tuple(warnings))


def _suggestion_reply(reply_text: str, payload: str) -> SuggestionReply:
    try:
        tree = lenient_parse(payload)
    except ParseError as exc:
        raise ReplyMismatchError(
            f"expected a name-to-text payload: {exc}", ProseReply(reply_text)
        ) from exc
    if not isinstance(tree, dict) or not tree:
        raise ReplyMismatchError(
            "expected a name-to-text payload", ProseReply(reply_text)
        )
    entries = []
    for name, text in tree.items():
        if not isinstance(name, str) or not isinstance(text, str):
            raise ReplyMismatchError(
                "expected a flat object of name: text", ProseReply(reply_text)
            )
        entries.append((name.strip(), text.strip()))
    return SuggestionReply(tuple(entries))


def _name_list_from_payload(reply_text: str, payload: str) -> NameListReply:
    try:
        tree = lenient_parse(payload)
    except ParseError as exc:
        raise ReplyMismatchError(
            f"expected a list of names: {exc}", ProseReply(reply_text)
        ) from exc
    if not isinstance(tree, list) or not tree or not all(
        isinstance(n, str) and n.strip() for n in tree
    ):
        raise ReplyMismatchError(
            "expected a list of names", ProseReply(reply_text)
        )
    return NameListReply(tuple(n.strip() for n in tree))


_MAX_NAME_WORDS = 4


def _scan_name_list(text: str) -> list[str]:
    """Find the first paragraph that reads as a comma/newline name list."""
    for paragraph in re.split(r"\n\s*\n", text):
        paragraph = paragraph.strip()
        if not paragraph or paragraph.endswith(":"):
            continue
        if "," in paragraph:
            pieces = paragraph.split(",")
        elif "\n" in paragraph:
            pieces = paragraph.splitlines()
        else:
            continue
        if pieces and not pieces[-1].strip():
            pieces = pieces[:-1]  # trailing separator
        names = [p.strip().lstrip("-*• ").strip() for p in pieces]
        if len(names) < 2:
            continue
        if all(
            n and not n.endswith(".") and len(n.split()) <= _MAX_NAME_WORDS
            for n in names
        ):
            return names
    return []


def _scan_elaboration_lines(text: str) -> list[tuple[str, str]]:
    """Collect "name: text" entries from bullets or "tab, command: text" lines."""
    entries: list[tuple[str, str]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.endswith(":"):
            continue
        bullet = line[0] in "-*•"
        body = line.lstrip("-*• ").strip() if bullet else line
        left, sep, right = body.partition(":")
        if not sep or not left.strip() or not right.strip():
            continue
        if bullet:
            entries.append((left.strip(), right.strip()))
        elif "," in left:
            _tab, _, command = left.partition(",")
            if command.strip():
                entries.append((command.strip(), right.strip()))
    return entries
