from __future__ import annotations

from pathlib import Path

import pytest

from menucraft.model import Command, Group, MenuDocument, Tab, parse_hotkey

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_text():
    def read(name: str) -> str:
        return (FIXTURES / name).read_text(encoding="utf-8")

    return read


def cmd(name: str, hotkey: str | None = None, **kw) -> Command:
    return Command(name, parse_hotkey(hotkey) if hotkey else None, **kw)


def doc(*tabs: Tab, topic: str = "") -> MenuDocument:
    return MenuDocument(topic, tabs)


@pytest.fixture
def editor_doc(fixture_text):
    """The 18-command, 3-tab text-editor document from the dialogue corpus."""
    from menucraft.parsing import parse_reply
    from menucraft.prompts import InteractionKind

    reply = parse_reply(fixture_text("s4_1_assistant.txt"), InteractionKind.TOPIC_DESIGN)
    return reply.doc


@pytest.fixture
def grouped_doc():
    return doc(
        Tab(
            "File",
            (
                cmd("New"),
                Group("Export", (cmd("PDF"), cmd("HTML"))),
                cmd("Exit"),
            ),
        ),
        Tab("Edit", (cmd("Undo"), cmd("Redo"))),
    )
