from __future__ import annotations

import json

import pytest

from menucraft.constraints import ConstraintSet, ExactTabCount, UniqueHotkeys
from menucraft.model import SchemaError, dumps_canonical, leaf_commands
from menucraft.parsing import MenuReply, ProseReply
from menucraft.prompts import (
    ROLE_ASSISTANT,
    ROLE_DESIGNER,
    InteractionKind,
    InteractionRequest,
    Transcript,
    init_prompt,
)
from menucraft.providers import ProviderError, ScriptedProvider
from menucraft.session import (
    DEFAULT_REPAIR_ROUNDS,
    Session,
    delete,
    list_sessions,
    load,
    new_session,
    reply_to_obj,
    save,
    session_from_obj,
    session_to_obj,
    submit,
    summary,
    turn_result_to_obj,
)


def topic_request() -> InteractionRequest:
    return InteractionRequest(kind=InteractionKind.TOPIC_DESIGN, topic="text editor application")


def hotkey_request(doc) -> InteractionRequest:
    return InteractionRequest(kind=InteractionKind.HOTKEY_RECOMMEND, context_doc=doc)


def test_new_session_shape():
    s = new_session(clock=lambda: 1000.0)
    assert len(s.id) == 32
    assert int(s.id, 16) >= 0
    assert len(s.transcript) == 1
    assert s.transcript.messages[0] == init_prompt()
    assert s.repair_rounds == DEFAULT_REPAIR_ROUNDS
    assert s.created == s.updated == 1000.0
    assert new_session().id != new_session().id


def test_submit_happy_path(fixture_text):
    s = new_session()
    provider = ScriptedProvider([("Create a menu", fixture_text("s4_1_assistant.txt"))])
    s2, result = submit(s, topic_request(), provider)
    assert isinstance(result.reply, MenuReply)
    assert result.rounds_used == 0
    assert result.repaired is False
    assert result.violations == ()
    assert result.error is None
    assert [t.name for t in result.doc.tabs] == ["File", "Edit", "Format"]
    assert s2.current_doc == result.doc
    assert len(s2.transcript) == 3
    assert s2.transcript.messages[1].role == ROLE_DESIGNER
    assert s2.transcript.messages[2].role == ROLE_ASSISTANT
    # the input session is untouched
    assert len(s.transcript) == 1 and s.current_doc is None


def test_submit_repairs_hotkey_collision(fixture_text, editor_doc):
    s = new_session(constraints=ConstraintSet((UniqueHotkeys(),)))
    provider = ScriptedProvider(
        [
            ("Add shortcut for each command", fixture_text("s4_5_assistant.txt")),
            ("share a same shortcut", fixture_text("s4_5_corrected_assistant.txt")),
        ]
    )
    s2, result = submit(s, hotkey_request(editor_doc), provider)
    assert result.rounds_used == 1
    assert result.repaired is True
    assert result.violations == ()
    assert result.error is None
    by_name = {c.name: c.hotkey.render() for _p, c in leaf_commands(result.doc)}
    assert by_name["Strikethrough"] == "Ctrl+Shift+D"
    assert by_name["Save As..."] == "Ctrl+Shift+S"
    assert s2.current_doc == result.doc
    # init, designer ask, bad reply, corrective, good reply
    assert len(s2.transcript) == 5
    assert "share a same shortcut" in s2.transcript.messages[3].text


def test_submit_reports_violations_when_repair_disabled(fixture_text, editor_doc):
    s = new_session(constraints=ConstraintSet((UniqueHotkeys(),)), repair_rounds=0)
    provider = ScriptedProvider(
        [("Add shortcut for each command", fixture_text("s4_5_assistant.txt"))]
    )
    s2, result = submit(s, hotkey_request(editor_doc), provider)
    assert result.rounds_used == 0
    assert result.repaired is False
    assert len(result.violations) == 1
    assert result.doc is not None
    assert s2.current_doc is None  # violating documents never become current


def test_submit_exhausts_repair_budget_on_persistent_violation(fixture_text, editor_doc):
    bad = fixture_text("s4_5_assistant.txt")
    s = new_session(constraints=ConstraintSet((UniqueHotkeys(),)))
    provider = ScriptedProvider(
        [
            ("Add shortcut for each command", bad),
            ("share a same shortcut", bad),
            ("share a same shortcut", bad),
        ]
    )
    s2, result = submit(s, hotkey_request(editor_doc), provider)
    assert result.rounds_used == 2
    assert result.repaired is False  # same violations as round one
    assert len(result.violations) == 1
    assert s2.current_doc is None
    assert provider.remaining() == 0


def test_submit_retries_format_mismatch(fixture_text):
    s = new_session()
    provider = ScriptedProvider(
        [
            ("Create a menu", "here you go:\n```json\n[1, 2]\n```"),
            ("could not read your reply", fixture_text("s4_1_assistant.txt")),
        ]
    )
    s2, result = submit(s, topic_request(), provider)
    assert result.error is None
    assert result.rounds_used == 1
    assert isinstance(result.reply, MenuReply)
    # both violation lists were empty, so nothing counts as repaired
    assert result.repaired is False
    assert s2.current_doc is not None


def test_submit_gives_up_on_persistent_mismatch():
    bad = "```json\n[1, 2]\n```"
    s = new_session()
    provider = ScriptedProvider(
        [("Create a menu", bad), ("could not read", bad), ("could not read", bad)]
    )
    s2, result = submit(s, topic_request(), provider)
    assert result.rounds_used == 2
    assert result.error is not None
    assert isinstance(result.reply, ProseReply)
    assert result.doc is None
    assert s2.current_doc is None


def test_provider_error_carries_partial_session():
    s = new_session()
    with pytest.raises(ProviderError) as err:
        submit(s, topic_request(), ScriptedProvider([]))
    partial = err.value.partial_session
    assert len(partial.transcript) == 2
    assert partial.transcript.messages[1].role == ROLE_DESIGNER
    assert partial.current_doc is None
    assert len(s.transcript) == 1


def test_prose_reply_is_benign():
    s = new_session(repair_rounds=0)
    provider = ScriptedProvider([("Create a menu", "Could you tell me more about the app?")])
    _s2, result = submit(s, topic_request(), provider)
    assert isinstance(result.reply, ProseReply)
    assert result.error is None
    assert result.violations == ()


def test_transcript_only_grows(fixture_text):
    s = new_session()
    provider = ScriptedProvider([("Create a menu", fixture_text("s4_1_assistant.txt"))])
    s2, _ = submit(s, topic_request(), provider)
    assert s2.transcript.messages[: len(s.transcript)] == s.transcript.messages
    assert s2.updated >= s.updated


def test_save_and_load_round_trip(tmp_path, fixture_text):
    s = new_session(constraints=ConstraintSet((UniqueHotkeys(), ExactTabCount(3))))
    provider = ScriptedProvider([("Create a menu", fixture_text("s4_1_assistant.txt"))])
    s2, _ = submit(s, topic_request(), provider)
    path = save(s2, tmp_path)
    assert path == tmp_path / f"{s2.id}.json"
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert text == dumps_canonical(session_to_obj(s2)) + "\n"
    assert load(path) == s2


def test_session_from_obj_strictness():
    base = session_to_obj(new_session())
    with pytest.raises(SchemaError):
        session_from_obj({**base, "surprise": 1})
    missing = dict(base)
    del missing["transcript"]
    with pytest.raises(SchemaError) as err:
        session_from_obj(missing)
    assert "transcript" in str(err.value)
    with pytest.raises(SchemaError):
        session_from_obj({**base, "repair_rounds": "two"})
    with pytest.raises(SchemaError):
        session_from_obj({**base, "created": "yesterday"})
    with pytest.raises(SchemaError):
        session_from_obj("not an object")


def test_session_from_obj_rejects_stored_api_key():
    obj = session_to_obj(new_session())
    obj["provider_cfg"]["api_key"] = "sk-leak"
    with pytest.raises(SchemaError):
        session_from_obj(obj)


def test_summary_counts():
    s = new_session(constraints=ConstraintSet((UniqueHotkeys(),)), clock=lambda: 5.0)
    info = summary(s)
    assert info == {
        "id": s.id,
        "created": 5.0,
        "updated": 5.0,
        "turns": 1,
        "has_doc": False,
        "constraints": 1,
    }


def test_list_sessions_sorted_by_recency(tmp_path):
    from dataclasses import replace

    ids = []
    for stamp in (30.0, 10.0, 20.0):
        s = replace(new_session(), updated=stamp)
        save(s, tmp_path)
        ids.append((stamp, s.id))
    listed = list_sessions(tmp_path)
    assert [e["updated"] for e in listed] == [30.0, 20.0, 10.0]
    assert listed[0]["id"] == ids[0][1]


def test_list_sessions_missing_dir_is_empty(tmp_path):
    assert list_sessions(tmp_path / "nowhere") == []


def test_list_sessions_names_broken_files(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError) as err:
        list_sessions(tmp_path)
    assert "broken.json" in str(err.value)


def test_delete_session(tmp_path):
    s = new_session()
    save(s, tmp_path)
    assert delete(tmp_path, s.id) is True
    assert delete(tmp_path, s.id) is False


def test_reply_to_obj_discriminators(fixture_text):
    from menucraft.parsing import parse_reply

    menu = parse_reply(fixture_text("s4_1_assistant.txt"), InteractionKind.TOPIC_DESIGN)
    assert reply_to_obj(menu)["type"] == "menu"
    suggestions = parse_reply(
        fixture_text("s4_3_assistant.txt"), InteractionKind.COMMAND_RECOMMEND
    )
    obj = reply_to_obj(suggestions)
    assert obj["type"] == "suggestions"
    assert obj["entries"][0][0] == "Bookmark All Tabs"
    names = parse_reply(fixture_text("s4_4_assistant.txt"), InteractionKind.NAME_RECOMMEND)
    assert reply_to_obj(names) == {"type": "names", "names": list(names.names)}
    prose = parse_reply("thanks!", InteractionKind.FREE_FORM)
    assert reply_to_obj(prose) == {"type": "prose", "text": "thanks!"}


def test_turn_result_to_obj_shape(fixture_text):
    s = new_session()
    provider = ScriptedProvider([("Create a menu", fixture_text("s4_1_assistant.txt"))])
    _s2, result = submit(s, topic_request(), provider)
    obj = turn_result_to_obj(result)
    assert set(obj) == {"reply", "doc", "violations", "rounds_used", "repaired", "error"}
    assert obj["doc"]["tabs"][0]["name"] == "File"
    assert obj["violations"] == []
    assert json.dumps(obj)  # JSON-serializable throughout
