from __future__ import annotations

import json

import pytest
from hypothesis import given, settings

from conftest import cmd, doc
from menucraft.constraints import ConstraintSet, UniqueHotkeys, validate
from menucraft.hotkeys import (
    AssignmentError,
    ConventionTable,
    assign_hotkeys,
    builtin_conventions,
    candidate_hotkeys,
    find_collisions,
    load_conventions,
    normalize_name,
)
from menucraft.model import Tab, leaf_commands, parse_hotkey, serialize
from strategies import documents


def test_normalize_name_trims_ellipsis_and_case():
    assert normalize_name("Save As...") == "save as"
    assert normalize_name("  Open...  ") == "open"
    assert normalize_name("Find") == "find"


def test_builtin_conventions_cover_the_usual_suspects():
    table = builtin_conventions()
    assert len(table) == 16
    assert table.lookup("Undo").render() == "Ctrl+Z"
    assert table.lookup("save as...").render() == "Ctrl+Shift+S"
    assert table.lookup("Exit").render() == "Alt+F4"
    assert table.lookup("Unheard Of") is None


def test_load_conventions_from_file(tmp_path):
    p = tmp_path / "table.json"
    p.write_text(json.dumps({"Jump": "ctrl+j"}), encoding="utf-8")
    table = load_conventions(p)
    assert table.lookup("jump").render() == "Ctrl+J"


def test_candidate_ladder_order():
    got = [h.render() for h in candidate_hotkeys("Cab", ConventionTable())]
    assert got == [
        "Ctrl+C",
        "Ctrl+Shift+C",
        "Ctrl+A",
        "Ctrl+Shift+A",
        "Ctrl+B",
        "Ctrl+Shift+B",
        "Ctrl+Alt+C",
        "Ctrl+Alt+A",
        "Ctrl+Alt+B",
    ]


def test_candidate_ladder_starts_with_convention_hit():
    table = builtin_conventions()
    got = list(candidate_hotkeys("Undo", table))
    assert got[0].render() == "Ctrl+Z"
    assert got[1].render() == "Ctrl+U"


def test_assignment_editor_walkthrough(editor_doc):
    assigned = assign_hotkeys(editor_doc)
    by_name = {c.name: c.hotkey.render() for _p, c in leaf_commands(assigned)}
    assert by_name["New"] == "Ctrl+N"
    assert by_name["Save As..."] == "Ctrl+Shift+S"
    assert by_name["Undo"] == "Ctrl+Z"
    assert by_name["Strikethrough"] == "Ctrl+T"
    assert by_name["Highlight"] == "Ctrl+H"
    assert find_collisions(assigned) == []


def test_assignment_without_conventions_uses_first_letter():
    d = doc(Tab("App", (cmd("Quit"),)))
    assigned = assign_hotkeys(d, ConventionTable())
    assert assigned.tabs[0].items[0].hotkey.render() == "Ctrl+Q"


def test_presets_survive_and_push_later_commands_down():
    d = doc(Tab("T", (cmd("Zebra", "ctrl+n"), cmd("New"))))
    assigned = assign_hotkeys(d, ConventionTable())
    assert assigned.tabs[0].items[0].hotkey.render() == "Ctrl+N"
    assert assigned.tabs[0].items[1].hotkey.render() == "Ctrl+Shift+N"


def test_preset_beats_earlier_ladder_position():
    # "New" is assigned before "Zip" appears, but Zip's preset was reserved first.
    d = doc(Tab("T", (cmd("New"), cmd("Zip", "ctrl+n"))))
    assigned = assign_hotkeys(d, ConventionTable())
    assert assigned.tabs[0].items[0].hotkey.render() == "Ctrl+Shift+N"
    assert assigned.tabs[0].items[1].hotkey.render() == "Ctrl+N"


def test_assignment_is_deterministic(editor_doc):
    a = serialize(assign_hotkeys(editor_doc))
    b = serialize(assign_hotkeys(editor_doc))
    assert a == b


def test_assignment_exhaustion_names_the_command():
    tabs = Tab("T", (cmd("a"), cmd("aa"), cmd("aaa"), cmd("aaaa")))
    with pytest.raises(AssignmentError) as err:
        assign_hotkeys(doc(tabs), ConventionTable())
    assert str(err.value.path) == "T/aaaa"


def test_no_alphabetic_characters_exhausts_immediately():
    with pytest.raises(AssignmentError):
        assign_hotkeys(doc(Tab("T", (cmd("123"),))), ConventionTable())


def test_find_collisions_groups_all_holders():
    d = doc(
        Tab("File", (cmd("Save As...", "ctrl+shift+s"),)),
        Tab("Format", (cmd("Strikethrough", "ctrl+shift+s"), cmd("Bold", "ctrl+b"))),
    )
    collisions = find_collisions(d)
    assert len(collisions) == 1
    hotkey, paths = collisions[0]
    assert hotkey.render() == "Ctrl+Shift+S"
    assert [str(p) for p in paths] == ["File/Save As...", "Format/Strikethrough"]


def test_find_collisions_empty_for_distinct_or_missing_hotkeys(grouped_doc):
    assert find_collisions(grouped_doc) == []


@settings(max_examples=60)
@given(documents(max_tabs=3, max_items=4))
def test_assignment_yields_zero_collisions(d):
    try:
        assigned = assign_hotkeys(d)
    except AssignmentError:
        return
    assert find_collisions(assigned) == []
    assert validate(assigned, ConstraintSet((UniqueHotkeys(),))) == []
    assert all(c.hotkey is not None for _p, c in leaf_commands(assigned))


def test_tab_permutation_keeps_convention_and_preset_hits():
    file_tab = Tab("File", (cmd("New"), cmd("Save"), cmd("Custom", "f5")))
    edit_tab = Tab("Edit", (cmd("Undo"), cmd("Paste")))
    a = assign_hotkeys(doc(file_tab, edit_tab))
    b = assign_hotkeys(doc(edit_tab, file_tab))
    pinned = {"New": "Ctrl+N", "Save": "Ctrl+S", "Undo": "Ctrl+Z", "Paste": "Ctrl+V", "Custom": "F5"}
    for assigned in (a, b):
        got = {c.name: c.hotkey.render() for _p, c in leaf_commands(assigned)}
        for name, hotkey in pinned.items():
            assert got[name] == hotkey


def test_assignment_does_not_mutate_input(editor_doc):
    before = serialize(editor_doc)
    assign_hotkeys(editor_doc)
    assert serialize(editor_doc) == before
