from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cmd, doc
from menucraft.constraints import (
    ConstraintError,
    ConstraintSet,
    ExactTabCount,
    ForbiddenHotkeys,
    MaxCommandsPerTab,
    RequiredPlacement,
    RequiredTabs,
    UniqueCommandNames,
    UniqueHotkeys,
    constraint_clause,
    constraint_set_from_obj,
    constraint_set_to_obj,
    describe_violations,
    validate,
    violation_to_obj,
)
from menucraft.model import Group, Tab, leaf_commands, parse_hotkey
from strategies import documents, documents_with_hotkeys


def test_max_commands_counts_leaves_through_groups():
    d = doc(Tab("T", (cmd("A"), Group("G", (cmd("B"), cmd("C"))))))
    assert validate(d, ConstraintSet((MaxCommandsPerTab(3),))) == []
    out = validate(d, ConstraintSet((MaxCommandsPerTab(2),)))
    assert len(out) == 1
    assert out[0].paths == ("T",)
    assert "more than 2" in out[0].message


@given(documents(), st.integers(min_value=1, max_value=6))
def test_max_commands_matches_independent_leaf_count(d, limit):
    def count(items):
        total = 0
        for item in items:
            if isinstance(item, Group):
                total += count(item.items)
            else:
                total += 1
        return total

    over = [t.name for t in d.tabs if count(t.items) > limit]
    out = validate(d, ConstraintSet((MaxCommandsPerTab(limit),)))
    assert [v.paths[0] for v in out] == over


def test_exact_tab_count():
    d = doc(Tab("A", ()), Tab("B", ()))
    assert validate(d, ConstraintSet((ExactTabCount(2),))) == []
    out = validate(d, ConstraintSet((ExactTabCount(3),)))
    assert len(out) == 1
    assert "3" in out[0].message and "2" in out[0].message


def test_required_tabs_reports_each_missing_tab():
    d = doc(Tab("File", ()))
    out = validate(d, ConstraintSet((RequiredTabs(("File", "Edit", "View")),)))
    assert [v.paths[0] for v in out] == ["Edit", "View"]
    assert validate(d, ConstraintSet((RequiredTabs(("file",)),))) == []


def test_required_placement():
    d = doc(Tab("Edit", (Group("Search", (cmd("Find"),)),)), Tab("File", (cmd("Find"),)))
    assert validate(d, ConstraintSet((RequiredPlacement("Find", "Edit"),))) == []
    out = validate(d, ConstraintSet((RequiredPlacement("Find", "View"),)))
    assert len(out) == 1
    assert "Find" in out[0].message and "View" in out[0].message


def test_unique_hotkeys_one_violation_per_duplicate():
    d = doc(
        Tab("File", (cmd("Save As...", "ctrl+shift+s"), cmd("New", "ctrl+n"))),
        Tab("Format", (cmd("Strikethrough", "ctrl+shift+s"), cmd("Bold", "ctrl+b"))),
    )
    out = validate(d, ConstraintSet((UniqueHotkeys(),)))
    assert len(out) == 1
    v = out[0]
    assert set(v.path_strings()) == {"File/Save As...", "Format/Strikethrough"}
    assert "share a same shortcut" in v.message
    assert "Save As..." in v.message and "Strikethrough" in v.message
    assert "File" in v.message and "Format" in v.message
    assert "Ctrl+Shift+S" in v.message


def test_unique_hotkeys_triple_collision_is_single_violation():
    d = doc(Tab("T", (cmd("A", "ctrl+k"), cmd("B", "ctrl+k"), cmd("C", "ctrl+k"))))
    out = validate(d, ConstraintSet((UniqueHotkeys(),)))
    assert len(out) == 1
    assert set(out[0].path_strings()) == {"T/A", "T/B", "T/C"}


def test_unique_command_names_scopes():
    d = doc(Tab("A", (cmd("Find"), cmd("Find"))), Tab("B", (cmd("Find"),)))
    global_out = validate(d, ConstraintSet((UniqueCommandNames("global"),)))
    assert len(global_out) == 1
    assert len(global_out[0].paths) == 3
    per_tab = validate(d, ConstraintSet((UniqueCommandNames("per-tab"),)))
    assert len(per_tab) == 1
    assert per_tab[0].path_strings() == ["A/Find", "A/Find"]


def test_forbidden_hotkeys():
    d = doc(Tab("T", (cmd("Help", "f1"), cmd("New", "ctrl+n"))))
    out = validate(d, ConstraintSet((ForbiddenHotkeys((parse_hotkey("F1"),)),)))
    assert len(out) == 1
    assert out[0].path_strings() == ["T/Help"]


def test_violations_ordered_by_constraint_then_document():
    d = doc(
        Tab("One", (cmd("A", "ctrl+a"), cmd("B", "ctrl+a"))),
        Tab("Two", (cmd("C"), cmd("D"), cmd("E"))),
    )
    cs = ConstraintSet((MaxCommandsPerTab(2), UniqueHotkeys()))
    out = validate(d, cs)
    assert [v.constraint for v in out] == [cs.constraints[0], cs.constraints[1]]


@given(documents())
def test_appending_constraints_preserves_existing_violations(d):
    base = ConstraintSet((MaxCommandsPerTab(2),))
    extended = ConstraintSet((MaxCommandsPerTab(2), ExactTabCount(1)))
    base_out = validate(d, base)
    ext_out = validate(d, extended)
    assert [v.message for v in ext_out[: len(base_out)]] == [v.message for v in base_out]


def test_all_violations_are_errors():
    d = doc(Tab("T", (cmd("A", "ctrl+a"), cmd("B", "ctrl+a"), cmd("C"))))
    cs = ConstraintSet((MaxCommandsPerTab(1), UniqueHotkeys(), ExactTabCount(2)))
    out = validate(d, cs)
    assert out and all(v.severity == "error" for v in out)


def test_describe_violations_joins_messages():
    d = doc(Tab("T", (cmd("A", "ctrl+a"), cmd("B", "ctrl+a"))))
    out = validate(d, ConstraintSet((UniqueHotkeys(), ExactTabCount(2))))
    text = describe_violations(out)
    assert text.count("\n") == 1
    assert text.splitlines() == [v.message for v in out]
    with pytest.raises(ValueError):
        describe_violations([])


def test_constraint_validation_rejects_bad_parameters():
    with pytest.raises(ConstraintError):
        MaxCommandsPerTab(0)
    with pytest.raises(ConstraintError):
        ExactTabCount(-1)
    with pytest.raises(ConstraintError):
        RequiredTabs(())
    with pytest.raises(ConstraintError):
        UniqueCommandNames("everywhere")
    with pytest.raises(ConstraintError):
        RequiredPlacement("", "File")


def test_constraint_set_json_round_trip():
    cs = ConstraintSet(
        (
            MaxCommandsPerTab(6),
            ExactTabCount(3),
            RequiredTabs(("File", "Edit")),
            RequiredPlacement("Find", "Edit"),
            UniqueHotkeys(),
            UniqueCommandNames("per-tab"),
            ForbiddenHotkeys((parse_hotkey("F1"), parse_hotkey("Ctrl+Q"))),
        )
    )
    obj = constraint_set_to_obj(cs)
    assert constraint_set_from_obj(obj) == cs
    assert obj[0] == {"type": "MaxCommandsPerTab", "limit": 6}


def test_constraint_set_from_obj_rejects_unknown_type():
    with pytest.raises(ConstraintError):
        constraint_set_from_obj([{"type": "Mystery"}])


def test_constraint_clauses_read_as_prompt_fragments():
    assert constraint_clause(MaxCommandsPerTab(6)) == (
        "Tabs should not have more than 6 commands each."
    )
    assert constraint_clause(RequiredPlacement("Find", "Edit")) == (
        "There should be a `Find` command in the `Edit` tab in the app."
    )
    assert "3 tabs" in constraint_clause(ExactTabCount(3))
    assert "`File`" in constraint_clause(RequiredTabs(("File",)))


def test_violation_to_obj_shape():
    d = doc(Tab("T", (cmd("A", "ctrl+a"), cmd("B", "ctrl+a"))))
    out = validate(d, ConstraintSet((UniqueHotkeys(),)))
    obj = violation_to_obj(out[0])
    assert obj["constraint"]["type"] == "UniqueHotkeys"
    assert obj["severity"] == "error"
    assert obj["paths"] == ["T/A", "T/B"]
    assert "share a same shortcut" in obj["message"]


@given(documents_with_hotkeys())
def test_duplicate_hotkey_count_matches_duplicate_groups(d):
    # Independent count: rendered hotkeys seen more than once.
    rendered = [c.hotkey.render() for _, c in leaf_commands(d) if c.hotkey is not None]
    expected = sum(1 for hk in set(rendered) if rendered.count(hk) > 1)
    out = validate(d, ConstraintSet((UniqueHotkeys(),)))
    assert len(out) == expected
