import pytest
from hypothesis import given
from hypothesis import strategies as st

from scan_nacs import grammar, semantics
from scan_nacs.grammar import NotInLanguage, enumerate_trees, render
from scan_nacs.semantics import (
    ACTION_VOCABULARY,
    build_inverse_index,
    commands_for,
    interpret,
    translate,
)

from oracles import rewrite_interpret


@pytest.mark.parametrize(
    "command,expected",
    [
        ("jump", "JUMP"),
        ("turn opposite right", "RTURN RTURN"),
        ("walk around left", "LTURN WALK LTURN WALK LTURN WALK LTURN WALK"),
        ("jump after walk", "WALK JUMP"),
        ("look thrice", "LOOK LOOK LOOK"),
        ("walk left and run", "LTURN WALK RUN"),
        ("turn around right", "RTURN RTURN RTURN RTURN"),
        ("jump opposite left twice", "LTURN LTURN JUMP LTURN LTURN JUMP"),
        ("turn left", "LTURN"),
        ("run right", "RTURN RUN"),
    ],
)
def test_interpretation_spot_values(command, expected):
    assert translate(command) == tuple(expected.split())


def test_translate_rejects_non_language():
    with pytest.raises(NotInLanguage):
        translate("around walk left")


def test_action_vocabulary_is_closed_and_disjoint():
    assert len(ACTION_VOCABULARY) == 6
    assert not ACTION_VOCABULARY & grammar.COMMAND_VOCABULARY
    for tree in enumerate_trees("C")[:500]:
        assert set(interpret(tree)) <= ACTION_VOCABULARY


def test_rule_table_covers_every_production_exactly_once():
    assert set(semantics._RULES) == set(grammar.PRODUCTIONS)


def test_after_reverses_constituents_exhaustively():
    after_trees = [t for t in enumerate_trees("C") if t.production is grammar.P_C_AFTER]
    assert len(after_trees) == 10404
    for tree in after_trees:
        x1, x2 = tree.children
        assert interpret(tree) == interpret(x2) + interpret(x1)


def test_and_concatenates_and_repetitions_are_homomorphic():
    for tree in enumerate_trees("C"):
        if tree.production is grammar.P_C_AND:
            x1, x2 = tree.children
            assert interpret(tree) == interpret(x1) + interpret(x2)
    for tree in enumerate_trees("S"):
        body = interpret(tree.children[0])
        if tree.production is grammar.P_S_TWICE:
            assert interpret(tree) == body * 2
        elif tree.production is grammar.P_S_THRICE:
            assert interpret(tree) == body * 3


def test_action_length_bounds():
    lengths = {len(interpret(t)) for t in enumerate_trees("C")}
    assert min(lengths) == 1
    assert max(lengths) == 48
    assert max(len(interpret(t)) for t in enumerate_trees("S")) == 24


@given(st.sampled_from(enumerate_trees("C")))
def test_rewrite_oracle_agrees(tree):
    assert interpret(tree) == rewrite_interpret(render(tree))


def test_inverse_index_partitions_the_universe(inverse_index):
    total = 0
    seen = set()
    for actions, cmds in inverse_index.items():
        assert cmds, "no key may be empty"
        total += len(cmds)
        for cmd in cmds:
            assert cmd not in seen
            seen.add(cmd)
            assert translate(cmd) == actions
    assert total == 20910


def test_inverse_index_is_many_to_one(inverse_index):
    assert len(inverse_index) == 9228
    assert len(inverse_index) < 20910


@pytest.mark.parametrize(
    "actions,expected",
    [
        ("JUMP JUMP", ["jump after jump", "jump and jump", "jump twice"]),
        ("LTURN", ["turn left"]),
        ("WALK JUMP", ["jump after walk", "walk and jump"]),
        (
            # Recorded by exhaustive filter: five JUMPs arise from 2+3 under
            # both connectives.
            "JUMP JUMP JUMP JUMP JUMP",
            [
                "jump thrice after jump twice",
                "jump thrice and jump twice",
                "jump twice after jump thrice",
                "jump twice and jump thrice",
            ],
        ),
        ("JUMP JUMP JUMP JUMP JUMP JUMP JUMP", []),
        ("", []),
        ("WALK STOMP", []),
    ],
)
def test_commands_for_frozen_cases(actions, expected):
    assert [" ".join(c) for c in commands_for(actions)] == expected


def test_commands_for_returns_canonical_order(inverse_index):
    for actions, cmds in list(inverse_index.items())[:200]:
        texts = [" ".join(c) for c in cmds]
        assert texts == sorted(texts)


@given(st.sampled_from(enumerate_trees("C")))
def test_inverse_soundness(tree):
    assert render(tree) in commands_for(interpret(tree))
