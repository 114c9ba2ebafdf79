import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scan_nacs import grammar
from scan_nacs.grammar import (
    COMMAND_VOCABULARY,
    NONTERMINALS,
    DerivationTree,
    NotInLanguage,
    enumerate_trees,
    parse,
    productions,
    render,
    render_text,
)

from oracles import bottom_up_language


def test_production_set_shape():
    prods = productions()
    assert len(prods) == 18
    assert grammar.P_C_AFTER in prods
    assert {p.lhs for p in prods} == set(NONTERMINALS)
    for p in prods:
        for symbol in p.rhs:
            assert symbol in NONTERMINALS or symbol in COMMAND_VOCABULARY


def test_production_rule_counts_by_lhs():
    by_lhs = {}
    for p in productions():
        by_lhs[p.lhs] = by_lhs.get(p.lhs, 0) + 1
    assert by_lhs == {"C": 3, "S": 3, "V": 4, "D": 4, "U": 4}


def test_vocabulary_is_thirteen_words():
    assert len(COMMAND_VOCABULARY) == 13


@pytest.mark.parametrize(
    "root,count",
    [("U", 4), ("D", 10), ("V", 34), ("S", 102), ("C", 20910)],
)
def test_enumeration_counts(root, count):
    assert len(enumerate_trees(root)) == count


def test_enumeration_counts_follow_closed_form():
    v = len(enumerate_trees("V"))
    s = len(enumerate_trees("S"))
    assert v == 10 + 10 + 10 + 4
    assert s == 3 * v
    assert len(enumerate_trees("C")) == s + 2 * s * s


def test_enumeration_is_sorted_and_duplicate_free():
    for root in NONTERMINALS:
        rendered = [render_text(t) for t in enumerate_trees(root)]
        assert rendered == sorted(rendered)
        assert len(set(rendered)) == len(rendered)


def test_enumeration_rejects_unknown_root():
    with pytest.raises(ValueError):
        enumerate_trees("X")


def test_render_single_leaf():
    jump = DerivationTree(grammar.P_U_JUMP)
    assert render(jump) == ("jump",)


def test_render_interleaves_opposite():
    tree = parse("walk opposite left")
    assert render(tree) == ("walk", "opposite", "left")
    v = tree.children[0].children[0]
    assert v.production is grammar.P_V_OPPOSITE
    d = v.children[0]
    assert d.production is grammar.P_D_U_LEFT


def test_parse_smallest_command():
    tree = parse("walk")
    assert tree.production is grammar.P_C_S
    s = tree.children[0]
    assert s.production is grammar.P_S_V
    v = s.children[0]
    assert v.production is grammar.P_V_U
    assert v.children[0].production is grammar.P_U_WALK


@pytest.mark.parametrize(
    "bad",
    [
        "jump twice twice",
        "run and walk after look",
        "around walk left",
        "turn",
        "walk opposite",
        "opposite left",
        "walk walk",
        "left turn",
        "walk and",
        "and walk",
        "",
        "JUMP",
        "walk quickly",
    ],
)
def test_parse_rejects_non_language(bad):
    with pytest.raises(NotInLanguage):
        parse(bad)


def test_parse_accepts_tokens_or_text():
    assert parse(["turn", "left"]) == parse("turn left")


def test_two_enumeration_strategies_agree():
    tables = bottom_up_language()
    for root in NONTERMINALS:
        assert [render_text(t) for t in enumerate_trees(root)] == tables[root]


@given(st.sampled_from(enumerate_trees("C")))
def test_parse_render_round_trip(tree):
    assert parse(render(tree)) == tree


_LANGUAGE = frozenset(bottom_up_language()["C"])
_TOKENS = sorted(COMMAND_VOCABULARY)


@given(
    st.sampled_from(sorted(_LANGUAGE)),
    st.integers(min_value=0, max_value=8),
    st.sampled_from(_TOKENS),
    st.sampled_from(["insert", "delete", "replace"]),
)
def test_parse_agrees_with_membership_oracle(command, position, token, edit):
    tokens = command.split()
    position = min(position, len(tokens) - 1)
    if edit == "insert":
        tokens.insert(position, token)
    elif edit == "delete":
        del tokens[position]
    else:
        tokens[position] = token
    mutated = " ".join(tokens)
    if mutated in _LANGUAGE:
        assert render_text(parse(tokens)) == mutated
    else:
        with pytest.raises(NotInLanguage):
            parse(tokens)
