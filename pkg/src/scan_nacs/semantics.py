"""Interpretation of commands into action sequences, and its inverse.

The forward direction is structural recursion over derivation trees with a
fixed rule table; the inverse is a materialized index from every reachable
action sequence to all commands that produce it.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from typing import Callable, Iterable, Union

from . import grammar
from .grammar import Command, CommandLike, DerivationTree, NotInLanguage

PRIMITIVE_ACTIONS = {"walk": "WALK", "look": "LOOK", "run": "RUN", "jump": "JUMP"}
TURN_ACTIONS = {"left": "LTURN", "right": "RTURN"}

ACTION_VOCABULARY = frozenset(PRIMITIVE_ACTIONS.values()) | frozenset(TURN_ACTIONS.values())

ActionSequence = tuple[str, ...]
ActionsLike = Union[str, Iterable[str]]


def as_actions(actions: ActionsLike) -> ActionSequence:
    if isinstance(actions, str):
        return tuple(actions.split())
    return tuple(actions)


def _interpret_opposite(tree: DerivationTree) -> ActionSequence:
    d = tree.children[0]
    turn = TURN_ACTIONS[grammar.direction_of(d)]
    return (turn, turn) + _d_action_payload(d)


def _interpret_around(tree: DerivationTree) -> ActionSequence:
    d = tree.children[0]
    turn = TURN_ACTIONS[grammar.direction_of(d)]
    return ((turn,) + _d_action_payload(d)) * 4


def _d_action_payload(d: DerivationTree) -> ActionSequence:
    # Action part of a D expansion: empty for "turn", the verb's action otherwise.
    if d.production.rhs[0] == "turn":
        return ()
    return interpret(d.children[0])


_RULES: dict[grammar.Production, Callable[[DerivationTree], ActionSequence]] = {
    grammar.P_C_AND: lambda t: interpret(t.children[0]) + interpret(t.children[1]),
    grammar.P_C_AFTER: lambda t: interpret(t.children[1]) + interpret(t.children[0]),
    grammar.P_C_S: lambda t: interpret(t.children[0]),
    grammar.P_S_TWICE: lambda t: interpret(t.children[0]) * 2,
    grammar.P_S_THRICE: lambda t: interpret(t.children[0]) * 3,
    grammar.P_S_V: lambda t: interpret(t.children[0]),
    grammar.P_V_OPPOSITE: _interpret_opposite,
    grammar.P_V_AROUND: _interpret_around,
    grammar.P_V_D: lambda t: interpret(t.children[0]),
    grammar.P_V_U: lambda t: interpret(t.children[0]),
    grammar.P_D_TURN_LEFT: lambda t: ("LTURN",),
    grammar.P_D_TURN_RIGHT: lambda t: ("RTURN",),
    grammar.P_D_U_LEFT: lambda t: ("LTURN",) + interpret(t.children[0]),
    grammar.P_D_U_RIGHT: lambda t: ("RTURN",) + interpret(t.children[0]),
    grammar.P_U_WALK: lambda t: ("WALK",),
    grammar.P_U_LOOK: lambda t: ("LOOK",),
    grammar.P_U_RUN: lambda t: ("RUN",),
    grammar.P_U_JUMP: lambda t: ("JUMP",),
}


def interpret(tree: DerivationTree) -> ActionSequence:
    """Map a derivation tree to its action sequence.

    Exactly one rule applies per node: the table is keyed by production.
    """
    return _RULES[tree.production](tree)


def translate(command: CommandLike) -> ActionSequence:
    """Parse and interpret a command; raises NotInLanguage for bad input."""
    return interpret(grammar.parse(command))


class InverseIndex:
    """Maps every reachable action sequence to all commands producing it.

    Command sets are stored in canonical lexicographic order.
    """

    def __init__(self, entries: dict[ActionSequence, tuple[Command, ...]]):
        self._entries = entries

    def commands_for(self, actions: ActionsLike) -> tuple[Command, ...]:
        return self._entries.get(as_actions(actions), ())

    def keys(self) -> Iterable[ActionSequence]:
        return self._entries.keys()

    def items(self):
        return self._entries.items()

    def __contains__(self, actions: object) -> bool:
        return isinstance(actions, tuple) and actions in self._entries

    def __len__(self) -> int:
        return len(self._entries)


@functools.lru_cache(maxsize=1)
def build_inverse_index() -> InverseIndex:
    """Index the full command universe by interpretation."""
    by_actions: dict[ActionSequence, list[Command]] = defaultdict(list)
    for tree in grammar.enumerate_trees(grammar.START_SYMBOL):
        by_actions[interpret(tree)].append(grammar.render(tree))
    # Enumeration order is lexicographic on commands, so each value list
    # is already canonically sorted.
    return InverseIndex({actions: tuple(cmds) for actions, cmds in by_actions.items()})


def commands_for(actions: ActionsLike) -> tuple[Command, ...]:
    """All universe commands whose interpretation equals ``actions``.

    Empty for sequences no command reaches, including the empty sequence.
    """
    return build_inverse_index().commands_for(actions)


__all__ = [
    "ACTION_VOCABULARY",
    "ActionSequence",
    "InverseIndex",
    "NotInLanguage",
    "as_actions",
    "build_inverse_index",
    "commands_for",
    "interpret",
    "translate",
]
