"""The SCAN phrase-structure grammar.

Defines the fixed production set over the nonterminals C, S, V, D, U,
enumerates the (finite) language as derivation trees, renders trees to
token sequences, and parses token sequences back to trees.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Union

NONTERMINALS = ("C", "S", "V", "D", "U")
START_SYMBOL = "C"

PRIMITIVE_VERBS = ("walk", "look", "run", "jump")
DIRECTIONS = ("left", "right")

COMMAND_VOCABULARY = frozenset(PRIMITIVE_VERBS) | frozenset(DIRECTIONS) | frozenset(
    ("turn", "opposite", "around", "twice", "thrice", "and", "after")
)

Command = tuple[str, ...]
CommandLike = Union[str, Iterable[str]]

_NONTERMINAL_SET = frozenset(NONTERMINALS)


class NotInLanguage(ValueError):
    """A token sequence that the grammar cannot derive."""

    def __init__(self, tokens: Iterable[str], reason: str):
        self.tokens = tuple(tokens)
        self.reason = reason
        shown = " ".join(self.tokens) if self.tokens else "<empty>"
        super().__init__(f"not a generable command: {shown!r} ({reason})")


@dataclass(frozen=True)
class Production:
    """One grammar rule.

    ``indexed`` marks the two rules (opposite, around) whose rhs D slots are
    the action-part/direction-part projections of a single shared D
    expansion.  ``dir_split`` marks, on the four D rules, the rhs index where
    the direction part of the expansion starts.
    """

    lhs: str
    rhs: tuple[str, ...]
    dir_split: int | None = None
    indexed: bool = False

    def __str__(self) -> str:
        if self.indexed:
            return f"{self.lhs} -> {self.rhs[0]}[1] {self.rhs[1]} {self.rhs[2]}[2]"
        return f"{self.lhs} -> {' '.join(self.rhs)}"


P_C_AND = Production("C", ("S", "and", "S"))
P_C_AFTER = Production("C", ("S", "after", "S"))
P_C_S = Production("C", ("S",))

P_S_TWICE = Production("S", ("V", "twice"))
P_S_THRICE = Production("S", ("V", "thrice"))
P_S_V = Production("S", ("V",))

P_V_OPPOSITE = Production("V", ("D", "opposite", "D"), indexed=True)
P_V_AROUND = Production("V", ("D", "around", "D"), indexed=True)
P_V_D = Production("V", ("D",))
P_V_U = Production("V", ("U",))

P_D_TURN_LEFT = Production("D", ("turn", "left"), dir_split=1)
P_D_TURN_RIGHT = Production("D", ("turn", "right"), dir_split=1)
P_D_U_LEFT = Production("D", ("U", "left"), dir_split=1)
P_D_U_RIGHT = Production("D", ("U", "right"), dir_split=1)

P_U_WALK = Production("U", ("walk",))
P_U_LOOK = Production("U", ("look",))
P_U_RUN = Production("U", ("run",))
P_U_JUMP = Production("U", ("jump",))

PRODUCTIONS = (
    P_C_AND,
    P_C_AFTER,
    P_C_S,
    P_S_TWICE,
    P_S_THRICE,
    P_S_V,
    P_V_OPPOSITE,
    P_V_AROUND,
    P_V_D,
    P_V_U,
    P_D_TURN_LEFT,
    P_D_TURN_RIGHT,
    P_D_U_LEFT,
    P_D_U_RIGHT,
    P_U_WALK,
    P_U_LOOK,
    P_U_RUN,
    P_U_JUMP,
)

_U_BY_VERB = {p.rhs[0]: p for p in (P_U_WALK, P_U_LOOK, P_U_RUN, P_U_JUMP)}
_D_TURN_BY_DIR = {"left": P_D_TURN_LEFT, "right": P_D_TURN_RIGHT}
_D_U_BY_DIR = {"left": P_D_U_LEFT, "right": P_D_U_RIGHT}


def productions() -> list[Production]:
    """The full production set in canonical order (C, S, V, D, U rules)."""
    return list(PRODUCTIONS)


@dataclass(frozen=True)
class DerivationTree:
    """A parse under the grammar.

    ``children`` holds one subtree per nonterminal slot of the production,
    except for the two indexed rules, which hold the single shared D
    expansion whose action and direction parts they interleave around the
    keyword.
    """

    production: Production
    children: tuple["DerivationTree", ...] = ()

    @property
    def root(self) -> str:
        return self.production.lhs

    def walk(self):
        """Yield this node and every descendant, preorder."""
        yield self
        for child in self.children:
            yield from child.walk()

    def __str__(self) -> str:
        return " ".join(render(self))


def direction_of(d: DerivationTree) -> str:
    """The direction token of a D expansion."""
    prod = d.production
    if prod.dir_split is None:
        raise ValueError(f"not a D expansion: {prod}")
    return prod.rhs[prod.dir_split]


def action_part_of(d: DerivationTree) -> tuple[str, ...]:
    """The frontier of a D expansion's action part ("turn" or the U verb)."""
    prod = d.production
    if prod.dir_split is None:
        raise ValueError(f"not a D expansion: {prod}")
    if prod.rhs[0] == "turn":
        return ("turn",)
    return render(d.children[0])


def render(tree: DerivationTree) -> Command:
    """The terminal frontier of a tree, left to right."""
    prod = tree.production
    if prod.indexed:
        d = tree.children[0]
        return action_part_of(d) + (prod.rhs[1],) + (direction_of(d),)
    out: list[str] = []
    child_iter = iter(tree.children)
    for symbol in prod.rhs:
        if symbol in _NONTERMINAL_SET:
            out.extend(render(next(child_iter)))
        else:
            out.append(symbol)
    return tuple(out)


def render_text(tree: DerivationTree) -> str:
    return " ".join(render(tree))


@functools.lru_cache(maxsize=None)
def enumerate_trees(root: str = START_SYMBOL) -> tuple[DerivationTree, ...]:
    """Every derivation tree rooted at ``root``, sorted by rendered string.

    The grammar has no recursive production, so each sub-language is finite;
    subtrees are shared between enclosing trees.
    """
    if root not in _NONTERMINAL_SET:
        raise ValueError(f"unknown nonterminal: {root!r}")
    trees: list[DerivationTree] = []
    for prod in PRODUCTIONS:
        if prod.lhs != root:
            continue
        if prod.indexed:
            trees.extend(DerivationTree(prod, (d,)) for d in enumerate_trees("D"))
            continue
        child_choices = [enumerate_trees(sym) for sym in prod.rhs if sym in _NONTERMINAL_SET]
        trees.extend(DerivationTree(prod, combo) for combo in itertools.product(*child_choices))
    trees.sort(key=render_text)
    return tuple(trees)


def tokenize(text: str) -> Command:
    """Whitespace tokenization; commands are space-separated lowercase words."""
    return tuple(text.split())


def as_command(command: CommandLike) -> Command:
    if isinstance(command, str):
        return tokenize(command)
    return tuple(command)


def parse(tokens: CommandLike) -> DerivationTree:
    """The unique derivation whose frontier equals ``tokens``.

    Raises NotInLanguage for anything the grammar cannot derive, including
    tokens outside the command vocabulary.
    """
    toks = as_command(tokens)
    for tok in toks:
        if tok not in COMMAND_VOCABULARY:
            raise NotInLanguage(toks, f"unknown token {tok!r}")
    if not toks:
        raise NotInLanguage(toks, "empty command")
    return _parse_c(toks)


def _parse_c(toks: Command) -> DerivationTree:
    connectives = [i for i, tok in enumerate(toks) if tok in ("and", "after")]
    if len(connectives) > 1:
        raise NotInLanguage(toks, "more than one connective")
    if connectives:
        i = connectives[0]
        prod = P_C_AND if toks[i] == "and" else P_C_AFTER
        return DerivationTree(prod, (_parse_s(toks[:i], toks), _parse_s(toks[i + 1 :], toks)))
    return DerivationTree(P_C_S, (_parse_s(toks, toks),))


def _parse_s(toks: Command, whole: Command) -> DerivationTree:
    if not toks:
        raise NotInLanguage(whole, "empty clause")
    if toks[-1] == "twice":
        return DerivationTree(P_S_TWICE, (_parse_v(toks[:-1], whole),))
    if toks[-1] == "thrice":
        return DerivationTree(P_S_THRICE, (_parse_v(toks[:-1], whole),))
    return DerivationTree(P_S_V, (_parse_v(toks, whole),))


def _parse_v(toks: Command, whole: Command) -> DerivationTree:
    keywords = [i for i, tok in enumerate(toks) if tok in ("opposite", "around")]
    if len(keywords) > 1:
        raise NotInLanguage(whole, "more than one of opposite/around")
    if keywords:
        i = keywords[0]
        action, direction = toks[:i], toks[i + 1 :]
        if len(direction) != 1 or direction[0] not in DIRECTIONS:
            raise NotInLanguage(whole, f"{toks[i]!r} must be followed by a single direction")
        prod = P_V_OPPOSITE if toks[i] == "opposite" else P_V_AROUND
        return DerivationTree(prod, (_parse_d(action + direction, whole),))
    if len(toks) == 1:
        return DerivationTree(P_V_U, (_parse_u(toks, whole),))
    if len(toks) == 2:
        return DerivationTree(P_V_D, (_parse_d(toks, whole),))
    raise NotInLanguage(whole, f"no verb phrase spans {' '.join(toks)!r}")


def _parse_d(toks: Command, whole: Command) -> DerivationTree:
    if len(toks) != 2 or toks[1] not in DIRECTIONS:
        raise NotInLanguage(whole, f"no directed phrase spans {' '.join(toks)!r}")
    head, direction = toks
    if head == "turn":
        return DerivationTree(_D_TURN_BY_DIR[direction])
    if head in _U_BY_VERB:
        return DerivationTree(_D_U_BY_DIR[direction], (DerivationTree(_U_BY_VERB[head]),))
    raise NotInLanguage(whole, f"{head!r} cannot head a directed phrase")


def _parse_u(toks: Command, whole: Command) -> DerivationTree:
    if len(toks) == 1 and toks[0] in _U_BY_VERB:
        return DerivationTree(_U_BY_VERB[toks[0]])
    raise NotInLanguage(whole, f"no primitive spans {' '.join(toks)!r}")
