"""Structural statistics of the task universe.

Summarizes the facts that make the reversed task resist degenerate
solutions: how many commands collapse onto each action sequence, the
source/target vocabulary asymmetry, and the length distributions.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import grammar, semantics
from .corpus import Dataset, TaskPair


@dataclass(frozen=True)
class StatsReport:
    command_count: int
    distinct_action_sequences: int
    ambiguity_histogram: dict[int, int]  # pre-image size -> number of action sequences
    vocabulary_sizes: dict[str, dict[str, int]]  # per direction: source/target
    action_length_histogram: dict[int, int]
    command_length_histogram: dict[int, int]
    split_sizes: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def max_ambiguity(self) -> int:
        return max(self.ambiguity_histogram)

    def to_dict(self) -> dict:
        return {
            "command_count": self.command_count,
            "distinct_action_sequences": self.distinct_action_sequences,
            "max_ambiguity": self.max_ambiguity,
            "ambiguity_histogram": {str(k): v for k, v in sorted(self.ambiguity_histogram.items())},
            "vocabulary_sizes": self.vocabulary_sizes,
            "action_length_histogram": {str(k): v for k, v in sorted(self.action_length_histogram.items())},
            "command_length_histogram": {str(k): v for k, v in sorted(self.command_length_histogram.items())},
            "split_sizes": self.split_sizes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"commands                  {self.command_count}",
            f"distinct action sequences {self.distinct_action_sequences}",
            f"max pre-image size        {self.max_ambiguity}",
            "",
            "vocabulary sizes (source/target)",
        ]
        for direction, sizes in self.vocabulary_sizes.items():
            lines.append(f"  {direction:<5} {sizes['source']:>3} / {sizes['target']:>3}")
        lines.append("")
        lines.append("pre-image size -> action sequences")
        for size, count in sorted(self.ambiguity_histogram.items()):
            lines.append(f"  {size:>3} {count:>6}")
        lines.append("")
        lines.append(_histogram_block("command length (tokens)", self.command_length_histogram))
        lines.append(_histogram_block("action length (tokens)", self.action_length_histogram))
        if self.split_sizes:
            lines.append("split sizes (train/test)")
            for name, sizes in self.split_sizes.items():
                lines.append(f"  {name:<20} {sizes['train']:>6} / {sizes['test']:>6}")
            lines.append("")
        return "\n".join(lines)


def _histogram_block(title: str, histogram: Mapping[int, int]) -> str:
    lines = [title]
    for length, count in sorted(histogram.items()):
        lines.append(f"  {length:>3} {count:>6}")
    lines.append("")
    return "\n".join(lines)


def summarize(
    universe: Sequence[TaskPair],
    splits: Mapping[str, Dataset] | None = None,
) -> StatsReport:
    """All report fields, deterministically."""
    preimage_sizes = Counter(len(cmds) for _, cmds in semantics.build_inverse_index().items())
    command_vocab = len(grammar.COMMAND_VOCABULARY)
    action_vocab = len(semantics.ACTION_VOCABULARY)
    split_sizes = {
        name: {"train": len(ds.train), "test": len(ds.test)}
        for name, ds in (splits or {}).items()
    }
    return StatsReport(
        command_count=len(universe),
        distinct_action_sequences=len(semantics.build_inverse_index()),
        ambiguity_histogram=dict(preimage_sizes),
        vocabulary_sizes={
            "scan": {"source": command_vocab, "target": action_vocab},
            "nacs": {"source": action_vocab, "target": command_vocab},
        },
        action_length_histogram=dict(Counter(len(p.actions) for p in universe)),
        command_length_histogram=dict(Counter(len(p.command) for p in universe)),
        split_sizes=split_sizes,
    )
