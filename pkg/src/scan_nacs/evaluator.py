"""Sequence-level scoring of prediction files.

SCAN predictions are scored by exact target match.  NACS predictions are
scored semantically: the predicted command must parse and reinterpret to the
example's source action sequence; the gold command string is never required.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import corpus, grammar, semantics
from .corpus import Dataset, Direction

REASON_MISMATCH = "mismatch"
REASON_PARSE_FAILURE = "parse-failure"
REASON_SEMANTIC_MISMATCH = "semantic-mismatch"

OrientedExample = tuple[tuple[str, ...], tuple[str, ...]]


class AlignmentError(ValueError):
    """Prediction count differs from the test-example count."""


@dataclass(frozen=True)
class Verdict:
    index: int
    correct: bool
    reason: str | None = None  # one of the REASON_* constants when incorrect


@dataclass(frozen=True)
class EvalReport:
    direction: Direction
    total: int
    correct: int
    verdicts: tuple[Verdict, ...]
    # Correct NACS predictions whose command differs from the gold string;
    # always 0 for SCAN, where only exact matches count.
    accepted_non_gold: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def reason_histogram(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for v in self.verdicts:
            if not v.correct:
                counts[v.reason] = counts.get(v.reason, 0) + 1
        return counts

    def to_dict(self, include_verdicts: bool = False) -> dict:
        data = {
            "direction": self.direction.value,
            "total": self.total,
            "correct": self.correct,
            "accuracy": self.accuracy,
            "reasons": self.reason_histogram(),
            "accepted_non_gold": self.accepted_non_gold,
        }
        if include_verdicts:
            data["verdicts"] = [
                {"index": v.index, "correct": v.correct, "reason": v.reason}
                for v in self.verdicts
            ]
        return data


def _check_alignment(gold: Sequence, predictions: Sequence) -> None:
    if len(gold) != len(predictions):
        raise AlignmentError(
            f"{len(predictions)} predictions for {len(gold)} test examples"
        )


def eval_scan(gold: Sequence[OrientedExample], predictions: Sequence[Sequence[str]]) -> EvalReport:
    """Exact-match scoring of action-sequence predictions."""
    _check_alignment(gold, predictions)
    verdicts = []
    for i, ((_, target), pred) in enumerate(zip(gold, predictions)):
        if tuple(pred) == target:
            verdicts.append(Verdict(i, True))
        else:
            verdicts.append(Verdict(i, False, REASON_MISMATCH))
    correct = sum(v.correct for v in verdicts)
    return EvalReport(Direction.SCAN, len(verdicts), correct, tuple(verdicts))


def eval_nacs(gold: Sequence[OrientedExample], predictions: Sequence[Sequence[str]]) -> EvalReport:
    """Semantic scoring of command predictions against source actions."""
    _check_alignment(gold, predictions)
    verdicts = []
    non_gold = 0
    for i, ((source, target), pred) in enumerate(zip(gold, predictions)):
        pred = tuple(pred)
        try:
            actions = semantics.interpret(grammar.parse(pred))
        except grammar.NotInLanguage:
            verdicts.append(Verdict(i, False, REASON_PARSE_FAILURE))
            continue
        if actions == source:
            verdicts.append(Verdict(i, True))
            non_gold += pred != target
        else:
            verdicts.append(Verdict(i, False, REASON_SEMANTIC_MISMATCH))
    correct = sum(v.correct for v in verdicts)
    return EvalReport(Direction.NACS, len(verdicts), correct, tuple(verdicts), non_gold)


def evaluate(gold: Sequence[OrientedExample], predictions: Sequence[Sequence[str]], direction: Direction) -> EvalReport:
    scorer = eval_scan if direction is Direction.SCAN else eval_nacs
    return scorer(gold, predictions)


def read_predictions(path: Path | str) -> list[tuple[str, ...]]:
    """One prediction per line; runs of whitespace collapse to single spaces."""
    text = Path(path).read_text(encoding="utf-8")
    return [tuple(line.split()) for line in text.splitlines()]


def score_files(
    dataset_dir: Path | str,
    predictions_path: Path | str,
    direction: Direction | None = None,
    report_path: Path | str | None = None,
    include_verdicts: bool = False,
) -> EvalReport:
    """Score a predictions file against a dataset directory's test side."""
    dataset = corpus.read_dataset(dataset_dir)
    if direction is None:
        direction = dataset.manifest.direction
    elif direction is not dataset.manifest.direction:
        raise ValueError(
            f"dataset at {dataset_dir} is oriented {dataset.manifest.direction.value}, "
            f"not {direction.value}"
        )
    gold = corpus.orient(dataset.test, direction)
    predictions = read_predictions(predictions_path)
    report = evaluate(gold, predictions, direction)
    if report_path is not None:
        write_report(report, report_path, include_verdicts=include_verdicts)
    return report


def write_report(report: EvalReport, path: Path | str, include_verdicts: bool = False) -> None:
    text = json.dumps(report.to_dict(include_verdicts=include_verdicts), indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")
