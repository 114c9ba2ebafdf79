import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scan_nacs import corpus, evaluator, semantics
from scan_nacs.corpus import Direction, SplitSpec
from scan_nacs.evaluator import (
    AlignmentError,
    REASON_MISMATCH,
    REASON_PARSE_FAILURE,
    REASON_SEMANTIC_MISMATCH,
    eval_nacs,
    eval_scan,
    score_files,
)


def _gold(*examples):
    return [(tuple(src.split()), tuple(tgt.split())) for src, tgt in examples]


class TestEvalScan:
    def test_exact_match_is_correct(self):
        gold = _gold(("jump twice", "JUMP JUMP"))
        report = eval_scan(gold, [("JUMP", "JUMP")])
        assert report.accuracy == 1.0

    def test_truncated_prediction_is_mismatch(self):
        gold = _gold(("jump twice", "JUMP JUMP"))
        report = eval_scan(gold, [("JUMP",)])
        assert report.accuracy == 0.0
        assert report.verdicts[0].reason == REASON_MISMATCH

    def test_order_matters(self):
        gold = _gold(("walk left", "LTURN WALK"))
        report = eval_scan(gold, [("WALK", "LTURN")])
        assert report.correct == 0

    def test_alignment_checked(self):
        with pytest.raises(AlignmentError):
            eval_scan(_gold(("jump", "JUMP")), [])


class TestEvalNacs:
    def test_any_preimage_is_correct(self):
        gold = _gold(("JUMP JUMP", "jump twice"))
        report = eval_nacs(gold, [("jump", "and", "jump")])
        assert report.accuracy == 1.0
        assert report.accepted_non_gold == 1

    def test_gold_command_counts_but_is_not_non_gold(self):
        gold = _gold(("JUMP JUMP", "jump twice"))
        report = eval_nacs(gold, [("jump", "twice")])
        assert report.accuracy == 1.0
        assert report.accepted_non_gold == 0

    def test_wrong_multiplicity_is_semantic_mismatch(self):
        gold = _gold(("JUMP JUMP", "jump twice"))
        report = eval_nacs(gold, [("jump", "thrice")])
        assert report.verdicts[0].reason == REASON_SEMANTIC_MISMATCH

    def test_ungrammatical_prediction_is_parse_failure(self):
        gold = _gold(("JUMP JUMP", "jump twice"))
        report = eval_nacs(gold, [("twice", "jump")])
        assert report.verdicts[0].reason == REASON_PARSE_FAILURE


@given(
    st.sampled_from(corpus.build_universe()),
    st.integers(min_value=0, max_value=8),
    st.sampled_from(sorted(corpus.grammar.COMMAND_VOCABULARY)),
)
def test_nacs_verdict_agrees_with_preimage_oracle(pair, position, token):
    mutated = list(pair.command)
    mutated[min(position, len(mutated) - 1)] = token
    mutated = tuple(mutated)
    gold = [(pair.actions, pair.command)]
    report = eval_nacs(gold, [mutated])
    assert report.verdicts[0].correct == (mutated in semantics.commands_for(pair.actions))


def test_accuracy_is_mean_of_indicators():
    gold = _gold(("JUMP", "jump"), ("WALK", "walk"), ("RUN", "run"), ("LOOK", "look"))
    preds = [("jump",), ("walk",), ("run",), ("walk",)]
    report = eval_nacs(gold, preds)
    assert report.accuracy == 3 / 4
    assert report.total == len(report.verdicts) == 4


class TestScoreFiles:
    @pytest.fixture()
    def dataset_dir(self, universe, tmp_path):
        spec = SplitSpec("primitive", Direction.NACS, primitive="jump")
        corpus.write_dataset(corpus.make_split(spec, universe), tmp_path)
        return tmp_path

    def _write_predictions(self, path, lines):
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    def test_gold_predictions_score_one(self, dataset_dir, tmp_path):
        gold_lines = [
            line.split(" OUT: ")[1]
            for line in (dataset_dir / "test.txt").read_text().splitlines()
        ]
        preds = self._write_predictions(tmp_path / "preds.txt", gold_lines)
        report = score_files(dataset_dir, preds)
        assert report.accuracy == 1.0
        assert report.direction is Direction.NACS

    def test_preimage_substitution_scores_one(self, dataset_dir, tmp_path, universe):
        dataset = corpus.read_dataset(dataset_dir)
        rng = random.Random(0)
        lines = [
            " ".join(rng.choice(semantics.commands_for(pair.actions)))
            for pair in dataset.test
        ]
        preds = self._write_predictions(tmp_path / "preds.txt", lines)
        report = score_files(dataset_dir, preds)
        assert report.accuracy == 1.0
        assert report.accepted_non_gold > 0

    def test_whitespace_in_predictions_is_normalized(self, dataset_dir, tmp_path):
        lines = [
            "   " + line.split(" OUT: ")[1].replace(" ", "   ") + "  "
            for line in (dataset_dir / "test.txt").read_text().splitlines()
        ]
        preds = self._write_predictions(tmp_path / "preds.txt", lines)
        assert score_files(dataset_dir, preds).accuracy == 1.0

    def test_empty_predictions_file_is_alignment_error(self, dataset_dir, tmp_path):
        preds = self._write_predictions(tmp_path / "preds.txt", [])
        with pytest.raises(AlignmentError):
            score_files(dataset_dir, preds)

    def test_direction_must_match_manifest(self, dataset_dir, tmp_path):
        preds = self._write_predictions(tmp_path / "preds.txt", ["jump"])
        with pytest.raises(ValueError, match="oriented"):
            score_files(dataset_dir, preds, Direction.SCAN)

    def test_report_file_written(self, dataset_dir, tmp_path):
        gold_lines = [
            line.split(" OUT: ")[1]
            for line in (dataset_dir / "test.txt").read_text().splitlines()
        ]
        preds = self._write_predictions(tmp_path / "preds.txt", gold_lines)
        report_path = tmp_path / "report.json"
        score_files(dataset_dir, preds, report_path=report_path)
        import json

        data = json.loads(report_path.read_text())
        assert data["accuracy"] == 1.0
        assert data["total"] == 7706
        assert "accepted_non_gold" in data
