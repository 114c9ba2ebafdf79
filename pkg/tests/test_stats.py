import json

from scan_nacs import corpus, semantics, stats
from scan_nacs.corpus import Direction, SplitSpec


def test_summary_core_counts(universe):
    report = stats.summarize(universe)
    assert report.command_count == 20910
    assert report.distinct_action_sequences == 9228
    assert report.distinct_action_sequences < report.command_count
    assert report.vocabulary_sizes == {
        "scan": {"source": 13, "target": 6},
        "nacs": {"source": 6, "target": 13},
    }


def test_ambiguity_histogram_conserves_mass(universe):
    report = stats.summarize(universe)
    assert sum(size * freq for size, freq in report.ambiguity_histogram.items()) == 20910
    assert sum(report.ambiguity_histogram.values()) == report.distinct_action_sequences
    assert report.max_ambiguity == 19
    assert report.max_ambiguity >= len(semantics.commands_for("JUMP JUMP")) == 3


def test_length_histograms_span_expected_ranges(universe):
    report = stats.summarize(universe)
    assert (min(report.action_length_histogram), max(report.action_length_histogram)) == (1, 48)
    assert (min(report.command_length_histogram), max(report.command_length_histogram)) == (1, 9)
    assert sum(report.action_length_histogram.values()) == 20910
    assert sum(report.command_length_histogram.values()) == 20910


def test_split_size_table(universe):
    splits = {
        "jump": corpus.split_primitive(SplitSpec("primitive", Direction.SCAN, primitive="jump"), universe),
        "length": corpus.split_length(SplitSpec("length", Direction.SCAN, threshold=22), universe),
    }
    report = stats.summarize(universe, splits)
    assert report.split_sizes["jump"] == {"train": 13204, "test": 7706}
    assert report.split_sizes["length"] == {"train": 16990, "test": 3920}


def test_report_is_deterministic_and_serializable(universe):
    a = stats.summarize(universe)
    b = stats.summarize(universe)
    assert a == b
    assert a.to_json() == b.to_json()
    parsed = json.loads(a.to_json())
    assert parsed["command_count"] == 20910
    text = a.to_text()
    assert "20910" in text and "9228" in text
