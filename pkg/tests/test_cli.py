import json
import subprocess
import sys

import pytest

from scan_nacs import cli


def run_cli(*argv):
    return cli.main(list(argv))


def test_generate_primitive_nacs(tmp_path, capsys):
    out = tmp_path / "ds"
    assert run_cli("generate", "--direction", "nacs", "--split", "primitive",
                   "--primitive", "jump", "--out", str(out)) == 0
    assert len((out / "train.txt").read_text().splitlines()) == 13204
    assert len((out / "test.txt").read_text().splitlines()) == 7706
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["direction"] == "nacs"
    assert "wrote" in capsys.readouterr().out


def test_generate_is_byte_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run_cli("generate", "--direction", "scan", "--split", "simple",
                       "--seed", "7", "--out", str(tmp_path / name)) == 0
    for fname in ("train.txt", "test.txt", "manifest.json"):
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()


def test_generate_length_split_uses_default_threshold(tmp_path):
    out = tmp_path / "len"
    assert run_cli("generate", "--direction", "scan", "--split", "length", "--out", str(out)) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["split"]["threshold"] == 22
    assert manifest["train_count"] == 16990


@pytest.mark.parametrize(
    "argv",
    [
        ("generate", "--direction", "scan", "--split", "simple", "--fraction", "1.5", "--seed", "1", "--out", "x"),
        ("generate", "--direction", "scan", "--split", "simple", "--out", "x"),  # missing seed
        ("generate", "--direction", "scan", "--split", "length", "--fraction", "0.8", "--out", "x"),
        ("generate", "--direction", "scan", "--split", "primitive", "--out", "x"),  # missing primitive
        ("generate", "--direction", "scan", "--split", "primitive", "--primitive", "walk", "--out", "x"),
        ("generate", "--direction", "sideways", "--split", "length", "--out", "x"),
        ("frobnicate",),
    ],
)
def test_usage_errors_exit_2(argv, tmp_path):
    with pytest.raises(SystemExit) as err:
        run_cli(*[a if a != "x" else str(tmp_path / "x") for a in argv])
    assert err.value.code == 2


def test_degenerate_split_exits_1(tmp_path, capsys):
    code = run_cli("generate", "--direction", "scan", "--split", "length",
                   "--threshold", "48", "--out", str(tmp_path / "ds"))
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_eval_gold_predictions(tmp_path, capsys):
    out = tmp_path / "ds"
    run_cli("generate", "--direction", "nacs", "--split", "length", "--out", str(out))
    gold = [line.split(" OUT: ")[1] for line in (out / "test.txt").read_text().splitlines()]
    preds = tmp_path / "preds.txt"
    preds.write_text("".join(g + "\n" for g in gold))
    report_path = tmp_path / "report.json"
    assert run_cli("eval", "--dataset", str(out), "--predictions", str(preds),
                   "--report", str(report_path)) == 0
    assert "1.0000" in capsys.readouterr().out
    assert json.loads(report_path.read_text())["accuracy"] == 1.0


def test_eval_direction_conflict_exits_1(tmp_path, capsys):
    out = tmp_path / "ds"
    run_cli("generate", "--direction", "nacs", "--split", "primitive",
            "--primitive", "turn_left", "--out", str(out))
    preds = tmp_path / "preds.txt"
    preds.write_text("jump\n")
    assert run_cli("eval", "--dataset", str(out), "--predictions", str(preds),
                   "--direction", "scan") == 1
    assert "oriented" in capsys.readouterr().err


def test_eval_missing_dataset_exits_1(tmp_path, capsys):
    preds = tmp_path / "preds.txt"
    preds.write_text("jump\n")
    assert run_cli("eval", "--dataset", str(tmp_path / "nope"), "--predictions", str(preds)) == 1
    capsys.readouterr()


def test_stats_writes_reports(tmp_path, capsys):
    out = tmp_path / "stats"
    assert run_cli("stats", "--out", str(out)) == 0
    data = json.loads((out / "stats.json").read_text())
    assert data["command_count"] == 20910
    assert data["split_sizes"]["primitive:jump"] == {"train": 13204, "test": 7706}
    assert data["split_sizes"]["primitive:turn_left"] == {"train": 17392, "test": 3518}
    assert (out / "stats.txt").read_text().startswith("commands")
    capsys.readouterr()


def test_module_entry_point_reports_version():
    proc = subprocess.run(
        [sys.executable, "-m", "scan_nacs", "--version"],
        capture_output=True, text=True, check=True,
    )
    assert "scan-nacs 0.1.0" in proc.stdout
