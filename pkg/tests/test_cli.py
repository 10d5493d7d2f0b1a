import json

import pytest
from click.testing import CliRunner

from icmetrics import counting
from icmetrics.cli import main
from icmetrics.counting import ConcordanceCounts


GRID_CSV = "drug,target,y,pred\nd1,t1,1,2\nd1,t2,0,1\nd2,t1,0,0\nd2,t2,1,3\n"


@pytest.fixture
def runner():
    return CliRunner()


def write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return str(path)


def test_metrics_table_contains_ic_line(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", GRID_CSV)
    result = runner.invoke(main, ["metrics", "--in", data, "--metrics", "ic,c,cd,ct,acc"])
    assert result.exit_code == 0, result.output
    lines = result.output.strip().split("\n")
    assert lines[0].split()[:2] == ["metric", "value"]
    ic_line = [line for line in lines if line.startswith("ic_index")]
    assert ic_line and ic_line[0].split()[1] == "1.0"


def test_metrics_json_lines(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", GRID_CSV)
    result = runner.invoke(
        main, ["metrics", "--in", data, "--format", "json-lines", "--metrics", "ic,acc"]
    )
    assert result.exit_code == 0, result.output
    rows = [json.loads(line) for line in result.output.strip().split("\n")]
    assert rows[0] == {
        "metric": "ic_index",
        "value": 1.0,
        "numerator": 1.0,
        "denominator": 1,
        "defaulted": False,
    }
    assert rows[1]["metric"] == "accuracy"
    assert rows[1]["value"] == 0.75


def test_metrics_duplicate_pair_exits_2(runner, tmp_path):
    data = write(tmp_path / "dup.csv", "drug,target,y\nd1,t1,1\nd1,t1,2\n")
    result = runner.invoke(main, ["metrics", "--in", data])
    assert result.exit_code == 2
    assert "error:" in result.output


def test_metrics_dedup_mean_flag(runner, tmp_path):
    data = write(tmp_path / "dup.csv", "drug,target,y,pred\nd1,t1,1,1\nd1,t1,3,1\n")
    result = runner.invoke(
        main, ["metrics", "--in", data, "--dedup", "mean", "--metrics", "acc"]
    )
    assert result.exit_code == 0, result.output


def test_metrics_averaging_requires_groupwise(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", GRID_CSV)
    result = runner.invoke(
        main, ["metrics", "--in", data, "--metrics", "ic", "--averaging", "macro"]
    )
    assert result.exit_code == 2
    assert "averaging" in result.output


def test_metrics_tie_tol_requires_c_family(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", GRID_CSV)
    result = runner.invoke(
        main, ["metrics", "--in", data, "--metrics", "ic,acc", "--tie-tol", "0.5"]
    )
    assert result.exit_code == 2
    assert "tie-tol" in result.output
    ok = runner.invoke(
        main, ["metrics", "--in", data, "--metrics", "c", "--tie-tol", "0.5"]
    )
    assert ok.exit_code == 0


def test_metrics_unknown_code(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", GRID_CSV)
    result = runner.invoke(main, ["metrics", "--in", data, "--metrics", "ic,zzz"])
    assert result.exit_code == 2
    assert "zzz" in result.output


def test_metrics_external_prediction_file(runner, tmp_path):
    data = write(tmp_path / "pairs.csv", "drug,target,y\nd1,t1,1\nd1,t2,0\nd2,t1,0\nd2,t2,1\n")
    preds = write(tmp_path / "preds.txt", "2\n1\n0\n3\n")
    result = runner.invoke(
        main, ["metrics", "--in", data, "--pred", preds, "--metrics", "ic", "--format", "json-lines"]
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["value"] == 1.0
    short = write(tmp_path / "short.txt", "1\n2\n")
    result = runner.invoke(main, ["metrics", "--in", data, "--pred", short])
    assert result.exit_code == 3


def test_metrics_missing_pred_column_exits_2(runner, tmp_path):
    data = write(tmp_path / "bare.csv", "drug,target,y\nd1,t1,1\n")
    result = runner.invoke(main, ["metrics", "--in", data, "--metrics", "acc"])
    assert result.exit_code == 2


def test_metrics_reads_tsv_by_extension(runner, tmp_path):
    data = write(tmp_path / "pairs.tsv", GRID_CSV.replace(",", "\t"))
    result = runner.invoke(main, ["metrics", "--in", data, "--metrics", "ic", "--format", "json-lines"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["value"] == 1.0


def dense_csv(n_drugs, n_targets):
    lines = ["drug,target,y"]
    value = 0
    for i in range(n_drugs):
        for j in range(n_targets):
            lines.append("d%d,t%d,%d" % (i, j, value))
            value += 1
    return "\n".join(lines) + "\n"


def test_split_deterministic_and_structured(runner, tmp_path):
    data = write(tmp_path / "grid.csv", dense_csv(6, 6))
    out1 = tmp_path / "plan1.json"
    out2 = tmp_path / "plan2.json"
    for out in (out1, out2):
        result = runner.invoke(
            main,
            ["split", "--in", data, "--setting", "odot", "--seed", "7", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert len(doc["folds"]) == 9
    assert all(len(fold["test"]) == 4 for fold in doc["folds"])
    assert all(len(fold["train"]) == 16 for fold in doc["folds"])


def test_split_idit_fold_counts(runner, tmp_path):
    data = write(tmp_path / "grid.csv", dense_csv(6, 6))
    result = runner.invoke(main, ["split", "--in", data, "--setting", "idit"])
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert len(doc["folds"]) == 9
    assert all(len(fold["test"]) == 4 for fold in doc["folds"])
    assert all(len(fold["train"]) == 32 for fold in doc["folds"])


def test_split_two_drugs_exits_4(runner, tmp_path):
    data = write(tmp_path / "thin.csv", dense_csv(2, 6))
    result = runner.invoke(main, ["split", "--in", data, "--setting", "odot"])
    assert result.exit_code == 4


def test_simulate_xor_row_count(runner):
    result = runner.invoke(
        main,
        [
            "simulate", "xor", "--reps", "2", "--seed", "1",
            "--n-drugs", "20", "--n-targets", "20",
            "--drug-threshold", "2", "--target-threshold", "4",
        ],
    )
    assert result.exit_code == 0, result.output
    lines = result.output.strip().split("\n")
    assert len(lines) == 1 + 100
    assert lines[0].startswith("learner\tsetting\tmetric")


def test_simulate_xor_thread_count_does_not_change_output(runner, tmp_path):
    args = [
        "simulate", "xor", "--reps", "3", "--seed", "9",
        "--n-drugs", "16", "--n-targets", "16",
        "--drug-threshold", "2", "--target-threshold", "3",
    ]
    one = runner.invoke(main, args + ["--threads", "1"])
    many = runner.invoke(main, args + ["--threads", "8"])
    assert one.exit_code == 0 and many.exit_code == 0
    assert one.output == many.output


def test_simulate_xor_raw_output(runner, tmp_path):
    out = tmp_path / "summary.tsv"
    raw = tmp_path / "raw.tsv"
    result = runner.invoke(
        main,
        [
            "simulate", "xor", "--reps", "2", "--seed", "3",
            "--n-drugs", "12", "--n-targets", "12",
            "--drug-threshold", "2", "--target-threshold", "3",
            "--out", str(out), "--raw", str(raw),
        ],
    )
    assert result.exit_code == 0, result.output
    assert out.read_text().count("\n") == 1 + 100
    assert raw.read_text().count("\n") == 1 + 200


def test_selftest_passes(runner):
    result = runner.invoke(main, ["selftest", "--iterations", "25", "--max-size", "5"])
    assert result.exit_code == 0, result.output
    assert result.output.count("ok") == 5


def test_selftest_detects_corrupted_kernel(runner, monkeypatch):
    real = counting.count_concordance

    def corrupted(keys, values, tie_tol=0.0):
        c, d, t = real(keys, values, tie_tol)
        return ConcordanceCounts(c - 1 if c > 2 else c, d, t)

    monkeypatch.setattr(counting, "count_concordance", corrupted)
    result = runner.invoke(main, ["selftest", "--iterations", "25", "--max-size", "6"])
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "counterexample" in result.output


def test_version_flag(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.output
