"""Command-line front end: metrics, split, simulate, selftest.

Exit codes: 0 success, 1 selftest failure, 2 parse/schema/usage errors,
3 alignment errors, 4 split infeasibility. All seeded commands are
deterministic: identical flags (minus --threads) give byte-identical output.
"""

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from .dataset import parse_table
from .errors import (
    AlignmentError,
    DuplicatePair,
    InsufficientEntities,
    InvalidValue,
    ParseError,
    SchemaError,
)
from .metrics import (
    Metric,
    accuracy,
    c_index,
    groupwise_c_index,
    ic_index,
)
from .selftest import run_selftest
from .simulation import XorConfig, run_xor_experiment
from .splits import OtsSetting, assign_groups, make_folds, serialize_fold_plan

METRIC_CODES = {
    "ic": Metric.IC_INDEX,
    "c": Metric.C_INDEX,
    "cd": Metric.C_INDEX_DRUGWISE,
    "ct": Metric.C_INDEX_TARGETWISE,
    "acc": Metric.ACCURACY,
}

_GROUPWISE = (Metric.C_INDEX_DRUGWISE, Metric.C_INDEX_TARGETWISE)


def _fail(message, code):
    click.echo("error: %s" % message, err=True)
    sys.exit(code)


def _guard(body):
    try:
        return body()
    except (ParseError, SchemaError, DuplicatePair, InvalidValue) as exc:
        _fail(str(exc), 2)
    except AlignmentError as exc:
        _fail(str(exc), 3)
    except InsufficientEntities as exc:
        _fail(str(exc), 4)


def _use_color():
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _table_format(path, override):
    if override != "auto":
        return override
    return "tsv" if path.endswith(".tsv") else "csv"


def _write_output(text, out_path):
    if out_path is None:
        click.echo(text, nl=False)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _default_threads():
    return os.cpu_count() or 1


@click.group()
@click.version_option(package_name="icmetrics")
def main():
    """Interaction-aware ranking metrics for bipartite affinity data."""


@main.command("metrics")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Input table with header drug,target,y[,pred].")
@click.option("--metrics", "selection", default="ic,c,cd,ct,acc", show_default=True, help="Comma list drawn from ic,c,cd,ct,acc.")
@click.option("--pred", "pred_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Optional file of predictions, one per record line, replacing the pred column.")
@click.option("--input-format", type=click.Choice(["auto", "csv", "tsv"]), default="auto", show_default=True)
@click.option("--dedup", type=click.Choice(["error", "mean"]), default="error", show_default=True, help="How to treat duplicate (drug, target) rows.")
@click.option("--averaging", type=click.Choice(["pooled", "macro"]), default=None, help="Groupwise averaging; applies only to cd/ct.")
@click.option("--tie-tol", type=float, default=0.0, show_default=True, help="Prediction differences at or below this magnitude count as ties (c, cd, ct only).")
@click.option("--threads", type=int, default=None, help="Worker threads for the IC-index pair loop [default: available cores].")
@click.option("--format", "output_format", type=click.Choice(["table", "json-lines"]), default="table", show_default=True)
def cmd_metrics(input_path, selection, pred_path, input_format, dedup, averaging, tie_tol, threads, output_format):
    """Compute the selected metrics for one dataset + prediction table."""
    codes = [code.strip() for code in selection.split(",") if code.strip()]
    if not codes:
        raise click.UsageError("--metrics must name at least one metric")
    unknown = [code for code in codes if code not in METRIC_CODES]
    if unknown:
        raise click.UsageError(
            "unknown metric code(s) %s; valid codes: %s"
            % (",".join(unknown), ",".join(METRIC_CODES))
        )
    chosen = [METRIC_CODES[code] for code in codes]
    if averaging is not None and not any(metric in _GROUPWISE for metric in chosen):
        raise click.UsageError("--averaging applies only to the groupwise metrics cd and ct")
    if tie_tol < 0:
        raise click.UsageError("--tie-tol must be non-negative")
    if tie_tol > 0 and not any(
        metric in (Metric.C_INDEX,) + _GROUPWISE for metric in chosen
    ):
        raise click.UsageError("--tie-tol applies only to the metrics c, cd, and ct")
    if threads is not None and threads < 1:
        raise click.UsageError("--threads must be a positive integer")
    threads = threads or _default_threads()
    averaging = averaging or "pooled"

    def body():
        text = Path(input_path).read_text(encoding="utf-8")
        fmt = _table_format(input_path, input_format)
        dataset, pred = parse_table(
            text, fmt, has_prediction_column=pred_path is None, dedup=dedup
        )
        if pred_path is not None:
            pred = _read_prediction_file(pred_path)
            if pred.shape[0] != dataset.n:
                raise AlignmentError(
                    "prediction file has %d values for %d records"
                    % (pred.shape[0], dataset.n)
                )
        reports = []
        for metric in chosen:
            if metric is Metric.ACCURACY:
                reports.append(accuracy(dataset, pred))
            elif metric is Metric.C_INDEX:
                reports.append(c_index(dataset, pred, tie_tol))
            elif metric is Metric.C_INDEX_DRUGWISE:
                reports.append(groupwise_c_index(dataset, pred, "drug", averaging, tie_tol))
            elif metric is Metric.C_INDEX_TARGETWISE:
                reports.append(groupwise_c_index(dataset, pred, "target", averaging, tie_tol))
            else:
                reports.append(ic_index(dataset, pred, threads))
        if output_format == "json-lines":
            for report in reports:
                click.echo(
                    json.dumps(
                        {
                            "metric": report.metric.value,
                            "value": report.value,
                            "numerator": report.numerator,
                            "denominator": report.denominator,
                            "defaulted": report.defaulted,
                        }
                    )
                )
        else:
            _echo_report_table(reports)

    _guard(body)


def _read_prediction_file(path):
    values = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                value = float(line)
            except ValueError:
                raise ParseError("cannot parse prediction %r" % (line,), line_number)
            if not np.isfinite(value):
                raise ParseError("non-finite prediction %r" % (line,), line_number)
            values.append(value)
    return np.asarray(values, dtype=np.float64)


def _echo_report_table(reports):
    headers = ("metric", "value", "numerator", "denominator", "defaulted")
    rows = [
        (
            report.metric.value,
            repr(report.value),
            repr(report.numerator),
            str(report.denominator),
            "yes" if report.defaulted else "no",
        )
        for report in reports
    ]
    widths = [
        max(len(headers[col]), *(len(row[col]) for row in rows)) for col in range(5)
    ]
    header_line = "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))
    if _use_color():
        header_line = click.style(header_line, bold=True)
    click.echo(header_line)
    for row in rows:
        click.echo("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))


@main.command("split")
@click.option("--in", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--setting", required=True, type=click.Choice(["idit", "odit", "idot", "odot"]))
@click.option("--k", type=int, default=3, show_default=True, help="Group count per axis.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--input-format", type=click.Choice(["auto", "csv", "tsv"]), default="auto", show_default=True)
@click.option("--dedup", type=click.Choice(["error", "mean"]), default="error", show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the plan here instead of stdout.")
def cmd_split(input_path, setting, k, seed, input_format, dedup, out_path):
    """Generate the k*k fold plan for one off-training-set setting."""
    if k < 1:
        raise click.UsageError("--k must be a positive integer")

    def body():
        text = Path(input_path).read_text(encoding="utf-8")
        fmt = _table_format(input_path, input_format)
        dataset, _ = parse_table(text, fmt, dedup=dedup)
        assignment = assign_groups(dataset, k, seed)
        plan = make_folds(dataset, assignment, OtsSetting(setting.upper()))
        _write_output(serialize_fold_plan(plan), out_path)

    _guard(body)


@main.group("simulate")
def cmd_simulate():
    """Synthetic-data experiments."""


@cmd_simulate.command("xor")
@click.option("--reps", type=int, default=100, show_default=True, help="Number of repetitions.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--threads", type=int, default=None, help="Worker threads for the IC-index pair loop [default: available cores].")
@click.option("--n-drugs", type=int, default=200, show_default=True)
@click.option("--n-targets", type=int, default=200, show_default=True)
@click.option("--drug-threshold", type=int, default=20, show_default=True)
@click.option("--target-threshold", type=int, default=40, show_default=True)
@click.option("--noise-rate", type=float, default=0.05, show_default=True)
@click.option("--known-fraction", type=float, default=0.25, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write the summary table here instead of stdout.")
@click.option("--raw", "raw_path", type=click.Path(dir_okay=False), default=None, help="Also write per-repetition values here.")
def cmd_simulate_xor(reps, seed, threads, n_drugs, n_targets, drug_threshold, target_threshold, noise_rate, known_fraction, out_path, raw_path):
    """Run the imbalanced-XOR experiment and emit the summary table."""
    if reps < 1:
        raise click.UsageError("--reps must be at least 1")
    if threads is not None and threads < 1:
        raise click.UsageError("--threads must be a positive integer")
    threads = threads or _default_threads()

    def body():
        config = XorConfig(
            n_drugs=n_drugs,
            n_targets=n_targets,
            drug_threshold=drug_threshold,
            target_threshold=target_threshold,
            noise_rate=noise_rate,
            known_fraction=known_fraction,
            seed=seed,
        )
        result = run_xor_experiment(config, reps, threads=threads)
        _write_output(result.to_tsv(), out_path)
        if raw_path is not None:
            with open(raw_path, "w", encoding="utf-8", newline="") as handle:
                handle.write(result.to_raw_tsv())

    _guard(body)


@main.command("selftest")
@click.option("--iterations", type=int, default=200, show_default=True)
@click.option("--max-size", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=20260818, show_default=True)
def cmd_selftest(iterations, max_size, seed):
    """Run the randomized oracle-equivalence and invariance suites."""
    if iterations < 1:
        raise click.UsageError("--iterations must be at least 1")
    if max_size < 1:
        raise click.UsageError("--max-size must be at least 1")
    results = run_selftest(iterations, max_size, seed)
    color = _use_color()
    failed = False
    for result in results:
        if result.passed:
            status = click.style("ok  ", fg="green") if color else "ok  "
            click.echo("%s %s (%d cases)" % (status, result.name, result.cases))
        else:
            failed = True
            status = click.style("FAIL", fg="red") if color else "FAIL"
            click.echo(
                "%s %s: counterexample seeds %s"
                % (status, result.name, ", ".join(str(s) for s in result.failing_seeds[:5]))
            )
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
