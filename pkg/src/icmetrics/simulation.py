"""Imbalanced-XOR simulation: synthetic ground truth plus a repeated experiment.

The generator lays labels over an n_drugs x n_targets grid by the rule

    label(i_d, i_t) = 2 * [(i_d > drug_threshold) XOR (i_t <= target_threshold)] - 1

with 1-based indices, flips each label independently with `noise_rate`, and
marks an exact-count uniform subset of cells as known. The experiment then
repeatedly splits both axes into random halves A/B, trains the five sum
baselines on the known cells of block (A, A), and scores all five metrics on
four pools: the rest of (A, A) for IDIT and the full (B, A) / (A, B) / (B, B)
blocks for ODIT / IDOT / ODOT.

Determinism: every repetition derives child seeds from the master seed via
`rng.derive_seed` (indices 2*rep and 2*rep+1 for the data and the halving),
so results are bit-identical for a fixed seed regardless of evaluation order
or thread count.
"""

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .baselines import BaselineKind, fit_sums_arrays, predict_arrays
from .errors import InvalidValue
from .metrics import (
    Metric,
    accuracy_arrays,
    c_index_arrays,
    groupwise_c_index_arrays,
    ic_index_arrays,
)
from .rng import MASK64, derive_seed
from .splits import OtsSetting

ALL_LEARNERS = (
    BaselineKind.GS,
    BaselineKind.DS,
    BaselineKind.TS,
    BaselineKind.SS,
    BaselineKind.PS,
)
ALL_SETTINGS = (
    OtsSetting.IDIT,
    OtsSetting.ODIT,
    OtsSetting.IDOT,
    OtsSetting.ODOT,
)
ALL_METRICS = (
    Metric.ACCURACY,
    Metric.C_INDEX,
    Metric.C_INDEX_DRUGWISE,
    Metric.C_INDEX_TARGETWISE,
    Metric.IC_INDEX,
)


@dataclass(frozen=True)
class XorConfig:
    n_drugs: int = 200
    n_targets: int = 200
    drug_threshold: int = 20
    target_threshold: int = 40
    noise_rate: float = 0.05
    known_fraction: float = 0.25
    seed: int = 0

    def __post_init__(self):
        if self.n_drugs < 1 or self.n_targets < 1:
            raise InvalidValue("grid dimensions must be positive")
        if not 0 <= self.drug_threshold <= self.n_drugs:
            raise InvalidValue("drug_threshold outside the drug index range")
        if not 0 <= self.target_threshold <= self.n_targets:
            raise InvalidValue("target_threshold outside the target index range")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise InvalidValue("noise_rate must lie in [0, 1]")
        if not 0.0 <= self.known_fraction <= 1.0:
            raise InvalidValue("known_fraction must lie in [0, 1]")


def generate_xor(config):
    """Return (labels, known): an int8 matrix of -1/+1 labels and a boolean mask.

    Draw order is fixed: one uniform per cell for noise flips (row-major),
    then one permutation of the cell indices whose first round(known_fraction
    * cells) entries become the known subset.
    """
    rng = np.random.Generator(np.random.PCG64(config.seed & MASK64))
    drug_index = np.arange(1, config.n_drugs + 1)
    target_index = np.arange(1, config.n_targets + 1)
    pattern = np.logical_xor(
        (drug_index > config.drug_threshold)[:, None],
        (target_index <= config.target_threshold)[None, :],
    )
    labels = np.where(pattern, 1, -1).astype(np.int8)
    flips = rng.random(labels.shape) < config.noise_rate
    labels = np.where(flips, -labels, labels)
    cells = config.n_drugs * config.n_targets
    known_count = int(round(config.known_fraction * cells))
    known = np.zeros(cells, dtype=bool)
    known[rng.permutation(cells)[:known_count]] = True
    return labels, known.reshape(labels.shape)


class SummaryRow(NamedTuple):
    learner: str
    setting: str
    metric: str
    mean: float
    lo95: float
    hi95: float
    repetitions: int


@dataclass(frozen=True)
class SimulationResult:
    """Per-repetition metric values plus percentile summaries.

    `values` has shape (learners, settings, metrics, repetitions); axes match
    the learner/setting/metric tuples stored alongside.
    """

    config: XorConfig
    repetitions: int
    learners: tuple
    settings: tuple
    metrics: tuple
    values: np.ndarray

    def per_rep(self, learner, setting, metric):
        l = self.learners.index(BaselineKind(learner))
        s = self.settings.index(OtsSetting(setting))
        m = self.metrics.index(Metric(metric))
        return self.values[l, s, m]

    def summary(self, learner, setting, metric):
        series = self.per_rep(learner, setting, metric)
        lo, hi = np.percentile(series, [2.5, 97.5])
        return float(series.mean()), float(lo), float(hi)

    def summary_rows(self):
        rows = []
        for learner in self.learners:
            for setting in self.settings:
                for metric in self.metrics:
                    mean, lo, hi = self.summary(learner, setting, metric)
                    rows.append(
                        SummaryRow(
                            learner.value,
                            setting.value,
                            metric.value,
                            mean,
                            lo,
                            hi,
                            self.repetitions,
                        )
                    )
        return rows

    def to_tsv(self):
        lines = ["learner\tsetting\tmetric\tmean\tlo95\thi95\trepetitions"]
        for row in self.summary_rows():
            lines.append(
                "%s\t%s\t%s\t%s\t%s\t%s\t%d"
                % (
                    row.learner,
                    row.setting,
                    row.metric,
                    repr(row.mean),
                    repr(row.lo95),
                    repr(row.hi95),
                    row.repetitions,
                )
            )
        return "\n".join(lines) + "\n"

    def to_raw_tsv(self):
        lines = ["learner\tsetting\tmetric\trepetition\tvalue"]
        for l, learner in enumerate(self.learners):
            for s, setting in enumerate(self.settings):
                for m, metric in enumerate(self.metrics):
                    for rep in range(self.repetitions):
                        lines.append(
                            "%s\t%s\t%s\t%d\t%s"
                            % (
                                learner.value,
                                setting.value,
                                metric.value,
                                rep,
                                repr(float(self.values[l, s, m, rep])),
                            )
                        )
        return "\n".join(lines) + "\n"


def _evaluate(metric, drug_ids, target_ids, y, pred, threads):
    if metric is Metric.ACCURACY:
        return accuracy_arrays(y, pred).value
    if metric is Metric.C_INDEX:
        return c_index_arrays(y, pred).value
    if metric is Metric.C_INDEX_DRUGWISE:
        return groupwise_c_index_arrays(drug_ids, y, pred, axis="drug").value
    if metric is Metric.C_INDEX_TARGETWISE:
        return groupwise_c_index_arrays(target_ids, y, pred, axis="target").value
    return ic_index_arrays(drug_ids, target_ids, y, pred, threads=threads).value


def run_xor_experiment(
    config,
    repetitions,
    learners=ALL_LEARNERS,
    settings=ALL_SETTINGS,
    metrics=ALL_METRICS,
    threads=1,
):
    """Run the repeated half-split experiment; see the module docstring for the protocol."""
    if repetitions < 1:
        raise InvalidValue("repetitions must be at least 1")
    learners = tuple(BaselineKind(l) for l in learners)
    settings = tuple(OtsSetting(s) for s in settings)
    metrics = tuple(Metric(m) for m in metrics)
    n_drugs, n_targets = config.n_drugs, config.n_targets
    values = np.empty((len(learners), len(settings), len(metrics), repetitions))

    for rep in range(repetitions):
        data_cfg = replace(config, seed=derive_seed(config.seed, 2 * rep))
        labels, known = generate_xor(data_cfg)
        halver = np.random.Generator(
            np.random.PCG64(derive_seed(config.seed, 2 * rep + 1))
        )
        drug_in_a = np.zeros(n_drugs, dtype=bool)
        drug_in_a[halver.permutation(n_drugs)[: n_drugs // 2]] = True
        target_in_a = np.zeros(n_targets, dtype=bool)
        target_in_a[halver.permutation(n_targets)[: n_targets // 2]] = True

        block_aa = drug_in_a[:, None] & target_in_a[None, :]
        train_mask = known & block_aa
        train_drugs, train_targets = np.nonzero(train_mask)
        train_y = labels[train_drugs, train_targets].astype(np.float64)
        grand, drug_vec, target_vec = fit_sums_arrays(
            train_drugs, train_targets, train_y, n_drugs, n_targets
        )

        pool_masks = {
            OtsSetting.IDIT: block_aa & ~train_mask,
            OtsSetting.ODIT: ~drug_in_a[:, None] & target_in_a[None, :],
            OtsSetting.IDOT: drug_in_a[:, None] & ~target_in_a[None, :],
            OtsSetting.ODOT: ~drug_in_a[:, None] & ~target_in_a[None, :],
        }
        for s, setting in enumerate(settings):
            pool_drugs, pool_targets = np.nonzero(pool_masks[setting])
            pool_y = labels[pool_drugs, pool_targets].astype(np.float64)
            for l, learner in enumerate(learners):
                pred = predict_arrays(
                    learner, grand, drug_vec, target_vec, pool_drugs, pool_targets
                )
                for m, metric in enumerate(metrics):
                    values[l, s, m, rep] = _evaluate(
                        metric, pool_drugs, pool_targets, pool_y, pred, threads
                    )

    values.flags.writeable = False
    return SimulationResult(config, repetitions, learners, settings, metrics, values)
