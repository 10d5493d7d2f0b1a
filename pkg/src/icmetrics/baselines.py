"""Five sum-based reference learners: GS, DS, TS, SS, PS.

Each one predicts from training-affinity sums only:

  GS  grand sum of all training affinities (constant predictor)
  DS  sum over the queried drug's training records (target symmetric)
  TS  sum over the queried target's training records (drug symmetric)
  SS  DS + TS (additively separable)
  PS  DS * TS (nonadditive on generic data)

Entities absent from training contribute an empty sum, exactly 0. The sums
make every learner permutation equivariant: relabeling drugs or targets
consistently in training and query leaves predictions unchanged, which is
what pins their ranking metrics to exactly 0.5 outside the in-training
regime.
"""

import enum
from dataclasses import dataclass

import numpy as np


class BaselineKind(enum.Enum):
    GS = "GS"
    DS = "DS"
    TS = "TS"
    SS = "SS"
    PS = "PS"


@dataclass(frozen=True)
class TrainedBaseline:
    kind: BaselineKind
    grand_sum: float
    drug_sums: dict
    target_sums: dict


def fit_baseline(kind, training):
    """Accumulate the grand, per-drug, and per-target affinity sums."""
    kind = BaselineKind(kind)
    drug_sums = {}
    target_sums = {}
    grand = 0.0
    for record in training.records:
        grand += record.value
        drug_sums[record.drug] = drug_sums.get(record.drug, 0.0) + record.value
        target_sums[record.target] = target_sums.get(record.target, 0.0) + record.value
    return TrainedBaseline(kind, grand, drug_sums, target_sums)


def predict_baseline(model, pair):
    """Evaluate the learner at one (drug, target) pair."""
    drug, target = pair
    if model.kind is BaselineKind.GS:
        return model.grand_sum
    ds = model.drug_sums.get(drug, 0.0)
    ts = model.target_sums.get(target, 0.0)
    if model.kind is BaselineKind.DS:
        return ds
    if model.kind is BaselineKind.TS:
        return ts
    if model.kind is BaselineKind.SS:
        return ds + ts
    return ds * ts


def fit_sums_arrays(drug_ids, target_ids, y, n_drugs, n_targets):
    """Index-array twin of fit_baseline: (grand, per-drug vector, per-target vector).

    Sums land in float64 slots indexed by the dense entity ids; ids outside
    the training set keep their initial 0.0, mirroring the empty sum.
    """
    drug_vec = np.bincount(drug_ids, weights=y, minlength=n_drugs)
    target_vec = np.bincount(target_ids, weights=y, minlength=n_targets)
    return float(y.sum()), drug_vec, target_vec


def predict_arrays(kind, grand, drug_vec, target_vec, drug_ids, target_ids):
    """Vectorized predictions for pair index arrays, one value per pair."""
    kind = BaselineKind(kind)
    if kind is BaselineKind.GS:
        return np.full(drug_ids.shape[0], grand, dtype=np.float64)
    ds = drug_vec[drug_ids]
    ts = target_vec[target_ids]
    if kind is BaselineKind.DS:
        return ds
    if kind is BaselineKind.TS:
        return ts
    if kind is BaselineKind.SS:
        return ds + ts
    return ds * ts
