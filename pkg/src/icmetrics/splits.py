"""Train/test splits realizing the four off-training-set settings.

Drugs and targets are each partitioned into k seeded groups; crossing a drug
group i with a target group j yields the (i, j) test block of a fold. What a
fold may train on depends on the setting:

  IDIT  everything outside the test block (test drugs and targets still
        appear through other blocks)
  ODIT  records whose drug group differs from i (test drugs fully unseen)
  IDOT  records whose target group differs from j
  ODOT  both groups differ (neither test identity ever seen)

Test membership is then confirmed against the actual training records: a
block record whose drug or target never shows up in training would not be
the setting's class, so it is ignored rather than kept. Dense datasets lose
nothing to this check; sparse ones shed exactly the records the restriction
makes unusable.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import enum
import json

import numpy as np

from .dataset import OtsClass, classify_pair
from .errors import InsufficientEntities
from .rng import SplitMix64, derive_seed


class OtsSetting(enum.Enum):
    IDIT = "IDIT"
    ODIT = "ODIT"
    IDOT = "IDOT"
    ODOT = "ODOT"


@dataclass(frozen=True)
class GroupAssignment:
    """Seeded k-way partition of both entity axes."""

    drug_groups: dict
    target_groups: dict
    k: int
    seed: int


@dataclass(frozen=True)
class Fold:
    drug_group: int
    target_group: int
    train: tuple
    test: tuple

    @property
    def empty_test(self):
        return len(self.test) == 0


@dataclass(frozen=True)
class FoldPlan:
    setting: OtsSetting
    folds: tuple
    drug_groups: dict
    target_groups: dict
    seed: int
    k: int


class FoldVerdict(NamedTuple):
    passed: bool
    violation: Optional[tuple]  # (test record index, actual OtsClass) of the first mismatch


def _partition(entities, k, stream):
    # Shuffle, then cut into k contiguous chunks whose sizes differ by at
    # most one (the first n % k chunks get the extra element).
    entities = list(entities)
    stream.shuffle(entities)
    base, extra = divmod(len(entities), k)
    groups = {}
    position = 0
    for g in range(k):
        size = base + (1 if g < extra else 0)
        for entity in entities[position : position + size]:
            groups[entity] = g
        position += size
    return groups


def assign_groups(dataset, k=3, seed=0):
    """Partition drugs and targets into k seeded groups of near-equal size."""
    if k < 1:
        raise InsufficientEntities("group count must be at least 1")
    if dataset.n_drugs < k:
        raise InsufficientEntities(
            "%d drugs cannot form %d groups" % (dataset.n_drugs, k)
        )
    if dataset.n_targets < k:
        raise InsufficientEntities(
            "%d targets cannot form %d groups" % (dataset.n_targets, k)
        )
    drug_groups = _partition(dataset.drug_index, k, SplitMix64(derive_seed(seed, 0)))
    target_groups = _partition(dataset.target_index, k, SplitMix64(derive_seed(seed, 1)))
    return GroupAssignment(drug_groups, target_groups, k, seed)


def make_folds(dataset, assignment, setting):
    """Build the k*k fold plan for one setting from a group assignment."""
    setting = OtsSetting(setting)
    k = assignment.k
    drug_group_of = np.empty(dataset.n_drugs, dtype=np.int64)
    for drug, idx in dataset.drug_index.items():
        drug_group_of[idx] = assignment.drug_groups[drug]
    target_group_of = np.empty(dataset.n_targets, dtype=np.int64)
    for target, idx in dataset.target_index.items():
        target_group_of[idx] = assignment.target_groups[target]
    record_dg = drug_group_of[dataset.drug_ids]
    record_tg = target_group_of[dataset.target_ids]

    folds = []
    for i in range(k):
        for j in range(k):
            in_block = (record_dg == i) & (record_tg == j)
            if setting is OtsSetting.IDIT:
                train_mask = ~in_block
            elif setting is OtsSetting.ODIT:
                train_mask = record_dg != i
            elif setting is OtsSetting.IDOT:
                train_mask = record_tg != j
            else:
                train_mask = (record_dg != i) & (record_tg != j)
            train = np.flatnonzero(train_mask)
            candidates = np.flatnonzero(in_block)
            test = _eligible(dataset, train, candidates, setting)
            folds.append(Fold(i, j, tuple(int(x) for x in train), tuple(int(x) for x in test)))
    return FoldPlan(
        setting, tuple(folds), assignment.drug_groups, assignment.target_groups,
        assignment.seed, k,
    )


def _eligible(dataset, train, candidates, setting):
    # Keep only block records whose identities are seen/unseen the way the
    # setting demands. The drug side is already forced by the train masks for
    # ODIT/ODOT (no group-i drug record can be in train), and likewise the
    # target side for IDOT/ODOT, so only the "seen" requirements need data.
    drug_seen = np.zeros(dataset.n_drugs, dtype=bool)
    drug_seen[dataset.drug_ids[train]] = True
    target_seen = np.zeros(dataset.n_targets, dtype=bool)
    target_seen[dataset.target_ids[train]] = True
    if setting is OtsSetting.IDIT:
        keep = drug_seen[dataset.drug_ids[candidates]] & target_seen[dataset.target_ids[candidates]]
    elif setting is OtsSetting.ODIT:
        keep = target_seen[dataset.target_ids[candidates]]
    elif setting is OtsSetting.IDOT:
        keep = drug_seen[dataset.drug_ids[candidates]]
    else:
        return candidates
    return candidates[keep]


def verify_fold(dataset, train_indices, test_indices, setting):
    """Check that every test pair classifies as the setting's class against the train records."""
    setting = OtsSetting(setting)
    training = dataset.subset(train_indices)
    expected = OtsClass[setting.value]
    for index in test_indices:
        record = dataset.records[index]
        actual = classify_pair((record.drug, record.target), training)
        if actual is not expected:
            return FoldVerdict(False, (int(index), actual))
    return FoldVerdict(True, None)


def serialize_fold_plan(plan):
    """Render a FoldPlan as canonical JSON text (stable across reruns)."""
    document = {
        "setting": plan.setting.value,
        "seed": plan.seed,
        "k": plan.k,
        "drug_groups": plan.drug_groups,
        "target_groups": plan.target_groups,
        "folds": [
            {
                "drug_group": fold.drug_group,
                "target_group": fold.target_group,
                "train": list(fold.train),
                "test": list(fold.test),
                "empty_test": fold.empty_test,
                "validation": None,
            }
            for fold in plan.folds
        ],
    }
    return json.dumps(document, sort_keys=True, indent=2) + "\n"
