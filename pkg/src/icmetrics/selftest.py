"""Randomized self-checks: oracle equivalence and exact-invariance suites.

Each check generates seeded random instances, derives one child seed per
case, and records the seeds of failing cases so a report can name exact
counterexamples. The CLI exposes this as `icmetrics selftest`; the test
suite reuses the same generators for its acceptance gates.
"""

from typing import NamedTuple

import numpy as np

from . import counting, metrics
from .dataset import from_arrays
from .rng import derive_seed
from .splits import OtsSetting, assign_groups, make_folds, verify_fold


class CheckResult(NamedTuple):
    name: str
    cases: int
    failing_seeds: list

    @property
    def passed(self):
        return not self.failing_seeds


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_counting_case(seed, max_m=64):
    """Random (keys, values, tie_tol) with deliberate tie mass."""
    rng = _rng(seed)
    m = int(rng.integers(0, max_m + 1))
    pools = ("int", "real", "binary")
    keys = _random_values(rng, m, pools[rng.integers(0, 3)])
    values = _random_values(rng, m, pools[rng.integers(0, 3)])
    tie_tol = float(rng.choice([0.0, 0.0, 0.25, 1.0]))
    return keys, values, tie_tol


def _random_values(rng, m, pool):
    if pool == "int":
        return rng.integers(-3, 4, size=m).astype(np.float64)
    if pool == "binary":
        return rng.choice([-1.0, 1.0], size=m)
    return np.round(rng.normal(size=m), 1)


def random_dataset_case(seed, max_dim=8, density_range=(0.3, 1.0), integer_pred=False):
    """Random sparse dataset plus a prediction vector, both tie-rich.

    Returns (dataset, pred). Dimensions are up to max_dim x max_dim, cell
    density is drawn from density_range, and labels/predictions mix integer
    grids, rounded reals, and binary values so exact ties occur often.
    """
    rng = _rng(seed)
    n_drugs = int(rng.integers(1, max_dim + 1))
    n_targets = int(rng.integers(1, max_dim + 1))
    density = float(rng.uniform(*density_range))
    mask = rng.random((n_drugs, n_targets)) < density
    if not mask.any():
        mask[rng.integers(0, n_drugs), rng.integers(0, n_targets)] = True
    drugs, targets = np.nonzero(mask)
    n = drugs.shape[0]
    y = _random_values(rng, n, ("int", "real", "binary")[rng.integers(0, 3)])
    if integer_pred:
        pred = rng.integers(-5, 6, size=n).astype(np.float64)
    else:
        pred = _random_values(rng, n, ("int", "real", "binary")[rng.integers(0, 3)])
    dataset = from_arrays(
        ["d%d" % d for d in drugs], ["t%d" % t for t in targets], y
    )
    return dataset, pred


def check_counting_oracle(iterations=300, max_m=64, seed=0):
    failing = []
    for case in range(iterations):
        case_seed = derive_seed(seed, case)
        keys, values, tie_tol = random_counting_case(case_seed, max_m)
        fast = counting.count_concordance(keys, values, tie_tol)
        naive = counting.count_concordance_naive(keys, values, tie_tol)
        if fast != naive:
            failing.append(case_seed)
    return CheckResult("counting kernel vs naive oracle", iterations, failing)


def check_ic_oracle(iterations=300, max_dim=8, seed=1):
    failing = []
    for case in range(iterations):
        case_seed = derive_seed(seed, case)
        dataset, pred = random_dataset_case(case_seed, max_dim)
        fast = metrics.ic_index(dataset, pred)
        brute = metrics.ic_index_bruteforce(dataset, pred)
        ok = (
            fast.value == brute.value
            and fast.defaulted == brute.defaulted
            and brute.denominator == 2 * fast.denominator
            and brute.numerator == 2 * fast.numerator
        )
        if not ok:
            failing.append(case_seed)
    return CheckResult("ic_index vs bruteforce oracle", iterations, failing)


def check_invariance_grid(iterations=150, max_dim=8, seed=2):
    """Exactly-0.5 cells for the four degenerate predictor classes.

    Synthetic predictors take small integer values so that all difference
    arithmetic is exact: `constant` everywhere, `of_target` (equal across
    drugs), `of_drug` (equal across targets), and `separable` (drug term plus
    target term). Checked cells: constant pins every concordance metric,
    of_target pins the targetwise variant, of_drug the drugwise variant, and
    all four pin the interaction concordance.
    """
    failing = []
    for case in range(iterations):
        case_seed = derive_seed(seed, case)
        dataset, _ = random_dataset_case(case_seed, max_dim)
        rng = _rng(derive_seed(case_seed, 1))
        drug_term = rng.integers(-5, 6, size=dataset.n_drugs).astype(np.float64)
        target_term = rng.integers(-5, 6, size=dataset.n_targets).astype(np.float64)
        zero = np.zeros(dataset.n, dtype=np.float64)
        constant = np.full(dataset.n, float(rng.integers(-5, 6)))
        of_target = target_term[dataset.target_ids]
        of_drug = drug_term[dataset.drug_ids]
        separable = of_drug + of_target

        half = []
        for pred in (zero, constant, of_drug, of_target, separable):
            half.append(metrics.ic_index(dataset, pred).value)
        for pred in (zero, constant):
            half.append(metrics.c_index(dataset, pred).value)
            half.append(metrics.groupwise_c_index(dataset, pred, axis="drug").value)
            half.append(metrics.groupwise_c_index(dataset, pred, axis="target").value)
        half.append(metrics.accuracy(dataset, zero).value)
        half.append(metrics.groupwise_c_index(dataset, of_drug, axis="drug").value)
        half.append(metrics.groupwise_c_index(dataset, of_target, axis="target").value)
        if any(v != 0.5 for v in half):
            failing.append(case_seed)
    return CheckResult("exact-0.5 invariance grid", iterations, failing)


def check_separability_invariance(iterations=200, max_dim=8, seed=3):
    """Adding u_d + v_t + c to integer predictions must not move ic_index."""
    failing = []
    for case in range(iterations):
        case_seed = derive_seed(seed, case)
        dataset, pred = random_dataset_case(case_seed, max_dim, integer_pred=True)
        rng = _rng(derive_seed(case_seed, 1))
        drug_offset = rng.integers(-1000, 1001, size=dataset.n_drugs).astype(np.float64)
        target_offset = rng.integers(-1000, 1001, size=dataset.n_targets).astype(np.float64)
        constant = float(rng.integers(-1000, 1001))
        shifted = (
            pred
            + drug_offset[dataset.drug_ids]
            + target_offset[dataset.target_ids]
            + constant
        )
        before = metrics.ic_index(dataset, pred)
        after = metrics.ic_index(dataset, shifted)
        if (before.value, before.numerator, before.denominator) != (
            after.value,
            after.numerator,
            after.denominator,
        ):
            failing.append(case_seed)
    return CheckResult("additive-separability invariance", iterations, failing)


def check_split_closure(iterations=100, max_dim=8, seed=4):
    """make_folds output must verify, and train sets must nest across settings."""
    failing = []
    for case in range(iterations):
        case_seed = derive_seed(seed, case)
        dataset, _ = random_dataset_case(case_seed, max_dim)
        if dataset.n_drugs < 3 or dataset.n_targets < 3:
            continue
        assignment = assign_groups(dataset, 3, case_seed)
        plans = {
            setting: make_folds(dataset, assignment, setting) for setting in OtsSetting
        }
        ok = True
        for setting, plan in plans.items():
            for fold in plan.folds:
                if not verify_fold(dataset, fold.train, fold.test, setting).passed:
                    ok = False
        for fold_idx in range(9):
            idit = set(plans[OtsSetting.IDIT].folds[fold_idx].train)
            odit = set(plans[OtsSetting.ODIT].folds[fold_idx].train)
            idot = set(plans[OtsSetting.IDOT].folds[fold_idx].train)
            odot = set(plans[OtsSetting.ODOT].folds[fold_idx].train)
            if not (odot <= odit <= idit and odot <= idot <= idit):
                ok = False
        if not ok:
            failing.append(case_seed)
    return CheckResult("split generator/verifier closure", iterations, failing)


def run_selftest(iterations=200, max_size=8, seed=20260818):
    """Run every check; returns a list of CheckResult."""
    return [
        check_counting_oracle(iterations, max_m=max_size * max_size, seed=derive_seed(seed, 100)),
        check_ic_oracle(iterations, max_dim=max_size, seed=derive_seed(seed, 101)),
        check_invariance_grid(iterations, max_dim=max_size, seed=derive_seed(seed, 102)),
        check_separability_invariance(iterations, max_dim=max_size, seed=derive_seed(seed, 103)),
        check_split_closure(iterations, max_dim=max_size, seed=derive_seed(seed, 104)),
    ]
