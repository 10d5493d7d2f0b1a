"""The five ranking estimators and the 2x2 effect decomposition.

Every estimator averages Heaviside utilities H(difference) over a restricted
set of record tuples and reports the same shape: a value in [0, 1], the exact
numerator (sum of utilities, a half-integer), the integer denominator (number
of tuples the restriction admits), and a `defaulted` flag that is set, with
value 0.5, when the restriction is empty.

Metrics:
  accuracy                 per-record sign agreement H(y * f)
  c_index                  all strictly label-ordered record pairs
  groupwise c_index        the same, restricted to pairs sharing a drug
                           (drugwise) or a target (targetwise)
  ic_index                 2x2 drug/target designs with nonzero observed
                           interaction, judged by predicted interaction sign

`ic_index` runs in O(min(nD^2 nT log nT, nD nT^2 log nD)) via the counting
kernel; `ic_index_bruteforce` enumerates arrangements literally and is the
oracle the fast path is tested against.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import counting
from .counting import count_concordance
from .dataset import validate_predictions
from .errors import AlignmentError, InvalidValue, SizeLimit


class Metric(enum.Enum):
    ACCURACY = "accuracy"
    C_INDEX = "c_index"
    C_INDEX_DRUGWISE = "c_index_drugwise"
    C_INDEX_TARGETWISE = "c_index_targetwise"
    IC_INDEX = "ic_index"


@dataclass(frozen=True, slots=True)
class MetricReport:
    metric: Metric
    value: float
    numerator: float
    denominator: int
    defaulted: bool


class EffectDecomposition(NamedTuple):
    grand_mean: float
    drug_main: float
    target_main: float
    interaction: float


def _report(metric, numerator, denominator):
    denominator = int(denominator)
    if denominator > 0:
        return MetricReport(
            metric, float(numerator) / denominator, float(numerator), denominator, False
        )
    return MetricReport(metric, 0.5, 0.0, 0, True)


def heaviside(a):
    """Step utility: 0 for negative, 0.5 for zero, 1 for positive arguments."""
    a = float(a)
    if math.isnan(a):
        raise InvalidValue("heaviside argument must not be NaN")
    if a < 0.0:
        return 0.0
    if a > 0.0:
        return 1.0
    return 0.5


def _check_tol(tie_tol):
    if not (np.isfinite(tie_tol) and tie_tol >= 0.0):
        raise InvalidValue("tie_tol must be finite and non-negative")
    return float(tie_tol)


def _check_values(name, arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidValue("%s must be one-dimensional" % name)
    if not np.isfinite(arr).all():
        raise InvalidValue("%s contain a non-finite entry" % name)
    return arr


def _check_aligned(y, pred):
    y = _check_values("labels", y)
    pred = _check_values("predictions", pred)
    if y.shape[0] != pred.shape[0]:
        raise AlignmentError(
            "prediction length %d does not match label length %d"
            % (pred.shape[0], y.shape[0])
        )
    return y, pred


# ---------------------------------------------------------------------------
# accuracy


def accuracy_arrays(y, pred):
    y, pred = _check_aligned(y, pred)
    n = y.shape[0]
    if n == 0:
        return _report(Metric.ACCURACY, 0.0, 0)
    # (sign + 1) / 2 maps the product's sign to the exact utilities 0 / 0.5 / 1;
    # their sum is a half-integer, so the numerator is exact.
    utilities = (np.sign(y * pred) + 1.0) * 0.5
    return _report(Metric.ACCURACY, float(utilities.sum()), n)


def accuracy(dataset, pred):
    """Fraction of records whose prediction sign matches the label sign, zeros scoring half."""
    pred = validate_predictions(dataset, pred)
    return accuracy_arrays(dataset.values, pred)


# ---------------------------------------------------------------------------
# plain and groupwise C-index


def c_index_arrays(y, pred, tie_tol=0.0):
    y, pred = _check_aligned(y, pred)
    c, d, t = count_concordance(y, pred, tie_tol)
    return _report(Metric.C_INDEX, c + 0.5 * t, c + d + t)


def c_index(dataset, pred, tie_tol=0.0):
    """Concordance over all strictly label-ordered record pairs, ties scoring half."""
    pred = validate_predictions(dataset, pred)
    return c_index_arrays(dataset.values, pred, tie_tol)


def _csr_by_group(group_ids, y, pred):
    order = np.argsort(group_ids, kind="stable")
    sorted_ids = group_ids[order]
    counts = np.bincount(sorted_ids) if sorted_ids.shape[0] else np.zeros(0, np.int64)
    indptr = np.zeros(counts.shape[0] + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, y[order], pred[order]


def groupwise_c_index(dataset, pred, axis="drug", averaging="pooled", tie_tol=0.0):
    """C-index restricted to record pairs sharing the `axis` identity.

    pooled (the default) sums concordant/discordant/tied counts over groups
    before the final ratio; macro averages the per-group ratios over groups
    that have at least one strictly ordered pair, with the denominator equal
    to the number of contributing groups.
    """
    pred = validate_predictions(dataset, pred)
    if axis == "drug":
        group_ids = dataset.drug_ids
    elif axis == "target":
        group_ids = dataset.target_ids
    else:
        raise InvalidValue("axis must be 'drug' or 'target', got %r" % (axis,))
    return groupwise_c_index_arrays(group_ids, dataset.values, pred, axis, averaging, tie_tol)


def groupwise_c_index_arrays(group_ids, y, pred, axis="drug", averaging="pooled", tie_tol=0.0):
    if axis not in ("drug", "target"):
        raise InvalidValue("axis must be 'drug' or 'target', got %r" % (axis,))
    y, pred = _check_aligned(y, pred)
    group_ids = _check_ids("group ids", group_ids, y.shape[0])
    tie_tol = _check_tol(tie_tol)
    metric = Metric.C_INDEX_DRUGWISE if axis == "drug" else Metric.C_INDEX_TARGETWISE
    indptr, y_sorted, pred_sorted = _csr_by_group(group_ids, y, pred)
    if averaging == "pooled":
        c, d, t = counting._count_grouped(indptr, y_sorted, pred_sorted, tie_tol)
        return _report(metric, int(c) + 0.5 * int(t), int(c) + int(d) + int(t))
    if averaging == "macro":
        ratio_sum, groups = _macro_grouped(indptr, y_sorted, pred_sorted, tie_tol)
        return _report(metric, ratio_sum, groups)
    raise InvalidValue("averaging must be 'pooled' or 'macro', got %r" % (averaging,))


def _macro_grouped(indptr, keys, values, tie_tol):
    # Per-group ratios summed in group-index order; float summation order is
    # fixed, so macro results are deterministic.
    ratio_sum = 0.0
    groups = 0
    for row in range(indptr.shape[0] - 1):
        lo, hi = indptr[row], indptr[row + 1]
        if hi - lo < 2:
            continue
        c, d, t = counting._count_sorted(keys[lo:hi], values[lo:hi], tie_tol)
        den = int(c) + int(d) + int(t)
        if den > 0:
            ratio_sum += (int(c) + 0.5 * int(t)) / den
            groups += 1
    return ratio_sum, groups


# ---------------------------------------------------------------------------
# 2x2 effect decomposition


def decompose_2x2(matrix):
    """Split a 2x2 design (rows = drugs, columns = targets) into effect components.

    Returns grand mean, drug main effect, target main effect, and interaction;
    the four recombine with +/- sign patterns to reproduce the input entries.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape != (2, 2):
        raise InvalidValue("expected a 2x2 matrix, got shape %r" % (matrix.shape,))
    if not np.isfinite(matrix).all():
        raise InvalidValue("matrix contains a non-finite entry")
    y = float(matrix[0, 0])        # first drug, first target
    y_star = float(matrix[0, 1])   # first drug, second target
    y_prime = float(matrix[1, 0])  # second drug, first target
    y_prime_star = float(matrix[1, 1])
    grand_mean = (y + y_prime + y_star + y_prime_star) / 4.0
    drug_main = (y - y_prime + y_star - y_prime_star) / 4.0
    target_main = (y + y_prime - y_star - y_prime_star) / 4.0
    interaction = (y - y_prime - y_star + y_prime_star) / 4.0
    return EffectDecomposition(grand_mean, drug_main, target_main, interaction)


# ---------------------------------------------------------------------------
# IC-index


def _check_ids(name, ids, n):
    ids = np.ascontiguousarray(ids, dtype=np.int64)
    if ids.ndim != 1:
        raise InvalidValue("%s must be one-dimensional" % name)
    if ids.shape[0] != n:
        raise AlignmentError("%s length %d does not match %d records" % (name, ids.shape[0], n))
    if n and ids.min() < 0:
        raise InvalidValue("%s must be non-negative" % name)
    return ids


def _pair_cost(n_outer, n_inner, density):
    # Expected shared inner entities for one outer pair is density^2 * n_inner;
    # each pair costs about overlap * log2(overlap) in the counting kernel.
    overlap = max(density * density * n_inner, 2.0)
    return n_outer * n_outer * overlap * math.log2(overlap)


def ic_index_arrays(drug_ids, target_ids, y, pred, threads=1):
    y, pred = _check_aligned(y, pred)
    n = y.shape[0]
    drug_ids = _check_ids("drug ids", drug_ids, n)
    target_ids = _check_ids("target ids", target_ids, n)
    threads = int(threads)
    if threads < 1:
        raise InvalidValue("threads must be a positive integer")
    if n == 0:
        return _report(Metric.IC_INDEX, 0.0, 0)
    # Pairwise differences of finite inputs can still overflow; max - min
    # bounds them all, so one check up front keeps the kernels NaN-free.
    if not (np.isfinite(y.max() - y.min()) and np.isfinite(pred.max() - pred.min())):
        raise InvalidValue("value range too large: pairwise differences overflow")

    n_drugs = np.unique(drug_ids).shape[0]
    n_targets = np.unique(target_ids).shape[0]
    density = n / (n_drugs * n_targets)
    if _pair_cost(n_drugs, n_targets, density) <= _pair_cost(n_targets, n_drugs, density):
        rows, cols = drug_ids, target_ids
    else:
        rows, cols = target_ids, drug_ids

    order = np.lexsort((cols, rows))
    rows_sorted = rows[order]
    cols_sorted = cols[order]
    if n > 1:
        same = (rows_sorted[1:] == rows_sorted[:-1]) & (cols_sorted[1:] == cols_sorted[:-1])
        if same.any():
            raise InvalidValue("duplicate (drug, target) pair in input arrays")
    counts = np.bincount(rows_sorted)
    indptr = np.zeros(counts.shape[0] + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    y_sorted = y[order]
    pred_sorted = pred[order]

    if threads == 1 or indptr.shape[0] - 1 < 2 * threads:
        c, d, t = counting._count_pair_differences(
            indptr, cols_sorted, y_sorted, pred_sorted, 0, 1
        )
        c, d, t = int(c), int(d), int(t)
    else:
        # Warm the compiled kernel before fanning out, then hand each worker
        # an interleaved share of the outer rows. Counts are integers, so the
        # reduction is exact and independent of scheduling.
        counting._count_pair_differences(
            indptr[:1].copy(), cols_sorted[:0], y_sorted[:0], pred_sorted[:0], 0, 1
        )
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    counting._count_pair_differences,
                    indptr, cols_sorted, y_sorted, pred_sorted, k, threads,
                )
                for k in range(threads)
            ]
            parts = [f.result() for f in futures]
        c = sum(int(p[0]) for p in parts)
        d = sum(int(p[1]) for p in parts)
        t = sum(int(p[2]) for p in parts)
    return _report(Metric.IC_INDEX, c + 0.5 * t, c + d + t)


def ic_index(dataset, pred, threads=1):
    """Concordance of predicted vs observed interaction direction over 2x2 designs.

    A design is two drugs crossed with two targets, all four cells observed,
    whose observed interaction y - y' - y* + y'* is strictly nonzero. The
    utility is H applied to the predicted interaction, oriented by the
    observed one; designs are enumerated implicitly by counting concordant
    within-drug-pair difference vectors, never materialized. Interaction
    signs are decided in exact arithmetic, so the result is independent of
    enumeration order, orientation, and thread count.
    """
    pred = validate_predictions(dataset, pred)
    return ic_index_arrays(
        dataset.drug_ids, dataset.target_ids, dataset.values, pred, threads
    )


def _two_diff_arrays(a, b):
    # Vectorized error-free difference: hi + lo == a - b exactly, per entry.
    hi = a - b
    bb = a - hi
    lo = (a - (hi + bb)) + (bb - b)
    return hi, lo


def _dd_greater(xhi, xlo, yhi, ylo):
    # Exact elementwise (xhi + xlo) > (yhi + ylo) over broadcast hi/lo pairs.
    return (xhi > yhi) | ((xhi == yhi) & (xlo > ylo))


def ic_index_bruteforce(dataset, pred, cap=4096):
    """Literal enumeration of all ordered 2x2 arrangements; the ic_index oracle.

    Walks every ordered drug pair (a, b) and every ordered target pair (u, v)
    with all four cells observed, keeps arrangements whose observed
    interaction is strictly positive, and averages H over the predicted
    interactions. Interaction signs come from exact arithmetic, same as
    `ic_index`; the reported numerator and denominator count ordered
    arrangements, exactly twice the unordered-design counts, and the value
    is identical bit for bit.
    """
    pred = validate_predictions(dataset, pred)
    n_drugs = dataset.n_drugs
    n_targets = dataset.n_targets
    if n_drugs * n_targets > cap:
        raise SizeLimit(
            "grid %d x %d exceeds the bruteforce cap of %d cells"
            % (n_drugs, n_targets, cap)
        )
    if dataset.n and not (
        np.isfinite(dataset.values.max() - dataset.values.min())
        and np.isfinite(pred.max() - pred.min())
    ):
        raise InvalidValue("value range too large: pairwise differences overflow")
    label_grid = np.zeros((n_drugs, n_targets), dtype=np.float64)
    pred_grid = np.zeros((n_drugs, n_targets), dtype=np.float64)
    observed = np.zeros((n_drugs, n_targets), dtype=bool)
    label_grid[dataset.drug_ids, dataset.target_ids] = dataset.values
    pred_grid[dataset.drug_ids, dataset.target_ids] = pred
    observed[dataset.drug_ids, dataset.target_ids] = True

    twice_numerator = 0
    denominator = 0
    for a in range(n_drugs):
        for b in range(n_drugs):
            if a == b:
                continue
            shared = observed[a] & observed[b]
            if shared.sum() < 2:
                continue
            dyh, dyl = _two_diff_arrays(label_grid[a], label_grid[b])
            dph, dpl = _two_diff_arrays(pred_grid[a], pred_grid[b])
            # cond[u, v] = y[a,u] - y[a,v] - y[b,u] + y[b,v]; util likewise.
            both = shared[:, None] & shared[None, :]
            cond_pos = _dd_greater(dyh[:, None], dyl[:, None], dyh[None, :], dyl[None, :])
            util_pos = _dd_greater(dph[:, None], dpl[:, None], dph[None, :], dpl[None, :])
            util_zero = (dph[:, None] == dph[None, :]) & (dpl[:, None] == dpl[None, :])
            valid = both & cond_pos
            twice_numerator += 2 * int((valid & util_pos).sum())
            twice_numerator += int((valid & util_zero).sum())
            denominator += int(valid.sum())
    return _report(Metric.IC_INDEX, twice_numerator * 0.5, denominator)
