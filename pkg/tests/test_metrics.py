import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from icmetrics import (
    Metric,
    MetricReport,
    accuracy,
    c_index,
    count_concordance_naive,
    decompose_2x2,
    from_arrays,
    groupwise_c_index,
    heaviside,
    ic_index,
    ic_index_arrays,
    ic_index_bruteforce,
)
from icmetrics.errors import AlignmentError, InvalidValue, SizeLimit


def grid_dataset(labels):
    labels = np.asarray(labels, dtype=np.float64)
    n_d, n_t = labels.shape
    drugs = ["d%d" % i for i in range(n_d) for _ in range(n_t)]
    targets = ["t%d" % j for _ in range(n_d) for j in range(n_t)]
    return from_arrays(drugs, targets, labels.ravel())


def random_case(seed, max_dim=7, integer_pred=False):
    rng = np.random.default_rng(seed)
    n_d = int(rng.integers(2, max_dim + 1))
    n_t = int(rng.integers(2, max_dim + 1))
    mask = rng.random((n_d, n_t)) < rng.uniform(0.4, 1.0)
    mask.ravel()[int(rng.integers(0, n_d * n_t))] = True
    rows, cols = np.nonzero(mask)
    y = rng.integers(-3, 4, size=rows.shape[0]).astype(np.float64)
    if integer_pred:
        pred = rng.integers(-5, 6, size=rows.shape[0]).astype(np.float64)
    else:
        pred = rng.integers(-30, 31, size=rows.shape[0]).astype(np.float64) / 10.0
    ds = from_arrays(["d%d" % r for r in rows], ["t%d" % c for c in cols], y)
    return ds, pred


# -- heaviside ---------------------------------------------------------------


def test_heaviside_values():
    assert heaviside(-3.0) == 0.0
    assert heaviside(0.0) == 0.5
    assert heaviside(2.0) == 1.0
    with pytest.raises(InvalidValue):
        heaviside(float("nan"))


@given(st.floats(allow_nan=False, allow_infinity=False))
@settings(max_examples=200)
def test_heaviside_flip(a):
    assert heaviside(-a) == 1.0 - heaviside(a)


# -- accuracy ----------------------------------------------------------------


def test_accuracy_example():
    ds = from_arrays(["a", "b", "c"], ["t", "t", "t"], [1.0, -1.0, 1.0])
    report = accuracy(ds, [0.5, -0.2, 0.0])
    assert report.value == pytest.approx(2.5 / 3.0, abs=0, rel=0)
    assert report.numerator == 2.5
    assert report.denominator == 3
    assert not report.defaulted
    assert report.metric is Metric.ACCURACY


def test_accuracy_single_wrong():
    ds = from_arrays(["a"], ["t"], [1.0])
    assert accuracy(ds, [-1.0]).value == 0.0


def test_accuracy_empty_defaults():
    from icmetrics import InteractionDataset

    report = accuracy(InteractionDataset([]), [])
    assert report.value == 0.5
    assert report.defaulted


# -- c-index and groupwise variants ------------------------------------------


def test_c_index_example():
    ds = from_arrays(["a", "b", "c"], ["t", "t", "t"], [3.0, 1.0, 2.0])
    report = c_index(ds, [2.5, 1.0, 1.0])
    assert report.value == 2.5 / 3.0
    assert (report.numerator, report.denominator) == (2.5, 3)


def test_c_index_perfect_and_defaulted():
    ds = from_arrays(["a", "b", "c"], ["t", "t", "t"], [1.0, 2.0, 3.0])
    assert c_index(ds, [1.0, 2.0, 3.0]).value == 1.0
    flat = from_arrays(["a", "b", "c"], ["t", "t", "t"], [1.0, 1.0, 1.0])
    report = c_index(flat, [3.0, 1.0, 2.0])
    assert report.value == 0.5
    assert report.defaulted


def test_groupwise_example_pooled_and_macro():
    ds = from_arrays(
        ["d1", "d1", "d2", "d2"], ["t1", "t2", "t1", "t2"], [1.0, 2.0, 1.0, 2.0]
    )
    pred = [2.0, 1.0, 1.0, 2.0]
    pooled = groupwise_c_index(ds, pred, axis="drug", averaging="pooled")
    assert pooled.value == 0.5
    assert (pooled.numerator, pooled.denominator) == (1.0, 2)
    macro = groupwise_c_index(ds, pred, axis="drug", averaging="macro")
    assert macro.value == 0.5
    assert macro.denominator == 2


def test_groupwise_defaulted_when_groups_trivial():
    ds = from_arrays(["d1", "d2"], ["t1", "t1"], [1.0, 2.0])
    report = groupwise_c_index(ds, [1.0, 2.0], axis="drug")
    assert report.defaulted
    assert report.value == 0.5


def test_groupwise_macro_skips_tie_only_groups():
    # d1 contributes ratio 1 of 1 pair; d2 has only a label tie and no pairs.
    ds = from_arrays(
        ["d1", "d1", "d2", "d2"], ["t1", "t2", "t1", "t2"], [1.0, 2.0, 1.0, 1.0]
    )
    report = groupwise_c_index(ds, [1.0, 2.0, 5.0, 6.0], axis="drug", averaging="macro")
    assert report.value == 1.0
    assert report.denominator == 1


def test_groupwise_axis_validation():
    ds = from_arrays(["d"], ["t"], [1.0])
    with pytest.raises(InvalidValue):
        groupwise_c_index(ds, [1.0], axis="rows")
    with pytest.raises(InvalidValue):
        groupwise_c_index(ds, [1.0], averaging="median")


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_groupwise_pooled_matches_per_group_naive(seed):
    ds, pred = random_case(seed)
    for axis, ids in (("drug", ds.drug_ids), ("target", ds.target_ids)):
        c = d = t = 0
        for g in np.unique(ids):
            sel = ids == g
            cc, dd, tt = count_concordance_naive(ds.values[sel], pred[sel])
            c, d, t = c + cc, d + dd, t + tt
        report = groupwise_c_index(ds, pred, axis=axis)
        if c + d + t == 0:
            assert report.defaulted
        else:
            assert report.value == (c + 0.5 * t) / (c + d + t)
            assert report.denominator == c + d + t


# -- 2x2 decomposition --------------------------------------------------------


def test_decompose_example():
    dec = decompose_2x2(np.array([[4.0, 2.0], [1.0, 3.0]]))
    assert dec.grand_mean == 2.5
    assert dec.drug_main == 0.5
    assert dec.target_main == 0.0
    assert dec.interaction == 1.0


def test_decompose_constant_and_pure_interaction():
    for c in (0.0, -2.5, 7.0):
        dec = decompose_2x2(np.full((2, 2), c))
        assert dec == (c, 0.0, 0.0, 0.0)
    dec = decompose_2x2(np.array([[1.0, -1.0], [-1.0, 1.0]]))
    assert dec == (0.0, 0.0, 0.0, 1.0)


def test_decompose_shape_check():
    with pytest.raises(InvalidValue):
        decompose_2x2(np.ones((2, 3)))


@given(st.lists(st.integers(-100, 100), min_size=4, max_size=4))
@settings(max_examples=200)
def test_decompose_reconstructs_cells(cells):
    m = np.array(cells, dtype=np.float64).reshape(2, 2)
    g, dmain, tmain, inter = decompose_2x2(m)
    # signs: rows are drugs, columns targets
    assert g + dmain + tmain + inter == m[0, 0]
    assert g + dmain - tmain - inter == m[0, 1]
    assert g - dmain + tmain - inter == m[1, 0]
    assert g - dmain - tmain + inter == m[1, 1]


# -- IC-index ------------------------------------------------------------------


def test_ic_single_quadruple_concordant():
    ds = grid_dataset([[1, 0], [0, 1]])
    report = ic_index(ds, [2.0, 1.0, 0.0, 3.0])
    assert report.value == 1.0
    assert (report.numerator, report.denominator) == (1.0, 1)
    brute = ic_index_bruteforce(ds, [2.0, 1.0, 0.0, 3.0])
    assert brute.value == 1.0
    assert (brute.numerator, brute.denominator) == (2.0, 2)


def test_ic_separable_predictions_score_half():
    ds = grid_dataset([[1, 0], [0, 1]])
    report = ic_index(ds, [1.0, 2.0, 3.0, 4.0])
    assert report.value == 0.5
    assert not report.defaulted


def test_ic_defaulted_cases():
    # single target: no 2x2 design exists
    ds = from_arrays(["d1", "d2", "d3"], ["t", "t", "t"], [1.0, 2.0, 3.0])
    for fn in (ic_index, ic_index_bruteforce):
        report = fn(ds, [1.0, 2.0, 3.0])
        assert report.defaulted
        assert report.value == 0.5
    # additively separable labels: strict interaction never holds
    u = np.array([1.0, 2.0, 4.0])
    v = np.array([0.0, 3.0])
    labels = u[:, None] + v[None, :]
    ds = grid_dataset(labels)
    report = ic_index(ds, np.arange(6, dtype=np.float64))
    assert report.defaulted


def test_ic_bruteforce_cap():
    ds = grid_dataset(np.zeros((2, 2)))
    with pytest.raises(SizeLimit):
        ic_index_bruteforce(ds, np.zeros(4), cap=3)


def test_ic_duplicate_pair_via_arrays():
    with pytest.raises(InvalidValue):
        ic_index_arrays([0, 0], [0, 0], np.array([1.0, 2.0]), np.array([1.0, 2.0]))


def test_ic_alignment():
    ds = grid_dataset([[1, 0], [0, 1]])
    with pytest.raises(AlignmentError):
        ic_index(ds, [1.0, 2.0])


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=80, deadline=None)
def test_ic_fast_equals_bruteforce(seed):
    ds, pred = random_case(seed)
    fast = ic_index(ds, pred)
    brute = ic_index_bruteforce(ds, pred)
    assert fast.value == brute.value
    assert fast.defaulted == brute.defaulted
    assert brute.numerator == 2 * fast.numerator
    assert brute.denominator == 2 * fast.denominator


def test_ic_thread_fanout_bit_identical():
    ds, pred = random_case(123456, max_dim=12)
    single = ic_index(ds, pred, threads=1)
    multi = ic_index(ds, pred, threads=4)
    assert single == multi


def test_ic_orientation_transpose_bit_identical():
    # A wide and a tall grid exercise both outer-axis choices; transposing
    # the dataset must give the same counts either way.
    rng = np.random.default_rng(5)
    labels = rng.integers(-2, 3, size=(3, 9)).astype(np.float64)
    pred = rng.integers(-20, 21, size=labels.size).astype(np.float64) / 10.0
    wide = grid_dataset(labels)
    tall = grid_dataset(labels.T)
    pred_t = pred.reshape(labels.shape).T.ravel()
    a = ic_index(wide, pred)
    b = ic_index(tall, pred_t)
    assert (a.value, a.numerator, a.denominator) == (b.value, b.numerator, b.denominator)


# -- shared invariances --------------------------------------------------------


def all_five(ds, pred):
    return [
        accuracy(ds, pred),
        c_index(ds, pred),
        groupwise_c_index(ds, pred, axis="drug"),
        groupwise_c_index(ds, pred, axis="target"),
        ic_index(ds, pred),
    ]


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_flip_symmetry(seed):
    # Negation swaps concordant and discordant pairs, so the counts obey
    # num' = den - num exactly; the value relation v' = 1 - v then holds up
    # to one rounding of the final division.
    ds, pred = random_case(seed)
    for before, after in zip(all_five(ds, pred)[1:], all_five(ds, -pred)[1:]):
        assert after.denominator == before.denominator
        assert after.numerator == before.denominator - before.numerator
        assert after.value == pytest.approx(1.0 - before.value, abs=1e-15)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_positive_affine_invariance(seed):
    # concordance metrics: any positive scale and any shift
    ds, pred = random_case(seed, integer_pred=True)
    moved = 2.0 * pred + 3.0
    for before, after in zip(all_five(ds, pred)[1:], all_five(ds, moved)[1:]):
        assert after == before
    # accuracy: positive scaling and sign-preserving cubing only
    assert accuracy(ds, 4.0 * pred) == accuracy(ds, pred)
    assert accuracy(ds, pred ** 3) == accuracy(ds, pred)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_monotone_transform_leaves_pair_metrics_but_not_ic(seed):
    # cubing preserves every pairwise order, so the c-index family cannot
    # move; the IC-index responds to second differences and generally does.
    ds, pred = random_case(seed, integer_pred=True)
    cubed = pred ** 3
    for before, after in zip(all_five(ds, pred)[1:4], all_five(ds, cubed)[1:4]):
        assert after == before


def test_ic_not_monotone_invariant_witness():
    # concrete witness that a strictly increasing map can move the IC-index:
    # interaction 2-0-3+2 = 1 > 0 but 8-0-27+8 = -11 < 0 after cubing
    ds = grid_dataset([[1, 0], [0, 1]])
    pred = np.array([2.0, 0.0, 3.0, 2.0])
    assert ic_index(ds, pred).value == 1.0
    assert ic_index(ds, pred ** 3).value == 0.0


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_relabeling_invariance(seed):
    rng = np.random.default_rng(seed)
    ds, pred = random_case(seed)
    perm = rng.permutation(ds.n)
    drugs = [("D%d" % (ds.drug_ids[i] * 7 + 3)) for i in perm]
    targets = [("T%d" % (ds.target_ids[i] * 5 + 1)) for i in perm]
    renamed = from_arrays(drugs, targets, ds.values[perm])
    shuffled_pred = pred[perm]
    for before, after in zip(all_five(ds, pred), all_five(renamed, shuffled_pred)):
        assert after.value == before.value
        assert after.denominator == before.denominator


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_values_in_unit_interval(seed):
    ds, pred = random_case(seed)
    for report in all_five(ds, pred):
        assert 0.0 <= report.value <= 1.0
        assert isinstance(report, MetricReport)
        assert report.denominator >= 0


# -- separability invariance (exact) -------------------------------------------


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_additive_offsets_never_move_ic(seed):
    rng = np.random.default_rng(seed)
    ds, pred = random_case(seed, integer_pred=True)
    u = rng.integers(-1000, 1001, size=ds.n_drugs).astype(np.float64)
    v = rng.integers(-1000, 1001, size=ds.n_targets).astype(np.float64)
    c = float(rng.integers(-1000, 1001))
    shifted = pred + u[ds.drug_ids] + v[ds.target_ids] + c
    before = ic_index(ds, pred)
    after = ic_index(ds, shifted)
    assert before == after


# -- exact 0.5 grid -------------------------------------------------------------


def synthetic_predictors(ds, rng):
    zero = np.zeros(ds.n)
    const = np.full(ds.n, float(rng.integers(-5, 6)))
    of_drug = rng.integers(-5, 6, size=ds.n_drugs).astype(np.float64)[ds.drug_ids]
    of_target = rng.integers(-5, 6, size=ds.n_targets).astype(np.float64)[ds.target_ids]
    separable = (
        rng.integers(-5, 6, size=ds.n_drugs).astype(np.float64)[ds.drug_ids]
        + rng.integers(-5, 6, size=ds.n_targets).astype(np.float64)[ds.target_ids]
    )
    return zero, const, of_drug, of_target, separable


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_degenerate_predictors_score_half(seed):
    rng = np.random.default_rng(seed)
    ds, _ = random_case(seed)
    zero, const, of_drug, of_target, separable = synthetic_predictors(ds, rng)
    for pred in (zero, const, of_drug, of_target, separable):
        assert ic_index(ds, pred).value == 0.5
    for pred in (zero, const):
        assert c_index(ds, pred).value == 0.5
        assert groupwise_c_index(ds, pred, axis="drug").value == 0.5
        assert groupwise_c_index(ds, pred, axis="target").value == 0.5
    assert accuracy(ds, zero).value == 0.5
    # prediction a function of the drug alone ties all same-drug pairs
    assert groupwise_c_index(ds, of_drug, axis="drug").value == 0.5
    # prediction a function of the target alone ties all same-target pairs
    assert groupwise_c_index(ds, of_target, axis="target").value == 0.5
