"""Tour of the five evaluation metrics on a toy affinity table."""

import numpy as np

import icmetrics as icm

# Two drugs crossed with two targets, plus one extra drug seen on a single
# target. Labels are binding affinities. The model scores drugs in roughly
# the right order but never notices that d1 and d2 trade places on t2.
rows = """\
drug,target,y,pred
d1,t1,7.1,6.8
d1,t2,5.0,6.6
d2,t1,5.2,5.1
d2,t2,6.9,4.8
d3,t1,4.0,4.2
"""
ds, pred = icm.parse_table(rows, "csv", has_prediction_column=True)

print("dataset:", ds.n, "records,", ds.n_drugs, "drugs,", ds.n_targets, "targets")

for name, report in [
    ("accuracy          ", icm.accuracy(ds, pred)),
    ("c_index           ", icm.c_index(ds, pred)),
    ("c_index_drugwise  ", icm.groupwise_c_index(ds, pred, axis="drug")),
    ("c_index_targetwise", icm.groupwise_c_index(ds, pred, axis="target")),
    ("ic_index          ", icm.ic_index(ds, pred)),
]:
    print("%s %.4f   (%g of %g comparisons)" % (name, report.value, report.numerator, report.denominator))

# The ic_index above only sees one complete 2x2 design: d1/d2 crossed with
# t1/t2. Its label interaction is large and positive while the predicted
# interaction points the other way, so the single design scores zero even
# though every predicted sign is right (perfect accuracy above).
design_y = np.array([[7.1, 5.0], [5.2, 6.9]])
design_f = np.array([[6.8, 6.6], [5.1, 4.8]])
print()
print("label decomposition:     ", icm.decompose_2x2(design_y))
print("prediction decomposition:", icm.decompose_2x2(design_f))

# An additively separable predictor (drug effect + target effect) has zero
# predicted interaction on every design, so each one collects half credit
# and ic_index lands on exactly 0.5 no matter what the labels do.
separable = ds.drug_ids.astype(float) * 2.0 + ds.target_ids.astype(float)
report = icm.ic_index(ds, separable)
print()
print("separable predictor: ic_index %.2f (%g of %g)" % (report.value, report.numerator, report.denominator))

# c_index can treat near-equal predictions as ties.
close = np.array([1.0, 1.05, 2.0, 3.0, 4.0])
print("tie_tol 0.0:", icm.c_index(ds, close).value, " tie_tol 0.1:", icm.c_index(ds, close, tie_tol=0.1).value)
