"""Cold-start cross-validation folds on a drug/target grid.

Every fold holds out one (drug group, target group) block as the test set;
the four settings differ only in how much of the remaining grid the model
is allowed to train on.
"""

import numpy as np

import icmetrics as icm

# A 6x6 grid missing a few cells, labels are arbitrary.
rng = np.random.Generator(np.random.PCG64(4))
mask = rng.random((6, 6)) < 0.9
drugs, targets = np.nonzero(mask)
ds = icm.from_arrays(
    ["drug%d" % d for d in drugs],
    ["target%d" % t for t in targets],
    rng.normal(size=drugs.shape[0]),
)
print("grid with", ds.n, "of 36 cells observed")

assignment = icm.assign_groups(ds, k=3, seed=2024)
print("drug groups:  ", assignment.drug_groups)
print("target groups:", assignment.target_groups)
print()

for setting in icm.OtsSetting:
    plan = icm.make_folds(ds, assignment, setting)
    sizes = [(len(f.train), len(f.test)) for f in plan.folds]
    print("%-4s  9 folds, (train, test) sizes: %s" % (setting.value, sizes))

# IDIT keeps every record outside the test block; ODOT additionally drops
# all records sharing a drug or a target with it. Verify one fold by hand.
plan = icm.make_folds(ds, assignment, icm.OtsSetting.ODOT)
fold = plan.folds[0]
report = icm.verify_fold(ds, fold.train, fold.test, icm.OtsSetting.ODOT)
print()
print("fold 0 of ODOT verifies:", report.passed)

# Each test record really is ODOT relative to the train rows: neither its
# drug nor its target appears in training.
train_subset = ds.subset(fold.train)
kinds = {
    icm.classify_pair((ds.records[i].drug, ds.records[i].target), train_subset)
    for i in fold.test
}
print("classes seen in the test block:", kinds)

print()
print(icm.serialize_fold_plan(plan)[:240] + " ...")
