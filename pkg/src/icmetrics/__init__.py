"""Interaction-aware ranking metrics for bipartite affinity prediction.

The package measures how well a model's predicted binding strengths order
drug-target pairs, with the IC-index isolating the part of that ordering
that genuine drug-target interaction terms carry. Alongside the metrics it
ships the sum-based reference learners, group-wise off-training-set split
generation, and the imbalanced-XOR simulation used to exercise them.
"""

from .baselines import (
    BaselineKind,
    TrainedBaseline,
    fit_baseline,
    fit_sums_arrays,
    predict_arrays,
    predict_baseline,
)
from .counting import (
    ConcordanceCounts,
    count_concordance,
    count_concordance_naive,
)
from .dataset import (
    AffinityRecord,
    DatasetStats,
    InteractionDataset,
    OtsClass,
    classify_pair,
    dataset_stats,
    format_table,
    from_arrays,
    parse_table,
    validate_predictions,
)
from .errors import (
    AlignmentError,
    CoreError,
    DuplicatePair,
    InsufficientEntities,
    InvalidValue,
    ParseError,
    SchemaError,
    SizeLimit,
)
from .metrics import (
    EffectDecomposition,
    Metric,
    MetricReport,
    accuracy,
    accuracy_arrays,
    c_index,
    c_index_arrays,
    decompose_2x2,
    groupwise_c_index,
    groupwise_c_index_arrays,
    heaviside,
    ic_index,
    ic_index_arrays,
    ic_index_bruteforce,
)
from .rng import SplitMix64, derive_seed
from .selftest import CheckResult, run_selftest
from .simulation import (
    ALL_LEARNERS,
    ALL_METRICS,
    ALL_SETTINGS,
    SimulationResult,
    SummaryRow,
    XorConfig,
    generate_xor,
    run_xor_experiment,
)
from .splits import (
    Fold,
    FoldPlan,
    FoldVerdict,
    GroupAssignment,
    OtsSetting,
    assign_groups,
    make_folds,
    serialize_fold_plan,
    verify_fold,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_LEARNERS",
    "ALL_METRICS",
    "ALL_SETTINGS",
    "AffinityRecord",
    "AlignmentError",
    "BaselineKind",
    "CheckResult",
    "ConcordanceCounts",
    "CoreError",
    "DatasetStats",
    "DuplicatePair",
    "EffectDecomposition",
    "Fold",
    "FoldPlan",
    "FoldVerdict",
    "GroupAssignment",
    "InsufficientEntities",
    "InteractionDataset",
    "InvalidValue",
    "Metric",
    "MetricReport",
    "OtsClass",
    "OtsSetting",
    "ParseError",
    "SchemaError",
    "SimulationResult",
    "SizeLimit",
    "SplitMix64",
    "SummaryRow",
    "TrainedBaseline",
    "XorConfig",
    "accuracy",
    "accuracy_arrays",
    "assign_groups",
    "c_index",
    "c_index_arrays",
    "classify_pair",
    "count_concordance",
    "count_concordance_naive",
    "dataset_stats",
    "decompose_2x2",
    "derive_seed",
    "fit_baseline",
    "fit_sums_arrays",
    "format_table",
    "from_arrays",
    "generate_xor",
    "groupwise_c_index",
    "groupwise_c_index_arrays",
    "heaviside",
    "ic_index",
    "ic_index_arrays",
    "ic_index_bruteforce",
    "make_folds",
    "parse_table",
    "predict_arrays",
    "predict_baseline",
    "run_selftest",
    "run_xor_experiment",
    "serialize_fold_plan",
    "validate_predictions",
    "verify_fold",
]
