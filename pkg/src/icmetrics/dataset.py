"""Bipartite affinity datasets: parsing, validation, and training-set classification.

A dataset is an ordered collection of (drug, target, affinity) records with
at most one record per pair. Identifiers are opaque strings compared
byte-wise. Each side receives dense integer indices in first-appearance
order, and the per-record index/value arrays are what the metric kernels
consume.
"""

import csv
import enum
import io
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    AlignmentError,
    DuplicatePair,
    InvalidValue,
    ParseError,
    SchemaError,
)


class OtsClass(enum.Enum):
    """Position of a (drug, target) pair relative to a training set.

    ITS: the pair itself was observed in training. The remaining four classes
    cover off-training-set pairs by whether the drug / target identity was
    seen at all: IDIT (both seen), ODIT (drug unseen, target seen), IDOT
    (drug seen, target unseen), ODOT (neither seen).
    """

    ITS = "ITS"
    IDIT = "IDIT"
    ODIT = "ODIT"
    IDOT = "IDOT"
    ODOT = "ODOT"


@dataclass(frozen=True, slots=True)
class AffinityRecord:
    drug: str
    target: str
    value: float


class DatasetStats(NamedTuple):
    n: int
    n_drugs: int
    n_targets: int
    density: float


class InteractionDataset:
    """Immutable record collection with dense per-axis indices.

    Attributes
    ----------
    records: tuple of AffinityRecord in input order
    drug_index / target_index: id string -> dense index, first-appearance order
    drug_ids / target_ids: int64 arrays, one entry per record
    values: float64 array of affinities, one entry per record

    The arrays are marked read-only; datasets are safe to share across threads.
    """

    __slots__ = ("records", "drug_index", "target_index", "drug_ids", "target_ids", "values", "_rows")

    def __init__(self, records):
        records = tuple(
            r if isinstance(r, AffinityRecord) else AffinityRecord(*r) for r in records
        )
        drug_index = {}
        target_index = {}
        rows = {}
        drug_ids = np.empty(len(records), dtype=np.int64)
        target_ids = np.empty(len(records), dtype=np.int64)
        values = np.empty(len(records), dtype=np.float64)
        for pos, record in enumerate(records):
            if not isinstance(record.drug, str) or not record.drug:
                raise InvalidValue("drug identifier must be a non-empty string")
            if not isinstance(record.target, str) or not record.target:
                raise InvalidValue("target identifier must be a non-empty string")
            value = float(record.value)
            if not np.isfinite(value):
                raise InvalidValue(
                    "non-finite affinity for pair (%r, %r)" % (record.drug, record.target)
                )
            pair = (record.drug, record.target)
            if pair in rows:
                raise DuplicatePair(record.drug, record.target)
            rows[pair] = pos
            drug_ids[pos] = drug_index.setdefault(record.drug, len(drug_index))
            target_ids[pos] = target_index.setdefault(record.target, len(target_index))
            values[pos] = value
        drug_ids.flags.writeable = False
        target_ids.flags.writeable = False
        values.flags.writeable = False
        self.records = records
        self.drug_index = drug_index
        self.target_index = target_index
        self.drug_ids = drug_ids
        self.target_ids = target_ids
        self.values = values
        self._rows = rows

    def __len__(self):
        return len(self.records)

    def __eq__(self, other):
        if not isinstance(other, InteractionDataset):
            return NotImplemented
        return self.records == other.records

    def __hash__(self):
        return hash(self.records)

    @property
    def n(self):
        return len(self.records)

    @property
    def n_drugs(self):
        return len(self.drug_index)

    @property
    def n_targets(self):
        return len(self.target_index)

    def contains_pair(self, drug, target):
        return (drug, target) in self._rows

    def subset(self, indices):
        """New dataset holding the records at `indices`, in the given order."""
        return InteractionDataset(self.records[i] for i in indices)


def dataset_stats(dataset):
    """Return (n, n_drugs, n_targets, density) with density = n / (n_drugs * n_targets)."""
    n = dataset.n
    n_drugs = dataset.n_drugs
    n_targets = dataset.n_targets
    density = n / (n_drugs * n_targets) if n else 0.0
    return DatasetStats(n, n_drugs, n_targets, density)


def classify_pair(pair, training):
    """Classify `pair` = (drug, target) against a training InteractionDataset."""
    drug, target = pair
    if training.contains_pair(drug, target):
        return OtsClass.ITS
    drug_seen = drug in training.drug_index
    target_seen = target in training.target_index
    if drug_seen and target_seen:
        return OtsClass.IDIT
    if not drug_seen and target_seen:
        return OtsClass.ODIT
    if drug_seen and not target_seen:
        return OtsClass.IDOT
    return OtsClass.ODOT


_DIALECTS = {"csv": ",", "tsv": "\t"}


def parse_table(text, fmt="csv", has_prediction_column=False, dedup="error"):
    """Parse a drug,target,y[,pred] table into a dataset and optional predictions.

    Parameters
    ----------
    text: the table contents (header row required; LF or CRLF line ends)
    fmt: "csv" or "tsv"
    has_prediction_column: when true, a missing pred column is a SchemaError;
      the prediction vector is returned whenever the column exists either way
    dedup: "error" rejects duplicate (drug, target) rows; "mean" replaces the
      duplicates of a pair with a single record at the first occurrence's
      position carrying the arithmetic mean of y (and of pred when present)

    Returns
    -------
    (InteractionDataset, numpy array of predictions or None)
    """
    if fmt not in _DIALECTS:
        raise SchemaError("unknown table format %r (expected csv or tsv)" % (fmt,))
    if dedup not in ("error", "mean"):
        raise SchemaError("unknown dedup mode %r (expected error or mean)" % (dedup,))
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=_DIALECTS[fmt])
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty input: header row drug,target,y[,pred] is required")
    header = [h.strip() for h in header]
    if header[:3] != ["drug", "target", "y"] or len(header) > 4:
        raise SchemaError(
            "expected header drug,target,y[,pred], got %r" % (",".join(header),)
        )
    with_pred = len(header) == 4
    if with_pred and header[3] != "pred":
        raise SchemaError("fourth column must be named pred, got %r" % (header[3],))
    if has_prediction_column and not with_pred:
        raise SchemaError("a pred column was required but the header has none")

    width = 4 if with_pred else 3
    rows = []
    preds = []
    for line_number, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width:
            raise ParseError(
                "expected %d fields, got %d" % (width, len(row)), line_number
            )
        drug, target = row[0], row[1]
        if not drug or not target:
            raise ParseError("empty drug or target identifier", line_number)
        try:
            y = float(row[2])
        except ValueError:
            raise ParseError("cannot parse y value %r" % (row[2],), line_number)
        if not np.isfinite(y):
            raise ParseError("non-finite y value %r" % (row[2],), line_number)
        if with_pred:
            try:
                p = float(row[3])
            except ValueError:
                raise ParseError("cannot parse pred value %r" % (row[3],), line_number)
            if not np.isfinite(p):
                raise ParseError("non-finite pred value %r" % (row[3],), line_number)
            preds.append(p)
        rows.append((drug, target, y))

    if dedup == "mean":
        rows, preds = _dedup_mean(rows, preds if with_pred else None)

    dataset = InteractionDataset(AffinityRecord(d, t, y) for d, t, y in rows)
    if with_pred:
        pred = np.asarray(preds, dtype=np.float64)
        pred.flags.writeable = False
        return dataset, pred
    return dataset, None


def _dedup_mean(rows, preds):
    seen = {}
    out_rows = []
    out_preds = []
    for pos, (drug, target, y) in enumerate(rows):
        pair = (drug, target)
        if pair in seen:
            slot = seen[pair]
            out_rows[slot][2].append(y)
            if preds is not None:
                out_preds[slot].append(preds[pos])
        else:
            seen[pair] = len(out_rows)
            out_rows.append([drug, target, [y]])
            if preds is not None:
                out_preds.append([preds[pos]])
    rows = [(d, t, float(np.mean(ys))) for d, t, ys in out_rows]
    if preds is None:
        return rows, []
    return rows, [float(np.mean(ps)) for ps in out_preds]


def format_table(dataset, pred=None, fmt="csv"):
    """Serialize a dataset (and optional predictions) back to table text.

    Floats are written with repr, which round-trips exactly, so
    parse_table(format_table(ds)) reproduces `ds` record for record.
    """
    if fmt not in _DIALECTS:
        raise SchemaError("unknown table format %r (expected csv or tsv)" % (fmt,))
    sep = _DIALECTS[fmt]
    if pred is not None:
        pred = validate_predictions(dataset, pred)
    lines = ["drug" + sep + "target" + sep + "y" + (sep + "pred" if pred is not None else "")]
    for pos, record in enumerate(dataset.records):
        cells = [record.drug, record.target, repr(record.value)]
        if pred is not None:
            cells.append(repr(float(pred[pos])))
        lines.append(sep.join(cells))
    return "\n".join(lines) + "\n"


def validate_predictions(dataset, pred) -> np.ndarray:
    """Check a prediction vector against a dataset; returns it as float64."""
    pred = np.ascontiguousarray(pred, dtype=np.float64)
    if pred.ndim != 1:
        raise AlignmentError("prediction vector must be one-dimensional")
    if pred.shape[0] != dataset.n:
        raise AlignmentError(
            "prediction length %d does not match dataset size %d"
            % (pred.shape[0], dataset.n)
        )
    if not np.isfinite(pred).all():
        raise InvalidValue("predictions contain a non-finite entry")
    return pred


def from_arrays(drugs, targets, values) -> InteractionDataset:
    """Build a dataset from parallel sequences of ids and affinities."""
    if not (len(drugs) == len(targets) == len(values)):
        raise AlignmentError("drugs, targets, and values must have equal lengths")
    return InteractionDataset(
        AffinityRecord(str(d), str(t), float(v)) for d, t, v in zip(drugs, targets, values)
    )
