"""Tabular dataset ingestion, attribute bounds and stratified fold plans."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)

CONTINUOUS = "continuous"
NOMINAL = "nominal"
MISSING_TOKENS = frozenset({"", "?", "na", "nan", "null", "none"})


class DataFormatError(ValueError):
    """Raised when a CSV file cannot be turned into a usable dataset."""


@dataclass(frozen=True)
class AttributeMeta:
    name: str
    kind: str
    lower_bound: float
    upper_bound: float
    # Level names for nominal attributes; code i stands for categories[i].
    categories: tuple[str, ...] = ()

    @property
    def is_nominal(self) -> bool:
        return self.kind == NOMINAL


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable m x n feature matrix with per-attribute metadata and integer labels.

    Labels are class indices in ``range(class_count)``; ``class_names`` maps
    them back to the original label text.
    """

    values: np.ndarray
    attributes: tuple[AttributeMeta, ...]
    labels: np.ndarray
    class_names: tuple[str, ...]
    name: str = "dataset"

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        labels = np.array(self.labels, dtype=np.intp)
        if values.ndim != 2:
            raise DataFormatError("feature matrix must be 2-dimensional")
        if values.shape[0] == 0:
            raise DataFormatError("dataset has no rows")
        if values.shape[1] != len(self.attributes):
            raise DataFormatError(
                f"{values.shape[1]} columns but {len(self.attributes)} attribute records"
            )
        if labels.shape != (values.shape[0],):
            raise DataFormatError("labels length must equal the number of rows")
        if labels.min() < 0 or labels.max() >= len(self.class_names):
            raise DataFormatError("label index outside the class range")
        if len(self.class_names) < 2 or len(np.unique(labels)) < 2:
            raise DataFormatError("dataset needs at least two classes")
        if not np.all(np.isfinite(values)):
            raise DataFormatError("feature matrix contains missing or non-finite values")
        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    @property
    def nominal_mask(self) -> np.ndarray:
        return np.array([a.is_nominal for a in self.attributes], dtype=bool)

    @property
    def bounds(self) -> np.ndarray:
        return np.array([(a.lower_bound, a.upper_bound) for a in self.attributes], dtype=float)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.attributes == other.attributes
            and self.class_names == other.class_names
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.labels, other.labels)
        )

    __hash__ = None

    @classmethod
    def from_arrays(
        cls,
        values,
        labels,
        names: Sequence[str] | None = None,
        kinds: Sequence[str] | None = None,
        class_names: Sequence[str] | None = None,
        name: str = "dataset",
    ) -> "Dataset":
        """Build a dataset from in-memory arrays; bounds come from the data.

        ``labels`` may hold arbitrary hashable values; they are mapped to a
        contiguous index set in sorted order unless ``class_names`` is given,
        in which case ``labels`` must already be indices.
        """
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise DataFormatError("feature matrix must be 2-dimensional")
        n = values.shape[1]
        names = list(names) if names is not None else [f"x{j}" for j in range(n)]
        kinds = list(kinds) if kinds is not None else [CONTINUOUS] * n
        if class_names is None:
            class_names, codes = _encode_labels([str(v) for v in np.asarray(labels).tolist()])
        else:
            codes = np.asarray(labels, dtype=np.intp)
        attrs = []
        for j in range(n):
            col = values[:, j]
            lb, ub = (float(col.min()), float(col.max())) if len(col) else (0.0, 0.0)
            cats = tuple(str(int(c)) for c in np.unique(col)) if kinds[j] == NOMINAL else ()
            attrs.append(AttributeMeta(names[j], kinds[j], lb, ub, cats))
        return cls(values, tuple(attrs), codes, tuple(class_names), name)

    def subset_rows(self, index) -> tuple[np.ndarray, np.ndarray]:
        return self.values[index], self.labels[index]


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _encode_labels(raw: Sequence[str]) -> tuple[tuple[str, ...], np.ndarray]:
    levels = sorted(set(raw), key=_level_key)
    lookup = {v: i for i, v in enumerate(levels)}
    return tuple(levels), np.array([lookup[v] for v in raw], dtype=np.intp)


def _level_key(v: str):
    # numeric-looking levels sort numerically so "10" follows "9"
    return (0, float(v), v) if _is_number(v) else (1, 0.0, v)


def _resolve_label_column(header: list[str] | None, width: int, label_column) -> int:
    if label_column is None:
        return width - 1
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise DataFormatError(f"label column {label_column!r} not found in header")
        return header.index(label_column)
    idx = int(label_column)
    if idx < 0:
        idx += width
    if not 0 <= idx < width:
        raise DataFormatError(f"label column index {label_column} out of range for {width} columns")
    return idx


def read_manifest(path: str | Path) -> dict[str, str]:
    """Read a JSON manifest ``{"columns": {"<name>": "nominal"|"continuous"}}``."""
    with open(path) as fh:
        doc = json.load(fh)
    kinds = doc.get("columns", doc)
    bad = {k: v for k, v in kinds.items() if v not in (CONTINUOUS, NOMINAL)}
    if bad:
        raise DataFormatError(f"unknown attribute kinds in manifest: {bad}")
    return dict(kinds)


def load_csv(
    path: str | Path,
    label_column: str | int | None = None,
    kinds: Mapping[str, str] | None = None,
    header: bool | None = None,
) -> Dataset:
    """Load a comma-separated file into a :class:`Dataset`.

    The header row is auto-detected (a first row with no numeric field) unless
    ``header`` is given. Rows with missing entries are dropped. Columns holding
    any non-numeric token become nominal and are coded by sorted level;
    ``kinds`` (column name -> kind) overrides the inference.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        text = fh.read()
    return parse_csv(text, path.stem, label_column, kinds, header, source=str(path))


def parse_csv(
    text: str,
    name: str = "dataset",
    label_column: str | int | None = None,
    kinds: Mapping[str, str] | None = None,
    header: bool | None = None,
    source: str | None = None,
) -> Dataset:
    """Same as :func:`load_csv` for CSV content already in memory."""
    where = source or name
    raw_rows = list(csv.reader(io.StringIO(text), skipinitialspace=True))
    raw_rows = [(i + 1, [t.strip() for t in r]) for i, r in enumerate(raw_rows) if any(t.strip() for t in r)]
    if not raw_rows:
        raise DataFormatError(f"{where}: empty file")

    first = raw_rows[0][1]
    if header is None:
        header = not any(_is_number(t) for t in first)
    names = first if header else None
    body = raw_rows[1:] if header else raw_rows
    width = len(first)
    for line_no, r in body:
        if len(r) != width:
            raise DataFormatError(f"{where}: row {line_no} has {len(r)} fields, expected {width}")
    if not body:
        raise DataFormatError(f"{where}: no data rows")

    label_idx = _resolve_label_column(names, width, label_column)
    if names is None:
        names = [f"x{j}" for j in range(width)]

    complete = [r for _, r in body if not any(t.lower() in MISSING_TOKENS for t in r)]
    dropped = len(body) - len(complete)
    if dropped:
        logger.info("%s: dropped %d row(s) with missing values", where, dropped)
    if not complete:
        raise DataFormatError(f"{where}: every row has missing values")

    feature_idx = [j for j in range(width) if j != label_idx]
    kinds = dict(kinds or {})
    columns, attrs = [], []
    for j in feature_idx:
        tokens = [r[j] for r in complete]
        kind = kinds.get(names[j])
        if kind is None:
            kind = CONTINUOUS if all(_is_number(t) for t in tokens) else NOMINAL
        if kind == CONTINUOUS:
            try:
                col = np.array([float(t) for t in tokens])
            except ValueError as exc:
                raise DataFormatError(f"{where}: column {names[j]!r} declared continuous: {exc}") from None
            cats: tuple[str, ...] = ()
        else:
            cats, codes = _encode_labels(tokens)
            col = codes.astype(float)
        columns.append(col)
        attrs.append(AttributeMeta(names[j], kind, float(col.min()), float(col.max()), cats))

    class_names, labels = _encode_labels([r[label_idx] for r in complete])
    if len(class_names) < 2:
        raise DataFormatError(f"{where}: labels contain a single class {class_names[0]!r}")
    values = np.column_stack(columns) if columns else np.empty((len(complete), 0))
    return Dataset(values, tuple(attrs), labels, class_names, name=name)


def compute_bounds(dataset: Dataset) -> np.ndarray:
    """Per-attribute ``(lb, ub)`` rows equal to the column min and max.

    Nominal attributes get the range of their integer codes.
    """
    return np.column_stack([dataset.values.min(axis=0), dataset.values.max(axis=0)])


@dataclass(frozen=True, eq=False)
class FoldPlan:
    k: int
    assignments: np.ndarray = field(repr=False)

    def test_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def splits(self):
        for f in range(self.k):
            yield self.train_index(f), self.test_index(f)

    def __eq__(self, other):
        return isinstance(other, FoldPlan) and self.k == other.k and np.array_equal(
            self.assignments, other.assignments
        )

    __hash__ = None


def stratified_kfold(labels, k: int, rng: np.random.Generator | int | None = None) -> FoldPlan:
    """Assign each instance to one of ``k`` folds, balancing every class.

    Instances are shuffled within their class, the classes are laid end to end
    and positions are dealt round-robin, so fold sizes and per-class fold
    counts each differ by at most one.
    """
    labels = np.asarray(labels)
    m = len(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > m:
        raise ValueError(f"k={k} exceeds the number of instances ({m})")
    rng = np.random.default_rng(rng)
    order = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        order.append(rng.permutation(members))
    order = np.concatenate(order)
    assignments = np.empty(m, dtype=np.intp)
    assignments[order] = np.arange(m) % k
    assignments.setflags(write=False)
    return FoldPlan(k, assignments)
