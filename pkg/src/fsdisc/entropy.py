"""Class entropy, split entropy and information gain of binary cuts (base-2 bits)."""

from __future__ import annotations

import numpy as np

from .data import Dataset
from .encoding import DecodedView


def class_counts(labels, n_classes: int | None = None) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.intp)
    return np.bincount(labels, minlength=n_classes or 0)


def class_entropy(counts) -> float:
    """Shannon entropy in bits of a class-count vector; empty -> 0."""
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    return max(0.0, float(-(p * np.log2(p)).sum()))


def split_entropy(counts_s1, counts_s2) -> float:
    """Size-weighted mean entropy of the two sides of a split."""
    c1 = np.asarray(counts_s1, dtype=float)
    c2 = np.asarray(counts_s2, dtype=float)
    n1, n2 = c1.sum(), c2.sum()
    n = n1 + n2
    if n <= 0:
        raise ValueError("split entropy of an empty set is undefined")
    return float(n1 / n * class_entropy(c1) + n2 / n * class_entropy(c2))


def info_gain(labels, column, cut: float, n_classes: int | None = None) -> float:
    """Class entropy minus the entropy of the ``> cut`` / ``<= cut`` split."""
    labels = np.asarray(labels, dtype=np.intp)
    column = np.asarray(column, dtype=float)
    if labels.shape != column.shape or labels.size == 0:
        raise ValueError("labels and column must be non-empty and equally long")
    k = n_classes or int(labels.max()) + 1
    total = np.bincount(labels, minlength=k)
    above = np.bincount(labels[column > cut], minlength=k)
    gain = class_entropy(total) - split_entropy(above, total - above)
    # rounding can leave -1e-16 on one-sided splits
    return max(gain, 0.0)


def discretization_fitness(dataset: Dataset, view: DecodedView) -> float:
    """Sum of the information gains of every discretized attribute at its cut."""
    return float(
        sum(
            info_gain(dataset.labels, dataset.values[:, j], cut, dataset.class_count)
            for j, cut in zip(view.discretized, view.cuts)
        )
    )
