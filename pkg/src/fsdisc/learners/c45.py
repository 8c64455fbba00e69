"""C4.5-style decision tree: gain-ratio splits and pessimistic-error pruning.

Continuous attributes get binary threshold splits (threshold chosen by
information gain, midway between adjacent distinct values); nominal
attributes get one branch per level. Among attributes whose gain is at least
the average candidate gain, the one with the highest gain ratio wins.
Subtrees are replaced by leaves when the leaf's upper-confidence error
estimate does not exceed the subtree's.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

_EPS = 1e-12


def entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Row-wise entropy (bits) of a 2-D array of class counts."""
    counts = np.asarray(counts, dtype=float)
    totals = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / totals, 0.0)
        terms = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -terms.sum(axis=-1)


@dataclass
class SplitCandidate:
    feature: int
    gain: float
    split_info: float
    threshold: float | None = None  # None for a nominal multiway split

    @property
    def gain_ratio(self) -> float:
        return self.gain / self.split_info if self.split_info > _EPS else 0.0


@dataclass
class Node:
    counts: np.ndarray
    feature: int = -1
    threshold: float | None = None
    children: list["Node"] = field(default_factory=list)
    # nominal branches: level code -> child position
    levels: dict[int, int] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    @property
    def label(self) -> int:
        return int(np.argmax(self.counts))

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def leaves(self):
        if self.is_leaf:
            yield self
        for c in self.children:
            yield from c.leaves()


def best_continuous_split(x, y, n_classes: int, min_leaf: int, feature: int = 0) -> SplitCandidate | None:
    """Highest-gain threshold on one attribute, both sides holding >= min_leaf rows."""
    n = len(y)
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    total = onehot.sum(axis=0)
    left = np.cumsum(onehot, axis=0)[:-1]
    right = total - left
    n_left = np.arange(1, n, dtype=float)
    valid = (xs[1:] > xs[:-1]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    if not valid.any():
        return None
    base = entropy_rows(total[None])[0]
    weighted = (n_left * entropy_rows(left) + (n - n_left) * entropy_rows(right)) / n
    gains = np.where(valid, base - weighted, -np.inf)
    # lowest threshold among (numerically) tied best gains
    i = int(np.flatnonzero(gains >= gains.max() - _EPS)[0])
    threshold = 0.5 * (xs[i] + xs[i + 1])
    split_info = float(entropy_rows(np.array([[n_left[i], n - n_left[i]]]))[0])
    return SplitCandidate(feature, float(gains[i]), split_info, float(threshold))


def nominal_split(x, y, n_classes: int, min_leaf: int, feature: int = 0) -> SplitCandidate | None:
    codes = x.astype(np.intp)
    levels = np.unique(codes)
    table = np.zeros((len(levels), n_classes))
    np.add.at(table, (np.searchsorted(levels, codes), y), 1.0)
    sizes = table.sum(axis=1)
    if (sizes >= min_leaf).sum() < 2:
        return None
    n = len(y)
    base = entropy_rows(table.sum(axis=0)[None])[0]
    gain = base - float((sizes * entropy_rows(table)).sum() / n)
    split_info = float(entropy_rows(sizes[None])[0])
    return SplitCandidate(feature, gain, split_info)


def choose_split(candidates: list[SplitCandidate]) -> SplitCandidate | None:
    """Max gain ratio among candidates with at least average gain."""
    useful = [c for c in candidates if c.gain > _EPS]
    if not useful:
        return None
    avg = sum(c.gain for c in useful) / len(useful)
    pool = [c for c in useful if c.gain >= avg - 1e-9]
    return max(pool, key=lambda c: (c.gain_ratio, -c.feature))


def added_errors(n: float, e: float, confidence: float) -> float:
    """Extra errors on top of ``e`` observed in ``n`` cases at the upper confidence limit."""
    if n <= 0:
        return 0.0
    z = norm.ppf(1.0 - confidence)
    coeff = z * z
    if e < 1e-6:
        return n * (1.0 - math.exp(math.log(confidence) / n))
    if e < 0.9999:
        v0 = n * (1.0 - math.exp(math.log(confidence) / n))
        return v0 + e * (added_errors(n, 1.0, confidence) - v0)
    if e + 0.5 >= n:
        return 0.67 * (n - e)
    pr = (e + 0.5 + coeff / 2 + math.sqrt(coeff * ((e + 0.5) * (1 - (e + 0.5) / n) + coeff / 4))) / (n + coeff)
    return n * pr - e


class C45Tree:
    def __init__(self, confidence: float = 0.25, min_leaf: int = 2, prune: bool = True):
        self.confidence = confidence
        self.min_leaf = min_leaf
        self.prune = prune

    def fit(self, X, y, n_classes: int | None = None, nominal=None) -> "C45Tree":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.intp)
        self.n_classes_ = n_classes or int(y.max()) + 1
        self.n_features_ = X.shape[1]
        self.nominal_ = (
            np.zeros(X.shape[1], dtype=bool) if nominal is None else np.asarray(nominal, dtype=bool)
        )
        self.root_ = self._grow(X, y)
        self.n_nodes_unpruned_ = self.root_.size()
        if self.prune:
            self._prune(self.root_)
        return self

    def root_split(self, X, y) -> SplitCandidate | None:
        """The split the tree would place at a node holding ``(X, y)``."""
        cands = []
        for j in range(X.shape[1]):
            finder = nominal_split if self.nominal_[j] else best_continuous_split
            c = finder(X[:, j], y, self.n_classes_, self.min_leaf, j)
            if c is not None:
                cands.append(c)
        return choose_split(cands)

    def _grow(self, X, y) -> Node:
        counts = np.bincount(y, minlength=self.n_classes_).astype(float)
        node = Node(counts)
        if len(y) < 2 * self.min_leaf or np.count_nonzero(counts) < 2:
            return node
        split = self.root_split(X, y)
        if split is None:
            return node
        col = X[:, split.feature]
        node.feature = split.feature
        if split.threshold is not None:
            node.threshold = split.threshold
            mask = col <= split.threshold
            node.children = [self._grow(X[mask], y[mask]), self._grow(X[~mask], y[~mask])]
        else:
            codes = col.astype(np.intp)
            node.levels = {}
            for pos, level in enumerate(np.unique(codes)):
                mask = codes == level
                node.levels[int(level)] = pos
                node.children.append(self._grow(X[mask], y[mask]))
        return node

    def _leaf_estimate(self, node: Node) -> float:
        n = node.counts.sum()
        e = n - node.counts.max()
        return e + added_errors(n, e, self.confidence)

    def _prune(self, node: Node) -> float:
        if node.is_leaf:
            return self._leaf_estimate(node)
        subtree = sum(self._prune(c) for c in node.children)
        as_leaf = self._leaf_estimate(node)
        if as_leaf <= subtree + 0.1:
            node.feature, node.threshold, node.children, node.levels = -1, None, [], None
            return as_leaf
        return subtree

    @property
    def n_nodes_(self) -> int:
        return self.root_.size()

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        out = np.empty(len(X), dtype=np.intp)
        self._route(self.root_, X, np.arange(len(X)), out)
        return out

    def _route(self, node: Node, X, idx, out):
        if len(idx) == 0:
            return
        if node.is_leaf:
            out[idx] = node.label
            return
        col = X[idx, node.feature]
        if node.threshold is not None:
            mask = col <= node.threshold
            self._route(node.children[0], X, idx[mask], out)
            self._route(node.children[1], X, idx[~mask], out)
            return
        codes = col.astype(np.intp)
        seen = np.zeros(len(idx), dtype=bool)
        for level, pos in node.levels.items():
            mask = codes == level
            seen |= mask
            self._route(node.children[pos], X, idx[mask], out)
        # unseen nominal level: fall back to this node's majority
        out[idx[~seen]] = node.label
