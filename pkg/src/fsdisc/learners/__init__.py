"""Baseline classifiers used both inside the wrapper objective and for final scoring."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .c45 import C45Tree
from .naive_bayes import GaussianNaiveBayes
from .svm import LinearSVM


class LearnerKind(str, Enum):
    NAIVE_BAYES = "nb"
    C45 = "c45"
    LINEAR_SVM = "svm"


@dataclass(frozen=True)
class NaiveBayesParams:
    var_floor_factor: float = 1e-9


@dataclass(frozen=True)
class C45Params:
    confidence: float = 0.25
    min_leaf: int = 2
    prune: bool = True


@dataclass(frozen=True)
class SVMParams:
    C: float = 1.0
    max_epochs: int = 1000
    tol: float = 1e-3


_DEFAULT_PARAMS = {
    LearnerKind.NAIVE_BAYES: NaiveBayesParams,
    LearnerKind.C45: C45Params,
    LearnerKind.LINEAR_SVM: SVMParams,
}


@dataclass(frozen=True)
class LearnerSpec:
    kind: LearnerKind
    params: NaiveBayesParams | C45Params | SVMParams = field(default=None)

    def __post_init__(self):
        kind = LearnerKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.params is None:
            object.__setattr__(self, "params", _DEFAULT_PARAMS[kind]())
        elif not isinstance(self.params, _DEFAULT_PARAMS[kind]):
            raise TypeError(f"{type(self.params).__name__} does not configure {kind.value}")

    @classmethod
    def of(cls, kind: str | LearnerKind) -> "LearnerSpec":
        return cls(LearnerKind(kind))


class ConstantModel:
    """Predicts the only class seen during training."""

    def __init__(self, label: int, n_features: int):
        self.label = label
        self.n_features_ = n_features

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        return np.full(len(X), self.label, dtype=np.intp)


def train(spec: LearnerSpec | str, X, y, n_classes: int | None = None, nominal=None):
    """Fit the configured learner; a single-class fold yields a constant model."""
    if not isinstance(spec, LearnerSpec):
        spec = LearnerSpec.of(spec)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.intp)
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError("training matrix needs at least one column")
    if len(y) != len(X) or len(y) == 0:
        raise ValueError("training labels must match the rows of X")
    present = np.unique(y)
    if len(present) == 1:
        return ConstantModel(int(present[0]), X.shape[1])
    p = spec.params
    if spec.kind is LearnerKind.NAIVE_BAYES:
        return GaussianNaiveBayes(p.var_floor_factor).fit(X, y, n_classes)
    if spec.kind is LearnerKind.C45:
        return C45Tree(p.confidence, p.min_leaf, p.prune).fit(X, y, n_classes, nominal)
    return LinearSVM(p.C, p.tol, p.max_epochs).fit(X, y, n_classes)


def predict(model, X) -> np.ndarray:
    return model.predict(X)


def accuracy(predicted, actual) -> float:
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError("predicted and actual label sequences differ in length")
    if predicted.size == 0:
        raise ValueError("accuracy of an empty sequence is undefined")
    return float(np.mean(predicted == actual))


__all__ = [
    "C45Params",
    "C45Tree",
    "ConstantModel",
    "GaussianNaiveBayes",
    "LearnerKind",
    "LearnerSpec",
    "LinearSVM",
    "NaiveBayesParams",
    "SVMParams",
    "accuracy",
    "predict",
    "train",
]
