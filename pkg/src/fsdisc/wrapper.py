"""Wrapper objective: k-fold cross-validated error of a learner on the reduced data."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .data import Dataset, FoldPlan, stratified_kfold
from .encoding import DecodedView, transform_matrix
from .learners import LearnerSpec, accuracy, train


@dataclass(frozen=True)
class WrapperConfig:
    learner: LearnerSpec = field(default_factory=lambda: LearnerSpec.of("c45"))
    folds: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if not isinstance(self.learner, LearnerSpec):
            object.__setattr__(self, "learner", LearnerSpec.of(self.learner))


def fold_accuracies(dataset: Dataset, view: DecodedView, learner: LearnerSpec, plan: FoldPlan) -> np.ndarray:
    """Per-fold test accuracy of ``learner`` on the dataset reduced by ``view``."""
    X = transform_matrix(dataset.values, view)
    nominal = dataset.nominal_mask[list(view.selected)]
    nominal[[view.selected.index(j) for j in view.discretized]] = False
    y = dataset.labels
    out = np.empty(plan.k)
    for f, (tr, te) in enumerate(plan.splits()):
        model = train(learner, X[tr], y[tr], dataset.class_count, nominal)
        out[f] = accuracy(model.predict(X[te]), y[te])
    return out


class WrapperEvaluator:
    """Scores views on one fold plan fixed for the evaluator's lifetime.

    Every individual of an optimization run is scored on the same folds, so
    fitness values are comparable across the population.
    """

    def __init__(self, dataset: Dataset, config: WrapperConfig):
        if dataset.rows < config.folds:
            raise ValueError(f"{dataset.rows} rows cannot fill {config.folds} folds")
        self.dataset = dataset
        self.config = config

    @cached_property
    def plan(self) -> FoldPlan:
        return stratified_kfold(self.dataset.labels, self.config.folds, np.random.default_rng(self.config.seed))

    def cv_accuracy(self, view: DecodedView) -> float:
        return float(fold_accuracies(self.dataset, view, self.config.learner, self.plan).mean())

    def error(self, view: DecodedView) -> float:
        return 1.0 - self.cv_accuracy(view)


def cv_accuracy(dataset: Dataset, view: DecodedView, config: WrapperConfig) -> float:
    """Mean k-fold accuracy; raises InfeasibleError for an empty selection."""
    return WrapperEvaluator(dataset, config).cv_accuracy(view)


def error_fitness(dataset: Dataset, view: DecodedView, config: WrapperConfig) -> float:
    return 1.0 - cv_accuracy(dataset, view, config)
