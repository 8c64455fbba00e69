from __future__ import annotations

import numpy as np

VAR_FLOOR_FACTOR = 1e-9
# absolute floor for features that are constant in the training fold
_MIN_VAR = 1e-12


class GaussianNaiveBayes:
    """Per-class priors with independent Gaussian likelihoods per feature.

    Variances are maximum-likelihood estimates floored at
    ``1e-9 * (feature range)**2`` so constant folds stay finite.
    """

    def __init__(self, var_floor_factor: float = VAR_FLOOR_FACTOR):
        self.var_floor_factor = var_floor_factor

    def fit(self, X, y, n_classes: int | None = None) -> "GaussianNaiveBayes":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.intp)
        k = n_classes or int(y.max()) + 1
        p = X.shape[1]
        counts = np.bincount(y, minlength=k).astype(float)
        present = counts > 0
        self.n_features_ = p
        self.class_count_ = counts
        with np.errstate(divide="ignore"):
            self.log_prior_ = np.where(present, np.log(counts / counts.sum()), -np.inf)
        self.theta_ = np.zeros((k, p))
        self.var_ = np.ones((k, p))
        span = X.max(axis=0) - X.min(axis=0)
        floor = np.maximum(self.var_floor_factor * span**2, _MIN_VAR)
        for c in np.flatnonzero(present):
            Xc = X[y == c]
            self.theta_[c] = Xc.mean(axis=0)
            self.var_[c] = np.maximum(Xc.var(axis=0), floor)
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        # (m, 1, p) - (1, k, p)
        diff = X[:, None, :] - self.theta_[None, :, :]
        ll = -0.5 * (np.log(2.0 * np.pi * self.var_)[None] + diff**2 / self.var_[None]).sum(axis=2)
        return ll + self.log_prior_[None, :]

    def predict_log_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        top = jll.max(axis=1, keepdims=True)
        return jll - (top + np.log(np.exp(jll - top).sum(axis=1, keepdims=True)))

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.joint_log_likelihood(X), axis=1)
