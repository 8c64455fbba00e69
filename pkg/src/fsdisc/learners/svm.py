"""Linear SVM trained by dual coordinate descent, one-vs-rest for multiclass."""

from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _dual_cd(X, y, C, tol, max_epochs):
    """Hinge-loss dual coordinate descent over rows in fixed cyclic order.

    ``X`` already carries the bias column. Stops once the projected-gradient
    spread over an epoch drops below ``tol``.
    """
    m, p = X.shape
    alpha = np.zeros(m)
    w = np.zeros(p)
    qii = np.empty(m)
    for i in range(m):
        s = 0.0
        for j in range(p):
            s += X[i, j] * X[i, j]
        qii[i] = s
    epochs = 0
    for epoch in range(max_epochs):
        epochs = epoch + 1
        pg_max = -np.inf
        pg_min = np.inf
        for i in range(m):
            if qii[i] == 0.0:
                continue
            g = 0.0
            for j in range(p):
                g += w[j] * X[i, j]
            g = y[i] * g - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = min(g, 0.0)
            elif a == C:
                pg = max(g, 0.0)
            else:
                pg = g
            pg_max = max(pg_max, pg)
            pg_min = min(pg_min, pg)
            if pg != 0.0:
                a_new = min(max(a - g / qii[i], 0.0), C)
                d = (a_new - a) * y[i]
                if d != 0.0:
                    for j in range(p):
                        w[j] += d * X[i, j]
                alpha[i] = a_new
        if pg_max - pg_min < tol:
            break
    return w, epochs


class LinearSVM:
    """One-vs-rest linear SVM; inputs are standardized with training-fold statistics."""

    def __init__(self, C: float = 1.0, tol: float = 1e-3, max_epochs: int = 1000):
        self.C = C
        self.tol = tol
        self.max_epochs = max_epochs

    def fit(self, X, y, n_classes: int | None = None) -> "LinearSVM":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.intp)
        k = n_classes or int(y.max()) + 1
        self.n_features_ = X.shape[1]
        self.mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        self.scale_ = np.where(scale > 0, scale, 1.0)
        Z = self._augment(X)
        present = np.bincount(y, minlength=k) > 0
        self.present_ = present
        self.coef_ = np.zeros((k, Z.shape[1]))
        self.epochs_ = np.zeros(k, dtype=int)
        if present.sum() < 2:
            return self
        targets = np.flatnonzero(present)
        # two classes share one separating hyperplane
        if len(targets) == 2:
            sign = np.where(y == targets[1], 1.0, -1.0)
            w, ep = _dual_cd(Z, sign, float(self.C), float(self.tol), int(self.max_epochs))
            self.coef_[targets[1]] = w
            self.coef_[targets[0]] = -w
            self.epochs_[targets] = ep
            return self
        for c in targets:
            sign = np.where(y == c, 1.0, -1.0)
            self.coef_[c], self.epochs_[c] = _dual_cd(
                Z, sign, float(self.C), float(self.tol), int(self.max_epochs)
            )
        return self

    def _augment(self, X) -> np.ndarray:
        Z = (X - self.mean_) / self.scale_
        return np.ascontiguousarray(np.column_stack([Z, np.ones(len(Z))]))

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features_:
            raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
        scores = self._augment(X) @ self.coef_.T
        scores[:, ~self.present_] = -np.inf
        return scores

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.present_.sum() < 2:
            if X.shape[1] != self.n_features_:
                raise ValueError(f"expected {self.n_features_} features, got {X.shape[1]}")
            return np.full(len(X), int(np.argmax(self.present_)))
        return np.argmax(self.decision_function(X), axis=1)
