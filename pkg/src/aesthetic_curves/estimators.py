"""scikit-learn wrapper around the LAC radius-law fit."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted, check_X_y, check_array

from .lac_msa import fit_lac, lac_radius


class LacRegressor(RegressorMixin, BaseEstimator):
    """Regress curvature radius on arc length with the LAC family.

    X is a single column of arc lengths, y the radii.  After fit, ``kind_``
    is line, circle or lac (None if no branch fits within ``tol``) and
    ``alpha_``, ``xi_``, ``eta_`` hold the fitted law.
    """

    def __init__(self, tol: float = 1e-6):
        self.tol = tol

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_samples=8)
        if X.shape[1] != 1:
            raise ValueError("X must have exactly one column (arc length)")
        order = np.argsort(X[:, 0], kind="stable")
        res = fit_lac(X[order, 0], y[order], self.tol)
        self.n_features_in_ = 1
        self.kind_ = res.kind
        self.residual_ = res.residual
        self.branch_residuals_ = dict(res.branch_residuals)
        self.params_ = res.params
        self.radius_ = res.radius
        p = res.params
        self.alpha_, self.xi_, self.eta_ = (p.alpha, p.xi, p.eta) if p else (np.nan,) * 3
        return self

    def predict(self, X):
        check_is_fitted(self, "kind_")
        X = check_array(X)
        s = X[:, 0]
        if self.kind_ == "lac":
            return np.asarray(lac_radius(self.params_, s), dtype=float)
        if self.kind_ == "circle":
            return np.full(len(s), self.radius_)
        if self.kind_ == "line":
            return np.full(len(s), np.inf)
        raise ValueError("no LAC branch fitted these samples; nothing to predict")
