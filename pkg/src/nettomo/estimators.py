"""scikit-learn style wrappers around the functional API.

``fit`` always takes the routing matrix (paths x links). Measurement data
follows the sklearn layout of one sample per row, so a batch of path
measurement vectors is an ``(n_samples, r)`` array.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_routing
from .exceptions import NotCertifiedError, ValidationError
from .expander import certify_1_identifiable
from .pathsel import (cover_ilp, identifiability_heuristic, identifiability_ilp,
                      verify_selection)
from .tomo import estimate_delays


def _as_batch(Y, width, name):
    Y = np.asarray(Y, dtype=float)
    single = Y.ndim == 1
    if single:
        Y = Y[None, :]
    if Y.ndim != 2 or Y.shape[1] != width:
        raise ValidationError(f"{name} must have {width} columns, got shape {Y.shape}")
    return Y, single


class ExpanderCertifier(BaseEstimator):
    """Fit stores the certificate; ``predict`` returns the verdict per matrix."""

    def fit(self, R, y=None):
        self.routing_ = check_routing(R)
        self.certificate_ = certify_1_identifiable(self.routing_)
        self.verdict_ = self.certificate_.verdict
        self.epsilon_ = self.certificate_.epsilon
        return self

    def predict(self, Rs):
        return np.array([certify_1_identifiable(R).verdict for R in Rs], dtype=bool)


class L1DelayEstimator(BaseEstimator):
    """Minimum-l1 link delays from path measurements.

    Parameters
    ----------
    nonnegative : bool
        Restrict estimates to ``x >= 0``.
    require_certified : bool
        Refuse to fit a matrix whose certificate fails.
    """

    def __init__(self, nonnegative=True, require_certified=False):
        self.nonnegative = nonnegative
        self.require_certified = require_certified

    def fit(self, R, y=None):
        rm = check_routing(R)
        cert = certify_1_identifiable(rm)
        if self.require_certified and not cert.verdict:
            raise NotCertifiedError("routing matrix fails the expansion conditions")
        self.routing_ = rm
        self.certificate_ = cert
        self.n_features_in_ = rm.r
        return self

    def predict(self, Y):
        check_is_fitted(self, "routing_")
        Y, single = _as_batch(Y, self.routing_.r, "Y")
        X = np.vstack([estimate_delays(self.routing_, row, nonnegative=self.nonnegative).estimate
                       for row in Y])
        return X[0] if single else X

    def score(self, Y, X_true):
        """Negative mean normalized l2 error (higher is better)."""
        X_hat = np.atleast_2d(self.predict(Y))
        X_true = np.atleast_2d(np.asarray(X_true, dtype=float))
        err = np.linalg.norm(X_hat - X_true, axis=1) / np.linalg.norm(X_true, axis=1)
        return -float(err.mean())


_METHODS = {"cover": cover_ilp, "ilp": identifiability_ilp, "heuristic": identifiability_heuristic}


class PathSelector(TransformerMixin, BaseEstimator):
    """Choose probe paths; ``transform`` keeps the selected measurement columns."""

    def __init__(self, method="ilp"):
        self.method = method

    def fit(self, R, y=None):
        if self.method not in _METHODS:
            raise ValidationError(f"method must be one of {sorted(_METHODS)}")
        rm = check_routing(R)
        sel = _METHODS[self.method](rm)
        self.selection_ = sel
        self.support_ = np.asarray(sel.indicators, dtype=bool)
        self.n_features_in_ = rm.r
        self.certificate_ = verify_selection(rm, sel) if sel.feasible else None
        return self

    def get_support(self, indices=False):
        check_is_fitted(self, "support_")
        return np.flatnonzero(self.support_) if indices else self.support_.copy()

    def transform(self, Y):
        check_is_fitted(self, "support_")
        Y, single = _as_batch(Y, self.n_features_in_, "Y")
        out = Y[:, self.support_]
        return out[0] if single else out
