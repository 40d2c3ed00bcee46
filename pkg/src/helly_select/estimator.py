"""Scikit-learn style wrapper around the selection pipeline.

Rows of ``X`` are halfspace normals and ``y`` holds the offsets (all ones when
omitted).  Fitting selects a small subfamily; ``transform`` keeps those rows.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .centers import CENTER_METHODS
from .exceptions import PreconditionError
from .pipeline import MODE_ALIASES, run_pipeline
from .polytope import HPolytope
from .tolerance import DEFAULT_TOLERANCE, Tolerance


class HellySelector(TransformerMixin, BaseEstimator):
    """Select at most ``2d`` (``mode="2d"``) or ``2d+1`` halfspaces of a polytope.

    Parameters
    ----------
    mode : {"2d", "2d+1"}
    center : {"centroid", "loewner"}
    eps_rel, containment_slack : float
        Numerical tolerances; see :class:`~helly_select.tolerance.Tolerance`.

    Attributes
    ----------
    indices_ : tuple of int
        Selected rows, sorted.
    support_ : ndarray of bool
    center_, lambda_, certified_factor_, measured_factor_, diam_ratio_, vol_ratio_
        Summary of the run; ``result_`` keeps the full certificate.
    """

    def __init__(self, mode="2d", center="centroid", eps_rel=DEFAULT_TOLERANCE.eps_rel,
                 containment_slack=DEFAULT_TOLERANCE.containment_slack):
        self.mode = mode
        self.center = center
        self.eps_rel = eps_rel
        self.containment_slack = containment_slack

    def _validate_params(self):
        if self.mode not in MODE_ALIASES:
            raise PreconditionError(f"mode must be one of {sorted(MODE_ALIASES)}, got {self.mode!r}")
        if self.center not in CENTER_METHODS:
            raise PreconditionError(f"center must be one of {CENTER_METHODS}, got {self.center!r}")
        return Tolerance(self.eps_rel, self.containment_slack)

    def fit(self, X, y=None):
        tol = self._validate_params()
        X = check_array(X, dtype=float, ensure_min_samples=3, ensure_min_features=2)
        b = np.ones(X.shape[0]) if y is None else check_array(y, ensure_2d=False, dtype=float).ravel()
        if b.shape[0] != X.shape[0]:
            raise PreconditionError("X and y have different numbers of rows")
        res = run_pipeline(HPolytope(X, b), self.mode, self.center, tol)
        self.n_features_in_ = X.shape[1]
        self.n_halfspaces_ = X.shape[0]
        self.indices_ = res.indices
        self.support_ = np.zeros(X.shape[0], dtype=bool)
        self.support_[list(res.indices)] = True
        self.center_ = res.z
        self.lambda_ = res.lambda_
        self.certified_factor_ = res.certified_factor
        self.measured_factor_ = res.measured_factor
        self.diam_ratio_ = res.diam_ratio
        self.vol_ratio_ = res.vol_ratio
        self.result_ = res
        return self

    def get_support(self, indices=False):
        check_is_fitted(self, "support_")
        return np.asarray(self.indices_, dtype=int) if indices else self.support_.copy()

    def transform(self, X):
        check_is_fitted(self, "support_")
        X = check_array(X, dtype=float)
        if X.shape[0] != self.n_halfspaces_:
            raise PreconditionError(f"expected {self.n_halfspaces_} rows, got {X.shape[0]}")
        return X[self.support_]
