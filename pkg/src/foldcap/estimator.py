"""scikit-learn style front end for classifying batches of fold planes."""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .classify import DEFAULT_TOL, Kind, NonGenericCrossCapWarning, SingularityLabel, classify_fold
from .crosscap import CrossCapParams
from .folding import FoldPlane


class FoldingClassifier(BaseEstimator):
    """Classify folding maps of a fixed cross-cap.

    Each row of ``X`` is a plane: ``(alpha, beta, gamma)`` with ``delta = 0``
    or ``(alpha, beta, gamma, delta)``. Rows need not be unit; the normal is
    rescaled and ``delta`` with it. ``fit`` takes no training data beyond a
    shape check, it only validates the cross-cap.
    """

    def __init__(self, crosscap: CrossCapParams | None = None, tol: float = DEFAULT_TOL):
        self.crosscap = crosscap
        self.tol = tol

    def fit(self, X=None, y=None):
        params = self.crosscap if self.crosscap is not None else CrossCapParams()
        if not isinstance(params, CrossCapParams):
            params = CrossCapParams.from_dict(dict(params))
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if X is not None:
            self._check_X(X)
        self.crosscap_ = params
        self.classes_ = np.array([k.value for k in Kind])
        return self

    @staticmethod
    def _check_X(X):
        X = check_array(X, ensure_min_samples=1)
        if X.shape[1] not in (3, 4):
            raise ValueError(f"expected 3 or 4 columns (alpha, beta, gamma[, delta]), got {X.shape[1]}")
        return X

    def _planes(self, X):
        X = self._check_X(X)
        delta = X[:, 3] if X.shape[1] == 4 else np.zeros(len(X))
        return [FoldPlane.from_vector(row[:3], d) for row, d in zip(X, delta)]

    def predict_labels(self, X) -> list[SingularityLabel]:
        check_is_fitted(self, "crosscap_")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonGenericCrossCapWarning)
            return [classify_fold(self.crosscap_, p, self.tol) for p in self._planes(X)]

    def predict(self, X) -> np.ndarray:
        return np.array([lab.kind.value for lab in self.predict_labels(X)], dtype=object)

    def residuals(self, X) -> np.ndarray:
        """Smallest threshold distance per row; small values sit near a stratum boundary."""
        return np.array([lab.residual_min for lab in self.predict_labels(X)])
