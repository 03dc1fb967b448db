"""scikit-learn style wrappers around the SSF pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .funcalc import AnalyticFunction
from .operators import check_contraction
from .ssf.disk import contour_integral, ssf_canonical, verify_function_trace
from .ssf.flatten import flatten_values, zygmund_functional


class SpectralShiftEstimator(BaseEstimator):
    """Fits the SSF of a contraction pair and predicts resolvent traces.

    ``fit(T1, T0)`` stores the representative in ``ssf_``;
    ``predict(lams)`` returns ``-\\oint xi (zeta - lam)^{-2} d zeta``, which
    equals ``trace((T1 - lam)^{-1} - (T0 - lam)^{-1})``.
    """

    def __init__(self, n_grid=1024, representative="anti-analytic", radii=None):
        self.n_grid = n_grid
        self.representative = representative
        self.radii = radii

    def fit(self, X, y):
        t1 = check_contraction(X)
        t0 = check_contraction(y)
        self.ssf_ = ssf_canonical(t1, t0, self.radii, self.n_grid, self.representative)
        self.pair_ = (t1.matrix, t0.matrix)
        self.mass_ = contour_integral(self.ssf_, np.ones_like)
        return self

    def predict(self, X):
        check_is_fitted(self, "ssf_")
        lams = np.atleast_1d(np.asarray(X, dtype=complex)).ravel()
        out = [-contour_integral(self.ssf_, lambda z, lam=lam: 1 / (z - lam) ** 2)
               for lam in lams]
        return np.array(out)

    def trace(self, f):
        """``\\oint f' xi d zeta`` for an analytic ``f``."""
        check_is_fitted(self, "ssf_")
        if not isinstance(f, AnalyticFunction):
            f = AnalyticFunction.polynomial(f)
        return verify_function_trace(*self.pair_, self.ssf_, f)[1]


class FlatteningTransformer(TransformerMixin, BaseEstimator):
    """Maps rows of complex grid samples to their flattened real representatives."""

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        self.n_features_in_ = X.shape[1]
        self.zygmund_ = np.array([zygmund_functional(row) for row in X])
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} samples per row, got {X.shape[1]}")
        return np.array([flatten_values(row).real for row in X])
