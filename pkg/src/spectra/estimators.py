"""scikit-learn style wrappers, so the constructions can sit in a ``Pipeline``.

The "data" here is a single square matrix rather than a sample table; each
estimator fits to one matrix and transforms that matrix.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .nonneg import perron
from .perturb import shift_complex_pair
from .validation import check_matrix

__all__ = ["ConstantRowSumScaler", "PairShift"]


class ConstantRowSumScaler(TransformerMixin, BaseEstimator):
    """Diagonal similarity by the Perron vector.

    ``fit`` computes the Perron data of an irreducible nonnegative matrix;
    ``transform`` returns ``D^-1 A D`` (constant row sums, same spectrum) and
    ``inverse_transform`` undoes it.

    Attributes
    ----------
    rho_ : float
        Perron root of the fitted matrix.
    scaling_ : ndarray of shape (n,)
        Positive Perron vector with unit 1-norm.
    """

    def fit(self, A, y=None):
        A = check_matrix(A)
        pd = perron(A)
        self.rho_ = pd.rho
        self.scaling_ = pd.x
        self.n_features_in_ = A.shape[0]
        return self

    def transform(self, A):
        check_is_fitted(self, "scaling_")
        A = self._check_order(A)
        x = self.scaling_
        return A * x[None, :] / x[:, None]

    def inverse_transform(self, B):
        check_is_fitted(self, "scaling_")
        B = self._check_order(B)
        x = self.scaling_
        return B * x[:, None] / x[None, :]

    def _check_order(self, A):
        A = check_matrix(A)
        if A.shape[0] != self.n_features_in_:
            raise ValueError(f"fitted on order {self.n_features_in_}, got {A.shape[0]}")
        return A


class PairShift(TransformerMixin, BaseEstimator):
    """Raise the Perron root by ``t_tilde`` and shift the pair ``b +/- ic`` by ``t``.

    Parameters
    ----------
    b, c : float
        Real and imaginary part of the pair to shift.
    t : float, default=0.0
        Shift of the pair.
    t_tilde : float or None, default=None
        Shift of the Perron root; ``None`` uses ``gamma(n) * t``.
    tol : float, default=1e-9
        Allowed negativity of the output.
    spectrum_tol : float or None, default=None
        Matching tolerance for the spectral check.

    Attributes
    ----------
    certificate_ : Certificate
    matrix_ : ndarray
        The perturbed nonnegative matrix.
    threshold_ : float
        Construction threshold for this input and ``t``.
    """

    def __init__(self, b=0.0, c=1.0, t=0.0, t_tilde=None, tol=1e-9, spectrum_tol=None):
        self.b = b
        self.c = c
        self.t = t
        self.t_tilde = t_tilde
        self.tol = tol
        self.spectrum_tol = spectrum_tol

    def fit(self, A, y=None):
        A = check_matrix(A)
        cert = shift_complex_pair(A, self.b, self.c, self.t, self.t_tilde, self.tol,
                                  spectrum_tol=self.spectrum_tol)
        self.certificate_ = cert
        self.matrix_ = cert.A_out
        self.threshold_ = cert.threshold
        self.plan_ = cert.plan
        self._fitted_input = A
        self.n_features_in_ = A.shape[0]
        return self

    def transform(self, A):
        """Return the perturbed matrix; ``A`` must be the matrix passed to ``fit``."""
        check_is_fitted(self, "matrix_")
        A = check_matrix(A)
        if A.shape != self._fitted_input.shape or not np.array_equal(A, self._fitted_input):
            raise NotFittedError("PairShift transforms only the matrix it was fitted on; call fit(A) first")
        return self.matrix_.copy()
