"""Estimator objects over the analysis functions.

Hyperparameters go to ``__init__`` and are exposed through ``get_params``
/ ``set_params``; ``fit`` takes the coefficient sequence and sets the
trailing-underscore attributes.
"""
from __future__ import annotations

import mpmath
import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import ratio as _ratio
from .constants import kappa_extrapolate
from .da import da_survey, degree_choices, fit_da
from .floatseq import DEFAULT_PRECISION, FloatSeq
from .validation import (check_degrees, check_fraction_open, check_positive_int, check_series)


class RatioAnalysis(BaseEstimator):
    """Ratio-method estimator sequences and their extrapolation against 1/n.

    ``mode`` is one of ratios, biased_exponent, unbiased_exponent, hadamard;
    for hadamard pass the second series as ``y`` to ``fit``.  ``degree`` is
    the degree in 1/n of the least-squares extrapolation.
    """

    def __init__(self, mode="biased_exponent", z_c=None, tail=40, refine=False, degree=1,
                 precision=DEFAULT_PRECISION):
        self.mode = mode
        self.z_c = z_c
        self.tail = tail
        self.refine = refine
        self.degree = degree
        self.precision = precision

    def fit(self, X, y=None):
        if self.mode not in _ratio.MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        check_positive_int(self.tail, "tail", 2)
        check_positive_int(self.degree, "degree")
        f = check_series(X, min_terms=_ratio.MIN_TERMS)
        other = None if y is None else check_series(y, min_terms=_ratio.MIN_TERMS, name="y")
        with mpmath.workdps(self.precision):
            seq = _ratio.ratio_estimators(f, self.mode, z_c=self.z_c, other=other, precision=self.precision)
            self.sequence_ = _ratio.refined_intercept(seq) if self.refine else seq
            self.limit_ = _ratio.polynomial_extrapolate(self.sequence_, self.tail, self.degree)
        return self

    def transform(self, X=None):
        """The fitted estimator sequence as a (n, 2) array of (n, value)."""
        check_is_fitted(self, "sequence_")
        return np.array([(n, float(v)) for n, v in self.sequence_.items()])


class DifferentialApproximant(BaseEstimator):
    """A survey of order-M differential approximants.

    ``degrees`` is one degree vector or a list of them; by default the
    standard choices that use (nearly) every coefficient.  ``window`` =
    (lo, hi) limits the candidate singularities to that interval.
    """

    def __init__(self, order=3, degrees=None, tol=1e-4, min_share=0.7, confluence_tol=1e-7,
                 exponent_tol=0.05, window=None, precision=DEFAULT_PRECISION):
        self.order = order
        self.degrees = degrees
        self.tol = tol
        self.min_share = min_share
        self.confluence_tol = confluence_tol
        self.exponent_tol = exponent_tol
        self.window = window
        self.precision = precision

    def _choices(self, n):
        M = check_positive_int(self.order, "order")
        if self.degrees is None:
            return degree_choices(n, M)
        degs = list(self.degrees)
        if degs and isinstance(degs[0], int):
            degs = [degs]
        return [check_degrees(d, M) for d in degs]

    def fit(self, X, y=None):
        check_fraction_open(self.min_share, 0, 1, "min_share")
        coeffs = check_series(X, min_terms=4)
        choices = self._choices(len(coeffs))
        if len(choices) == 1:
            self.fits_ = (fit_da(coeffs, self.order, choices[0], precision=self.precision),)
            self.survey_ = None
            self.singularities_ = self.fits_[0].singularities
        else:
            self.survey_ = da_survey(coeffs, self.order, choices, precision=self.precision, tol=self.tol,
                                     min_share=self.min_share, confluence_tol=self.confluence_tol,
                                     exponent_tol=self.exponent_tol, window=self.window)
            self.fits_ = self.survey_.fits
            self.singularities_ = None
        s = self.survey_
        self.location_ = s.location if s is not None else None
        self.exponents_ = tuple(g.value for g in s.exponents) if s is not None else ()
        return self

    def predict(self, X=None):
        """(location, dominant exponent) of the fitted survey."""
        check_is_fitted(self, "fits_")
        return self.location_, (self.exponents_[0] if self.exponents_ else None)


class AmplitudeEstimator(BaseEstimator):
    """kappa in f_n ~ kappa t_c^(-n) n^g by extrapolation against 1/n."""

    def __init__(self, t_c=None, g=-1.5, step=10, orders=(1, 2, 3, 4), precision=DEFAULT_PRECISION):
        self.t_c = t_c
        self.g = g
        self.step = step
        self.orders = orders
        self.precision = precision

    def fit(self, X, y=None):
        if self.t_c is None:
            raise ValueError("t_c is required")
        check_positive_int(self.step, "step")
        coeffs = check_series(X, min_terms=2 * self.step * (max(self.orders) + 1))
        est = kappa_extrapolate(coeffs, self.t_c, self.g, precision=self.precision, orders=self.orders,
                                step=self.step)
        self.kappa_, self.error_ = est.value, est.error
        return self

    def predict(self, X=None):
        """(kappa, error) of the fit."""
        check_is_fitted(self, "kappa_")
        return self.kappa_, self.error_
