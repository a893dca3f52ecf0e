"""scikit-learn compatible wrappers around the scoring and fitting functions."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import model
from .distributions import HyperPoissonParams, PoissonParams
from .fitting import ExpectedConvention, fit_hyper_poisson, fit_poisson
from .validation import check_counts, check_frequency_table, check_records

__all__ = ["ComplexityScorer", "PoissonFitter", "HyperPoissonFitter"]

_QUANTITIES = ("complexity", "components", "connections", "stated")


class ComplexityScorer(TransformerMixin, BaseEstimator):
    """Map glyph records to one integer per glyph.

    Parameters
    ----------
    weights : str or WeightScheme, default="default"
        Weight scheme used when ``quantity="complexity"``.
    quantity : {"complexity", "components", "connections", "stated"}
        What to emit: the weighted complexity, the raw component or
        connection count, or the stated complexity column.
    """

    def __init__(self, weights="default", quantity="complexity"):
        self.weights = weights
        self.quantity = quantity

    def fit(self, X, y=None):
        if self.quantity not in _QUANTITIES:
            raise ValueError(f"quantity must be one of {_QUANTITIES}, got {self.quantity!r}")
        check_records(X)
        self.weight_scheme_ = model.get_weight_scheme(self.weights)
        return self

    def transform(self, X):
        check_is_fitted(self, "weight_scheme_")
        records = check_records(X)
        if self.quantity == "complexity":
            values = [model.complexity(r, self.weight_scheme_) for r in records]
        elif self.quantity == "components":
            values = [model.component_count(r) for r in records]
        elif self.quantity == "connections":
            values = [model.connection_count(r) for r in records]
        else:
            missing = [r.id for r in records if r.stated_complexity is None]
            if missing:
                raise ValueError(f"records without stated complexity: {missing}")
            values = [r.stated_complexity for r in records]
        return np.asarray(values, dtype=np.int64)


class _CountModel(BaseEstimator):
    def _set_result(self, result):
        self.result_ = result
        self.table_ = result.observed
        self.expected_ = np.asarray(result.expected)
        self.chi2_ = result.chi2
        self.df_ = result.df
        self.p_value_ = result.p_value

    def predict_proba(self, X):
        """Model probability of each count in ``X``."""
        check_is_fitted(self, "result_")
        x = check_counts(X)
        params = self.result_.params
        return np.array([params.pmf(int(v)) for v in x])

    def score(self, X, y=None):
        """Mean log-probability of the observations in ``X``."""
        with np.errstate(divide="ignore"):
            return float(np.mean(np.log(self.predict_proba(X))))


class PoissonFitter(_CountModel):
    """Moment-fitted (optionally displaced) Poisson model for count data.

    Parameters
    ----------
    shift : "auto" or int, default="auto"
        Displacement of the support; "auto" uses the smallest observation.
    convention : str or ExpectedConvention, default="tailpool"
        How expected frequencies are formed for the chi-square test.

    Attributes
    ----------
    lam_, shift_ : fitted rate and displacement.
    chi2_, df_, p_value_ : goodness of fit on the training data.
    """

    def __init__(self, shift="auto", convention="tailpool"):
        self.shift = shift
        self.convention = convention

    def fit(self, X, y=None):
        table = check_frequency_table(X)
        self._set_result(fit_poisson(table, self.shift, ExpectedConvention(self.convention)))
        params: PoissonParams = self.result_.params
        self.lam_ = params.lam
        self.shift_ = params.shift
        return self


class HyperPoissonFitter(_CountModel):
    """Minimum-chi-square hyper-Poisson model for count data.

    Attributes
    ----------
    a_, b_ : fitted parameters.
    start_ : HyperPoissonParams, the moment-based starting point.
    """

    def __init__(self, convention="tailpool"):
        self.convention = convention

    def fit(self, X, y=None):
        table = check_frequency_table(X)
        self._set_result(fit_hyper_poisson(table, ExpectedConvention(self.convention)))
        params: HyperPoissonParams = self.result_.params
        self.a_ = params.a
        self.b_ = params.b
        self.start_ = self.result_.start
        return self
