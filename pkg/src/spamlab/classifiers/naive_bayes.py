"""Bernoulli naive Bayes over binary features, fit and scored in log space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..corpus import Label
from ..textfeat import FeatureMatrix, FeatureVector
from .common import (
    SingleClassCorpusError,
    ZeroFeaturesError,
    as_xy,
    check_dimension,
    label_from_score,
    vector_values,
)

# Class index convention throughout: 0 = non-spam, 1 = spam.


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    log_prior: np.ndarray       # (2,)
    log_cond_true: np.ndarray   # (2, p): log P(feature=1 | class)
    log_cond_false: np.ndarray  # (2, p): log P(feature=0 | class)
    alpha: float

    @property
    def n_features(self) -> int:
        return self.log_cond_true.shape[1]


def fit_naive_bayes(matrix: FeatureMatrix, alpha: float = 1.0) -> NaiveBayesModel:
    """Laplace-smoothed counts: P(f=1|c) = (count + alpha) / (n_c + 2*alpha)."""
    X, y = as_xy(matrix)
    n, p = X.shape
    if p == 0:
        raise ZeroFeaturesError()
    n_spam = int(y.sum())
    n_non = n - n_spam
    if n_spam == 0 or n_non == 0:
        raise SingleClassCorpusError()

    counts = np.array([n_non, n_spam], dtype=float)
    true_counts = np.stack([X[y == 0].sum(axis=0), X[y == 1].sum(axis=0)])
    log_cond_true = np.log((true_counts + alpha) / (counts[:, None] + 2 * alpha))
    log_cond_false = np.log(
        (counts[:, None] - true_counts + alpha) / (counts[:, None] + 2 * alpha)
    )
    log_prior = np.log(counts / n)
    return NaiveBayesModel(log_prior, log_cond_true, log_cond_false, alpha)


def predict_naive_bayes(
    model: NaiveBayesModel,
    x: Union[FeatureVector, Sequence[bool]],
    threshold: float = 0.5,
) -> tuple[Label, float]:
    """Posterior P(spam | x) via log-sum-exp over the two class scores."""
    values = vector_values(x)
    check_dimension(values, model.n_features)
    mask = np.array(values, dtype=bool)
    joint = model.log_prior + np.where(mask, model.log_cond_true, model.log_cond_false).sum(axis=1)
    peak = joint.max()
    posterior_spam = float(np.exp(joint[1] - peak) / np.exp(joint - peak).sum())
    return label_from_score(posterior_spam, threshold), posterior_spam
