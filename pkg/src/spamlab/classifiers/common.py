"""Shared plumbing for the statistical classifiers."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..corpus import Label
from ..errors import SpamLabError
from ..textfeat import FeatureMatrix, FeatureVector


class ModelError(SpamLabError):
    pass


class SingleClassCorpusError(ModelError):
    def __init__(self):
        super().__init__("training corpus must contain both spam and non-spam items")


class ZeroFeaturesError(ModelError):
    def __init__(self):
        super().__init__("at least one feature is required to train this model")


class DimensionMismatchError(ModelError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"feature vector has {got} values, model expects {expected}")


class MalformedTreeError(ModelError):
    pass


class UnknownModelKindError(ModelError):
    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(f"unknown model kind {kind!r}")


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for every model kind; unused fields are ignored."""

    lambda_: float = 1e-4       # L2 penalty (logistic)
    max_iter: int = 200         # optimizer cap (logistic)
    tol: float = 1e-8           # gradient inf-norm convergence (logistic)
    alpha: float = 1.0          # Laplace smoothing (naive Bayes)
    max_depth: int = 5          # tree depth cap
    min_leaf: int = 2           # minimum rows per tree leaf
    impurity: str = "gini"      # "gini" or "entropy"
    n_trees: int = 100          # forest size
    mtry: int | None = None     # features per split; None -> ceil(sqrt(p))
    bootstrap: bool = True
    seed: int = 0
    threshold: float = 0.5      # spam iff score > threshold (NB / logistic)

    def __post_init__(self):
        if not (0 < self.threshold < 1):
            raise ModelError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.impurity not in ("gini", "entropy"):
            raise ModelError(f"impurity must be 'gini' or 'entropy', got {self.impurity!r}")
        if self.alpha <= 0:
            raise ModelError(f"alpha must be positive, got {self.alpha}")
        if self.lambda_ < 0:
            raise ModelError(f"lambda must be >= 0, got {self.lambda_}")


def as_xy(matrix: FeatureMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix as (X: (n,p) float 0/1, y: (n,) int with 1 = spam)."""
    return matrix.as_array(), matrix.label_array()


def vector_values(x: Union[FeatureVector, Sequence[bool]]) -> tuple[bool, ...]:
    if isinstance(x, FeatureVector):
        return x.values
    return tuple(bool(v) for v in x)


def check_dimension(x: Sequence[bool], expected: int) -> None:
    if len(x) != expected:
        raise DimensionMismatchError(expected, len(x))


def label_from_score(score: float, threshold: float) -> Label:
    """Spam only on a strict threshold exceedance; ties go to non-spam."""
    return Label.SPAM if score > threshold else Label.NON_SPAM


def child_seed(seed: int, index: int) -> int:
    """Stable per-tree seed derivation (endianness/platform independent)."""
    digest = hashlib.sha256(f"{seed}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")
