"""Random forest: bootstrap-resampled trees with per-split feature sampling,
combined by majority vote (ties break to non-spam).

Every tree draws its randomness from a seed derived by hashing (seed, tree
index), so a forest is reproducible tree-by-tree regardless of training
order or parallelism.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..corpus import Label
from ..textfeat import FeatureMatrix, FeatureVector
from .common import (
    ModelError,
    TrainConfig,
    ZeroFeaturesError,
    as_xy,
    child_seed,
    vector_values,
)
from .tree import TreeNode, _grow, predict_tree


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[TreeNode, ...]
    n_trees: int
    mtry: int
    bootstrap: bool
    seed: int


def fit_forest(matrix: FeatureMatrix, config: TrainConfig = TrainConfig()) -> ForestModel:
    X, y = as_xy(matrix)
    n, p = X.shape
    if n == 0:
        raise ModelError("cannot fit a forest on an empty matrix")
    if p == 0:
        raise ZeroFeaturesError()
    if config.n_trees < 1:
        raise ModelError(f"n_trees must be >= 1, got {config.n_trees}")
    mtry = config.mtry if config.mtry is not None else math.ceil(math.sqrt(p))
    if not (1 <= mtry <= p):
        raise ModelError(f"mtry must be in [1, {p}], got {mtry}")

    trees: list[TreeNode] = []
    for t in range(1, config.n_trees + 1):
        rng = random.Random(child_seed(config.seed, t))
        if config.bootstrap:
            rows = [rng.randrange(n) for _ in range(n)]
            Xt, yt = X[rows], y[rows]
        else:
            Xt, yt = X, y
        trees.append(_grow(Xt, yt, 0, config, rng, mtry))
    return ForestModel(tuple(trees), config.n_trees, mtry, config.bootstrap, config.seed)


def predict_forest(
    model: ForestModel, x: Union[FeatureVector, Sequence[bool]]
) -> tuple[Label, float]:
    values = vector_values(x)
    spam_votes = sum(1 for tree in model.trees if predict_tree(tree, values)[0] is Label.SPAM)
    fraction = spam_votes / len(model.trees)
    label = Label.SPAM if 2 * spam_votes > len(model.trees) else Label.NON_SPAM
    return label, fraction


def vote_counts(model: ForestModel, x: Union[FeatureVector, Sequence[bool]]) -> tuple[int, int]:
    """(spam votes, non-spam votes) across the forest."""
    values = vector_values(x)
    spam = sum(1 for tree in model.trees if predict_tree(tree, values)[0] is Label.SPAM)
    return spam, len(model.trees) - spam
