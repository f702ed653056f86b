"""Statistical classifiers over binary feature matrices."""

from .common import (
    DimensionMismatchError,
    MalformedTreeError,
    ModelError,
    SingleClassCorpusError,
    TrainConfig,
    UnknownModelKindError,
    ZeroFeaturesError,
    child_seed,
)
from .forest import ForestModel, fit_forest, predict_forest, vote_counts
from .logistic import LogisticModel, fit_logistic, nll_and_grad, predict_logistic
from .naive_bayes import NaiveBayesModel, fit_naive_bayes, predict_naive_bayes
from .tree import (
    Leaf,
    Split,
    TreeNode,
    UnknownTreeFeatureError,
    entropy,
    gini,
    induce_tree,
    manual_tree,
    predict_tree,
    split_decrease,
    tree_depth,
)

__all__ = [
    "DimensionMismatchError",
    "MalformedTreeError",
    "ModelError",
    "SingleClassCorpusError",
    "TrainConfig",
    "UnknownModelKindError",
    "ZeroFeaturesError",
    "child_seed",
    "ForestModel",
    "fit_forest",
    "predict_forest",
    "vote_counts",
    "LogisticModel",
    "fit_logistic",
    "nll_and_grad",
    "predict_logistic",
    "NaiveBayesModel",
    "fit_naive_bayes",
    "predict_naive_bayes",
    "Leaf",
    "Split",
    "TreeNode",
    "UnknownTreeFeatureError",
    "entropy",
    "gini",
    "induce_tree",
    "manual_tree",
    "predict_tree",
    "split_decrease",
    "tree_depth",
]
