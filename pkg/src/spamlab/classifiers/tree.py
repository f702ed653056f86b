"""Decision trees over binary features: greedy CART-style induction plus
hand-specified ("manual") trees whose structure is taken as given.

Split search maximizes impurity decrease (Gini by default, entropy as an
option), breaking ties toward the lowest feature index. Leaves store the
training counts that reached them so predictions can report a spam fraction.
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
    DimensionMismatchError,
    MalformedTreeError,
    ModelError,
    TrainConfig,
    as_xy,
    vector_values,
)


class UnknownTreeFeatureError(ModelError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"tree references unknown feature {name!r}")


@dataclass(frozen=True)
class Leaf:
    verdict: Label
    train_counts: tuple[int, int]  # (spam, non_spam)


@dataclass(frozen=True)
class Split:
    feature_index: int
    false_child: "TreeNode"
    true_child: "TreeNode"


TreeNode = Union[Leaf, Split]

_MIN_GAIN = 1e-12  # float-noise guard; true gains at desk scale are far larger


def gini(spam: int, non_spam: int) -> float:
    total = spam + non_spam
    if total == 0:
        return 0.0
    ps = spam / total
    pn = non_spam / total
    return 1.0 - ps * ps - pn * pn


def entropy(spam: int, non_spam: int) -> float:
    total = spam + non_spam
    if total == 0:
        return 0.0
    value = 0.0
    for count in (spam, non_spam):
        if count:
            prob = count / total
            value -= prob * math.log2(prob)
    return value


def _impurity_fn(name: str):
    return gini if name == "gini" else entropy


def split_decrease(y: np.ndarray, mask: np.ndarray, impurity: str = "gini") -> float:
    """Impurity decrease when rows are partitioned by the boolean mask."""
    imp = _impurity_fn(impurity)
    n = len(y)
    spam = int(y.sum())
    y_true = y[mask]
    n_true = len(y_true)
    n_false = n - n_true
    spam_true = int(y_true.sum())
    spam_false = spam - spam_true
    parent = imp(spam, n - spam)
    return (
        parent
        - (n_false / n) * imp(spam_false, n_false - spam_false)
        - (n_true / n) * imp(spam_true, n_true - spam_true)
    )


def _majority(y: np.ndarray) -> Label:
    spam = int(y.sum())
    non_spam = len(y) - spam
    return Label.SPAM if spam > non_spam else Label.NON_SPAM


def _leaf(y: np.ndarray) -> Leaf:
    spam = int(y.sum())
    return Leaf(_majority(y), (spam, len(y) - spam))


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    depth: int,
    config: TrainConfig,
    rng: random.Random | None,
    mtry: int,
) -> TreeNode:
    n, p = X.shape
    spam = int(y.sum())
    if depth >= config.max_depth or spam == 0 or spam == n or n < 2 * config.min_leaf:
        return _leaf(y)

    if rng is not None and mtry < p:
        candidates = sorted(rng.sample(range(p), mtry))
    else:
        candidates = range(p)

    best_index = None
    best_gain = 0.0
    for j in candidates:
        mask = X[:, j] > 0.5
        n_true = int(mask.sum())
        n_false = n - n_true
        if n_true < config.min_leaf or n_false < config.min_leaf:
            continue
        gain = split_decrease(y, mask, config.impurity)
        if gain > best_gain:
            best_gain = gain
            best_index = j

    if best_index is None or best_gain <= _MIN_GAIN:
        return _leaf(y)

    mask = X[:, best_index] > 0.5
    return Split(
        feature_index=best_index,
        false_child=_grow(X[~mask], y[~mask], depth + 1, config, rng, mtry),
        true_child=_grow(X[mask], y[mask], depth + 1, config, rng, mtry),
    )


def induce_tree(matrix: FeatureMatrix, config: TrainConfig = TrainConfig()) -> TreeNode:
    """Greedy recursive partitioning on binary features."""
    X, y = as_xy(matrix)
    if len(y) == 0:
        raise ModelError("cannot induce a tree from an empty matrix")
    return _grow(X, y, 0, config, rng=None, mtry=X.shape[1])


# ------------------------------------------------------------- manual trees

def manual_tree(description: dict, matrix: FeatureMatrix) -> TreeNode:
    """Build a user-specified tree and fill leaf counts from training data.

    Description nodes are either {"leaf": "spam"|"non-spam"} or
    {"split": <feature name>, "true": <node>, "false": <node>}.
    """
    structure = _parse_description(description, matrix.feature_names)
    X, y = as_xy(matrix)
    counts: dict[int, list[int]] = {}
    for i in range(len(y)):
        leaf_id = _route_to_leaf(structure, X[i])
        spam_non = counts.setdefault(leaf_id, [0, 0])
        spam_non[0 if y[i] == 1 else 1] += 1
    return _attach_counts(structure, counts)


def _parse_description(node, feature_names: Sequence[str], path: str = "root"):
    if not isinstance(node, dict):
        raise MalformedTreeError(f"{path}: tree node must be an object")
    if "leaf" in node:
        extra = set(node) - {"leaf"}
        if extra:
            raise MalformedTreeError(f"{path}: leaf node has unexpected keys {sorted(extra)}")
        try:
            verdict = Label.parse(str(node["leaf"]))
        except ValueError:
            raise MalformedTreeError(f"{path}: leaf verdict must be 'spam' or 'non-spam'")
        return {"leaf": verdict}
    if "split" in node:
        missing = {"true", "false"} - set(node)
        if missing:
            raise MalformedTreeError(f"{path}: split node is missing {sorted(missing)}")
        extra = set(node) - {"split", "true", "false"}
        if extra:
            raise MalformedTreeError(f"{path}: split node has unexpected keys {sorted(extra)}")
        name = node["split"]
        try:
            index = list(feature_names).index(name)
        except ValueError:
            raise UnknownTreeFeatureError(str(name))
        return {
            "split": index,
            "false": _parse_description(node["false"], feature_names, f"{path}.false"),
            "true": _parse_description(node["true"], feature_names, f"{path}.true"),
        }
    raise MalformedTreeError(f"{path}: node needs a 'leaf' or 'split' key")


def _route_to_leaf(structure, x: np.ndarray) -> int:
    # Leaf ids are assigned by structure position, via id() of the dict node.
    while "split" in structure:
        structure = structure["true"] if x[structure["split"]] > 0.5 else structure["false"]
    return id(structure)


def _attach_counts(structure, counts: dict[int, list[int]]) -> TreeNode:
    if "leaf" in structure:
        spam, non_spam = counts.get(id(structure), [0, 0])
        return Leaf(structure["leaf"], (spam, non_spam))
    return Split(
        feature_index=structure["split"],
        false_child=_attach_counts(structure["false"], counts),
        true_child=_attach_counts(structure["true"], counts),
    )


# --------------------------------------------------------------- prediction

def predict_tree(
    tree: TreeNode, x: Union[FeatureVector, Sequence[bool]]
) -> tuple[Label, float]:
    """Route to a leaf; score is the leaf's training spam fraction."""
    values = vector_values(x)
    node = tree
    while isinstance(node, Split):
        if node.feature_index >= len(values):
            raise DimensionMismatchError(node.feature_index + 1, len(values))
        node = node.true_child if values[node.feature_index] else node.false_child
    spam, non_spam = node.train_counts
    total = spam + non_spam
    fraction = spam / total if total else 0.5
    return node.verdict, fraction


def tree_depth(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(tree.false_child), tree_depth(tree.true_child))


def max_feature_index(tree: TreeNode) -> int:
    """Largest feature index referenced, -1 for a bare leaf."""
    if isinstance(tree, Leaf):
        return -1
    return max(
        tree.feature_index,
        max_feature_index(tree.false_child),
        max_feature_index(tree.true_child),
    )
