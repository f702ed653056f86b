"""Trained-model bundles: training dispatch, text prediction, and the
versioned JSON document every model kind serializes to.

A bundle carries its full feature definitions so a saved model can classify
raw subject lines with no other context. Format:

    {"format_version": 1, "kind": ..., "feature_names": [...],
     "features": [...full defs...], "threshold": ..., "payload": {...}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import ruledsl
from .classifiers import (
    ForestModel,
    Leaf,
    LogisticModel,
    ModelError,
    NaiveBayesModel,
    Split,
    TrainConfig,
    TreeNode,
    UnknownModelKindError,
    ZeroFeaturesError,
    fit_forest,
    fit_logistic,
    fit_naive_bayes,
    induce_tree,
    manual_tree,
    predict_forest,
    predict_logistic,
    predict_naive_bayes,
    predict_tree,
)
from .corpus import Corpus, Label
from .errors import SpamLabError
from .textfeat import (
    FeatureDef,
    FeatureMatrix,
    FeatureVector,
    feature_from_dict,
    feature_to_dict,
    featurize,
    featurize_text,
)

MODEL_FORMAT_VERSION = 1

MODEL_KINDS = ("nb", "logreg", "tree", "forest", "manual_tree", "ruleset")


class BadModelFileError(ModelError):
    pass


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    features: tuple[FeatureDef, ...]
    model: object  # NaiveBayesModel | LogisticModel | TreeNode | ForestModel | RuleSet
    threshold: float = 0.5

    def predict_vector(self, x: Union[FeatureVector, Sequence[bool]]) -> tuple[Label, float]:
        """The shared (FeatureVector) -> (Label, score) contract."""
        if self.kind == "nb":
            return predict_naive_bayes(self.model, x, self.threshold)
        if self.kind == "logreg":
            return predict_logistic(self.model, x, self.threshold)
        if self.kind in ("tree", "manual_tree"):
            return predict_tree(self.model, x)
        if self.kind == "forest":
            return predict_forest(self.model, x)
        raise UnknownModelKindError(self.kind)

    def predict_subject(self, text: str) -> tuple[Label, float, FeatureVector]:
        """Featurize raw text and classify it."""
        vector = featurize_text(text, self.features)
        if self.kind == "ruleset":
            label = _ruleset_verdict(self.model, text, self.features)
            return label, (1.0 if label is Label.SPAM else 0.0), vector
        label, score = self.predict_vector(vector)
        return label, score, vector

    def predict_labels(self, corpus: Corpus) -> list[Label]:
        """Label every corpus item (the evalkit predictor contract)."""
        if self.kind == "ruleset":
            return ruledsl.apply_ruleset(self.model, corpus, self.features)
        matrix = featurize(corpus, self.features)
        return [self.predict_vector(row)[0] for row in matrix.rows]


def _ruleset_verdict(rules: ruledsl.RuleSet, text: str, features) -> Label:
    for condition, label in rules.clauses:
        if ruledsl.evaluate(condition, text, features):
            return label
    return rules.default


def train_model(
    kind: str,
    corpus: Corpus,
    features: Sequence[FeatureDef],
    config: TrainConfig = TrainConfig(),
    rules_source: Optional[str] = None,
    tree_description: Optional[dict] = None,
) -> TrainedModel:
    """Train any model kind on a corpus; the one entry point for CLI/service."""
    features = tuple(features)
    if kind not in MODEL_KINDS:
        raise UnknownModelKindError(kind)

    if kind == "ruleset":
        if rules_source is None:
            raise ModelError("ruleset models need rule source text")
        rules = ruledsl.parse_ruleset(rules_source)
        missing = ruledsl.ruleset_features(rules) - {f.name for f in features}
        if missing:
            raise ruledsl.UnknownFeatureError(sorted(missing)[0])
        return TrainedModel("ruleset", features, rules, config.threshold)

    matrix = featurize(corpus, features)
    if kind == "manual_tree":
        if tree_description is None:
            raise ModelError("manual_tree models need a tree description")
        return TrainedModel("manual_tree", features, manual_tree(tree_description, matrix), config.threshold)
    if not features:
        raise ZeroFeaturesError()
    if kind == "nb":
        return TrainedModel("nb", features, fit_naive_bayes(matrix, config.alpha), config.threshold)
    if kind == "logreg":
        return TrainedModel("logreg", features, fit_logistic(matrix, config), config.threshold)
    if kind == "tree":
        return TrainedModel("tree", features, induce_tree(matrix, config), config.threshold)
    return TrainedModel("forest", features, fit_forest(matrix, config), config.threshold)


# ------------------------------------------------------------ tree <-> JSON

def tree_to_dict(node: TreeNode, feature_names: Sequence[str]) -> dict:
    if isinstance(node, Leaf):
        return {
            "leaf": node.verdict.value,
            "train_counts": {"spam": node.train_counts[0], "non_spam": node.train_counts[1]},
        }
    return {
        "split": feature_names[node.feature_index],
        "false": tree_to_dict(node.false_child, feature_names),
        "true": tree_to_dict(node.true_child, feature_names),
    }


def tree_from_dict(doc: dict, feature_names: Sequence[str]) -> TreeNode:
    if "leaf" in doc:
        counts = doc.get("train_counts", {"spam": 0, "non_spam": 0})
        return Leaf(Label.parse(doc["leaf"]), (int(counts["spam"]), int(counts["non_spam"])))
    names = list(feature_names)
    name = doc["split"]
    if name not in names:
        raise BadModelFileError(f"tree references feature {name!r} not in feature_names")
    return Split(
        feature_index=names.index(name),
        false_child=tree_from_dict(doc["false"], feature_names),
        true_child=tree_from_dict(doc["true"], feature_names),
    )


# ---------------------------------------------------------- model <-> JSON

def _payload(bundle: TrainedModel) -> dict:
    names = [f.name for f in bundle.features]
    model = bundle.model
    if bundle.kind == "nb":
        by_class = lambda arr: {"non-spam": [float(v) for v in arr[0]], "spam": [float(v) for v in arr[1]]}
        return {
            "alpha": float(model.alpha),
            "log_prior": {"non-spam": float(model.log_prior[0]), "spam": float(model.log_prior[1])},
            "log_cond_true": by_class(model.log_cond_true),
            "log_cond_false": by_class(model.log_cond_false),
        }
    if bundle.kind == "logreg":
        return {
            "weights": [float(v) for v in model.weights],
            "intercept": float(model.intercept),
            "lambda": float(model.lambda_),
            "converged": bool(model.converged),
            "iterations": int(model.iterations),
        }
    if bundle.kind in ("tree", "manual_tree"):
        return {"tree": tree_to_dict(model, names)}
    if bundle.kind == "forest":
        return {
            "n_trees": model.n_trees,
            "mtry": model.mtry,
            "bootstrap": model.bootstrap,
            "seed": model.seed,
            "trees": [tree_to_dict(t, names) for t in model.trees],
        }
    if bundle.kind == "ruleset":
        return {
            "clauses": [
                {"condition": ruledsl.pretty_print(cond), "verdict": label.value}
                for cond, label in model.clauses
            ],
            "default": model.default.value,
        }
    raise UnknownModelKindError(bundle.kind)


def model_to_dict(bundle: TrainedModel) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": bundle.kind,
        "feature_names": [f.name for f in bundle.features],
        "features": [feature_to_dict(f) for f in bundle.features],
        "threshold": bundle.threshold,
        "payload": _payload(bundle),
    }


def model_to_json(bundle: TrainedModel) -> str:
    return json.dumps(model_to_dict(bundle), indent=2) + "\n"


def model_from_dict(doc: dict) -> TrainedModel:
    if not isinstance(doc, dict):
        raise BadModelFileError("model document must be a JSON object")
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise BadModelFileError(
            f"unsupported format_version {version!r} (expected {MODEL_FORMAT_VERSION})"
        )
    try:
        kind = doc["kind"]
        features = tuple(feature_from_dict(d) for d in doc["features"])
        threshold = float(doc.get("threshold", 0.5))
        payload = doc["payload"]
    except KeyError as exc:
        raise BadModelFileError(f"model document is missing field {exc.args[0]!r}")
    names = [f.name for f in features]
    if doc.get("feature_names", names) != names:
        raise BadModelFileError("feature_names does not match the feature definitions")

    if kind == "nb":
        model = NaiveBayesModel(
            log_prior=np.array([payload["log_prior"]["non-spam"], payload["log_prior"]["spam"]]),
            log_cond_true=np.array([payload["log_cond_true"]["non-spam"], payload["log_cond_true"]["spam"]]),
            log_cond_false=np.array([payload["log_cond_false"]["non-spam"], payload["log_cond_false"]["spam"]]),
            alpha=float(payload["alpha"]),
        )
    elif kind == "logreg":
        model = LogisticModel(
            weights=np.array(payload["weights"], dtype=float),
            intercept=float(payload["intercept"]),
            lambda_=float(payload["lambda"]),
            converged=bool(payload["converged"]),
            iterations=int(payload["iterations"]),
        )
    elif kind in ("tree", "manual_tree"):
        model = tree_from_dict(payload["tree"], names)
    elif kind == "forest":
        model = ForestModel(
            trees=tuple(tree_from_dict(t, names) for t in payload["trees"]),
            n_trees=int(payload["n_trees"]),
            mtry=int(payload["mtry"]),
            bootstrap=bool(payload["bootstrap"]),
            seed=int(payload["seed"]),
        )
    elif kind == "ruleset":
        clauses = tuple(
            (ruledsl.parse_rule(c["condition"]), Label.parse(c["verdict"]))
            for c in payload["clauses"]
        )
        model = ruledsl.RuleSet(clauses, Label.parse(payload["default"]))
    else:
        raise UnknownModelKindError(kind)
    return TrainedModel(kind, features, model, threshold)


def model_from_json(text: Union[str, bytes]) -> TrainedModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadModelFileError(f"model file is not valid JSON: {exc}")
    return model_from_dict(doc)
