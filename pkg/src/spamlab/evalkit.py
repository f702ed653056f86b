"""Scoring: confusion matrices and the accuracy/MCR/sensitivity/specificity
family, computed as exact rationals. Spam is always the positive class.

Zero-denominator metrics (a corpus with one class only) are reported as an
explicit None marker, never 0 or NaN.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Protocol, Sequence

from .corpus import Corpus, Label
from .errors import SpamLabError
from .textfeat import FeatureDef, eval_feature


class EvalError(SpamLabError):
    pass


class LengthMismatchError(EvalError):
    def __init__(self, predicted: int, truth: int):
        super().__init__(f"predicted {predicted} labels for {truth} ground-truth items")


class EmptyInputError(EvalError):
    def __init__(self, message: str = "nothing to score"):
        super().__init__(message)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def swapped(self) -> "ConfusionMatrix":
        """The same predictions with the positive-class convention flipped."""
        return ConfusionMatrix(tp=self.tn, fn=self.fp, fp=self.fn, tn=self.tp)


@dataclass(frozen=True)
class MetricsReport:
    accuracy: Fraction
    mcr: Fraction
    sensitivity: Optional[Fraction]
    specificity: Optional[Fraction]


def confusion(predicted: Sequence[Label], truth: Sequence[Label]) -> ConfusionMatrix:
    if len(predicted) != len(truth):
        raise LengthMismatchError(len(predicted), len(truth))
    if not truth:
        raise EmptyInputError()
    tp = fn = fp = tn = 0
    for pred, actual in zip(predicted, truth):
        if actual is Label.SPAM:
            if pred is Label.SPAM:
                tp += 1
            else:
                fn += 1
        else:
            if pred is Label.SPAM:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp, fn, fp, tn)


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    total = cm.total
    if total == 0:
        raise EmptyInputError("confusion matrix is empty")
    accuracy = Fraction(cm.tp + cm.tn, total)
    sensitivity = Fraction(cm.tp, cm.tp + cm.fn) if cm.tp + cm.fn else None
    specificity = Fraction(cm.tn, cm.tn + cm.fp) if cm.tn + cm.fp else None
    return MetricsReport(accuracy, 1 - accuracy, sensitivity, specificity)


@dataclass(frozen=True)
class CrossTable:
    """Feature value crossed with the true label."""

    true_spam: int
    true_non_spam: int
    false_spam: int
    false_non_spam: int


def cross_classify(feature: FeatureDef, corpus: Corpus) -> CrossTable:
    if not corpus.items:
        raise EmptyInputError()
    cells = {(True, Label.SPAM): 0, (True, Label.NON_SPAM): 0,
             (False, Label.SPAM): 0, (False, Label.NON_SPAM): 0}
    for item in corpus.items:
        cells[(eval_feature(feature, item.text), item.label)] += 1
    return CrossTable(
        true_spam=cells[(True, Label.SPAM)],
        true_non_spam=cells[(True, Label.NON_SPAM)],
        false_spam=cells[(False, Label.SPAM)],
        false_non_spam=cells[(False, Label.NON_SPAM)],
    )


# ------------------------------------------------------------- comparison

class LabelPredictor(Protocol):
    def predict_labels(self, corpus: Corpus) -> Sequence[Label]: ...


@dataclass(frozen=True)
class Evaluation:
    confusion: ConfusionMatrix
    report: MetricsReport


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    train: Evaluation
    test: Evaluation


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]


def evaluate_on(predictor: LabelPredictor, corpus: Corpus) -> Evaluation:
    cm = confusion(list(predictor.predict_labels(corpus)), corpus.labels())
    return Evaluation(cm, metrics(cm))


def compare(
    models: Sequence[tuple[str, LabelPredictor]],
    train: Corpus,
    test: Corpus,
) -> ComparisonTable:
    """Score every named model on both corpora; row order follows input order."""
    if not models:
        raise EmptyInputError("no models to compare")
    names = [name for name, _ in models]
    if len(set(names)) != len(names):
        raise EvalError("model names in a comparison must be unique")
    rows = tuple(
        ComparisonRow(name, evaluate_on(model, train), evaluate_on(model, test))
        for name, model in models
    )
    return ComparisonTable(rows)


# -------------------------------------------------------------- rendering

def format_fraction(value: Optional[Fraction]) -> str:
    if value is None:
        return "n/a"
    return f"{float(value):.3f}"


_COLUMNS = ("model", "accuracy", "MCR", "sensitivity", "specificity", "TP", "FN", "FP", "TN")


def _table_row(name: str, ev: Evaluation) -> list[str]:
    cm, rep = ev.confusion, ev.report
    return [
        name,
        format_fraction(rep.accuracy),
        format_fraction(rep.mcr),
        format_fraction(rep.sensitivity),
        format_fraction(rep.specificity),
        str(cm.tp),
        str(cm.fn),
        str(cm.fp),
        str(cm.tn),
    ]


def render_table(rows: Sequence[tuple[str, Evaluation]]) -> str:
    """Aligned-column summary table, one line per model."""
    grid = [list(_COLUMNS)] + [_table_row(name, ev) for name, ev in rows]
    widths = [max(len(row[i]) for row in grid) for i in range(len(_COLUMNS))]
    lines = []
    for row in grid:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(widths[i]) for i, cell in enumerate(row) if i > 0
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)


def render_comparison(table: ComparisonTable) -> str:
    train_part = render_table([(row.name, row.train) for row in table.rows])
    test_part = render_table([(row.name, row.test) for row in table.rows])
    return f"train:\n{train_part}\n\ntest:\n{test_part}"


# ------------------------------------------------------------------ JSON

def confusion_to_json(cm: ConfusionMatrix) -> dict:
    return {"tp": cm.tp, "fn": cm.fn, "fp": cm.fp, "tn": cm.tn}


def metrics_to_json(ev: Evaluation) -> dict:
    rep = ev.report
    return {
        "confusion": confusion_to_json(ev.confusion),
        "accuracy": float(rep.accuracy),
        "mcr": float(rep.mcr),
        "sensitivity": None if rep.sensitivity is None else float(rep.sensitivity),
        "specificity": None if rep.specificity is None else float(rep.specificity),
    }


def comparison_to_json(table: ComparisonTable) -> dict:
    return {
        "models": [
            {
                "model": row.name,
                "train": metrics_to_json(row.train),
                "test": metrics_to_json(row.test),
            }
            for row in table.rows
        ]
    }
