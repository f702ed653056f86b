"""Labeled subject-line corpora: CSV loading, validation, and seeded splits.

The on-disk interchange format is a UTF-8 CSV with header columns ``subject``
and ``label`` (label values "spam" / "non-spam", case-insensitive). Corpora
are immutable after construction and keep file order.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import BinaryIO, Iterable, Union

from .errors import SpamLabError


class CorpusError(SpamLabError):
    pass


class MissingColumnError(CorpusError):
    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(missing)
        super().__init__(f"CSV header is missing column(s): {', '.join(self.missing)}")


class BadLabelError(CorpusError):
    def __init__(self, row: int, value: str):
        self.row = row
        self.value = value
        super().__init__(f"row {row}: label must be 'spam' or 'non-spam', got {value!r}")


class EmptyCorpusError(CorpusError):
    def __init__(self, message: str = "corpus has no rows"):
        super().__init__(message)


class EmptySubjectError(CorpusError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row}: subject is empty")


class BadCsvError(CorpusError):
    def __init__(self, row: int, reason: str):
        self.row = row
        super().__init__(f"row {row}: {reason}")


class InvalidFractionError(CorpusError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"train_fraction must be in (0, 1], got {value}")


class Label(Enum):
    SPAM = "spam"
    NON_SPAM = "non-spam"

    @classmethod
    def parse(cls, raw: str) -> "Label":
        text = raw.strip().lower()
        if text == "spam":
            return cls.SPAM
        if text == "non-spam":
            return cls.NON_SPAM
        raise ValueError(raw)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LabeledSubject:
    text: str
    label: Label

    def __post_init__(self):
        if not self.text.rstrip("\r\n"):
            raise CorpusError("subject text is empty")


@dataclass(frozen=True)
class Corpus:
    items: tuple[LabeledSubject, ...]
    name: str = "corpus"

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def texts(self) -> list[str]:
        return [item.text for item in self.items]

    def labels(self) -> list[Label]:
        return [item.label for item in self.items]


def _as_fraction(value: Union[Fraction, float, int, str]) -> Fraction:
    # Floats go through their decimal string so 0.7 means 7/10 exactly.
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: Fraction
    seed: int = 0
    stratified: bool = True

    def __init__(self, train_fraction=0.5, seed: int = 0, stratified: bool = True):
        try:
            frac = _as_fraction(train_fraction)
        except (ValueError, ZeroDivisionError):
            raise InvalidFractionError(train_fraction)
        if not (0 < frac <= 1):
            raise InvalidFractionError(train_fraction)
        object.__setattr__(self, "train_fraction", frac)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "stratified", stratified)


def load_csv(source: Union[bytes, str, BinaryIO], name: str = "corpus") -> Corpus:
    """Parse a labeled-subject CSV into a Corpus.

    Accepts bytes, text, or a binary stream. Both LF and CRLF line endings are
    fine; fields containing commas must be quoted (RFC 4180). Raises
    MissingColumnError, BadLabelError, EmptySubjectError, BadCsvError or
    EmptyCorpusError on malformed input.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8-sig")
    elif isinstance(source, str):
        text = source.lstrip("﻿")
    else:
        text = source.read().decode("utf-8-sig")

    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    try:
        header = next(reader, None)
    except csv.Error as exc:
        raise BadCsvError(1, f"malformed CSV: {exc}")
    if header is None:
        raise MissingColumnError(["subject", "label"])

    columns = {col.strip().lower(): i for i, col in enumerate(header)}
    missing = {"subject", "label"} - set(columns)
    if missing:
        raise MissingColumnError(missing)
    subject_col = columns["subject"]
    label_col = columns["label"]

    items: list[LabeledSubject] = []
    while True:
        try:
            row = next(reader, None)
        except csv.Error as exc:
            raise BadCsvError(reader.line_num, f"malformed CSV: {exc}")
        if row is None:
            break
        if not row:
            continue
        line_num = reader.line_num
        if len(row) <= max(subject_col, label_col):
            raise BadCsvError(line_num, f"expected {len(header)} fields, got {len(row)}")
        subject = row[subject_col]
        if not subject.rstrip("\r\n"):
            raise EmptySubjectError(line_num)
        try:
            label = Label.parse(row[label_col])
        except ValueError:
            raise BadLabelError(line_num, row[label_col])
        items.append(LabeledSubject(subject, label))

    if not items:
        raise EmptyCorpusError("CSV contains a header but no data rows")
    return Corpus(tuple(items), name=name)


def dump_csv(corpus: Corpus) -> str:
    """Serialize a Corpus back to CSV text (round-trips through load_csv)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["subject", "label"])
    for item in corpus.items:
        writer.writerow([item.text, item.label.value])
    return out.getvalue()


def class_balance(corpus: Corpus) -> Fraction:
    """Proportion of spam items, as an exact rational."""
    if not corpus.items:
        raise EmptyCorpusError()
    spam = sum(1 for item in corpus.items if item.label is Label.SPAM)
    return Fraction(spam, len(corpus.items))


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus]:
    """Partition a corpus into (train, test) deterministically under spec.seed.

    Uses a seeded Fisher-Yates shuffle (per class when stratified) and a
    floor(train_fraction * size) prefix cut. Item order within each side
    follows the original corpus order.
    """
    if not corpus.items:
        raise EmptyCorpusError()
    frac = spec.train_fraction

    rng = random.Random(spec.seed)
    if spec.stratified:
        groups = [
            [i for i, it in enumerate(corpus.items) if it.label is Label.SPAM],
            [i for i, it in enumerate(corpus.items) if it.label is Label.NON_SPAM],
        ]
    else:
        groups = [list(range(len(corpus.items)))]

    train_idx: set[int] = set()
    for indices in groups:
        rng.shuffle(indices)
        take = math.floor(frac * len(indices))
        train_idx.update(indices[:take])

    train_items = tuple(it for i, it in enumerate(corpus.items) if i in train_idx)
    test_items = tuple(it for i, it in enumerate(corpus.items) if i not in train_idx)
    return (
        Corpus(train_items, name=f"{corpus.name}/train"),
        Corpus(test_items, name=f"{corpus.name}/test"),
    )


def dedupe(corpus: Corpus) -> Corpus:
    """Drop exact duplicate (text, label) pairs, keeping first occurrences."""
    seen: set[tuple[str, Label]] = set()
    kept = []
    for item in corpus.items:
        key = (item.text, item.label)
        if key not in seen:
            seen.add(key)
            kept.append(item)
    return Corpus(tuple(kept), name=corpus.name)
