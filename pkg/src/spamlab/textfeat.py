"""Tokenization and declarative binary features over subject lines.

Feature definitions are small immutable values; evaluating one against a
subject line yields a boolean. A FeatureMatrix is the bridge to the
classifiers: one row of booleans per corpus item, labels aligned.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .corpus import Corpus, Label
from .errors import SpamLabError


class FeatureError(SpamLabError):
    pass


class BadRegexError(FeatureError):
    def __init__(self, pattern: str, reason: str):
        self.pattern = pattern
        super().__init__(f"regex {pattern!r} does not compile: {reason}")


class BadFeatureNameError(FeatureError):
    def __init__(self, name: str, reason: str = "must match [a-z][a-z0-9_]*"):
        self.name = name
        super().__init__(f"bad feature name {name!r}: {reason}")


class DuplicateFeatureNameError(FeatureError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"duplicate feature name {name!r}")


class BadFeatureSpecError(FeatureError):
    pass


_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Words with meaning in the rule DSL / ruleset file format; a feature with one
# of these names could never be referenced from a rule.
RESERVED_NAMES = frozenset(
    {"not", "and", "or", "punct_count", "word_count", "char_length", "default"}
)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on runs of non-alphanumeric characters."""
    return _TOKEN_RE.findall(text.lower())


def punct_count(text: str) -> int:
    """Number of ASCII characters that are neither alphanumeric nor whitespace."""
    return sum(1 for ch in text if ord(ch) < 128 and not ch.isalnum() and not ch.isspace())


def _check_name(name: str) -> None:
    if not _NAME_RE.match(name):
        raise BadFeatureNameError(name)
    if name in RESERVED_NAMES:
        raise BadFeatureNameError(name, "reserved word in the rule grammar")


@dataclass(frozen=True)
class FeatureDef:
    name: str

    def __post_init__(self):
        _check_name(self.name)


@dataclass(frozen=True)
class WordList(FeatureDef):
    """True iff any token of the subject line is in the word set."""

    words: frozenset[str] = frozenset()

    def __post_init__(self):
        super().__post_init__()
        if not self.words:
            raise BadFeatureSpecError(f"word list {self.name!r} is empty")
        object.__setattr__(self, "words", frozenset(w.lower() for w in self.words))


@dataclass(frozen=True)
class Substring(FeatureDef):
    """Literal containment on the raw text."""

    pattern: str = ""
    case_sensitive: bool = True

    def __post_init__(self):
        super().__post_init__()
        if not self.pattern:
            raise BadFeatureSpecError(f"substring {self.name!r} has an empty pattern")


@dataclass(frozen=True)
class Regex(FeatureDef):
    """Unanchored regex search on the raw text. Compiles at definition time."""

    pattern: str = ""
    compiled: re.Pattern = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        super().__post_init__()
        try:
            object.__setattr__(self, "compiled", re.compile(self.pattern))
        except re.error as exc:
            raise BadRegexError(self.pattern, str(exc))


@dataclass(frozen=True)
class AllCaps(FeatureDef):
    """True iff the text has at least one letter and no lowercase letters."""


@dataclass(frozen=True)
class ContainsDollar(FeatureDef):
    """True iff the raw text contains '$'."""


@dataclass(frozen=True)
class MultiPunct(FeatureDef):
    """True iff the ASCII punctuation count reaches min_count."""

    min_count: int = 2

    def __post_init__(self):
        super().__post_init__()
        if self.min_count < 1:
            raise BadFeatureSpecError(f"multi_punct {self.name!r}: min_count must be >= 1")


@dataclass(frozen=True)
class BagWord(FeatureDef):
    """True iff the given word is among the subject's tokens."""

    word: str = ""

    def __post_init__(self):
        super().__post_init__()
        if not self.word:
            raise BadFeatureSpecError(f"bag word {self.name!r} has an empty word")
        object.__setattr__(self, "word", self.word.lower())


@dataclass(frozen=True)
class CapsMajority(FeatureDef):
    """True iff uppercase letters strictly outnumber other letters."""


def eval_feature(feature: FeatureDef, text: str) -> bool:
    if isinstance(feature, WordList):
        words = feature.words
        return any(tok in words for tok in tokenize(text))
    if isinstance(feature, Substring):
        if feature.case_sensitive:
            return feature.pattern in text
        return feature.pattern.lower() in text.lower()
    if isinstance(feature, Regex):
        return feature.compiled.search(text) is not None
    if isinstance(feature, AllCaps):
        letters = [ch for ch in text if ch.isalpha()]
        return bool(letters) and all(ch.isupper() for ch in letters)
    if isinstance(feature, ContainsDollar):
        return "$" in text
    if isinstance(feature, MultiPunct):
        return punct_count(text) >= feature.min_count
    if isinstance(feature, BagWord):
        return feature.word in tokenize(text)
    if isinstance(feature, CapsMajority):
        letters = [ch for ch in text if ch.isalpha()]
        upper = sum(1 for ch in letters if ch.isupper())
        return 2 * upper > len(letters) if letters else False
    raise FeatureError(f"unknown feature kind: {type(feature).__name__}")


@dataclass(frozen=True)
class Vocabulary:
    """Words meeting the min_freq threshold, most frequent first (ties lexical)."""

    entries: tuple[tuple[str, int], ...]
    min_freq: int


def build_vocabulary(corpus: Corpus, min_freq: int = 4, mode: str = "document") -> Vocabulary:
    """Count word frequencies over a corpus and keep words with count >= min_freq.

    mode="document" counts subject lines containing the word (the default);
    mode="occurrence" counts total occurrences.
    """
    if min_freq < 1:
        raise FeatureError(f"min_freq must be >= 1, got {min_freq}")
    if mode not in ("document", "occurrence"):
        raise FeatureError(f"mode must be 'document' or 'occurrence', got {mode!r}")
    counts: Counter[str] = Counter()
    for item in corpus.items:
        tokens = tokenize(item.text)
        counts.update(set(tokens) if mode == "document" else tokens)
    kept = [(w, c) for w, c in counts.items() if c >= min_freq]
    kept.sort(key=lambda e: (-e[1], e[0]))
    return Vocabulary(tuple(kept), min_freq)


def bag_feature_name(word: str) -> str:
    """Feature name for a bag-of-words column; always [a-z][a-z0-9_]*."""
    safe = re.sub(r"[^a-z0-9_]", "", word)
    if safe == word and safe:
        return f"bag_{safe}"
    digest = hashlib.sha1(word.encode("utf-8")).hexdigest()[:6]
    return f"bag_{safe}_{digest}" if safe else f"bag_{digest}"


def bag_features(vocabulary: Vocabulary) -> list[BagWord]:
    """One BagWord feature per vocabulary entry, in vocabulary order."""
    return [BagWord(name=bag_feature_name(w), word=w) for w, _ in vocabulary.entries]


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[bool, ...]
    feature_names: tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.feature_names):
            raise FeatureError("feature vector length does not match its names")


@dataclass(frozen=True)
class FeatureMatrix:
    rows: tuple[FeatureVector, ...]
    labels: tuple[Label, ...]
    feature_names: tuple[str, ...]

    def as_array(self) -> np.ndarray:
        """(n, p) float array of 0/1 feature values."""
        return np.array([[1.0 if v else 0.0 for v in row.values] for row in self.rows])

    def label_array(self) -> np.ndarray:
        """(n,) int array, 1 = spam."""
        return np.array([1 if lab is Label.SPAM else 0 for lab in self.labels])


def check_unique_names(defs: Sequence[FeatureDef]) -> None:
    seen: set[str] = set()
    for d in defs:
        if d.name in seen:
            raise DuplicateFeatureNameError(d.name)
        seen.add(d.name)


def feature_map(defs: Union[Mapping[str, FeatureDef], Iterable[FeatureDef]]) -> dict[str, FeatureDef]:
    """Normalize a feature collection to a name -> def mapping."""
    if isinstance(defs, Mapping):
        return dict(defs)
    defs = list(defs)
    check_unique_names(defs)
    return {d.name: d for d in defs}


def featurize(corpus: Corpus, defs: Sequence[FeatureDef]) -> FeatureMatrix:
    """Evaluate every feature on every subject line, labels aligned by index."""
    defs = list(defs)
    check_unique_names(defs)
    names = tuple(d.name for d in defs)
    rows = tuple(
        FeatureVector(tuple(eval_feature(d, item.text) for d in defs), names)
        for item in corpus.items
    )
    return FeatureMatrix(rows, tuple(corpus.labels()), names)


def featurize_text(text: str, defs: Sequence[FeatureDef]) -> FeatureVector:
    names = tuple(d.name for d in defs)
    return FeatureVector(tuple(eval_feature(d, text) for d in defs), names)


# ---------------------------------------------------------------- JSON I/O

_KIND_TAGS = {
    WordList: "word_list",
    Substring: "substring",
    Regex: "regex",
    AllCaps: "all_caps",
    ContainsDollar: "contains_dollar",
    MultiPunct: "multi_punct",
    BagWord: "bag_word",
    CapsMajority: "caps_majority",
}


def feature_to_dict(feature: FeatureDef) -> dict:
    kind = _KIND_TAGS.get(type(feature))
    if kind is None:
        raise FeatureError(f"unknown feature kind: {type(feature).__name__}")
    doc: dict = {"name": feature.name, "kind": kind}
    if isinstance(feature, WordList):
        doc["words"] = sorted(feature.words)
    elif isinstance(feature, Substring):
        doc["pattern"] = feature.pattern
        doc["case_sensitive"] = feature.case_sensitive
    elif isinstance(feature, Regex):
        doc["pattern"] = feature.pattern
    elif isinstance(feature, MultiPunct):
        doc["min_count"] = feature.min_count
    elif isinstance(feature, BagWord):
        doc["word"] = feature.word
    return doc


def feature_from_dict(doc: dict) -> FeatureDef:
    if not isinstance(doc, dict):
        raise BadFeatureSpecError(f"feature spec must be an object, got {type(doc).__name__}")
    try:
        name = doc["name"]
        kind = doc["kind"]
    except KeyError as exc:
        raise BadFeatureSpecError(f"feature spec is missing field {exc.args[0]!r}")
    if not isinstance(name, str):
        raise BadFeatureSpecError("feature name must be a string")
    try:
        if kind == "word_list":
            return WordList(name, frozenset(doc["words"]))
        if kind == "substring":
            return Substring(name, doc["pattern"], bool(doc.get("case_sensitive", True)))
        if kind == "regex":
            return Regex(name, doc["pattern"])
        if kind == "all_caps":
            return AllCaps(name)
        if kind == "contains_dollar":
            return ContainsDollar(name)
        if kind == "multi_punct":
            return MultiPunct(name, int(doc.get("min_count", 2)))
        if kind == "bag_word":
            return BagWord(name, doc["word"])
        if kind == "caps_majority":
            return CapsMajority(name)
    except KeyError as exc:
        raise BadFeatureSpecError(
            f"feature {name!r} (kind {kind!r}) is missing field {exc.args[0]!r}"
        )
    raise BadFeatureSpecError(f"unknown feature kind {kind!r}")


def features_to_json(defs: Sequence[FeatureDef]) -> str:
    return json.dumps([feature_to_dict(d) for d in defs], indent=2) + "\n"


def features_from_json(text: Union[str, bytes]) -> list[FeatureDef]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BadFeatureSpecError(f"feature file is not valid JSON: {exc}")
    if not isinstance(data, list):
        raise BadFeatureSpecError("feature file must contain a JSON array")
    defs = [feature_from_dict(doc) for doc in data]
    check_unique_names(defs)
    return defs
