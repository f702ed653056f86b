"""Boolean rule DSL for hand-written spam classifiers.

Grammar (LL(1), keywords case-insensitive):

    rule    := or
    or      := and { "OR" and }
    and     := not { "AND" not }
    not     := "NOT" not | atom
    atom    := "(" or ")" | countcmp | IDENT
    countcmp:= COUNTER OPR INT
    COUNTER := "punct_count" | "word_count" | "char_length"
    OPR     := "<" | "<=" | ">" | ">=" | "=="
    IDENT   := [a-z][a-z0-9_]*

Rule sets are ordered `condition => spam|non-spam` clauses with first-match
semantics and a mandatory trailing `default => ...` line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence, Union

from .corpus import Corpus, Label
from .errors import SpamLabError
from .textfeat import FeatureDef, eval_feature, feature_map, punct_count, tokenize


class RuleError(SpamLabError):
    pass


class RuleSyntaxError(RuleError):
    def __init__(self, position: int, expected: str):
        self.position = position
        self.expected = expected
        super().__init__(f"syntax error at offset {position}: expected {expected}")


class UnknownFeatureError(RuleError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"rule references unknown feature {name!r}")


class RulesetError(RuleError):
    def __init__(self, line: int, reason: str):
        self.line = line
        super().__init__(f"line {line}: {reason}")


class Counter(Enum):
    PUNCT_COUNT = "punct_count"
    WORD_COUNT = "word_count"
    CHAR_LENGTH = "char_length"


class Cmp(Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "=="


@dataclass(frozen=True)
class Pred:
    feature_name: str


@dataclass(frozen=True)
class Not:
    child: "RuleExpr"


@dataclass(frozen=True)
class And:
    left: "RuleExpr"
    right: "RuleExpr"


@dataclass(frozen=True)
class Or:
    left: "RuleExpr"
    right: "RuleExpr"


@dataclass(frozen=True)
class CountCmp:
    counter: Counter
    op: Cmp
    bound: int


RuleExpr = Union[Pred, Not, And, Or, CountCmp]


@dataclass(frozen=True)
class RuleSet:
    clauses: tuple[tuple[RuleExpr, Label], ...]
    default: Label


# ----------------------------------------------------------------- lexer

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")
_IDENT_RE = re.compile(r"[a-z][a-z0-9_]*$")
_COUNTERS = {c.value: c for c in Counter}
_OPS = {c.value: c for c in Cmp}


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, COUNTER, INT, OP, LPAREN, RPAREN, NOT, AND, OR, EOF
    text: str
    pos: int


def _lex(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("LPAREN", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("RPAREN", ch, i))
            i += 1
            continue
        if ch in "<>=":
            two = source[i : i + 2]
            if two in ("<=", ">=", "=="):
                tokens.append(_Token("OP", two, i))
                i += 2
                continue
            if ch in "<>":
                tokens.append(_Token("OP", ch, i))
                i += 1
                continue
            raise RuleSyntaxError(i, "comparison operator (<, <=, >, >=, ==)")
        m = _INT_RE.match(source, i)
        if m:
            tokens.append(_Token("INT", m.group(), i))
            i = m.end()
            continue
        m = _WORD_RE.match(source, i)
        if m:
            word = m.group()
            upper = word.upper()
            if upper in ("NOT", "AND", "OR"):
                tokens.append(_Token(upper, word, i))
            elif word in _COUNTERS:
                tokens.append(_Token("COUNTER", word, i))
            elif _IDENT_RE.match(word):
                tokens.append(_Token("IDENT", word, i))
            else:
                raise RuleSyntaxError(i, "lowercase feature name")
            i = m.end()
            continue
        raise RuleSyntaxError(i, "feature name, counter, NOT, or (")
    tokens.append(_Token("EOF", "", n))
    return tokens


# ----------------------------------------------------------------- parser

_ATOM_EXPECTED = "feature name, counter comparison, NOT, or ("


class _Parser:
    def __init__(self, source: str):
        self.tokens = _lex(source)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> RuleExpr:
        expr = self.parse_or()
        tok = self.peek()
        if tok.kind != "EOF":
            raise RuleSyntaxError(tok.pos, "AND, OR, or end of rule")
        return expr

    def parse_or(self) -> RuleExpr:
        expr = self.parse_and()
        while self.peek().kind == "OR":
            self.advance()
            expr = Or(expr, self.parse_and())
        return expr

    def parse_and(self) -> RuleExpr:
        expr = self.parse_not()
        while self.peek().kind == "AND":
            self.advance()
            expr = And(expr, self.parse_not())
        return expr

    def parse_not(self) -> RuleExpr:
        if self.peek().kind == "NOT":
            self.advance()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self) -> RuleExpr:
        tok = self.peek()
        if tok.kind == "LPAREN":
            self.advance()
            expr = self.parse_or()
            closing = self.peek()
            if closing.kind != "RPAREN":
                raise RuleSyntaxError(closing.pos, ")")
            self.advance()
            return expr
        if tok.kind == "COUNTER":
            self.advance()
            op_tok = self.peek()
            if op_tok.kind != "OP":
                raise RuleSyntaxError(op_tok.pos, "comparison operator (<, <=, >, >=, ==)")
            self.advance()
            int_tok = self.peek()
            if int_tok.kind != "INT":
                raise RuleSyntaxError(int_tok.pos, "non-negative integer")
            self.advance()
            return CountCmp(_COUNTERS[tok.text], _OPS[op_tok.text], int(int_tok.text))
        if tok.kind == "IDENT":
            self.advance()
            return Pred(tok.text)
        raise RuleSyntaxError(tok.pos, _ATOM_EXPECTED)


def parse_rule(source: str) -> RuleExpr:
    """Parse one Boolean rule expression into its AST."""
    return _Parser(source).parse()


# -------------------------------------------------------------- evaluator

def _count_value(counter: Counter, text: str) -> int:
    if counter is Counter.PUNCT_COUNT:
        return punct_count(text)
    if counter is Counter.WORD_COUNT:
        return len(tokenize(text))
    return len(text)


_CMP_FUNCS = {
    Cmp.LT: lambda a, b: a < b,
    Cmp.LE: lambda a, b: a <= b,
    Cmp.GT: lambda a, b: a > b,
    Cmp.GE: lambda a, b: a >= b,
    Cmp.EQ: lambda a, b: a == b,
}


def evaluate(
    expr: RuleExpr,
    text: str,
    features: Union[Mapping[str, FeatureDef], Iterable[FeatureDef]],
) -> bool:
    """Evaluate a rule expression against one subject line."""
    fmap = feature_map(features)
    return _eval(expr, text, fmap)


def _eval(expr: RuleExpr, text: str, fmap: Mapping[str, FeatureDef]) -> bool:
    if isinstance(expr, Pred):
        feat = fmap.get(expr.feature_name)
        if feat is None:
            raise UnknownFeatureError(expr.feature_name)
        return eval_feature(feat, text)
    if isinstance(expr, Not):
        return not _eval(expr.child, text, fmap)
    if isinstance(expr, And):
        return _eval(expr.left, text, fmap) and _eval(expr.right, text, fmap)
    if isinstance(expr, Or):
        return _eval(expr.left, text, fmap) or _eval(expr.right, text, fmap)
    if isinstance(expr, CountCmp):
        return _CMP_FUNCS[expr.op](_count_value(expr.counter, text), expr.bound)
    raise RuleError(f"unknown rule node: {type(expr).__name__}")


def apply_ruleset(
    rules: RuleSet,
    corpus: Corpus,
    features: Union[Mapping[str, FeatureDef], Iterable[FeatureDef]],
) -> list[Label]:
    """First matching clause wins; the default label covers the rest."""
    fmap = feature_map(features)
    out: list[Label] = []
    for item in corpus.items:
        verdict = rules.default
        for condition, label in rules.clauses:
            if _eval(condition, item.text, fmap):
                verdict = label
                break
        out.append(verdict)
    return out


# ---------------------------------------------------------- pretty printer

_PREC = {Or: 1, And: 2, Not: 3}


def _prec(expr: RuleExpr) -> int:
    return _PREC.get(type(expr), 4)


def _pp(expr: RuleExpr, min_prec: int) -> str:
    if isinstance(expr, Pred):
        rendered = expr.feature_name
    elif isinstance(expr, CountCmp):
        rendered = f"{expr.counter.value} {expr.op.value} {expr.bound}"
    elif isinstance(expr, Not):
        rendered = "NOT " + _pp(expr.child, 3)
    elif isinstance(expr, And):
        rendered = _pp(expr.left, 2) + " AND " + _pp(expr.right, 3)
    elif isinstance(expr, Or):
        rendered = _pp(expr.left, 1) + " OR " + _pp(expr.right, 2)
    else:
        raise RuleError(f"unknown rule node: {type(expr).__name__}")
    if _prec(expr) < min_prec:
        return "(" + rendered + ")"
    return rendered


def pretty_print(expr: RuleExpr) -> str:
    """Canonical source text; parse_rule(pretty_print(e)) == e."""
    return _pp(expr, 0)


# ------------------------------------------------------------ ruleset files

def parse_ruleset(text: str) -> RuleSet:
    """Parse the rule-file format: one `condition => label` per line, then
    `default => label`; `#` starts a comment line."""
    clauses: list[tuple[RuleExpr, Label]] = []
    default: Label | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if default is not None:
            raise RulesetError(line_no, "clause after the default line")
        if "=>" not in line:
            raise RulesetError(line_no, "expected 'condition => spam|non-spam'")
        lhs, _, rhs = line.partition("=>")
        lhs = lhs.strip()
        try:
            verdict = Label.parse(rhs)
        except ValueError:
            raise RulesetError(line_no, f"verdict must be 'spam' or 'non-spam', got {rhs.strip()!r}")
        if lhs == "default":
            default = verdict
            continue
        try:
            condition = parse_rule(lhs)
        except RuleSyntaxError as exc:
            raise RulesetError(line_no, str(exc))
        clauses.append((condition, verdict))
    if default is None:
        raise RulesetError(
            len(text.splitlines()) + 1, "missing final 'default => spam|non-spam' line"
        )
    return RuleSet(tuple(clauses), default)


def format_ruleset(rules: RuleSet) -> str:
    lines = [f"{pretty_print(cond)} => {label.value}" for cond, label in rules.clauses]
    lines.append(f"default => {rules.default.value}")
    return "\n".join(lines) + "\n"


def ast_to_dict(expr: RuleExpr) -> dict:
    """JSON-friendly AST encoding (the /rules/parse wire shape)."""
    if isinstance(expr, Pred):
        return {"op": "pred", "name": expr.feature_name}
    if isinstance(expr, Not):
        return {"op": "not", "child": ast_to_dict(expr.child)}
    if isinstance(expr, And):
        return {"op": "and", "left": ast_to_dict(expr.left), "right": ast_to_dict(expr.right)}
    if isinstance(expr, Or):
        return {"op": "or", "left": ast_to_dict(expr.left), "right": ast_to_dict(expr.right)}
    if isinstance(expr, CountCmp):
        return {"op": "count", "counter": expr.counter.value, "cmp": expr.op.value, "bound": expr.bound}
    raise RuleError(f"unknown rule node: {type(expr).__name__}")


def ruleset_features(rules: RuleSet) -> set[str]:
    """Names of every feature referenced by any clause."""
    names: set[str] = set()

    def walk(expr: RuleExpr) -> None:
        if isinstance(expr, Pred):
            names.add(expr.feature_name)
        elif isinstance(expr, Not):
            walk(expr.child)
        elif isinstance(expr, (And, Or)):
            walk(expr.left)
            walk(expr.right)

    for condition, _ in rules.clauses:
        walk(condition)
    return names
