"""Textual rule grammar: parser and pretty-printer.

The grammar (whitespace-insensitive between tokens)::

    rule      := "IF" premise? "THEN" ident "=" value
    premise   := clause ("AND" clause)*
    clause    := range | cmp | member
    range     := number rel ident rel number        rel := "<" | "<="
    cmp       := ident ("<=" | "<" | ">=" | ">" | "=") atom
    member    := ident "IN" "{" value ("," value)* "}"
    value     := ident | quoted-string | number

Idents are ``[A-Za-z_][A-Za-z0-9_]*``; ``IF``/``THEN``/``AND``/``IN`` are
reserved. Labels that are not plain idents (spaces, commas, parentheses...)
are written double-quoted with backslash escaping for ``"`` and ``\\``.
Numbers are plain decimals with an optional sign and fraction; no exponent
and no locale handling.

The parser resolves kinds against the schema: comparison and range clauses
need a numerical feature, membership and label-equality clauses need a
categorical one. Strict comparisons keep an open-end flag on the interval.
Several clauses on one feature are intersected into a single predicate;
an empty intersection is an error. Any failure raises
:class:`~fiper.errors.RuleTextError` with the 1-based line and column.
There is exactly one parse per accepted string: clause type is decided by
the first token (number starts a range, ident starts cmp or member) and
the token after the ident (``IN`` starts a member).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

from .errors import RuleTextError
from .model import (
    CategorySet,
    DatasetSchema,
    FeatureKind,
    NumericInterval,
    Predicate,
    Rule,
)

__all__ = ["parse_rule_text", "emit_rule_text", "format_number"]

_KEYWORDS = frozenset({"IF", "THEN", "AND", "IN"})
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"-?[0-9]+(?:\.[0-9]+)?")


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT, NUMBER, STRING, OP, LBRACE, RBRACE, COMMA, EOF (keywords use their own kind)
    text: str
    line: int
    column: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch == '"':
            j = i + 1
            buf = []
            while True:
                if j >= n:
                    raise RuleTextError("unterminated string", start_line, start_col)
                c = source[j]
                if c == "\\":
                    if j + 1 >= n:
                        raise RuleTextError("dangling escape", line, col + (j - i))
                    nxt = source[j + 1]
                    if nxt not in ('"', "\\"):
                        raise RuleTextError(f"unsupported escape \\{nxt}", line, col + (j - i))
                    buf.append(nxt)
                    j += 2
                    continue
                if c == '"':
                    j += 1
                    break
                if c == "\n":
                    raise RuleTextError("newline inside string", start_line, start_col)
                buf.append(c)
                j += 1
            tokens.append(_Token("STRING", "".join(buf), start_line, start_col))
            col += j - i
            i = j
            continue
        m = _NUMBER_RE.match(source, i)
        if m and (ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit())):
            tokens.append(_Token("NUMBER", m.group(), start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        m = _IDENT_RE.match(source, i)
        if m:
            text = m.group()
            kind = text if text in _KEYWORDS else "IDENT"
            tokens.append(_Token(kind, text, start_line, start_col))
            col += m.end() - i
            i = m.end()
            continue
        two = source[i:i + 2]
        if two in ("<=", ">="):
            tokens.append(_Token("OP", two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in "<>=":
            tokens.append(_Token("OP", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == "{":
            tokens.append(_Token("LBRACE", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == "}":
            tokens.append(_Token("RBRACE", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == ",":
            tokens.append(_Token("COMMA", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise RuleTextError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], schema: DatasetSchema):
        self.tokens = tokens
        self.pos = 0
        self.schema = schema

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise RuleTextError(f"expected {what}, found {tok.text or 'end of input'!r}",
                                tok.line, tok.column)
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise RuleTextError(message, tok.line, tok.column)

    # value := ident | quoted-string | number ; returned as raw label text
    def value_text(self) -> str:
        tok = self.peek()
        if tok.kind in ("IDENT", "STRING", "NUMBER"):
            return self.next().text
        self.fail(f"expected a value, found {tok.text or 'end of input'!r}")

    def feature_spec(self, tok: _Token):
        if not self.schema.has_feature(tok.text):
            raise RuleTextError(f"unknown feature {tok.text!r}", tok.line, tok.column)
        return self.schema.feature(tok.text)

    def number(self) -> float:
        tok = self.expect("NUMBER", "a number")
        return float(tok.text)

    def clause(self) -> Predicate:
        tok = self.peek()
        if tok.kind == "NUMBER":
            return self.range_clause()
        if tok.kind == "IDENT":
            if self.peek(1).kind == "IN":
                return self.member_clause()
            return self.cmp_clause()
        self.fail(f"expected a clause, found {tok.text or 'end of input'!r}")

    def range_clause(self) -> Predicate:
        lower = self.number()
        lo_rel = self.rel()
        ident = self.expect("IDENT", "a feature name")
        spec = self.feature_spec(ident)
        if spec.kind is not FeatureKind.NUMERICAL:
            raise RuleTextError(f"range on categorical feature {ident.text!r}",
                                ident.line, ident.column)
        hi_rel = self.rel()
        upper_tok = self.peek()
        upper = self.number()
        try:
            body = NumericInterval(lower, upper, lower_open=(lo_rel == "<"),
                                   upper_open=(hi_rel == "<"))
        except ValueError as exc:
            raise RuleTextError(str(exc), upper_tok.line, upper_tok.column) from None
        return Predicate(ident.text, body)

    def rel(self) -> str:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in ("<", "<="):
            return self.next().text
        self.fail(f"expected '<' or '<=', found {tok.text or 'end of input'!r}")

    def cmp_clause(self) -> Predicate:
        ident = self.next()
        spec = self.feature_spec(ident)
        op_tok = self.expect("OP", "a comparison operator")
        op = op_tok.text
        if spec.kind is FeatureKind.CATEGORICAL:
            if op != "=":
                raise RuleTextError(f"{op!r} on categorical feature {ident.text!r}",
                                    op_tok.line, op_tok.column)
            label_tok = self.peek()
            label = self.value_text()
            if label not in spec.domain:
                raise RuleTextError(f"label {label!r} not in the domain of {ident.text!r}",
                                    label_tok.line, label_tok.column)
            return Predicate(ident.text, CategorySet(frozenset({label})))
        num_tok = self.peek()
        if num_tok.kind != "NUMBER":
            raise RuleTextError(f"numerical feature {ident.text!r} compared with a non-number",
                                num_tok.line, num_tok.column)
        v = self.number()
        if op == "=":
            body = NumericInterval(v, v)
        elif op == "<=":
            body = NumericInterval(upper=v)
        elif op == "<":
            body = NumericInterval(upper=v, upper_open=True)
        elif op == ">=":
            body = NumericInterval(lower=v)
        else:  # ">"
            body = NumericInterval(lower=v, lower_open=True)
        return Predicate(ident.text, body)

    def member_clause(self) -> Predicate:
        ident = self.next()
        spec = self.feature_spec(ident)
        if spec.kind is not FeatureKind.CATEGORICAL:
            raise RuleTextError(f"membership on numerical feature {ident.text!r}",
                                ident.line, ident.column)
        self.next()  # IN
        self.expect("LBRACE", "'{'")
        labels = set()
        while True:
            tok = self.peek()
            label = self.value_text()
            if label not in spec.domain:
                raise RuleTextError(f"label {label!r} not in the domain of {ident.text!r}",
                                    tok.line, tok.column)
            labels.add(label)
            if self.peek().kind == "COMMA":
                self.next()
                continue
            break
        self.expect("RBRACE", "'}'")
        return Predicate(ident.text, CategorySet(frozenset(labels)))

    def rule(self) -> Rule:
        self.expect("IF", "'IF'")
        predicates: list[Predicate] = []
        if self.peek().kind != "THEN":
            predicates.append(self.clause())
            while self.peek().kind == "AND":
                self.next()
                predicates.append(self.clause())
        self.expect("THEN", "'THEN'")
        target = self.expect("IDENT", "the target name")
        if target.text != self.schema.target_name:
            raise RuleTextError(
                f"consequence names {target.text!r}, schema target is {self.schema.target_name!r}",
                target.line, target.column)
        eq = self.expect("OP", "'='")
        if eq.text != "=":
            raise RuleTextError(f"expected '=', found {eq.text!r}", eq.line, eq.column)
        cls_tok = self.peek()
        consequence = self.value_text()
        if consequence not in self.schema.target_classes:
            raise RuleTextError(f"{consequence!r} is not a target class",
                                cls_tok.line, cls_tok.column)
        trailing = self.peek()
        if trailing.kind != "EOF":
            raise RuleTextError(f"unexpected trailing input {trailing.text!r}",
                                trailing.line, trailing.column)
        return Rule(tuple(_merge_duplicates(predicates, self)), consequence)


def _merge_duplicates(predicates: list[Predicate], parser: _Parser) -> list[Predicate]:
    """Intersect repeated predicates on one feature; empty intersection is an error."""
    merged: dict[str, Predicate] = {}
    order: list[str] = []
    for pred in predicates:
        if pred.feature not in merged:
            merged[pred.feature] = pred
            order.append(pred.feature)
            continue
        existing = merged[pred.feature].body
        combined = existing.intersect(pred.body)
        if combined is None:
            tok = parser.tokens[0]
            raise RuleTextError(
                f"predicates on {pred.feature!r} have an empty intersection",
                tok.line, tok.column)
        merged[pred.feature] = Predicate(pred.feature, combined)
    return [merged[name] for name in order]


def parse_rule_text(source: str, schema: DatasetSchema) -> Rule:
    """Parse one rule in the grammar above, resolving kinds via the schema."""
    if not isinstance(source, str):
        raise RuleTextError("rule source must be text", 1, 1)
    return _Parser(_tokenize(source), schema).rule()


def format_number(value: float) -> str:
    """Plain decimal text for a finite float; round-trips through float().

    Integral values print without a fraction; everything else prints the
    shortest-repr digits positionally (never exponent notation).
    """
    value = float(value)
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return format(Decimal(repr(value)), "f")


def _format_label(label: str) -> str:
    if _IDENT_RE.fullmatch(label) and label not in _KEYWORDS:
        return label
    escaped = label.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_predicate(pred: Predicate) -> str:
    body = pred.body
    if isinstance(body, CategorySet):
        labels = ", ".join(_format_label(v) for v in sorted(body.labels))
        return f"{pred.feature} IN {{{labels}}}"
    lo_rel = "<" if body.lower_open else "<="
    hi_rel = "<" if body.upper_open else "<="
    if body.lower is not None and body.upper is not None:
        return (f"{format_number(body.lower)} {lo_rel} {pred.feature} "
                f"{hi_rel} {format_number(body.upper)}")
    if body.lower is not None:
        rel = ">" if body.lower_open else ">="
        return f"{pred.feature} {rel} {format_number(body.lower)}"
    rel = "<" if body.upper_open else "<="
    return f"{pred.feature} {rel} {format_number(body.upper)}"


def emit_rule_text(rule: Rule, schema: DatasetSchema) -> str:
    """Deterministic text for a rule; parse_rule_text inverts it exactly.

    Predicates appear in premise order; two-sided intervals use the range
    form, one-sided ones a single comparison, category sets the IN form
    with labels sorted.
    """
    clauses = " AND ".join(_format_predicate(p) for p in rule.premise)
    premise = f" {clauses}" if clauses else ""
    return (f"IF{premise} THEN {schema.target_name} = "
            f"{_format_label(rule.consequence)}")
