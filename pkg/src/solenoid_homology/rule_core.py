"""Signed words and wrapping rules on a wedge of circles.

A wrapping rule assigns to every oriented edge a word in the edges and
their inverses, e.g. ``a -> a a b`` says that the map wraps ``a`` twice
around itself and then once around ``b``.  Words are itineraries, so they
are never freely reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .intmatrix import IntMatrix

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"\s*(?:(->)|(\^[^\s;#]*)|(;)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


class Letter(NamedTuple):
    edge: int
    sign: int  # +1 or -1


Word = tuple[Letter, ...]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class WrappingRule:
    """Edge names plus one signed word per edge, indexed 0..m-1."""

    names: tuple[str, ...]
    words: tuple[Word, ...]

    def __post_init__(self):
        if not self.names:
            raise ValueError("a wrapping rule needs at least one edge")
        if len(self.names) != len(self.words):
            raise ValueError("need exactly one word per edge")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate edge names")
        for name in self.names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid edge name {name!r}")
        m = len(self.names)
        for word in self.words:
            for letter in word:
                if not 0 <= letter.edge < m or letter.sign not in (1, -1):
                    raise ValueError(f"invalid letter {letter!r}")

    @classmethod
    def from_lists(cls, names: Sequence[str], words: Sequence[Sequence[tuple[int, int]]]) -> WrappingRule:
        return cls(tuple(names), tuple(tuple(Letter(e, s) for e, s in w) for w in words))

    @property
    def m(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def lengths(self) -> tuple[int, ...]:
        return tuple(len(w) for w in self.words)

    def __str__(self) -> str:
        return format_rule(self)


def parse_rule(text: str) -> WrappingRule:
    """Parse the rule DSL::

        edges: a b
        a -> a a b
        b -> a^-1 b b   # comments run to end of line

    Rules may also be separated by ``;``.
    """
    tokens = list(_tokenize(text))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def fail(msg, tok=None):
        if tok is None:
            tok = peek()
        if tok is None:
            lines = text.splitlines() or [""]
            raise ParseError(msg, len(lines), len(lines[-1]) + 1)
        raise ParseError(msg, tok[2], tok[3])

    tok = peek()
    if tok is None or tok[:2] != ("name", "edges") or pos + 1 >= len(tokens) or tokens[pos + 1][1] != ":":
        fail("expected 'edges:' header")
    pos += 2

    names: list[str] = []
    while (tok := peek()) is not None and tok[0] == "name":
        if tok[1] in names:
            fail(f"duplicate edge declaration {tok[1]!r}", tok)
        names.append(tok[1])
        pos += 1
    if not names:
        fail("empty edge list")
    if (tok := peek()) is None or tok[0] != "end":
        fail("expected end of line after edge list")
    pos += 1

    words: dict[int, Word] = {}
    while pos < len(tokens):
        tok = peek()
        if tok[0] == "end":
            pos += 1
            continue
        if tok[0] != "name":
            fail(f"expected edge name, got {tok[1]!r}")
        if tok[1] not in names:
            fail(f"unknown edge symbol {tok[1]!r}")
        head = names.index(tok[1])
        if head in words:
            fail(f"duplicate rule for edge {tok[1]!r}")
        pos += 1
        tok = peek()
        if tok is None or tok[0] != "arrow":
            fail("expected '->'")
        pos += 1
        letters = []
        while (tok := peek()) is not None and tok[0] != "end":
            if tok[0] != "name":
                fail(f"unexpected token {tok[1]!r}")
            if tok[1] not in names:
                fail(f"unknown edge symbol {tok[1]!r}")
            edge = names.index(tok[1])
            pos += 1
            sign = 1
            if (nxt := peek()) is not None and nxt[0] == "exp":
                if nxt[1] != "^-1":
                    fail(f"malformed exponent {nxt[1]!r} (only ^-1 is allowed)", nxt)
                sign = -1
                pos += 1
            letters.append(Letter(edge, sign))
        words[head] = tuple(letters)

    missing = [n for i, n in enumerate(names) if i not in words]
    if missing:
        fail(f"no rule given for edge(s) {', '.join(missing)}")
    return WrappingRule(tuple(names), tuple(words[i] for i in range(len(names))))


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        emitted = False
        while True:
            mt = _TOKEN_RE.match(line, col)
            if mt is None:
                break
            start = mt.start(mt.lastindex) + 1
            arrow, exp, semi, name, other = mt.groups()
            col = mt.end()
            if arrow:
                yield ("arrow", arrow, lineno, start)
            elif exp:
                yield ("exp", exp, lineno, start)
            elif semi:
                yield ("end", ";", lineno, start)
            elif name:
                yield ("name", name, lineno, start)
            elif other == ":":
                yield ("colon", ":", lineno, start)
            else:
                raise ParseError(f"unexpected character {other!r}", lineno, start)
            emitted = True
        if emitted:
            yield ("end", "\n", lineno, len(line) + 1)


def format_word(rule: WrappingRule, word: Word) -> str:
    return " ".join(rule.names[l.edge] + ("" if l.sign > 0 else "^-1") for l in word)


def format_rule(rule: WrappingRule) -> str:
    lines = ["edges: " + " ".join(rule.names)]
    for name, word in zip(rule.names, rule.words):
        body = format_word(rule, word)
        lines.append(f"{name} -> {body}" if body else f"{name} ->")
    return "\n".join(lines) + "\n"


def invert_word(word: Word) -> Word:
    """Formal inverse: reverse the letters and flip every sign."""
    return tuple(Letter(l.edge, -l.sign) for l in reversed(word))


def substitute(rule: WrappingRule, word: Word) -> Word:
    out: list[Letter] = []
    for l in word:
        out.extend(rule.words[l.edge] if l.sign > 0 else invert_word(rule.words[l.edge]))
    return tuple(out)


def compose(outer: WrappingRule, inner: WrappingRule) -> WrappingRule:
    """The rule of ``outer ∘ inner``: apply ``inner`` first, then ``outer``."""
    return WrappingRule(outer.names, tuple(substitute(outer, w) for w in inner.words))


def power_rule(rule: WrappingRule, n: int) -> WrappingRule:
    """The wrapping rule of the n-th iterate."""
    if n < 1:
        raise ValueError("power must be at least 1")
    result = rule
    for _ in range(n - 1):
        result = compose(rule, result)
    return result


def reverse_edge(rule: WrappingRule, e: int) -> WrappingRule:
    """Replace edge ``e`` by the same circle traversed backwards.

    Every occurrence of ``e`` changes sign, and the word of ``e`` itself is
    read in the opposite direction.  The name and index are kept.
    """
    if not 0 <= e < rule.m:
        raise ValueError(f"no edge with index {e}")
    relabel = [tuple(Letter(l.edge, -l.sign if l.edge == e else l.sign) for l in w) for w in rule.words]
    relabel[e] = invert_word(relabel[e])
    return WrappingRule(rule.names, tuple(relabel))


def reverse_edges(rule: WrappingRule, edges) -> WrappingRule:
    for e in sorted(edges):
        rule = reverse_edge(rule, e)
    return rule


def unsigned_matrix(rule: WrappingRule) -> IntMatrix:
    """M[i][k] = number of occurrences of edge k (either sign) in the word of edge i."""
    m = rule.m
    rows = []
    for w in rule.words:
        row = [0] * m
        for l in w:
            row[l.edge] += 1
        rows.append(row)
    return IntMatrix(rows)


def signed_matrix(rule: WrappingRule) -> IntMatrix:
    """S[i][k] = signed count of edge k in the word of edge i."""
    m = rule.m
    rows = []
    for w in rule.words:
        row = [0] * m
        for l in w:
            row[l.edge] += l.sign
        rows.append(row)
    return IntMatrix(rows)
