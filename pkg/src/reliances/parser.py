"""Reading and writing rule files.

The format is one rule per ``.``-terminated statement::

    % comment
    a(?x) -> r(?x, ?v), b(?v) .
    r(?y, ?z1), r(?y, ?z2) -> t(?z1, ?z2) .

Variables carry a ``?`` prefix; bare identifiers and double-quoted strings are
constants; zero-arity atoms are written without parentheses. Head variables that
do not occur in the body are existentially quantified.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from .model import Atom, Rule, RuleError, Term, const, var

IDENT = r"[A-Za-z_](?:[A-Za-z0-9_]|-(?!>))*"
_IDENT_RE = re.compile(IDENT + r"\Z")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<arrow>->)
  | (?P<var>\?""" + IDENT + r""")
  | (?P<ident>""" + IDENT + r""")
  | (?P<string>"(?:[^"\\\x00]|\\["\\])*")
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class RuleSet:
    rules: Tuple[Rule, ...] = ()
    predicate_arities: Dict[str, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        for i, r in enumerate(self.rules):
            if r.id != i:
                raise ValueError(f"rule ids must be dense from 0; rule {i} has id {r.id}")
        arities: Dict[str, int] = {}
        for r in self.rules:
            for a in r.body + r.head:
                known = arities.setdefault(a.predicate, a.arity)
                if known != a.arity:
                    raise ValueError(
                        f"predicate {a.predicate!r} used with arities {known} and {a.arity}"
                    )
        object.__setattr__(self, "predicate_arities", arities)

    @classmethod
    def of(cls, rules) -> "RuleSet":
        """Build a rule set, renumbering rule ids densely in the given order."""
        return cls(tuple(r.with_id(i) for i, r in enumerate(rules)))

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __getitem__(self, i: int) -> Rule:
        return self.rules[i]


class _Tokens:
    def __init__(self, text: str):
        self.items: List[Tuple[str, str, int, int]] = []
        line, line_start, pos = 1, 0, 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
            kind = m.lastgroup
            value = m.group()
            if kind not in ("ws", "comment"):
                self.items.append((kind, value, line, pos - line_start + 1))
            newlines = value.count("\n")
            if newlines:
                line += newlines
                line_start = pos + value.rindex("\n") + 1
            pos = m.end()
        self.end = (line, pos - line_start + 1)
        self.i = 0

    def peek(self) -> Tuple[str, str, int, int]:
        if self.i < len(self.items):
            return self.items[self.i]
        return ("eof", "", *self.end)

    def next(self) -> Tuple[str, str, int, int]:
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, got, line, col = self.next()
        if got != value or kind not in ("punct", "arrow"):
            shown = got or "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", line, col)


def _unquote(s: str) -> str:
    return re.sub(r"\\([\"\\])", r"\1", s[1:-1])


def _term(tokens: _Tokens) -> Term:
    kind, value, line, col = tokens.next()
    if kind == "var":
        return var(value[1:])
    if kind == "ident":
        return const(value)
    if kind == "string":
        return const(_unquote(value))
    raise ParseError(f"expected a term, found {value or 'end of input'!r}", line, col)


def _atom(tokens: _Tokens) -> Atom:
    kind, pred, line, col = tokens.next()
    if kind != "ident":
        raise ParseError(f"expected a predicate, found {pred or 'end of input'!r}", line, col)
    if tokens.peek()[1] != "(":
        return Atom(pred, ())
    tokens.next()
    args = [_term(tokens)]
    while tokens.peek()[1] == ",":
        tokens.next()
        args.append(_term(tokens))
    tokens.expect(")")
    return Atom(pred, tuple(args))


def _atom_list(tokens: _Tokens) -> List[Atom]:
    atoms = [_atom(tokens)]
    while tokens.peek()[1] == ",":
        tokens.next()
        atoms.append(_atom(tokens))
    return atoms


def parse_rules(text: str) -> RuleSet:
    """Parse rule-file text into a validated :class:`RuleSet`."""
    tokens = _Tokens(text)
    rules: List[Rule] = []
    arities: Dict[str, Tuple[int, int, int]] = {}
    while tokens.peek()[0] != "eof":
        _, _, line, col = tokens.peek()
        if tokens.peek()[0] == "arrow":
            raise ParseError("rule body must not be empty", line, col)
        body = _atom_list(tokens)
        if tokens.peek()[0] != "arrow":
            _, got, l2, c2 = tokens.peek()
            raise ParseError(f"expected '->', found {got or 'end of input'!r}", l2, c2)
        tokens.next()
        if tokens.peek()[1] == ".":
            _, _, l2, c2 = tokens.peek()
            raise ParseError("rule head must not be empty", l2, c2)
        head = _atom_list(tokens)
        tokens.expect(".")
        for a in body + head:
            seen = arities.setdefault(a.predicate, (a.arity, line, col))
            if seen[0] != a.arity:
                raise ParseError(
                    f"predicate {a.predicate!r} used with arity {seen[0]} "
                    f"(line {seen[1]}) and arity {a.arity}",
                    line,
                    col,
                )
        try:
            rules.append(Rule(len(rules), tuple(body), tuple(head)))
        except RuleError as exc:
            raise ParseError(str(exc), line, col) from None
    return RuleSet(tuple(rules))


def load_rules(path) -> RuleSet:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def format_term(t: Term) -> str:
    if t.is_var:
        return f"?{t.name}"
    if t.is_const:
        name = str(t.name)
        if _IDENT_RE.match(name):
            return name
        return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise ValueError(f"cannot serialise {t!r}")


def format_atom(a: Atom) -> str:
    if not a.args:
        return a.predicate
    return f"{a.predicate}({', '.join(format_term(t) for t in a.args)})"


def format_rule(r: Rule) -> str:
    body = ", ".join(format_atom(a) for a in r.body)
    head = ", ".join(format_atom(a) for a in r.head)
    return f"{body} -> {head} ."


def serialize_rules(rs: RuleSet) -> str:
    return "".join(format_rule(r) + "\n" for r in rs)
