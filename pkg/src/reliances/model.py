"""Terms, atoms, rules and substitutions.

Terms are a tagged tuple ``(kind, name)`` so that equality and hashing stay in
C; constants, variables and nulls with the same name never compare equal
because the kind tag differs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, NamedTuple, Tuple

CONST, VAR, NULL = 0, 1, 2


class Term(NamedTuple):
    kind: int
    name: object

    @property
    def is_var(self) -> bool:
        return self.kind == VAR

    @property
    def is_const(self) -> bool:
        return self.kind == CONST

    @property
    def is_null(self) -> bool:
        return self.kind == NULL

    def __str__(self) -> str:
        if self.kind == VAR:
            return f"?{self.name}"
        if self.kind == NULL:
            return f"_:n{self.name}"
        return str(self.name)

    def __repr__(self) -> str:
        return f"{('Constant', 'Variable', 'Null')[self.kind]}({self.name!r})"


def const(name: str) -> Term:
    return Term(CONST, name)


def var(name: str) -> Term:
    return Term(VAR, name)


def null(ident: int) -> Term:
    if ident < 1:
        raise ValueError("null ids are positive integers")
    return Term(NULL, ident)


class Atom(NamedTuple):
    predicate: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> Iterable[Term]:
        return (t for t in self.args if t.kind == VAR)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


def atom(predicate: str, *args: Term) -> Atom:
    return Atom(predicate, tuple(args))


Substitution = Dict[Term, Term]
Interpretation = FrozenSet[Atom]


class RuleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Rule:
    """An existential rule ``body -> exists z. head``.

    Universal variables are all body variables; existential variables are the
    head variables that do not occur in the body. Atom order is significant.
    """

    id: int
    body: Tuple[Atom, ...]
    head: Tuple[Atom, ...]
    universal_vars: FrozenSet[Term] = field(init=False)
    existential_vars: FrozenSet[Term] = field(init=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        body, head = tuple(self.body), tuple(self.head)
        if not body:
            raise RuleError("rule body must not be empty")
        if not head:
            raise RuleError("rule head must not be empty")
        for a in body + head:
            for t in a.args:
                if t.kind == NULL:
                    raise RuleError(f"nulls are not allowed in rules: {a}")
        universal = frozenset(v for a in body for v in a.variables())
        existential = frozenset(v for a in head for v in a.variables()) - universal
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "universal_vars", universal)
        object.__setattr__(self, "existential_vars", existential)
        object.__setattr__(self, "_hash", hash((self.id, body, head)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rule):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.id == other.id
            and self.body == other.body
            and self.head == other.head
        )

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        # The cached hash must be recomputed in the receiving process.
        return (Rule, (self.id, self.body, self.head))

    @property
    def frontier(self) -> FrozenSet[Term]:
        return frozenset(v for a in self.head for v in a.variables()) & self.universal_vars

    @property
    def is_datalog(self) -> bool:
        return not self.existential_vars

    @property
    def predicates(self) -> FrozenSet[str]:
        return frozenset(a.predicate for a in self.body + self.head)

    def variables(self) -> FrozenSet[Term]:
        return self.universal_vars | self.existential_vars

    def with_id(self, new_id: int) -> "Rule":
        return Rule(new_id, self.body, self.head)

    def __str__(self) -> str:
        return f"{', '.join(map(str, self.body))} -> {', '.join(map(str, self.head))} ."

    def __repr__(self) -> str:
        return f"Rule({self.id}: {self})"


def apply_term(s: Substitution, t: Term) -> Term:
    return s.get(t, t)


def apply_substitution(s: Substitution, a: Atom) -> Atom:
    """Apply ``s`` term-wise; terms outside its domain are unchanged."""
    if not s:
        return a
    get = s.get
    return Atom(a.predicate, tuple([get(t, t) for t in a.args]))


def apply_atoms(s: Substitution, atoms: Iterable[Atom]) -> Tuple[Atom, ...]:
    return tuple(apply_substitution(s, a) for a in atoms)


def compose(first: Substitution, then: Substitution) -> Substitution:
    """The concatenation ``first then``: ``t(first then) = (t first) then``."""
    out = {x: then.get(t, t) for x, t in first.items()}
    for x, t in then.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if x != t}


def restrict_universal(s: Substitution, existentials: FrozenSet[Term]) -> Substitution:
    """Keep ``s`` on universal variables; existential variables map to themselves."""
    return {x: t for x, t in s.items() if x not in existentials}


def restrict_existential(s: Substitution, existentials: FrozenSet[Term]) -> Substitution:
    return {x: t for x, t in s.items() if x in existentials}


def is_ground(atoms: Iterable[Atom]) -> bool:
    return all(t.kind != VAR for a in atoms for t in a.args)


def interpretation(atoms: Iterable[Atom]) -> Interpretation:
    """Freeze ``atoms`` into an interpretation, rejecting variables."""
    out = frozenset(atoms)
    if not is_ground(out):
        raise ValueError("interpretations must not contain variables")
    return out


def terms_of(atoms: Iterable[Atom]) -> FrozenSet[Term]:
    return frozenset(t for a in atoms for t in a.args)
