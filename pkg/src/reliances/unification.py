"""Atom mappings, most general unifiers and the instantiation substitution.

Unification works on flat terms only (variables, constants, nulls), so a
union-find over the mapped argument positions is enough and no occurs check
is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Sequence, Tuple

from .model import CONST, NULL, VAR, Atom, Rule, Substitution, Term, const, null, var

# Instantiation constants live outside the parser's namespace: the parser rejects
# NUL characters in quoted strings and identifiers cannot contain them.
OMEGA_PREFIX = "\x00"


@dataclass(frozen=True)
class AtomMapping:
    """A partial function from ``source`` atoms to ``target`` atoms.

    ``entries`` holds ``(source_index, target_index)`` pairs with strictly
    increasing source indices (0-based).
    """

    source: Tuple[Atom, ...]
    target: Tuple[Atom, ...]
    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for i, j in self.entries:
            if i <= prev:
                raise ValueError("source indices must strictly increase")
            s, t = self.source[i], self.target[j]
            if s.predicate != t.predicate or s.arity != t.arity:
                raise ValueError(f"cannot map {s} to {t}")
            prev = i

    @property
    def maxidx(self) -> int:
        """Largest mapped source index, counted from 1; 0 for the empty mapping."""
        return self.entries[-1][0] + 1 if self.entries else 0

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(i for i, _ in self.entries)

    def extended(self, i: int, j: int) -> "AtomMapping":
        return AtomMapping(self.source, self.target, self.entries + ((i, j),))

    def pairs(self) -> Iterator[Tuple[Atom, Atom]]:
        for i, j in self.entries:
            yield self.source[i], self.target[j]

    def partition(self) -> Tuple[Tuple[Atom, ...], Tuple[Atom, ...], Tuple[Atom, ...]]:
        """Split the source atoms into (mapped, left, right) around ``maxidx``."""
        dom = self.domain
        last = self.maxidx - 1
        mapped = tuple(self.source[i] for i, _ in self.entries)
        left = tuple(a for k, a in enumerate(self.source) if k < last and k not in dom)
        right = tuple(a for k, a in enumerate(self.source) if k > last)
        return mapped, left, right

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{s} -> {t}" for s, t in self.pairs()) + "}"


def unify_pairs(
    pairs: Iterable[Tuple[Atom, Atom]], universal: Optional[FrozenSet[Term]] = None
) -> Optional[Substitution]:
    """Most general unifier of atom pairs, or ``None`` if none exists.

    Each class of unified terms is represented by its constant or null if it
    has one, else by a variable from ``universal`` if present, else by the
    smallest variable. The result is idempotent and never maps a constant or
    null.
    """
    parent: Dict[Term, Term] = {}

    def find(t: Term) -> Term:
        root = t
        while True:
            p = parent.get(root)
            if p is None or p == root:
                break
            root = p
        while t != root:
            nxt = parent[t]
            parent[t] = root
            t = nxt
        return root

    for s, t in pairs:
        if s.predicate != t.predicate or len(s.args) != len(t.args):
            return None
        for a, b in zip(s.args, t.args):
            if a == b:
                parent.setdefault(a, a)
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                parent.setdefault(rb, rb)

    classes: Dict[Term, list] = {}
    for t in parent:
        classes.setdefault(find(t), []).append(t)

    eta: Substitution = {}
    for members in classes.values():
        if len(members) == 1:
            continue
        anchors = {t for t in members if t.kind != VAR}
        if len(anchors) > 1:
            return None
        if anchors:
            rep = anchors.pop()
        else:
            preferred = [t for t in members if universal is not None and t in universal]
            rep = min(preferred or members)
        for t in members:
            if t.kind == VAR and t != rep:
                eta[t] = rep
    return eta


def unify(m: AtomMapping, universal: Optional[FrozenSet[Term]] = None) -> Optional[Substitution]:
    """Most general unifier of an atom mapping (see :func:`unify_pairs`)."""
    return unify_pairs(m.pairs(), universal)


def rename_rule(r: Rule, suffix: str) -> Rule:
    ren = {v: var(f"{v.name}{suffix}") for v in r.variables()}
    get = ren.get
    body = tuple(Atom(a.predicate, tuple(get(t, t) for t in a.args)) for a in r.body)
    head = tuple(Atom(a.predicate, tuple(get(t, t) for t in a.args)) for a in r.head)
    return Rule(r.id, body, head)


@lru_cache(maxsize=65536)
def _renamed(r: Rule, suffix: str) -> Rule:
    return rename_rule(r, suffix)


def rename_apart(r1: Rule, r2: Rule) -> Tuple[Rule, Rule]:
    """Variants of ``r1`` and ``r2`` with disjoint variables.

    Every variable of ``r1`` gets suffix ``_1`` and every variable of ``r2``
    gets ``_2``; the two sets cannot collide since all names in one set end in
    ``_1`` and all names in the other in ``_2``.
    """
    return _renamed(r1, "_1"), _renamed(r2, "_2")


@dataclass(frozen=True)
class Omega:
    """Injective instantiation: universal variables to fresh constants,
    existential variables to fresh nulls."""

    map: Dict[Term, Term]
    universal: FrozenSet[Term]
    existential: FrozenSet[Term]

    @property
    def forall(self) -> Substitution:
        return {v: t for v, t in self.map.items() if v in self.universal}

    @property
    def exists(self) -> Substitution:
        return {v: t for v, t in self.map.items() if v in self.existential}

    def constants(self) -> FrozenSet[Term]:
        return frozenset(t for t in self.map.values() if t.kind == CONST)

    def nulls(self) -> FrozenSet[Term]:
        return frozenset(t for t in self.map.values() if t.kind == NULL)


def make_omega(*rules: Rule) -> Omega:
    """Instantiation for the (already renamed apart) ``rules``."""
    universal = frozenset().union(*(r.universal_vars for r in rules))
    existential = frozenset().union(*(r.existential_vars for r in rules))
    mapping: Dict[Term, Term] = {}
    for v in sorted(universal):
        mapping[v] = const(f"{OMEGA_PREFIX}{v.name}")
    for k, v in enumerate(sorted(existential), start=1):
        mapping[v] = null(k)
    return Omega(mapping, universal, existential)


def all_mappings(
    source: Sequence[Atom], target: Sequence[Atom]
) -> Iterator[AtomMapping]:
    """Every non-empty atom mapping between predicate-compatible atoms."""
    options = [
        [j for j, t in enumerate(target) if t.predicate == s.predicate and t.arity == s.arity]
        for s in source
    ]
    source, target = tuple(source), tuple(target)

    def walk(i: int, entries: Tuple[Tuple[int, int], ...]) -> Iterator[AtomMapping]:
        if i == len(source):
            if entries:
                yield AtomMapping(source, target, entries)
            return
        yield from walk(i + 1, entries)
        for j in options[i]:
            yield from walk(i + 1, entries + ((i, j),))

    return walk(0, ())
