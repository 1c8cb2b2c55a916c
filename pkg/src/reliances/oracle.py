"""Brute-force decision of reliances straight from their definitions.

Nothing here shares code with the unification-based searches: matches are
enumerated as plain term assignments and satisfaction is checked by naive
product enumeration. The searches are exponential anyway; these are far worse
and are meant for small rules in tests.

Only the minimal interpretations need to be tried. Adding atoms to the
interpretation a rule is applied to can only make its match satisfied, and
every atom that must be present is forced by the match images. Pre-existing
nulls behave exactly like constants, so matches range over the rule constants
and a pool of fresh constants, enumerated up to renaming of the fresh ones.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .model import CONST, Atom, Rule, Term, const, null

FRESH_PREFIX = "\x01"


class OracleLimit(Exception):
    """Raised when the enumeration exceeds its step budget."""


class _Budget:
    def __init__(self, limit: Optional[int]) -> None:
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise OracleLimit(f"more than {self.limit} candidates")


def _ordered_vars(atoms: Iterable[Atom]) -> List[Term]:
    seen: Dict[Term, None] = {}
    for a in atoms:
        for t in a.args:
            if t.is_var:
                seen.setdefault(t, None)
    return list(seen)


def _rule_constants(*rules: Rule) -> List[Term]:
    out = {t for r in rules for a in r.body + r.head for t in a.args if t.kind == CONST}
    return sorted(out)


def _fresh(k: int) -> Term:
    return const(f"{FRESH_PREFIX}{k}")


def _assign(
    variables: Sequence[Term],
    fixed: Sequence[Term],
    fresh_used: int,
    budget: _Budget,
) -> Iterator[Tuple[Dict[Term, Term], int]]:
    """Assignments of ``variables`` to ``fixed`` terms or fresh constants.

    Fresh constants are introduced in order, so assignments that differ only
    by a renaming of fresh constants are produced once.
    """
    def walk(i: int, acc: Dict[Term, Term], used: int):
        if i == len(variables):
            budget.tick()
            yield dict(acc), used
            return
        v = variables[i]
        for t in list(fixed) + [_fresh(k) for k in range(used)]:
            acc[v] = t
            yield from walk(i + 1, acc, used)
        acc[v] = _fresh(used)
        yield from walk(i + 1, acc, used + 1)
        del acc[v]

    yield from walk(0, {}, fresh_used)


def _apply(h: Dict[Term, Term], atoms: Iterable[Atom]) -> FrozenSet[Atom]:
    return frozenset(Atom(a.predicate, tuple(h.get(t, t) for t in a.args)) for a in atoms)


def _terms(interp: Iterable[Atom]) -> Set[Term]:
    return {t for a in interp for t in a.args}


def _satisfied(rule: Rule, h: Dict[Term, Term], interp: FrozenSet[Atom], budget: _Budget) -> bool:
    """Whether the match ``h`` of ``rule`` extends to the head within ``interp``."""
    exist = sorted(rule.existential_vars)
    domain = sorted(_terms(interp))
    for values in product(domain, repeat=len(exist)):
        budget.tick()
        ext = dict(h)
        ext.update(zip(exist, values))
        if _apply(ext, rule.head) <= interp:
            return True
    return False


def _nulls_for(rule: Rule, start: int) -> Dict[Term, Term]:
    return {v: null(start + k) for k, v in enumerate(sorted(rule.existential_vars))}


def oracle_positive(r1: Rule, r2: Rule, limit: Optional[int] = 2_000_000) -> bool:
    """Decide ``r1 ≺+ r2`` by enumerating matches ``h1`` and ``h2``."""
    budget = _Budget(limit)
    consts = _rule_constants(r1, r2)
    n1 = _nulls_for(r1, 1)
    new_nulls = set(n1.values())
    vars1 = _ordered_vars(r1.body)
    vars2 = _ordered_vars(r2.body)
    for h1, used in _assign(vars1, consts, 0, budget):
        body1 = _apply(h1, r1.body)
        h1x = {**h1, **n1}
        head1 = _apply(h1x, r1.head)
        for h2, _ in _assign(vars2, consts + sorted(new_nulls), used, budget):
            body2 = _apply(h2, r2.body)
            ia = body1 | (body2 - head1)
            if new_nulls & _terms(ia):
                continue
            if body2 <= ia:
                continue
            if _satisfied(r1, h1, ia, budget):
                continue
            ib = ia | head1
            if not _satisfied(r2, h2, ib, budget):
                return True
    return False


def _restraint_two(r1: Rule, r2: Rule, budget: _Budget, literal: bool) -> bool:
    consts = _rule_constants(r1, r2)
    n2 = _nulls_for(r2, 1)
    n1 = _nulls_for(r1, len(n2) + 1)
    nulls2 = sorted(n2.values())
    nulls1 = set(n1.values())
    vars2 = _ordered_vars(r2.body)
    vars1 = _ordered_vars(r1.body)
    for h2, used2 in _assign(vars2, consts, 0, budget):
        ia_pre = _apply(h2, r2.body)
        if _satisfied(r2, h2, ia_pre, budget):
            continue
        head2 = _apply({**h2, **n2}, r2.head)
        ia = ia_pre | head2
        for h1, used1 in _assign(vars1, consts + nulls2, used2, budget):
            body1 = _apply(h1, r1.body)
            head1 = _apply({**h1, **n1}, r1.head)
            targets = consts + nulls2 + sorted(nulls1)
            for ha, _ in _assign(nulls2, targets, used1, budget):
                image = _apply(ha, head2)
                if all(n in _terms(image) for n in nulls2):
                    continue
                extra = image - head1
                if nulls1 & _terms(extra):
                    continue
                ib_pre = ia | body1 | extra
                if image <= (image - head1 if literal else ib_pre):
                    continue
                if not _satisfied(r1, h1, ib_pre, budget):
                    return True
    return False


def _restraint_self(r: Rule, budget: _Budget) -> bool:
    consts = _rule_constants(r)
    n = _nulls_for(r, 1)
    nulls = sorted(n.values())
    for h, used in _assign(_ordered_vars(r.body), consts, 0, budget):
        body = _apply(h, r.body)
        head = _apply({**h, **n}, r.head)
        for ha, _ in _assign(nulls, consts + nulls, used, budget):
            image = _apply(ha, head)
            if all(x in _terms(image) for x in nulls):
                continue
            extra = image - head
            if set(nulls) & _terms(extra):
                continue
            if not _satisfied(r, h, body | extra, budget):
                return True
    return False


def oracle_restraint(
    r1: Rule, r2: Rule, limit: Optional[int] = 2_000_000, *, literal: bool = False
) -> bool:
    """Decide ``r1 ≺□ r2``.

    The application of ``r2`` happens first and its result is contained in
    the interpretation ``r1`` is applied to. When ``r1`` and ``r2`` are the
    same rule, one application may also restrain itself.

    The alternative match must not already exist before ``r1`` is applied.
    With ``literal=True`` it must instead use some atom of ``h1'(head(r1))``
    even when that atom was present before, which differs exactly when the
    application of ``r1`` re-derives atoms it needs.
    """
    if r2.is_datalog:
        return False
    budget = _Budget(limit)
    if _restraint_two(r1, r2, budget, literal):
        return True
    return r1 == r2 and _restraint_self(r1, budget)
