"""Boolean conjunctive query entailment over small interpretations."""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple

from .model import NULL, VAR, Atom, Term


class Query(NamedTuple):
    """``exists bound_vars. atoms``; every variable of ``atoms`` must be bound."""

    atoms: Tuple[Atom, ...]
    bound_vars: FrozenSet[Term]

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "Query":
        atoms = tuple(atoms)
        return cls(atoms, frozenset(t for a in atoms for t in a.args if t.kind == VAR))


def _index(interp: Iterable[Atom]) -> Dict[str, List[Tuple[Term, ...]]]:
    index: Dict[str, List[Tuple[Term, ...]]] = {}
    for a in interp:
        index.setdefault(a.predicate, []).append(a.args)
    for facts in index.values():
        facts.sort()
    return index


def _candidates(
    a: Atom, binding: Dict[Term, Term], index: Dict[str, List[Tuple[Term, ...]]]
) -> List[Tuple[Term, ...]]:
    pattern = [binding.get(t, t) for t in a.args]
    out = []
    for args in index.get(a.predicate, ()):
        local: Dict[Term, Term] = {}
        for p, v in zip(pattern, args):
            if p.kind == VAR:
                seen = local.get(p)
                if seen is None:
                    local[p] = v
                elif seen != v:
                    break
            elif p != v:
                break
        else:
            out.append(args)
    return out


def _search(
    pending: List[Atom], binding: Dict[Term, Term], index: Dict[str, List[Tuple[Term, ...]]]
) -> bool:
    if not pending:
        return True
    best: Optional[int] = None
    best_cands: List[Tuple[Term, ...]] = []
    for k, a in enumerate(pending):
        cands = _candidates(a, binding, index)
        if not cands:
            return False
        if best is None or len(cands) < len(best_cands):
            best, best_cands = k, cands
            if len(cands) == 1:
                break
    chosen = pending[best]
    rest = pending[:best] + pending[best + 1 :]
    for args in best_cands:
        extended = dict(binding)
        for t, v in zip(chosen.args, args):
            if t.kind == VAR:
                extended[t] = v
        if _search(rest, extended, index):
            return True
    return False


def entails(interp: Iterable[Atom], q: Query) -> bool:
    """True iff some assignment of the bound variables maps every query atom into ``interp``.

    Constants and nulls in the query map to themselves.
    """
    facts = interp if isinstance(interp, (set, frozenset)) else frozenset(interp)
    pending = []
    for a in sorted(set(q.atoms)):
        if any(t.kind == VAR for t in a.args):
            pending.append(a)
        elif a not in facts:
            return False
    if not pending:
        return True
    return _search(pending, {}, _index(facts))


def entails_atoms(interp: Iterable[Atom], atoms: Iterable[Atom]) -> bool:
    """Entailment with every variable of ``atoms`` existentially quantified."""
    return entails(interp, Query.of(atoms))


def contains_null(atoms: Iterable[Atom]) -> bool:
    return any(t.kind == NULL for a in atoms for t in a.args)
