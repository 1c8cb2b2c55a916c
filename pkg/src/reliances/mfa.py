"""Model-faithful acyclicity by a Skolem chase of the critical instance.

The chase is semi-oblivious: each rule fires once per assignment of its
frontier, and existential variables become Skolem terms over the frontier
values. A rule set is MFA when this chase never builds a term that nests a
Skolem function inside itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

from .graph import DependencyGraph, sccs
from .engine import POSITIVE
from .model import CONST, Atom, Rule, Term, const
from .parser import RuleSet

STAR = const("*")


@dataclass(frozen=True)
class SkolemTerm:
    """``function(args)``; ``function`` names a rule id and existential variable."""

    function: Tuple[int, str]
    args: Tuple["GroundTerm", ...]
    depth: int = field(init=False, compare=False)
    functions: FrozenSet[Tuple[int, str]] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        depth, funcs = 0, {self.function}
        for a in self.args:
            if isinstance(a, SkolemTerm):
                depth = max(depth, a.depth)
                funcs |= a.functions
        object.__setattr__(self, "depth", depth + 1)
        object.__setattr__(self, "functions", frozenset(funcs))

    @property
    def is_cyclic(self) -> bool:
        return any(isinstance(a, SkolemTerm) and self.function in a.functions for a in self.args)

    def __str__(self) -> str:
        rid, v = self.function
        return f"f{rid}_{v}({', '.join(map(str, self.args))})"


GroundTerm = Union[Term, SkolemTerm]
Fact = Tuple[str, Tuple[GroundTerm, ...]]


class MfaVerdict(str, Enum):
    MFA = "mfa"
    NOT_MFA = "not_mfa"
    RESOURCE_EXCEEDED = "resource_exceeded"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MfaLimits:
    depth: int = 10
    facts: int = 1_000_000


@dataclass
class MfaResult:
    verdict: MfaVerdict
    steps: int = 0
    facts: int = 0
    depth: int = 0
    witness: Optional[SkolemTerm] = None
    components: int = 1

    def __str__(self) -> str:
        return str(self.verdict)


def critical_instance(rs: Union[RuleSet, Iterable[Rule]]) -> FrozenSet[Atom]:
    """Every atom over the predicates of ``rs`` whose arguments are ``*`` or rule constants."""
    rules = list(rs)
    arities: Dict[str, int] = {}
    consts: Set[Term] = {STAR}
    for r in rules:
        for a in r.body + r.head:
            arities[a.predicate] = a.arity
            consts.update(t for t in a.args if t.kind == CONST)
    terms = sorted(consts)
    return frozenset(
        Atom(p, args) for p, n in arities.items() for args in product(terms, repeat=n)
    )


class _FactStore:
    """Facts indexed by predicate and by (predicate, position, term)."""

    def __init__(self) -> None:
        self.facts: Set[Fact] = set()
        self.by_pred: Dict[str, List[Tuple[GroundTerm, ...]]] = {}
        self.by_pos: Dict[Tuple[str, int, GroundTerm], List[Tuple[GroundTerm, ...]]] = {}

    def add(self, pred: str, args: Tuple[GroundTerm, ...]) -> bool:
        key = (pred, args)
        if key in self.facts:
            return False
        self.facts.add(key)
        self.by_pred.setdefault(pred, []).append(args)
        for i, t in enumerate(args):
            self.by_pos.setdefault((pred, i, t), []).append(args)
        return True

    def candidates(self, a: Atom, binding: Dict[Term, GroundTerm]) -> List[Tuple[GroundTerm, ...]]:
        best = self.by_pred.get(a.predicate, [])
        for i, t in enumerate(a.args):
            v = binding.get(t, t) if t.is_var else t
            if isinstance(v, Term) and v.is_var:
                continue
            lst = self.by_pos.get((a.predicate, i, v), [])
            if len(lst) < len(best):
                best = lst
            if not best:
                break
        return best

    def __len__(self) -> int:
        return len(self.facts)


def _unify_atom(a: Atom, args: Tuple[GroundTerm, ...], binding: Dict[Term, GroundTerm]) -> Optional[Dict[Term, GroundTerm]]:
    out = binding
    for t, v in zip(a.args, args):
        if t.is_var:
            seen = out.get(t)
            if seen is None:
                if out is binding:
                    out = dict(binding)
                out[t] = v
            elif seen != v:
                return None
        elif t != v:
            return None
    return out if out is not binding else dict(binding)


def _matches(atoms: List[Atom], store: _FactStore, binding: Dict[Term, GroundTerm]) -> Iterator[Dict[Term, GroundTerm]]:
    if not atoms:
        yield binding
        return
    head, rest = atoms[0], atoms[1:]
    for args in store.candidates(head, binding):
        b = _unify_atom(head, args, binding)
        if b is not None:
            yield from _matches(rest, store, b)


def is_mfa(rs: Union[RuleSet, Iterable[Rule]], limits: MfaLimits = MfaLimits()) -> MfaResult:
    """Run the Skolem chase of the critical instance of ``rs``."""
    rules = list(rs)
    store = _FactStore()
    delta: List[Fact] = []
    for a in sorted(critical_instance(rules)):
        store.add(a.predicate, a.args)
        delta.append((a.predicate, a.args))
    fired: Set[Tuple[int, Tuple[GroundTerm, ...]]] = set()
    frontiers = {r.id: sorted(r.frontier) for r in rules}
    existentials = {r.id: sorted(r.existential_vars) for r in rules}
    steps, max_depth = 0, 0

    while delta:
        delta_store = _FactStore()
        for pred, args in delta:
            delta_store.add(pred, args)
        new: List[Fact] = []
        for r in rules:
            body = list(r.body)
            for k, pivot in enumerate(body):
                rest = body[:k] + body[k + 1 :]
                for args in delta_store.candidates(pivot, {}):
                    b0 = _unify_atom(pivot, args, {})
                    if b0 is None:
                        continue
                    for h in _matches(rest, store, b0):
                        fr = tuple(h[v] for v in frontiers[r.id])
                        trigger = (r.id, fr)
                        if trigger in fired:
                            continue
                        fired.add(trigger)
                        steps += 1
                        ext = dict(h)
                        for v in existentials[r.id]:
                            term = SkolemTerm((r.id, v.name), fr)
                            max_depth = max(max_depth, term.depth)
                            if term.is_cyclic:
                                return MfaResult(MfaVerdict.NOT_MFA, steps, len(store), term.depth, term)
                            if term.depth > limits.depth:
                                return MfaResult(MfaVerdict.RESOURCE_EXCEEDED, steps, len(store), term.depth)
                            ext[v] = term
                        for a in r.head:
                            fact_args = tuple(ext[t] if t.is_var else t for t in a.args)
                            if store.add(a.predicate, fact_args):
                                new.append((a.predicate, fact_args))
                                if len(store) > limits.facts:
                                    return MfaResult(
                                        MfaVerdict.RESOURCE_EXCEEDED, steps, len(store), max_depth
                                    )
        delta = new
    return MfaResult(MfaVerdict.MFA, steps, len(store), max_depth)


_PRIORITY = {MfaVerdict.NOT_MFA: 2, MfaVerdict.RESOURCE_EXCEEDED: 1, MfaVerdict.MFA: 0}


def mfa_by_components(
    rs: RuleSet, g: DependencyGraph, limits: MfaLimits = MfaLimits()
) -> MfaResult:
    """Check each SCC of the positive graph on its own.

    Each component is chased in isolation from its own critical instance.
    A graph with undecided pairs falls back to the whole set.
    """
    if g.has_unknown:
        result = is_mfa(rs, limits)
        result.components = 1
        return result
    components = sccs(g, [POSITIVE], include_unknown=False)
    total = MfaResult(MfaVerdict.MFA, components=len(components))
    for comp in components:
        part = is_mfa([rs[i] for i in sorted(comp)], limits)
        total.steps += part.steps
        total.facts += part.facts
        total.depth = max(total.depth, part.depth)
        if _PRIORITY[part.verdict] > _PRIORITY[total.verdict]:
            total.verdict = part.verdict
            total.witness = part.witness
        if total.verdict == MfaVerdict.NOT_MFA:
            break
    return total
