"""Shared check-and-extend driver for the reliance and restraint searches."""

from __future__ import annotations

import time
from typing import FrozenSet, List, Optional, Tuple

from .model import Atom, Substitution, Term
from .unification import AtomMapping, all_mappings, unify


class PairTimeout(Exception):
    """Raised when a single pair check runs past its deadline."""


Trace = List[Tuple[str, Tuple[Tuple[int, int], ...]]]


class CheckExtend:
    """Search over atom mappings ``source -> target`` ordered by source index.

    Subclasses implement :meth:`check`, which returns ``True`` when the mapping
    witnesses the dependency, and otherwise either stops (``self.stop``) or
    continues with larger mappings (``self.more``).

    ``guided=False`` switches to plain enumeration of every mapping, where a
    check that would continue the search simply rejects the mapping.
    ``hard_stops=False`` turns every stop into a continuation; the verdict must
    not change, only the amount of work.
    """

    source: Tuple[Atom, ...]
    target: Tuple[Atom, ...]
    universal: FrozenSet[Term]

    def __init__(
        self,
        *,
        deadline: Optional[float] = None,
        trace: Optional[Trace] = None,
        guided: bool = True,
        hard_stops: bool = True,
    ) -> None:
        self.deadline = deadline
        self.trace = trace
        self.guided = guided
        self.hard_stops = hard_stops
        self.steps = 0

    def mapping(self, *entries: Tuple[int, int]) -> AtomMapping:
        return AtomMapping(self.source, self.target, tuple(entries))

    def unify(self, m: AtomMapping) -> Optional[Substitution]:
        return unify(m, self.universal)

    def check(self, m: AtomMapping, eta: Substitution) -> bool:
        raise NotImplementedError

    def run(self) -> bool:
        if self.guided:
            return self.extend(self.mapping())
        for m in all_mappings(self.source, self.target):
            self._tick()
            eta = self.unify(m)
            if eta is not None and self.check(m, eta):
                return True
        return False

    def extend(self, m: AtomMapping) -> bool:
        source, target = self.source, self.target
        for i in range(m.maxidx, len(source)):
            s = source[i]
            for j, t in enumerate(target):
                if s.predicate != t.predicate or s.arity != t.arity:
                    continue
                self._tick()
                m2 = m.extended(i, j)
                eta = self.unify(m2)
                if eta is not None and self.check(m2, eta):
                    return True
        return False

    def _tick(self) -> None:
        self.steps += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise PairTimeout()

    def _log(self, guard: str, m: AtomMapping) -> None:
        if self.trace is not None:
            self.trace.append((guard, m.entries))

    def found(self, guard: str, m: AtomMapping) -> bool:
        self._log(guard, m)
        return True

    def more(self, guard: str, m: AtomMapping) -> bool:
        self._log(guard, m)
        return self.extend(m) if self.guided else False

    def stop(self, guard: str, m: AtomMapping) -> bool:
        if not self.hard_stops:
            return self.more(guard, m)
        self._log(guard, m)
        return False
