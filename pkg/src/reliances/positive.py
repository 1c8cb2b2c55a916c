"""Positive reliances: can applying ``r1`` enable a new, unsatisfied match of ``r2``?

The search maps a growing subset of ``body(r2)`` onto ``head(r1)`` (with the
existential variables of ``r1`` already replaced by nulls), unifies, and
builds the two interpretations before and after the application of ``r1``
from the unifier.
"""

from __future__ import annotations

from typing import Optional

from .homomorphism import contains_null, entails_atoms
from .model import Rule, Substitution, apply_atoms, compose, restrict_universal
from .search import CheckExtend, Trace
from .unification import AtomMapping, make_omega, rename_apart


class PositiveCheck(CheckExtend):
    """Search for ``r1`` positively relying into ``r2``; rules must not share variables."""

    def __init__(self, r1: Rule, r2: Rule, **kwargs) -> None:
        super().__init__(**kwargs)
        if r1.variables() & r2.variables():
            raise ValueError("rules must be renamed apart")
        self.r1, self.r2 = r1, r2
        self.omega = make_omega(r1, r2)
        self.omega_all = self.omega.forall
        self.existential = self.omega.existential
        self.universal = self.omega.universal
        self.source = r2.body
        self.target = apply_atoms(self.omega.exists, r1.head)

    def check(self, m: AtomMapping, eta: Substitution) -> bool:
        r1, r2 = self.r1, self.r2
        _, left, right = m.partition()
        if contains_null(apply_atoms(eta, r1.body)):
            return self.stop("body1-null", m)
        if contains_null(apply_atoms(eta, left)):
            return self.stop("left-null", m)
        if contains_null(apply_atoms(eta, right)):
            return self.more("right-null", m)

        eta_omega = compose(eta, self.omega.map)
        eta_u_omega_u = compose(restrict_universal(eta, self.existential), self.omega_all)
        before = frozenset(apply_atoms(eta_omega, r1.body + left + right))
        if entails_atoms(before, apply_atoms(eta_u_omega_u, r1.head)):
            return self.more("rho1-satisfied", m)
        if before.issuperset(apply_atoms(eta_omega, r2.body)):
            return self.more("already-matched", m)
        after = before.union(apply_atoms(eta_omega, r1.head))
        if entails_atoms(after, apply_atoms(eta_u_omega_u, r2.head)):
            return self.stop("rho2-satisfied", m)
        return self.found("found", m)


def extend_plus(r1: Rule, r2: Rule, m: Optional[AtomMapping] = None, **kwargs) -> bool:
    """Run the guided search from ``m`` (empty by default) on renamed-apart rules."""
    search = PositiveCheck(r1, r2, **kwargs)
    return search.extend(m if m is not None else search.mapping())


def check_plus(r1: Rule, r2: Rule, m: AtomMapping, eta: Substitution, **kwargs) -> bool:
    return PositiveCheck(r1, r2, **kwargs).check(m, eta)


def positively_relies(
    r1: Rule,
    r2: Rule,
    *,
    guided: bool = True,
    deadline: Optional[float] = None,
    trace: Optional[Trace] = None,
    hard_stops: bool = True,
) -> bool:
    """Decide whether ``r2`` positively relies on ``r1``.

    ``r1`` and ``r2`` may be the same rule; they are renamed apart first.
    """
    a, b = rename_apart(r1, r2)
    return PositiveCheck(
        a, b, guided=guided, deadline=deadline, trace=trace, hard_stops=hard_stops
    ).run()
