"""Restraints: can applying ``r1`` create an alternative match for an earlier
application of ``r2``, making one of its nulls redundant?

Two searches are provided. :class:`RestraintCheck` handles two distinct rule
applications (``r2`` first, ``r1`` later) and maps ``head(r2)`` onto
``head(r1)``. :class:`SelfRestraintCheck` handles a single application of one
rule whose own head provides the alternative match, mapping ``head(r)`` onto
``head(r)`` with existentials replaced by nulls.
"""

from __future__ import annotations

from typing import Optional

from .homomorphism import entails_atoms
from .model import (
    NULL,
    Rule,
    Substitution,
    apply_atoms,
    compose,
    restrict_existential,
    restrict_universal,
)
from .search import CheckExtend, Trace
from .unification import AtomMapping, make_omega, rename_apart


def _maps_to_null(eta: Substitution, variables) -> bool:
    for v in variables:
        t = eta.get(v)
        if t is not None and t.kind == NULL:
            return True
    return False


def _existentials_in(atoms, existential):
    return {t for a in atoms for t in a.args if t in existential}


class RestraintCheck(CheckExtend):
    """Search for ``r1`` restraining ``r2`` through two distinct applications."""

    def __init__(self, r1: Rule, r2: Rule, **kwargs) -> None:
        super().__init__(**kwargs)
        if r1.variables() & r2.variables():
            raise ValueError("rules must be renamed apart")
        self.r1, self.r2 = r1, r2
        self.omega = make_omega(r1, r2)
        self.omega_all = self.omega.forall
        self.existential = self.omega.existential
        self.universal = self.omega.universal
        self.source = r2.head
        self.target = apply_atoms(self.omega.exists, r1.head)

    def check(self, m: AtomMapping, eta: Substitution) -> bool:
        r1, r2, ex = self.r1, self.r2, self.existential
        mapped, left, right = m.partition()
        if _maps_to_null(eta, self.universal):
            return self.stop("universal-null", m)
        if _maps_to_null(eta, _existentials_in(left, ex)):
            return self.stop("left-null", m)
        if _maps_to_null(eta, _existentials_in(right, ex)):
            return self.more("right-null", m)
        if not _existentials_in(mapped, ex):
            return self.more("no-existential", m)

        omega = self.omega.map
        eta_u = restrict_universal(eta, ex)
        eta_u_omega_u = compose(eta_u, self.omega_all)
        r2_before = frozenset(apply_atoms(eta_u_omega_u, r2.body))
        if entails_atoms(r2_before, apply_atoms(eta_u_omega_u, r2.head)):
            return self.stop("rho2-satisfied", m)

        r2_after = r2_before.union(apply_atoms(compose(eta_u, omega), r2.head))
        eta_omega = compose(eta, omega)
        r1_before = r2_after.union(apply_atoms(eta_omega, r1.body + left + right))
        if entails_atoms(r1_before, apply_atoms(eta_u_omega_u, r1.head)):
            return self.more("rho1-satisfied", m)
        if r1_before.issuperset(apply_atoms(eta_omega, r2.head)):
            return self.more("alt-match-exists", m)
        return self.found("found", m)


class SelfRestraintCheck(CheckExtend):
    """Search for a single application of ``r`` that is its own alternative match."""

    def __init__(self, r: Rule, **kwargs) -> None:
        super().__init__(**kwargs)
        self.r = r
        self.omega = make_omega(r)
        self.omega_all = self.omega.forall
        self.existential = self.omega.existential
        self.universal = self.omega.universal
        self.source = r.head
        self.target = apply_atoms(self.omega.exists, r.head)

    def check(self, m: AtomMapping, eta: Substitution) -> bool:
        r, ex = self.r, self.existential
        _, left, right = m.partition()
        if apply_atoms(restrict_existential(eta, ex), r.head) == self.target:
            return self.stop("same-nulls", m)
        if _maps_to_null(eta, self.universal):
            return self.stop("universal-null", m)
        if _maps_to_null(eta, _existentials_in(left, ex)):
            return self.stop("left-null", m)
        if _maps_to_null(eta, _existentials_in(right, ex)):
            return self.more("right-null", m)

        eta_omega = compose(eta, self.omega.map)
        before = frozenset(apply_atoms(eta_omega, r.body + left + right))
        eta_u_omega_u = compose(restrict_universal(eta, ex), self.omega_all)
        if entails_atoms(before, apply_atoms(eta_u_omega_u, r.head)):
            return self.more("satisfied", m)
        return self.found("found", m)


def extend_square(r1: Rule, r2: Rule, m: Optional[AtomMapping] = None, **kwargs) -> bool:
    """Guided two-application search from ``m`` on renamed-apart rules."""
    search = RestraintCheck(r1, r2, **kwargs)
    return search.extend(m if m is not None else search.mapping())


def check_square(r1: Rule, r2: Rule, m: AtomMapping, eta: Substitution, **kwargs) -> bool:
    return RestraintCheck(r1, r2, **kwargs).check(m, eta)


def extend_square_self(r: Rule, m: Optional[AtomMapping] = None, **kwargs) -> bool:
    search = SelfRestraintCheck(r, **kwargs)
    return search.extend(m if m is not None else search.mapping())


def check_square_self(r: Rule, m: AtomMapping, eta: Substitution, **kwargs) -> bool:
    return SelfRestraintCheck(r, **kwargs).check(m, eta)


def restrains(
    r1: Rule,
    r2: Rule,
    *,
    guided: bool = True,
    deadline: Optional[float] = None,
    trace: Optional[Trace] = None,
    hard_stops: bool = True,
) -> bool:
    """Decide whether ``r1`` restrains ``r2``.

    When both arguments are the same rule, the single-application case is
    checked in addition to two applications of renamed copies.
    """
    if r2.is_datalog:
        return False
    opts = dict(guided=guided, deadline=deadline, trace=trace, hard_stops=hard_stops)
    a, b = rename_apart(r1, r2)
    if RestraintCheck(a, b, **opts).run():
        return True
    return r1 == r2 and SelfRestraintCheck(r1, **opts).run()
