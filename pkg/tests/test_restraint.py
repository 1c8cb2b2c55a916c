import random

from hypothesis import given, settings, strategies as st

from reliances.model import Atom, Rule, var
from reliances.oracle import oracle_restraint
from reliances.restraint import (
    RestraintCheck,
    SelfRestraintCheck,
    check_square,
    check_square_self,
    extend_square,
    restrains,
)
from reliances.synthetic import Shape, random_pair
from reliances.unification import rename_apart

from conftest import COLLAPSE, EXAMPLE1, EXAMPLE2, SWAP, TRANSITIVITY, rule, rules


def search(r1, r2, **kw):
    a, b = rename_apart(r1, r2)
    return RestraintCheck(a, b, **kw)


def test_example2():
    r1, r2 = rules(EXAMPLE2)
    assert restrains(r1, r2)
    a, b = rename_apart(r1, r2)
    assert extend_square(a, b)
    assert not restrains(r2, r1)


def test_example2_mapping_passes_every_guard():
    r1, r2 = rules(EXAMPLE2)
    s = search(r1, r2)
    s.trace = []
    m = s.mapping((0, 0))
    eta = s.unify(m)
    assert check_square(s.r1, s.r2, m, eta)
    assert s.check(m, eta)
    assert s.trace == [("found", ((0, 0),))]


def test_collapse_example():
    r1, r2 = rules(COLLAPSE)
    assert restrains(r1, r2)


def test_example1_restraint():
    r1, r2, r3 = rules(EXAMPLE1)
    assert restrains(r3, r1)
    assert not restrains(r1, r1)


def test_transitivity_restrains_existential_rule():
    r1, r2 = rules(TRANSITIVITY)
    assert restrains(r2, r1)
    assert not restrains(r1, r2)


def test_swap_single_mapping_rejected_as_existing_alternative_match():
    r1, r2 = rules(SWAP)
    s = search(r1, r2)
    s.trace = []
    s.guided = False
    m = s.mapping((0, 0))
    assert not s.check(m, s.unify(m))
    assert s.trace == [("alt-match-exists", ((0, 0),))]


def test_swap_pair_overall():
    # Mapping both head atoms of the second rule onto r(x,y,x,y) is a restraint.
    r1, r2 = rules(SWAP)
    trace = []
    assert restrains(r1, r2, trace=trace)
    assert trace == [("alt-match-exists", ((0, 0),)), ("found", ((0, 0), (1, 0)))]
    assert oracle_restraint(r1, r2)


def test_left_null_guard():
    r1 = rule("a(?x) -> p(?x, ?n), q(?n) .")
    r2 = rule("b(?y) -> q(?v), p(?y, ?v) .")
    s = search(r1, r2)
    s.trace = []
    m = s.mapping((1, 0))
    assert not s.check(m, s.unify(m))
    assert s.trace == [("left-null", ((1, 0),))]


def test_universal_null_guard():
    r1 = rule("a(?x) -> p(?n) .")
    r2 = rule("b(?y) -> p(?y), q(?v) .")
    s = search(r1, r2, trace=[])
    m = s.mapping((0, 0))
    assert not s.check(m, s.unify(m))
    assert s.trace == [("universal-null", ((0, 0),))]


def test_datalog_second_rule_never_restrained():
    r = rule("a(?x) -> b(?x) .")
    e = rule("c(?x) -> b(?x), d(?v) .")
    assert not restrains(e, r)
    assert not restrains(r, r)


def test_self_restraint():
    assert restrains(*[rule("a(?x) -> r(?x, ?v), r(?x, ?x) .")] * 2)
    assert not restrains(*[rule("a(?x) -> r(?x, ?v) .")] * 2)
    r = rule("a(?x) -> r(?x, ?v), r(?x, ?x) .")
    assert SelfRestraintCheck(r).run()
    a, b = rename_apart(r, r)
    assert not RestraintCheck(a, b).run()


def test_self_restraint_same_nulls_guard():
    r = rule("a(?x) -> r(?x, ?v), r(?x, ?x) .")
    s = SelfRestraintCheck(r, trace=[])
    m = s.mapping((0, 0))
    assert not check_square_self(r, m, s.unify(m))
    assert not s.check(m, s.unify(m))
    assert s.trace == [("same-nulls", ((0, 0),))]


SHAPE = Shape()


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_oracle(seed):
    r1, r2 = random_pair(random.Random(seed), SHAPE)
    expected = oracle_restraint(r1, r2)
    assert restrains(r1, r2) == expected
    assert restrains(r1, r2, guided=False) == expected
    assert restrains(r1, r2, hard_stops=False) == expected
    if expected:
        assert r2.existential_vars


def _rename(r, suffix):
    ren = {t: var(t.name + suffix) for t in r.variables()}
    sub = lambda atoms: tuple(Atom(a.predicate, tuple(ren.get(t, t) for t in a.args)) for a in atoms)
    return Rule(r.id, sub(r.body), sub(r.head))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_invariant_under_renaming_and_permutation(seed, shuffler):
    r1, r2 = random_pair(random.Random(seed), SHAPE)
    base = restrains(r1, r2)

    def perturb(r, suffix):
        body, head = list(r.body), list(r.head)
        shuffler.shuffle(body)
        shuffler.shuffle(head)
        return _rename(Rule(r.id, tuple(body), tuple(head)), suffix)

    p1 = perturb(r1, "a")
    p2 = p1 if r1 == r2 else perturb(r2, "b")
    assert restrains(p1, p2) == base
