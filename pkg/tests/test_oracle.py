import pytest

from reliances.oracle import OracleLimit, oracle_positive, oracle_restraint
from reliances.restraint import restrains

from conftest import EXAMPLE1, EXAMPLE2, INVERSE_ROLE, SWAP, TRANSITIVITY, rule, rules


def test_positive_examples():
    r1, r2, r3 = rules(EXAMPLE1)
    assert oracle_positive(r1, r2)
    assert not oracle_positive(r1, r3)
    assert not oracle_positive(rule("a(?x) -> b(?x) ."), rule("c(?x) -> d(?x) ."))
    _, trans = rules(TRANSITIVITY)
    assert oracle_positive(trans, trans)


def test_restraint_examples():
    r1, r2 = rules(EXAMPLE2)
    assert oracle_restraint(r1, r2)
    d = rule("a(?x) -> b(?x) .")
    assert not oracle_restraint(d, d)
    s = rule("a(?x) -> r(?x, ?v), r(?x, ?x) .")
    assert oracle_restraint(s, s)
    lone = rule("a(?x) -> r(?x, ?v) .")
    assert not oracle_restraint(lone, lone)


def test_swap_pair_is_a_restraint():
    r1, r2 = rules(SWAP)
    assert oracle_restraint(r1, r2)


def test_inverse_role_edges():
    r1, r2, r3 = rs = rules(INVERSE_ROLE)
    positive = {(i, j) for i, a in enumerate(rs) for j, b in enumerate(rs) if oracle_positive(a, b)}
    restraint = {(i, j) for i, a in enumerate(rs) for j, b in enumerate(rs) if oracle_restraint(a, b)}
    assert positive == {(0, 1)}
    assert restraint == {(2, 0)}


def test_literal_reading_differs_when_head_atoms_preexist():
    # p(x) is derived by the first rule but can already hold before it fires;
    # removing it from the later interpretation creates a spurious restraint.
    r1 = rule("q(?x, ?x), p(?x) -> r(?x, ?x), p(?x) .")
    r2 = rule("r(?z, ?x) -> p(?z), p(?v) .")
    assert oracle_restraint(r1, r2, literal=True)
    assert not oracle_restraint(r1, r2)
    assert not restrains(r1, r2)


def test_resource_guard():
    big = rule("p(?a, ?b), p(?b, ?c), p(?c, ?d), p(?d, ?e) -> p(?a, ?v), p(?v, ?e) .")
    with pytest.raises(OracleLimit):
        oracle_restraint(big, big, limit=1000)
    with pytest.raises(OracleLimit):
        oracle_positive(big, big, limit=1000)
