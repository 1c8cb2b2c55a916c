import random

import pytest
from hypothesis import given, settings, strategies as st

from reliances.engine import POSITIVE, AnalysisOptions, compute_reliances
from reliances.graph import DependencyGraph
from reliances.mfa import (
    STAR,
    MfaLimits,
    MfaVerdict,
    SkolemTerm,
    critical_instance,
    is_mfa,
    mfa_by_components,
)
from reliances.model import atom, const
from reliances.parser import RuleSet, load_rules, parse_rules
from reliances.synthetic import Shape, random_ruleset

from conftest import EXAMPLE1, SAMPLES


def components_verdict(rs, limits=MfaLimits()):
    g = DependencyGraph.from_report(compute_reliances(rs, AnalysisOptions(kinds=(POSITIVE,))))
    return mfa_by_components(rs, g, limits)


def test_critical_instance():
    rs = parse_rules("a(?x) -> r(?x, ?v) .")
    assert critical_instance(rs) == {atom("a", STAR), atom("r", STAR, STAR)}
    assert critical_instance(RuleSet()) == frozenset()
    assert len(critical_instance(parse_rules(EXAMPLE1))) == 4


def test_critical_instance_includes_rule_constants():
    rs = parse_rules("a(k) -> b(?v) .")
    assert critical_instance(rs) == {
        atom("a", STAR), atom("a", const("k")), atom("b", STAR), atom("b", const("k"))
    }


def test_skolem_terms():
    f = SkolemTerm((0, "v"), (STAR,))
    ff = SkolemTerm((0, "v"), (f,))
    g = SkolemTerm((1, "w"), (f,))
    assert f.depth == 1 and ff.depth == 2 and g.depth == 2
    assert ff.is_cyclic and not g.is_cyclic and not f.is_cyclic
    assert f == SkolemTerm((0, "v"), (STAR,))
    assert str(ff) == "f0_v(f0_v(*))"


def test_examples():
    assert is_mfa(parse_rules("a(?x) -> r(?x, ?v) .")).verdict == MfaVerdict.MFA
    res = is_mfa(parse_rules("a(?x) -> r(?x, ?v), a(?v) ."))
    assert res.verdict == MfaVerdict.NOT_MFA
    assert res.witness.depth == 2
    assert str(res.witness) == "f0_v(f0_v(*))"
    assert is_mfa(parse_rules("r(?x, ?y), r(?y, ?z) -> r(?x, ?z) .")).verdict == MfaVerdict.MFA


def test_limits():
    rs = parse_rules("a(?x) -> r(?x, ?v) . r(?x, ?y) -> s(?y, ?w) .")
    assert is_mfa(rs).verdict == MfaVerdict.MFA
    assert is_mfa(rs, MfaLimits(depth=1)).verdict == MfaVerdict.RESOURCE_EXCEEDED
    assert is_mfa(rs, MfaLimits(facts=3)).verdict == MfaVerdict.RESOURCE_EXCEEDED


def test_by_components_examples():
    res = components_verdict(parse_rules(EXAMPLE1))
    assert res.verdict == MfaVerdict.MFA and res.components == 3
    res = components_verdict(parse_rules("a(?x) -> r(?x, ?v), a(?v) ."))
    assert res.verdict == MfaVerdict.NOT_MFA and res.components == 1
    res = components_verdict(parse_rules("a(?x) -> b(?x, ?v) . b(?x, ?y) -> c(?y) . p(?x) -> q(?x, ?v) ."))
    assert res.verdict == MfaVerdict.MFA and res.components >= 2


def test_unknown_edges_fall_back_to_whole_set():
    rs = parse_rules(EXAMPLE1)
    g = DependencyGraph((0, 1, 2), frozenset(), frozenset({(0, 1, POSITIVE)}))
    res = mfa_by_components(rs, g)
    assert res.verdict == MfaVerdict.MFA and res.components == 1


@pytest.mark.parametrize("path", sorted(SAMPLES.glob("*.erls")), ids=lambda p: p.stem)
def test_components_agree_on_samples(path):
    rs = load_rules(path)
    assert components_verdict(rs).verdict == is_mfa(rs).verdict


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_component_cycles_are_whole_set_cycles(seed, n):
    # A component's chase embeds into the whole chase, so "no" carries over.
    rs = random_ruleset(random.Random(seed), n, Shape(predicates=4))
    limits = MfaLimits(depth=6, facts=20_000)
    whole = is_mfa(rs, limits)
    parts = components_verdict(rs, limits)
    if parts.verdict == MfaVerdict.NOT_MFA:
        assert whole.verdict == MfaVerdict.NOT_MFA


# The positive reliance graph follows the standard chase, where a re-derived
# fact whose consequences already hold triggers nothing. The Skolem chase
# fires regardless, so a cycle can run through a pair with no positive edge.
SATISFIED_LOOP = """
p0(?x) -> p0(?x), p2(?v) .
p2(?x) -> p2(?x), p1(?x, ?x) .
p1(?y, ?y), p2(?y) -> p2(?y), p0(?y) .
"""


def test_isolated_components_can_miss_cycles():
    rs = parse_rules(SATISFIED_LOOP)
    assert is_mfa(rs).verdict == MfaVerdict.NOT_MFA
    parts = components_verdict(rs)
    assert parts.components == 3
    assert parts.verdict == MfaVerdict.MFA


def test_component_disagreement_rate_is_reported():
    rng = random.Random(7)
    limits = MfaLimits(depth=6, facts=20_000)
    compared = disagree = whole_steps = part_steps = 0
    for _ in range(150):
        rs = random_ruleset(rng, rng.randint(1, 6), Shape(predicates=4))
        whole, parts = is_mfa(rs, limits), components_verdict(rs, limits)
        if MfaVerdict.RESOURCE_EXCEEDED in (whole.verdict, parts.verdict):
            continue
        compared += 1
        disagree += whole.verdict != parts.verdict
        if whole.verdict == parts.verdict == MfaVerdict.MFA:
            whole_steps += whole.steps
            part_steps += parts.steps
    print(
        f"component-wise MFA: {disagree}/{compared} disagreements; "
        f"chase steps whole={whole_steps} components={part_steps}"
    )
    assert compared > 100


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.randoms(use_true_random=False))
def test_verdict_independent_of_rule_order(seed, shuffler):
    rs = random_ruleset(random.Random(seed), 5, Shape(predicates=4))
    rules = list(rs)
    shuffler.shuffle(rules)
    limits = MfaLimits(depth=6, facts=20_000)
    assert is_mfa(rs, limits).verdict == is_mfa(RuleSet.of(rules), limits).verdict
