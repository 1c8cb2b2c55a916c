"""Random and synthetic rule sets for tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .model import Atom, Rule, Term, const, var
from .parser import RuleSet, parse_rules

VAR_POOL = ("x", "y", "z")
EXISTENTIAL_POOL = ("v", "w")


@dataclass(frozen=True)
class Shape:
    """Size bounds for random rules."""

    max_body: int = 3
    max_head: int = 3
    max_arity: int = 2
    predicates: int = 3
    max_existentials: int = 1
    constant_rate: float = 0.05
    constants: Tuple[str, ...] = ("c",)


def random_signature(rng: random.Random, shape: Shape, prefix: str = "p") -> Dict[str, int]:
    return {f"{prefix}{i}": rng.randint(1, shape.max_arity) for i in range(shape.predicates)}


def _atom(rng: random.Random, sig: Dict[str, int], pool: List[Term]) -> Atom:
    pred = rng.choice(sorted(sig))
    return Atom(pred, tuple(rng.choice(pool) for _ in range(sig[pred])))


def random_rule(
    rng: random.Random,
    shape: Shape = Shape(),
    sig: Optional[Dict[str, int]] = None,
    rule_id: int = 0,
) -> Rule:
    sig = sig or random_signature(rng, shape)
    consts = [const(c) for c in shape.constants]
    while True:
        pool = [var(n) for n in VAR_POOL]
        body_pool = pool + (consts if rng.random() < shape.constant_rate * 4 else [])
        body = [_atom(rng, sig, body_pool) for _ in range(rng.randint(1, shape.max_body))]
        universal = sorted({t for a in body for t in a.args if t.is_var})
        k = rng.randint(0, shape.max_existentials)
        head_pool = universal + [var(n) for n in EXISTENTIAL_POOL[:k]]
        if rng.random() < shape.constant_rate:
            head_pool += consts
        if not head_pool:
            continue
        head = [_atom(rng, sig, head_pool) for _ in range(rng.randint(1, shape.max_head))]
        return Rule(rule_id, tuple(body), tuple(head))


def random_pair(rng: random.Random, shape: Shape = Shape(), same_rate: float = 0.2) -> Tuple[Rule, Rule]:
    """Two rules over one signature; with probability ``same_rate`` the same rule twice."""
    sig = random_signature(rng, shape)
    r1 = random_rule(rng, shape, sig, 0)
    if rng.random() < same_rate:
        return r1, r1
    return r1, random_rule(rng, shape, sig, 1)


def random_ruleset(rng: random.Random, n_rules: int, shape: Shape = Shape()) -> RuleSet:
    sig = random_signature(rng, shape)
    return RuleSet.of(random_rule(rng, shape, sig) for _ in range(n_rules))


FAMILY_TEMPLATE = """
{p}a(?x) -> {p}r(?x, ?v), {p}b(?v) .
{p}r(?x, ?y), {p}r(?y, ?z) -> {p}r(?x, ?z) .
{p}r(?y, ?z1), {p}r(?y, ?z2) -> {p}t(?z1, ?z2) .
{p}a(?t), {p}r(?t, ?u) -> {p}b(?u) .
{p}b(?x) -> {p}s(?x, ?v), {p}s(?v, ?x) .
{p}s(?x, ?y) -> {p}r(?y, ?x) .
{p}t(?x, ?y) -> {p}q(?x, ?y, ?v) .
{p}q(?x, ?y, ?z) -> {p}a(?x) .
{p}r(?y, ?y) -> {p}r(?y, ?w), {p}b(?w) .
{p}r(?x, ?y) -> {p}m(?x, ?x, ?y) .
"""

CHAIN_TEMPLATES = (
    "{a}(?x, ?y) -> {b}(?y, ?v) .",
    "{a}(?x, ?y) -> {b}(?y, ?x) .",
    "{a}(?x, ?y), {a}(?y, ?z) -> {b}(?x, ?z) .",
    "{a}(?x, ?y) -> {b}(?x, ?v), {b}(?v, ?v) .",
)


def synthetic_ruleset(n_rules: int = 1000, families: int = 10, chains: int = 9) -> RuleSet:
    """``families`` renamed copies of one template plus rules arranged in chains.

    Every family is the same rule structure over its own predicates, and chain
    links repeat a few shapes, so the abstraction cache has work to share.
    """
    lines: List[str] = []
    for f in range(families):
        lines.append(FAMILY_TEMPLATE.format(p=f"f{f}_"))
    rules = parse_rules("".join(lines)).rules
    remaining = max(0, n_rules - len(rules))
    chain_lines = []
    per_chain = -(-remaining // chains) if chains else 0
    made = 0
    for c in range(chains):
        for i in range(per_chain):
            if made == remaining:
                break
            tmpl = CHAIN_TEMPLATES[(c + i) % len(CHAIN_TEMPLATES)]
            chain_lines.append(tmpl.format(a=f"c{c}_{i}", b=f"c{c}_{i + 1}"))
            made += 1
    rules = rules + parse_rules("\n".join(chain_lines)).rules
    return RuleSet.of(rules[:n_rules])
