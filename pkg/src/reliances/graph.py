"""Dependency graphs over rule ids: acyclicity, core stratification, SCCs,
and splitting rule heads into pieces."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from .engine import KINDS, POSITIVE, RESTRAINT, AnalysisReport, Edge
from .model import Rule
from .parser import RuleSet, format_rule


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DependencyGraph:
    """Labelled edges between rule ids; ``unknown`` holds undecided pairs."""

    nodes: Tuple[int, ...]
    edges: FrozenSet[Edge] = frozenset()
    unknown: FrozenSet[Edge] = frozenset()

    def __post_init__(self) -> None:
        known = set(self.nodes)
        for a, b, kind in self.edges | self.unknown:
            if a not in known or b not in known:
                raise ValueError(f"edge ({a}, {b}) refers to a missing node")
            if kind not in KINDS:
                raise ValueError(f"unknown edge kind {kind!r}")

    @classmethod
    def from_report(cls, report: AnalysisReport) -> "DependencyGraph":
        return cls(tuple(r.id for r in report.rules), report.edges, report.unknown)

    @property
    def has_unknown(self) -> bool:
        return bool(self.unknown)

    def to_networkx(self, kinds: Iterable[str] = KINDS, include_unknown: bool = False) -> nx.DiGraph:
        kinds = set(kinds)
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        pool = self.edges | self.unknown if include_unknown else self.edges
        for a, b, kind in pool:
            if kind in kinds:
                g.add_edge(a, b)
        return g


def _has_cycle(g: nx.DiGraph) -> bool:
    if any(True for _ in nx.selfloop_edges(g)):
        return True
    return any(len(c) > 1 for c in nx.strongly_connected_components(g))


def _three_way(violated_known: bool, violated_all: bool) -> Verdict:
    if violated_known:
        return Verdict.NO
    return Verdict.UNKNOWN if violated_all else Verdict.YES


def is_positive_acyclic(g: DependencyGraph) -> Verdict:
    """Whether the positive edges form no directed cycle; self-loops count."""
    known = _has_cycle(g.to_networkx([POSITIVE]))
    everything = known or (g.has_unknown and _has_cycle(g.to_networkx([POSITIVE], True)))
    return _three_way(known, everything)


def _restraint_in_scc(g: DependencyGraph, include_unknown: bool) -> Optional[Tuple[int, int]]:
    graph = g.to_networkx(KINDS, include_unknown)
    component: Dict[int, int] = {}
    for k, members in enumerate(nx.strongly_connected_components(graph)):
        for n in members:
            component[n] = k
    pool = g.edges | g.unknown if include_unknown else g.edges
    for a, b, kind in sorted(pool):
        if kind == RESTRAINT and component[a] == component[b]:
            return a, b
    return None


def stratification_witness(g: DependencyGraph) -> Optional[Tuple[int, int]]:
    """A known restraint edge ``(from, to)`` lying on a cycle, if any."""
    return _restraint_in_scc(g, False)


def is_core_stratified(g: DependencyGraph) -> Verdict:
    """Whether no cycle of the combined graph passes through a restraint edge."""
    known = _restraint_in_scc(g, False) is not None
    everything = known or (g.has_unknown and _restraint_in_scc(g, True) is not None)
    return _three_way(known, everything)


def sccs(
    g: DependencyGraph, kinds: Iterable[str] = KINDS, include_unknown: bool = True
) -> List[FrozenSet[int]]:
    """Strongly connected components in reverse topological order.

    If an edge leads from component ``A`` to a different component ``B``,
    then ``B`` is listed before ``A``. Ties are broken by smallest member.
    """
    graph = g.to_networkx(kinds, include_unknown)
    cond = nx.condensation(graph)
    members = cond.graph["mapping"]
    groups: Dict[int, List[int]] = {}
    for node, c in members.items():
        groups.setdefault(c, []).append(node)
    order = list(nx.lexicographical_topological_sort(cond, key=lambda c: min(groups[c])))
    return [frozenset(groups[c]) for c in reversed(order)]


def decompose_pieces(r: Rule) -> List[Rule]:
    """Split the head of ``r`` into pieces, one rule per piece with the same body.

    A piece is a maximal set of head atoms connected by shared existential
    variables. Output rules keep the id of ``r``.
    """
    head = r.head
    parent = list(range(len(head)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: Dict[object, int] = {}
    for i, a in enumerate(head):
        for t in a.args:
            if t in r.existential_vars:
                j = owner.setdefault(t, i)
                parent[find(i)] = find(j)
    pieces: Dict[int, List] = {}
    for i, a in enumerate(head):
        pieces.setdefault(find(i), []).append(a)
    if len(pieces) == 1:
        return [r]
    return [Rule(r.id, r.body, tuple(atoms)) for atoms in pieces.values()]


def decompose_ruleset(rs: RuleSet) -> Tuple[RuleSet, List[int]]:
    """Piece decomposition of every rule; also returns each new rule's source id."""
    out: List[Rule] = []
    origin: List[int] = []
    for r in rs:
        for piece in decompose_pieces(r):
            out.append(piece)
            origin.append(r.id)
    return RuleSet.of(out), origin


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: DependencyGraph, rs: RuleSet) -> str:
    lines = ["digraph reliances {", "  node [shape=box];"]
    for r in rs:
        lines.append(f"  r{r.id} [label={_dot_quote(format_rule(r))}];")
    for a, b, kind in sorted(g.edges, key=lambda e: (KINDS.index(e[2]), e[0], e[1])):
        style = "" if kind == POSITIVE else ' [style=dashed, label="R"]'
        lines.append(f"  r{a} -> r{b}{style};")
    for a, b, kind in sorted(g.unknown, key=lambda e: (KINDS.index(e[2]), e[0], e[1])):
        label = "?" if kind == POSITIVE else "R?"
        lines.append(f'  r{a} -> r{b} [style=dotted, label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_summary(report: AnalysisReport, timings: bool = True) -> dict:
    """The report's JSON document plus whichever graph verdicts it supports."""
    out = report.to_dict(timings)
    g = DependencyGraph.from_report(report)
    if RESTRAINT in report.kinds and POSITIVE in report.kinds:
        out["stratified"] = is_core_stratified(g).value
    if POSITIVE in report.kinds:
        out["positive_acyclic"] = is_positive_acyclic(g).value
    return out
