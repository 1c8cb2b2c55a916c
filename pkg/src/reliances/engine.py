"""All-pairs computation of positive reliances and restraints.

Variants switch two groups of optimisations on and off:

* local (``L``): the guided check-and-extend search instead of enumerating
  every atom mapping;
* global (``G``): a predicate index that skips pairs which cannot interact,
  and a cache that decides structurally identical pairs once.

``N`` uses neither, ``A`` uses both. Verdicts never depend on the variant.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from .model import Rule
from .parser import RuleSet, format_rule
from .positive import positively_relies
from .restraint import restrains
from .search import PairTimeout

POSITIVE = "positive"
RESTRAINT = "restraint"
KINDS = (POSITIVE, RESTRAINT)

Edge = Tuple[int, int, str]


@dataclass(frozen=True)
class Variant:
    name: str
    guided: bool
    global_opts: bool


VARIANTS: Dict[str, Variant] = {
    "N": Variant("N", guided=False, global_opts=False),
    "L": Variant("L", guided=True, global_opts=False),
    "G": Variant("G", guided=False, global_opts=True),
    "A": Variant("A", guided=True, global_opts=True),
}


@dataclass(frozen=True)
class AnalysisOptions:
    """``pair_timeout`` is in seconds; ``None`` disables it."""

    variant: str = "A"
    kinds: Tuple[str, ...] = KINDS
    pair_timeout: Optional[float] = None
    worker_count: int = 1

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of N, L, G, A")
        kinds = tuple(dict.fromkeys(self.kinds))
        for k in kinds:
            if k not in KINDS:
                raise ValueError(f"unknown reliance kind {k!r}")
        object.__setattr__(self, "kinds", kinds)
        if self.pair_timeout is not None and self.pair_timeout <= 0:
            raise ValueError("pair_timeout must be positive")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")


@dataclass
class AnalysisReport:
    rules: RuleSet
    variant: str
    kinds: Tuple[str, ...]
    edges: FrozenSet[Edge] = frozenset()
    unknown: FrozenSet[Edge] = frozenset()
    pair_times: Dict[Edge, float] = field(default_factory=dict)
    cache_hits: int = 0
    cache_misses: int = 0
    pairs_total: int = 0
    candidates: int = 0
    elapsed: float = 0.0

    def edges_of(self, kind: str) -> List[Tuple[int, int]]:
        return sorted((a, b) for a, b, k in self.edges if k == kind)

    def unknown_of(self, kind: str) -> List[Tuple[int, int]]:
        return sorted((a, b) for a, b, k in self.unknown if k == kind)

    def stats(self, timings: bool = True) -> dict:
        out = {
            "variant": self.variant,
            "kinds": list(self.kinds),
            "rules": len(self.rules),
            "pairs_total": self.pairs_total,
            "candidates": self.candidates,
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
            "edges": len(self.edges),
            "unknown": len(self.unknown),
        }
        if timings:
            out["elapsed_ms"] = round(self.elapsed * 1000, 3)
            out["max_pair_ms"] = round(max(self.pair_times.values(), default=0.0) * 1000, 3)
        return out

    def to_dict(self, timings: bool = True) -> dict:
        def edge_list(edges):
            return [{"from": a, "to": b, "kind": k} for a, b, k in _sorted_edges(edges)]

        return {
            "rules": [{"id": r.id, "text": format_rule(r)} for r in self.rules],
            "edges": edge_list(self.edges),
            "unknown": edge_list(self.unknown),
            "stats": self.stats(timings),
        }

    def to_json(self, timings: bool = True, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(timings), indent=indent)


def _sorted_edges(edges) -> List[Edge]:
    return sorted(edges, key=lambda e: (KINDS.index(e[2]), e[0], e[1]))


class PredicateIndex:
    """Rule ids per predicate, separately for heads and bodies."""

    def __init__(self, rs: RuleSet) -> None:
        self.head_index: Dict[str, Set[int]] = {}
        self.body_index: Dict[str, Set[int]] = {}
        for r in rs:
            for a in r.head:
                self.head_index.setdefault(a.predicate, set()).add(r.id)
            for a in r.body:
                self.body_index.setdefault(a.predicate, set()).add(r.id)

    def partners(self, rule: Rule, kind: str) -> Set[int]:
        """Rules that ``rule`` may reach through its head predicates."""
        index = self.body_index if kind == POSITIVE else self.head_index
        out: Set[int] = set()
        for a in rule.head:
            out |= index.get(a.predicate, set())
        return out


def candidate_pairs(
    rs: RuleSet, kind: str, index: Optional[PredicateIndex] = None
) -> Iterator[Tuple[int, int]]:
    """Pairs ``(r1, r2)`` where a head predicate of ``r1`` occurs in the body
    (positive) or head (restraint) of ``r2``, in lexicographic order."""
    if kind not in KINDS:
        raise ValueError(f"unknown reliance kind {kind!r}")
    index = index or PredicateIndex(rs)
    for r1 in rs:
        for r2 in sorted(index.partners(r1, kind)):
            yield r1.id, r2


def abstraction_key(r1: Rule, r2: Rule, kind: str) -> bytes:
    """Encoding of a rule pair up to renaming of predicates, constants and variables.

    Predicates and constants are numbered by first occurrence across both
    rules; variables are numbered per rule. Arity and atom order are kept.
    Whether both sides are the very same rule is part of the key, since a
    rule paired with itself is also checked for restraining itself.
    """
    preds: Dict[str, int] = {}
    consts: Dict[object, int] = {}
    parts: List[object] = [kind, r1 == r2]
    for r in (r1, r2):
        variables: Dict[object, int] = {}
        for side in (r.body, r.head):
            enc = []
            for a in side:
                args = []
                for t in a.args:
                    if t.is_var:
                        args.append(("v", variables.setdefault(t.name, len(variables))))
                    else:
                        args.append(("c", consts.setdefault(t.name, len(consts))))
                enc.append((preds.setdefault(a.predicate, len(preds)), tuple(args)))
            parts.append(tuple(enc))
    return repr(tuple(parts)).encode()


def decide(r1: Rule, r2: Rule, kind: str, *, guided: bool = True, deadline: Optional[float] = None) -> bool:
    if kind == POSITIVE:
        return positively_relies(r1, r2, guided=guided, deadline=deadline)
    if kind == RESTRAINT:
        return restrains(r1, r2, guided=guided, deadline=deadline)
    raise ValueError(f"unknown reliance kind {kind!r}")


Job = Tuple[Rule, Rule, str, bool, Optional[float]]


def _run_job(job: Job) -> Tuple[Optional[bool], float]:
    r1, r2, kind, guided, timeout = job
    start = time.monotonic()
    deadline = start + timeout if timeout is not None else None
    try:
        verdict: Optional[bool] = decide(r1, r2, kind, guided=guided, deadline=deadline)
    except PairTimeout:
        verdict = None
    return verdict, time.monotonic() - start


def _run_jobs(jobs: Sequence[Job], workers: int) -> List[Tuple[Optional[bool], float]]:
    if workers <= 1 or len(jobs) < 2:
        return [_run_job(j) for j in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs, chunksize=chunk))


def compute_reliances(rs: RuleSet, opts: Optional[AnalysisOptions] = None) -> AnalysisReport:
    """Decide every requested reliance between the rules of ``rs``.

    Pairs that run past ``opts.pair_timeout`` are reported as unknown. With
    the cache enabled, pairs sharing an abstraction key are decided once in
    the parent process before dispatch, so hit counts do not depend on the
    number of workers.
    """
    opts = opts or AnalysisOptions()
    variant = VARIANTS[opts.variant]
    start = time.perf_counter()
    n = len(rs)
    index = PredicateIndex(rs) if variant.global_opts else None

    pairs: List[Edge] = []
    for kind in opts.kinds:
        if index is not None:
            pairs.extend((a, b, kind) for a, b in candidate_pairs(rs, kind, index))
        else:
            pairs.extend((a, b, kind) for a in range(n) for b in range(n))

    groups: Dict[object, List[Edge]] = {}
    for e in pairs:
        a, b, kind = e
        key = abstraction_key(rs[a], rs[b], kind) if variant.global_opts else e
        groups.setdefault(key, []).append(e)

    reps = [members[0] for members in groups.values()]
    jobs = [(rs[a], rs[b], kind, variant.guided, opts.pair_timeout) for a, b, kind in reps]
    results = _run_jobs(jobs, opts.worker_count)

    edges: Set[Edge] = set()
    unknown: Set[Edge] = set()
    times: Dict[Edge, float] = {}
    for members, (verdict, secs) in zip(groups.values(), results):
        times[members[0]] = secs
        for e in members[1:]:
            times[e] = 0.0
        if verdict is None:
            unknown.update(members)
        elif verdict:
            edges.update(members)

    report = AnalysisReport(
        rules=rs,
        variant=variant.name,
        kinds=opts.kinds,
        edges=frozenset(edges),
        unknown=frozenset(unknown),
        pair_times=times,
        pairs_total=n * n * len(opts.kinds),
        candidates=len(pairs),
    )
    if variant.global_opts:
        report.cache_misses = len(groups)
        report.cache_hits = len(pairs) - len(groups)
    report.elapsed = time.perf_counter() - start
    return report
