"""Proof enumeration and exact counting over a proof-space graph.

A proof picks exactly one inference parent for every non-given statement
it includes, starting from the conclusion and pulling in premises
transitively. Proof identity is that set of (statement, inference) picks;
the induced derivation relation must be acyclic, and its leaves must be
given statements.

Counting uses a memoized sum-of-products recursion when that is exact:
the graph must be acyclic and every statement consumed by more than one
inference must admit exactly one sub-proof (otherwise one shared choice
would be counted once per consumer). Everything else falls back to the
same exhaustive choice walk the enumerator uses, counting instead of
materializing, so the two agree by construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator

from .errors import CapExceededWarning
from .graph import HpdicGraph

DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class ProofTree:
    """One proof as a choice function. ``choice_pairs`` is the identity."""

    root: int
    choice_pairs: tuple[tuple[int, int], ...]   # (statement id, inference id), sorted
    included: frozenset[int] = field(compare=False)
    leaves: frozenset[int] = field(compare=False)
    sort_key: tuple = field(compare=False)
    topo: tuple[int, ...] = field(compare=False)

    @property
    def size(self) -> int:
        return len(self.choice_pairs)

    @property
    def chosen(self) -> dict[int, int]:
        return dict(self.choice_pairs)

    def contains(self, stmt_id: int) -> bool:
        return stmt_id in self.included


@dataclass(frozen=True)
class ProofForest:
    trees: tuple[ProofTree, ...]
    total: int
    truncated: bool


def _choice_walk(graph: HpdicGraph) -> Iterator[dict[int, int]]:
    """Depth-first generation of every valid choice function, in a fixed
    deterministic order. Cycles are rejected as soon as a pick would let a
    premise depend on its own consequence."""
    given = graph.given_ids()
    chosen: dict[int, int] = {}
    deps: dict[int, tuple[int, ...]] = {}   # statement -> chosen premise ids

    def reaches(src: int, target: int) -> bool:
        # can ``target`` be reached from ``src`` along chosen dependencies?
        stack = [src]
        seen = set()
        while stack:
            cur = stack.pop()
            if cur == target:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(deps.get(cur, ()))
        return False

    def walk(pending: frozenset[int]) -> Iterator[dict[int, int]]:
        if not pending:
            yield dict(chosen)
            return
        stmt = min(pending)
        rest = pending - {stmt}
        for inf_id in graph.parents_of(stmt):
            inf = graph.inferences[inf_id]
            premises = inf.premise_ids
            # A premise that already depends on ``stmt`` would close a cycle.
            if any(reaches(p, stmt) for p in premises):
                continue
            chosen[stmt] = inf_id
            deps[stmt] = premises
            new_pending = rest | {
                p for p in premises
                if p not in given and p not in chosen and p not in rest
            }
            yield from walk(new_pending)
            del chosen[stmt]
            del deps[stmt]

    yield from walk(frozenset([graph.conclusion_id]))


def _tree_from_choices(graph: HpdicGraph, choices: dict[int, int]) -> ProofTree:
    given = graph.given_ids()
    included = set(choices)
    leaves = set()
    for inf_id in choices.values():
        for p in graph.inferences[inf_id].premise_ids:
            included.add(p)
            if p in given:
                leaves.add(p)
    pairs = tuple(sorted(choices.items()))
    sort_key = tuple(sorted(
        (graph.inferences[i].rule_id, graph.statements[graph.inferences[i].derived_id].key)
        for i in choices.values()))
    # Kahn's algorithm over chosen dependencies, smallest id first.
    remaining: dict[int, set[int]] = {}
    for s in included:
        if s in choices:
            remaining[s] = {p for p in graph.inferences[choices[s]].premise_ids
                            if p in included}
        else:
            remaining[s] = set()
    topo: list[int] = []
    ready = sorted(s for s, d in remaining.items() if not d)
    while ready:
        s = ready.pop(0)
        topo.append(s)
        changed = []
        for t, d in remaining.items():
            if s in d:
                d.remove(s)
                if not d and t not in topo:
                    changed.append(t)
        ready = sorted(set(ready) | set(changed))
    return ProofTree(root=graph.conclusion_id, choice_pairs=pairs,
                     included=frozenset(included), leaves=frozenset(leaves),
                     sort_key=sort_key, topo=tuple(topo))


def enumerate_proofs(graph: HpdicGraph, cap: int | None = None) -> list[ProofTree]:
    """Materialize proofs. With a cap, the first ``cap`` proofs of the
    deterministic walk are kept. The returned list is sorted by each
    proof's multiset of chosen rule ids (ties broken by derived fact)."""
    out: list[ProofTree] = []
    for choices in _choice_walk(graph):
        out.append(_tree_from_choices(graph, choices))
        if cap is not None and len(out) >= cap:
            break
    out.sort(key=lambda t: (t.sort_key, t.choice_pairs))
    return out


def _dependency_cycle_free(graph: HpdicGraph) -> bool:
    given = graph.given_ids()
    color: dict[int, int] = {}

    def visit(s: int) -> bool:
        color[s] = 1
        for inf_id in graph.parents_of(s):
            for p in graph.inferences[inf_id].premise_ids:
                if p in given:
                    continue
                c = color.get(p)
                if c == 1:
                    return False
                if c is None and not visit(p):
                    return False
        color[s] = 2
        return True

    for s in graph.statements:
        if s not in given and color.get(s) is None:
            if not visit(s):
                return False
    return True


def _count_sum_product(graph: HpdicGraph) -> int | None:
    """Fast exact count, or None when its preconditions do not hold."""
    if not _dependency_cycle_free(graph):
        return None
    given = graph.given_ids()
    memo: dict[int, int] = {}

    def count(s: int) -> int:
        if s in given:
            return 1
        if s in memo:
            return memo[s]
        total = 0
        for inf_id in graph.parents_of(s):
            prod = 1
            for p in graph.inferences[inf_id].premise_ids:
                prod *= count(p)
            total += prod
        memo[s] = total
        return total

    result = count(graph.conclusion_id)
    # Statements consumed by several inferences (or twice by one) must be
    # choice-free, else the product above would multiply one choice in.
    consumers: dict[int, int] = {}
    for inf in graph.inferences.values():
        for p in inf.premise_ids:
            if p not in given:
                consumers[p] = consumers.get(p, 0) + 1
    for p, n in consumers.items():
        if n > 1 and count(p) > 1:
            return None
    return result


def _count_exhaustive(graph: HpdicGraph) -> int:
    return sum(1 for _ in _choice_walk(graph))


def count_proofs(graph: HpdicGraph) -> int:
    """Exact number of distinct proofs; always equals
    ``len(enumerate_proofs(graph))`` with no cap."""
    fast = _count_sum_product(graph)
    if fast is not None:
        return fast
    return _count_exhaustive(graph)


def to_forest(graph: HpdicGraph, cap: int = DEFAULT_CAP) -> ProofForest:
    """Proof forest: up to ``cap`` materialized trees plus the exact total.
    Warns with ``CapExceededWarning`` when trees had to be left out."""
    trees = enumerate_proofs(graph, cap=cap)
    total = count_proofs(graph)
    truncated = total > len(trees)
    if truncated:
        warnings.warn(CapExceededWarning(
            f"{total} proofs exist, materialized only {len(trees)}"),
            stacklevel=2)
    return ProofForest(trees=tuple(trees), total=total, truncated=truncated)
