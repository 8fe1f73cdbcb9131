"""Forward-chaining saturation over canonical facts.

Premise matching is symmetry-aware: a pattern matches a stored fact when
some image of the fact under the predicate's symmetry group unifies with
the pattern. The production strategy is semi-naive (each round only joins
through facts discovered in the previous round); ``saturate_naive`` keeps
the straightforward re-scan-everything loop around as an oracle, and both
must agree on the resulting fact and justification sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LimitExceeded
from .model import Fact, ObjectId, canonicalize
from .rules import Pattern, Problem, Rule, RuleBase, Variable

Binding = dict[str, ObjectId]


@dataclass(frozen=True)
class Justification:
    """One rule application: ``premises`` (in pattern order) yielded
    ``derived``. Identity ignores premise order so that symmetric bindings
    collapse into a single record."""

    rule_id: str
    premises: tuple[Fact, ...]
    derived: Fact

    @property
    def dedup_key(self) -> tuple:
        return (self.rule_id,
                tuple(sorted(f.key for f in self.premises)),
                self.derived.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, Justification) and self.dedup_key == other.dedup_key

    def __hash__(self) -> int:
        return hash(self.dedup_key)


@dataclass(frozen=True)
class Limits:
    max_rounds: int = 64
    max_facts: int = 200_000


@dataclass
class DerivationRecord:
    """Everything saturation learned: the closed fact set, every
    justification discovered (including alternatives for already-known
    facts), the number of rounds the fixpoint loop ran, and which facts
    were given rather than derived."""

    facts: dict[str, Fact]
    justifications: list[Justification]
    rounds: int
    hypothesis_keys: frozenset[str]

    def contains(self, fact: Fact) -> bool:
        return fact.key in self.facts

    def derived_keys(self) -> list[str]:
        return sorted(k for k in self.facts if k not in self.hypothesis_keys)

    def to_json(self) -> str:
        payload = {
            "schemaVersion": 1,
            "rounds": self.rounds,
            "hypotheses": sorted(self.hypothesis_keys),
            "facts": sorted(self.facts),
            "justifications": [
                {
                    "rule": j.rule_id,
                    "premises": [f.key for f in j.premises],
                    "derived": j.derived.key,
                }
                for j in sorted(self.justifications,
                                key=lambda j: (j.derived.key, j.rule_id,
                                               tuple(sorted(f.key for f in j.premises))))
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class _Store:
    """Fact set indexed by predicate name, iterated deterministically."""

    def __init__(self, facts: Iterable[Fact] = ()):
        self.by_key: dict[str, Fact] = {}
        self.by_pred: dict[str, list[Fact]] = {}
        for f in facts:
            self.add(f)

    def add(self, fact: Fact) -> bool:
        if fact.key in self.by_key:
            return False
        self.by_key[fact.key] = fact
        self.by_pred.setdefault(fact.predicate.name, []).append(fact)
        return True

    def candidates(self, pred_name: str) -> list[Fact]:
        return self.by_pred.get(pred_name, [])

    def __contains__(self, fact: Fact) -> bool:
        return fact.key in self.by_key

    def __len__(self) -> int:
        return len(self.by_key)


def _unify_one(pattern: Pattern, fact: Fact, binding: Binding) -> list[Binding]:
    """All extensions of ``binding`` making ``pattern`` equal to some
    symmetry image of ``fact``. Distinct images can induce identical
    bindings; those collapse."""
    results: dict[tuple, Binding] = {}
    for image in pattern.predicate.images(fact.args):
        cand = dict(binding)
        ok = True
        for term, obj in zip(pattern.terms, image):
            if isinstance(term, Variable):
                bound = cand.get(term.name)
                if bound is None:
                    cand[term.name] = obj
                elif bound.name != obj.name:
                    ok = False
                    break
            elif term != obj.name:
                ok = False
                break
        if ok:
            results[tuple(sorted((k, v.name) for k, v in cand.items()))] = cand
    return [results[k] for k in sorted(results)]


def match_premises(premises: Sequence[Pattern], facts: Iterable[Fact],
                   *, delta: Iterable[Fact] | None = None) -> list[Binding]:
    """All variable bindings under which every premise matches a stored
    fact (up to argument symmetry). With ``delta``, only bindings where at
    least one premise matches a delta fact are produced. The result is a
    duplicate-free, deterministically ordered list."""
    store = facts if isinstance(facts, _Store) else _Store(facts)
    delta_keys = None
    if delta is not None:
        delta_keys = {f.key for f in delta}

    complete: dict[tuple, Binding] = {}

    def walk(index: int, binding: Binding, used_delta: bool) -> None:
        if index == len(premises):
            if delta_keys is None or used_delta:
                complete[tuple(sorted((k, v.name) for k, v in binding.items()))] = binding
            return
        pattern = premises[index]
        for fact in store.candidates(pattern.predicate.name):
            in_delta = delta_keys is not None and fact.key in delta_keys
            for extended in _unify_one(pattern, fact, binding):
                walk(index + 1, extended, used_delta or in_delta)

    walk(0, {}, False)
    return [complete[k] for k in sorted(complete)]


def _instantiate(pattern: Pattern, binding: Binding) -> Fact:
    args: list[ObjectId] = []
    for pos, term in enumerate(pattern.terms):
        if isinstance(term, Variable):
            args.append(binding[term.name])
        else:
            # A constant in a conclusion takes its kind from the declaration.
            args.append(ObjectId(term, pattern.predicate.arg_kinds[pos]))
    return canonicalize(pattern.predicate, args)


def apply_rule(rule: Rule, facts: Iterable[Fact],
               *, delta: Iterable[Fact] | None = None) -> list[Justification]:
    """Every justification the rule supports over ``facts``, including ones
    whose derived fact is already stored (alternative parents). Derivations
    listing their own conclusion among the premises are discarded."""
    store = facts if isinstance(facts, _Store) else _Store(facts)
    out: dict[tuple, Justification] = {}
    for binding in match_premises(rule.premises, store, delta=delta):
        premise_facts = tuple(_instantiate(p, binding) for p in rule.premises)
        derived = _instantiate(rule.conclusion, binding)
        if any(f.key == derived.key for f in premise_facts):
            continue
        just = Justification(rule.id, premise_facts, derived)
        out.setdefault(just.dedup_key, just)
    return [out[k] for k in sorted(out)]


def _run(problem: Problem, base: RuleBase, limits: Limits,
         semi_naive: bool) -> DerivationRecord:
    store = _Store(problem.given_facts)
    given = frozenset(store.by_key)
    justs: dict[tuple, Justification] = {}
    delta: list[Fact] = list(store.by_key.values())
    rounds = 0
    while True:
        rounds += 1
        if rounds > limits.max_rounds:
            raise LimitExceeded(f"no fixpoint after {limits.max_rounds} rounds")
        fresh: dict[str, Fact] = {}
        for rule in base.rules:
            found = apply_rule(rule, store, delta=delta if semi_naive else None)
            for just in found:
                justs.setdefault(just.dedup_key, just)
                if just.derived not in store:
                    fresh.setdefault(just.derived.key, just.derived)
        if len(store) + len(fresh) > limits.max_facts:
            raise LimitExceeded(f"fact budget {limits.max_facts} exceeded")
        for fact in fresh.values():
            store.add(fact)
        if not fresh:
            break
        delta = list(fresh.values())
    if semi_naive:
        # One full pass over the closed store, as a safety net for
        # alternative derivations the delta restriction could miss.
        for rule in base.rules:
            for just in apply_rule(rule, store):
                justs.setdefault(just.dedup_key, just)
    return DerivationRecord(facts=dict(store.by_key),
                            justifications=[justs[k] for k in sorted(justs)],
                            rounds=rounds,
                            hypothesis_keys=given)


def saturate(problem: Problem, base: RuleBase,
             limits: Limits = Limits()) -> DerivationRecord:
    """Semi-naive saturation to fixpoint. Returns the full record whether
    or not the problem's conclusion was reached."""
    return _run(problem, base, limits, semi_naive=True)


def saturate_naive(problem: Problem, base: RuleBase,
                   limits: Limits = Limits()) -> DerivationRecord:
    """Reference strategy: every round re-applies every rule to the whole
    store. Kept as the oracle the semi-naive engine is tested against."""
    return _run(problem, base, limits, semi_naive=False)
