"""Rules, rule bases, problems, and curriculum filtering.

A rule is range-restricted: every variable of the conclusion must occur in
at least one premise, which keeps forward chaining finite over a fixed
object universe.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .errors import (
    DuplicateDeclaration,
    DuplicateRuleId,
    EmptyRuleBaseWarning,
    InvalidDeclaration,
    InvalidProblem,
    KindMismatch,
    RangeRestrictionViolation,
)
from .model import Fact, ObjectId, PredicateDecl, render_fact

TIERS = ("coarse", "fine", "default")


@dataclass(frozen=True)
class Variable:
    """A rule variable; rendered ``?Name`` in the DSL."""

    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Term = Variable | str  # constants are bare object names


@dataclass(frozen=True)
class Pattern:
    """A predicate applied to variables and/or constant object names."""

    predicate: PredicateDecl
    terms: tuple  # of Variable | str

    def __post_init__(self):
        if len(self.terms) != self.predicate.arity:
            raise InvalidDeclaration(
                f"pattern {self.predicate.name} has {len(self.terms)} terms, "
                f"declaration says {self.predicate.arity}")

    def variables(self) -> set[str]:
        return {t.name for t in self.terms if isinstance(t, Variable)}

    def render(self) -> str:
        return render_fact(self.predicate.name,
                           (str(t) if isinstance(t, Variable) else t for t in self.terms))

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Rule:
    id: str
    level: int
    isle: str
    tier: str
    premises: tuple[Pattern, ...]
    conclusion: Pattern
    hint_template: str = ""

    def __post_init__(self):
        if self.level < 1:
            raise InvalidDeclaration(f"rule {self.id!r}: level must be >= 1")
        if self.tier not in TIERS:
            raise InvalidDeclaration(f"rule {self.id!r}: unknown tier {self.tier!r}")
        if not self.premises:
            raise InvalidDeclaration(f"rule {self.id!r}: premises must be non-empty")
        premise_vars = set().union(*(p.variables() for p in self.premises))
        free = self.conclusion.variables() - premise_vars
        if free:
            raise RangeRestrictionViolation(
                f"rule {self.id!r}: conclusion variables {sorted(free)} "
                f"appear in no premise")
        self.variable_kinds()  # raises KindMismatch on inconsistent use

    def variable_kinds(self) -> dict[str, str]:
        """Each variable's kind, inferred from the positions it occupies.
        A variable used at positions of two different kinds could never be
        instantiated, so that is rejected up front."""
        kinds: dict[str, str] = {}
        for pat in (*self.premises, self.conclusion):
            for term, kind in zip(pat.terms, pat.predicate.arg_kinds):
                if isinstance(term, Variable):
                    prev = kinds.setdefault(term.name, kind)
                    if prev != kind:
                        raise KindMismatch(
                            f"rule {self.id!r}: variable ?{term.name} used both "
                            f"as {prev} and as {kind}")
        return kinds


@dataclass(frozen=True)
class RuleBase:
    """Predicate declarations plus rules, in file order."""

    predicates: Mapping[str, PredicateDecl]
    rules: tuple[Rule, ...]

    def __post_init__(self):
        seen = set()
        for rule in self.rules:
            if rule.id in seen:
                raise DuplicateRuleId(f"rule id {rule.id!r} declared twice")
            seen.add(rule.id)

    def rule(self, rule_id: str) -> Rule | None:
        for r in self.rules:
            if r.id == rule_id:
                return r
        return None


def merge_rulebases(bases: Iterable[RuleBase]) -> RuleBase:
    """Combine several packs. Identical predicate redeclarations collapse;
    conflicting ones are an error, as are duplicated rule ids."""
    preds: dict[str, PredicateDecl] = {}
    rules: list[Rule] = []
    for base in bases:
        for name, decl in base.predicates.items():
            if name in preds and preds[name] != decl:
                raise DuplicateDeclaration(
                    f"predicate {name!r} redeclared with a different shape")
            preds.setdefault(name, decl)
        rules.extend(base.rules)
    return RuleBase(predicates=preds, rules=tuple(rules))


@dataclass(frozen=True)
class IsleConfig:
    """Curriculum filter. ``enabled_isles=None`` means no isle restriction."""

    max_level: int = 1_000_000
    enabled_isles: frozenset[str] | None = None
    enabled_tiers: frozenset[str] = frozenset(TIERS)

    def __post_init__(self):
        if not self.enabled_tiers:
            raise InvalidDeclaration("enabled_tiers must be non-empty")
        unknown = set(self.enabled_tiers) - set(TIERS)
        if unknown:
            raise InvalidDeclaration(f"unknown tiers {sorted(unknown)}")

    def admits(self, rule: Rule) -> bool:
        if rule.level > self.max_level:
            return False
        if self.enabled_isles is not None and rule.isle not in self.enabled_isles:
            return False
        return rule.tier in self.enabled_tiers

    @classmethod
    def everything(cls) -> "IsleConfig":
        return cls()


def filter_rules(base: RuleBase, cfg: IsleConfig) -> RuleBase:
    """Keep rules admitted by ``cfg``; predicate declarations are preserved.
    Warns (does not fail) when nothing survives."""
    kept = tuple(r for r in base.rules if cfg.admits(r))
    if base.rules and not kept:
        warnings.warn(EmptyRuleBaseWarning(
            "isle configuration removed every rule"), stacklevel=2)
    return replace(base, rules=kept)


@dataclass(frozen=True)
class Problem:
    id: str
    objects: tuple[ObjectId, ...]
    student_figure: tuple[str, ...]        # object names shown to the student
    hypotheses: tuple[Fact, ...]
    super_figure: tuple[Fact, ...]
    conclusion: Fact

    def __post_init__(self):
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise InvalidProblem(f"problem {self.id!r}: duplicate object names")
        known = set(names)
        for entry in self.student_figure:
            if entry not in known:
                raise InvalidProblem(
                    f"problem {self.id!r}: student figure names unknown object {entry!r}")
        given = {f.key for f in self.hypotheses} | {f.key for f in self.super_figure}
        if self.conclusion.key in given:
            raise InvalidProblem(
                f"problem {self.id!r}: conclusion {self.conclusion.key} is "
                f"already among the given facts")

    def object(self, name: str) -> ObjectId | None:
        for o in self.objects:
            if o.name == name:
                return o
        return None

    @property
    def given_facts(self) -> tuple[Fact, ...]:
        return self.hypotheses + self.super_figure
