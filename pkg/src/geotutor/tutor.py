"""Tutoring sessions: statement checking, proof completion, the redaction
gate, and the escalating hint policy.

Completion is measured against the learner's best proof: the materialized
proof with the highest fraction of checked statements (hypotheses are
pre-checked by default and excluded from the denominator). Hints walk one
target at a time: ``hints_per_target`` nudges on a target, then a redirect
to a fresh target, and once ``max_targets`` targets are exhausted the
session escalates to a teacher referral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ArityMismatch,
    DslSyntaxError,
    GeotutorError,
    KindMismatch,
    MalformedStatement,
    NothingMissing,
    UndeclaredObject,
    UndeclaredPredicate,
)
from .dsl import parse_fact_text
from .engine import Limits, saturate
from .graph import HYPOTHESIS, HpdicGraph, build_graph
from .model import Fact
from .proofs import ProofForest, ProofTree, to_forest
from .rules import IsleConfig, Problem, RuleBase, filter_rules

NUDGE = "nudge"
REDIRECT = "redirect"
REFERRAL = "teacherReferral"

REFERRAL_MESSAGE = ("Let's pause here and go over this proof with your "
                    "teacher before continuing.")


@dataclass(frozen=True)
class TutorPolicy:
    unlock_threshold: float = 0.5
    hints_per_target: int = 3          # nudges allowed on one target
    max_targets: int = 2               # targets tried before referral
    forest_cap: int = 10_000
    precheck_hypotheses: bool = True


@dataclass(frozen=True)
class Hint:
    kind: str                          # nudge | redirect | teacherReferral
    message: str
    target_node: int | None


@dataclass(frozen=True)
class BestProof:
    index: int
    completion: Fraction
    checked_in_proof: int
    total_in_proof: int


@dataclass(frozen=True)
class RedactionLine:
    node_id: int
    text: str | None
    blank: bool


@dataclass(frozen=True)
class RedactionView:
    unlocked: bool
    lines: tuple[RedactionLine, ...]


@dataclass
class _HintState:
    target: int | None = None
    hints_on_target: int = 0
    targets_tried: int = 0
    tried: set[int] = field(default_factory=set)
    referred: bool = False

    def reset(self) -> None:
        self.target = None
        self.hints_on_target = 0
        self.targets_tried = 0
        self.tried = set()
        self.referred = False


class Session:
    """Mutable tutoring state over a fixed problem, graph and forest."""

    def __init__(self, problem: Problem, base: RuleBase, graph: HpdicGraph,
                 forest: ProofForest, policy: TutorPolicy = TutorPolicy()):
        if not forest.trees:
            raise GeotutorError("cannot tutor with an empty proof forest")
        self.problem = problem
        self.base = base
        self.graph = graph
        self.forest = forest
        self.policy = policy
        self.checked: set[int] = set()
        self.rejected: list[str] = []
        self.events: list[dict] = []
        self.hint_state = _HintState()
        self._objects = {o.name: o for o in problem.objects}
        if policy.precheck_hypotheses:
            self.checked |= {s.id for s in graph.statements.values()
                             if s.node_class == HYPOTHESIS}

    # -- statements ------------------------------------------------------

    def submit_text(self, text: str) -> tuple[str, int | None]:
        """Parse and submit one statement. Raises ``MalformedStatement``
        when the text does not canonicalize; a well-formed statement that
        the graph does not contain comes back as ``notOnGraph``."""
        try:
            fact = parse_fact_text(text, self.base, self._objects)
        except (DslSyntaxError, UndeclaredPredicate, UndeclaredObject,
                KindMismatch, ArityMismatch) as exc:
            raise MalformedStatement(str(exc)) from exc
        return self.submit_fact(fact)

    def submit_fact(self, fact: Fact) -> tuple[str, int | None]:
        node = self.graph.statement_by_key(fact.key)
        if node is None:
            self.rejected.append(fact.key)
            self.events.append({"type": "submit", "statement": fact.key,
                                "result": "notOnGraph", "node": None})
            return "notOnGraph", None
        newly = node.id not in self.checked
        self.checked.add(node.id)
        self.events.append({"type": "submit", "statement": fact.key,
                            "result": "matched", "node": node.id})
        if newly:
            # Real progress ends the current impasse: hint escalation
            # starts over. A redundant resubmission changes nothing.
            self.hint_state.reset()
        return "matched", node.id

    # -- completion ------------------------------------------------------

    def countable(self, tree: ProofTree) -> frozenset[int]:
        """Statement nodes that count toward completion for this proof."""
        if self.policy.precheck_hypotheses:
            return frozenset(s for s, _ in tree.choice_pairs)
        return tree.included

    def best_proof(self) -> BestProof:
        best: BestProof | None = None
        for index, tree in enumerate(self.forest.trees):
            nodes = self.countable(tree)
            total = len(nodes)
            checked = len(nodes & self.checked)
            completion = Fraction(checked, total) if total else Fraction(1)
            if best is None or completion > best.completion:
                best = BestProof(index, completion, checked, total)
        assert best is not None
        return best

    def _best_tree(self) -> ProofTree:
        return self.forest.trees[self.best_proof().index]

    # -- redaction -------------------------------------------------------

    def redaction_view(self) -> RedactionView:
        info = self.best_proof()
        unlocked = info.completion >= Fraction(self.policy.unlock_threshold)
        tree = self.forest.trees[info.index]
        nodes = self.countable(tree)
        lines = []
        for stmt_id in tree.topo:
            if stmt_id not in nodes:
                continue
            if stmt_id in self.checked:
                lines.append(RedactionLine(
                    stmt_id, self.graph.statements[stmt_id].key, False))
            else:
                lines.append(RedactionLine(stmt_id, None, True))
        return RedactionView(unlocked=unlocked, lines=tuple(lines))

    # -- hints -----------------------------------------------------------

    def _missing_in(self, tree: ProofTree) -> list[int]:
        nodes = self.countable(tree)
        return [s for s in tree.topo if s in nodes and s not in self.checked]

    def _pick_target(self, tree: ProofTree, exclude: set[int]) -> int | None:
        missing = [s for s in self._missing_in(tree) if s not in exclude]
        if not missing:
            return None
        chosen = dict(tree.choice_pairs)
        frontier = []
        for s in missing:
            if s not in chosen:
                # A hypothesis counts when it is not pre-checked; there is
                # nothing to establish first, so it is always frontier.
                frontier.append(s)
                continue
            premises = self.graph.inferences[chosen[s]].premise_ids
            if all(p in self.checked for p in premises):
                frontier.append(s)
        return frontier[0] if frontier else missing[0]

    def _emit(self, hint: Hint) -> Hint:
        self.events.append({"type": "hint", "kind": hint.kind,
                            "target": hint.target_node,
                            "message": hint.message})
        return hint

    def _hint_message(self, tree: ProofTree, stmt_id: int) -> str:
        inf_id = dict(tree.choice_pairs).get(stmt_id)
        key = self.graph.statements[stmt_id].key
        if inf_id is None:
            return f"Look at what the problem already gives you: {key}."
        inf = self.graph.inferences[inf_id]
        if inf.hint_message:
            return inf.hint_message
        return f"Think about how {key} could be established."

    def next_hint(self) -> Hint:
        state = self.hint_state
        if state.referred:
            return self._emit(Hint(REFERRAL, REFERRAL_MESSAGE, None))
        tree = self._best_tree()
        if not self._missing_in(tree):
            raise NothingMissing("the best proof is already fully checked")

        if state.target is None:
            target = self._pick_target(tree, exclude=set())
            assert target is not None
            state.target = target
            state.tried = {target}
            state.targets_tried = 1
            state.hints_on_target = 1
            return self._emit(Hint(NUDGE, self._hint_message(tree, target), target))

        if state.hints_on_target < self.policy.hints_per_target:
            state.hints_on_target += 1
            return self._emit(Hint(
                NUDGE, self._hint_message(tree, state.target), state.target))

        # Current target is exhausted.
        if state.targets_tried >= self.policy.max_targets:
            state.referred = True
            return self._emit(Hint(REFERRAL, REFERRAL_MESSAGE, None))
        fresh = self._pick_target(tree, exclude=state.tried)
        if fresh is None:
            state.referred = True
            return self._emit(Hint(REFERRAL, REFERRAL_MESSAGE, None))
        state.target = fresh
        state.tried.add(fresh)
        state.targets_tried += 1
        state.hints_on_target = 1
        return self._emit(Hint(REDIRECT, self._hint_message(tree, fresh), fresh))

    # -- log -------------------------------------------------------------

    def to_script(self) -> str:
        """The session as a replayable script."""
        lines = []
        for ev in self.events:
            if ev["type"] == "submit":
                lines.append(f"SUBMIT {ev['statement']}")
            elif ev["type"] == "hint":
                lines.append("HINT")
        return "\n".join(lines) + ("\n" if lines else "")


def open_session(problem: Problem, base: RuleBase,
                 isle_cfg: IsleConfig | None = None,
                 policy: TutorPolicy = TutorPolicy(),
                 limits: Limits = Limits()) -> Session:
    """Run the whole pipeline (filter, saturate, graph, forest) and wrap
    it in a fresh session."""
    active = filter_rules(base, isle_cfg) if isle_cfg is not None else base
    record = saturate(problem, active, limits)
    graph = build_graph(record, problem.conclusion, base=active)
    forest = to_forest(graph, cap=policy.forest_cap)
    return Session(problem, active, graph, forest, policy)
