"""The HPDIC proof-space graph: a bipartite directed graph of statement
nodes (hypotheses, intermediate results, one conclusion) and inference
nodes (one per retained justification). Edges run premise-statement ->
inference -> derived-statement.

The builder prunes to the sub-graph in which every node lies on some
hypotheses-to-conclusion derivation path. Justification cycles (mutually
derivable statements) are kept; proof enumeration rejects them per proof.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ConclusionNotDerived
from .model import Fact
from .rules import Rule, RuleBase
from .engine import DerivationRecord, Justification, _instantiate, match_premises

SCHEMA_VERSION = 1

HYPOTHESIS = "Hypothesis"
INTERMEDIATE = "IntermediateResult"
CONCLUSION = "Conclusion"


@dataclass(frozen=True)
class StatementNode:
    id: int
    node_class: str
    fact: Fact

    @property
    def key(self) -> str:
        return self.fact.key


@dataclass(frozen=True)
class InferenceNode:
    id: int
    rule_id: str
    premise_ids: tuple[int, ...]
    derived_id: int
    hint_template: str = ""
    hint_message: str = ""


class HpdicGraph:
    """Immutable-by-convention container with deterministic node ids:
    statements are numbered in canonical-key order, inference nodes after
    them in (derived key, rule id, premise keys) order."""

    def __init__(self, statements: list[StatementNode],
                 inferences: list[InferenceNode], conclusion_id: int):
        self.statements: dict[int, StatementNode] = {s.id: s for s in statements}
        self.inferences: dict[int, InferenceNode] = {i.id: i for i in inferences}
        self.conclusion_id = conclusion_id
        self.key_to_id: dict[str, int] = {s.key: s.id for s in statements}
        self._parents: dict[int, list[int]] = {s.id: [] for s in statements}
        self._uses: dict[int, list[int]] = {s.id: [] for s in statements}
        for inf in inferences:
            self._parents[inf.derived_id].append(inf.id)
            for pid in inf.premise_ids:
                self._uses[pid].append(inf.id)
        for lst in self._parents.values():
            lst.sort()
        for lst in self._uses.values():
            lst.sort()

    # -- queries -------------------------------------------------------

    def parents_of(self, stmt_id: int) -> list[int]:
        """Inference nodes deriving this statement (sorted)."""
        return self._parents[stmt_id]

    def uses_of(self, stmt_id: int) -> list[int]:
        """Inference nodes consuming this statement as a premise."""
        return self._uses[stmt_id]

    def statement_by_key(self, key: str) -> StatementNode | None:
        sid = self.key_to_id.get(key)
        return self.statements[sid] if sid is not None else None

    def given_ids(self) -> frozenset[int]:
        return frozenset(s.id for s in self.statements.values()
                         if s.node_class == HYPOTHESIS)

    def sorted_statements(self) -> list[StatementNode]:
        return [self.statements[i] for i in sorted(self.statements)]

    def sorted_inferences(self) -> list[InferenceNode]:
        return [self.inferences[i] for i in sorted(self.inferences)]

    # -- export --------------------------------------------------------

    def to_dot(self) -> str:
        def esc(s: str) -> str:
            return s.replace("\\", "\\\\").replace('"', '\\"')

        lines = ["digraph proofspace {", "  rankdir=BT;"]
        for s in self.sorted_statements():
            shape = "box"
            extra = ""
            if s.node_class == CONCLUSION:
                extra = ", peripheries=2"
            elif s.node_class == HYPOTHESIS:
                extra = ", style=filled, fillcolor=lightgrey"
            lines.append(f'  n{s.id} [shape={shape}{extra}, label="{esc(s.key)}"];')
        for inf in self.sorted_inferences():
            lines.append(f'  n{inf.id} [shape=ellipse, label="{esc(inf.rule_id)}"];')
        for inf in self.sorted_inferences():
            for pid in inf.premise_ids:
                lines.append(f"  n{pid} -> n{inf.id};")
            lines.append(f"  n{inf.id} -> n{inf.derived_id};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "schemaVersion": SCHEMA_VERSION,
            "conclusion": self.statements[self.conclusion_id].key,
            "statements": [
                {"id": s.id, "class": s.node_class, "fact": s.key}
                for s in self.sorted_statements()
            ],
            "inferences": [
                {
                    "id": inf.id,
                    "rule": inf.rule_id,
                    "premises": list(inf.premise_ids),
                    "derived": inf.derived_id,
                    "hintTemplate": inf.hint_template,
                    "hintMessage": inf.hint_message,
                }
                for inf in self.sorted_inferences()
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def graph_from_json(text: str, base: RuleBase) -> HpdicGraph:
    """Rebuild a graph from its JSON export. Facts are re-canonicalized
    through the predicate declarations of ``base``."""
    from .dsl import parse_fact_text

    payload = json.loads(text)
    statements = []
    for entry in payload["statements"]:
        fact = parse_fact_text(entry["fact"], base, objects=None)
        statements.append(StatementNode(entry["id"], entry["class"], fact))
    inferences = [
        InferenceNode(e["id"], e["rule"], tuple(e["premises"]), e["derived"],
                      e.get("hintTemplate", ""), e.get("hintMessage", ""))
        for e in payload["inferences"]
    ]
    conclusion_id = next(s.id for s in statements if s.node_class == CONCLUSION)
    return HpdicGraph(statements, inferences, conclusion_id)


def _render_hint(rule: Rule | None, justification: Justification) -> str:
    """Instantiate the rule's hint template for one concrete application.
    The binding is reconstructed by re-matching the rule against the
    justification's own premises; the first consistent one wins (the match
    order is deterministic). Placeholders look like ``{?Var}``; ones that
    name no rule variable stay verbatim."""
    if rule is None or not rule.hint_template:
        return ""
    premise_multiset = sorted(f.key for f in justification.premises)
    for binding in match_premises(rule.premises, justification.premises):
        got = sorted(_instantiate(p, binding).key for p in rule.premises)
        if got != premise_multiset:
            continue
        if _instantiate(rule.conclusion, binding).key != justification.derived.key:
            continue
        text = rule.hint_template
        for var, obj in sorted(binding.items()):
            text = text.replace("{?" + var + "}", obj.name)
        return text
    return rule.hint_template


def build_graph(record: DerivationRecord, conclusion: Fact,
                base: RuleBase | None = None) -> HpdicGraph:
    """Construct the pruned proof-space graph for ``conclusion``.

    Dropped up front: justifications that re-derive a given fact (given
    statements have in-degree 0 by definition). Then pruning iterates to a
    fixpoint keeping statements that are derivable through surviving
    justifications (or given) and backward-reachable from the conclusion.
    """
    if conclusion.key not in record.facts:
        raise ConclusionNotDerived(
            f"conclusion {conclusion.key} was not derived")

    given = record.hypothesis_keys
    justs = [j for j in record.justifications
             if j.derived.key not in given
             and all(p.key != j.derived.key for p in j.premises)]

    alive_stmt: set[str] = set(record.facts)
    alive_just: list[Justification] = list(justs)

    while True:
        alive_just = [j for j in alive_just
                      if j.derived.key in alive_stmt
                      and all(p.key in alive_stmt for p in j.premises)]
        derivable = {j.derived.key for j in alive_just}
        supported = {k for k in alive_stmt if k in given or k in derivable}
        # Backward reachability from the conclusion over supported nodes.
        by_derived: dict[str, list[Justification]] = {}
        for j in alive_just:
            by_derived.setdefault(j.derived.key, []).append(j)
        reach: set[str] = set()
        stack = [conclusion.key] if conclusion.key in supported else []
        while stack:
            key = stack.pop()
            if key in reach:
                continue
            reach.add(key)
            for j in by_derived.get(key, ()):
                for p in j.premises:
                    if p.key in supported and p.key not in reach:
                        stack.append(p.key)
        next_alive = reach
        if next_alive == alive_stmt:
            break
        alive_stmt = next_alive

    if conclusion.key not in alive_stmt:
        raise ConclusionNotDerived(
            f"conclusion {conclusion.key} has no derivation from the hypotheses")

    stmt_keys = sorted(alive_stmt)
    statements: list[StatementNode] = []
    key_to_id: dict[str, int] = {}
    for idx, key in enumerate(stmt_keys):
        if key == conclusion.key:
            node_class = CONCLUSION
        elif key in given:
            node_class = HYPOTHESIS
        else:
            node_class = INTERMEDIATE
        statements.append(StatementNode(idx, node_class, record.facts[key]))
        key_to_id[key] = idx

    inferences: list[InferenceNode] = []
    ordered = sorted(alive_just, key=lambda j: (j.derived.key, j.rule_id,
                                                tuple(sorted(p.key for p in j.premises))))
    next_id = len(statements)
    for j in ordered:
        rule = base.rule(j.rule_id) if base is not None else None
        inferences.append(InferenceNode(
            id=next_id,
            rule_id=j.rule_id,
            premise_ids=tuple(key_to_id[p.key] for p in j.premises),
            derived_id=key_to_id[j.derived.key],
            hint_template=rule.hint_template if rule else "",
            hint_message=_render_hint(rule, j),
        ))
        next_id += 1

    return HpdicGraph(statements, inferences, key_to_id[conclusion.key])
