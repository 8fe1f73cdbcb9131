"""Tutoring sessions: completion, the redaction gate, and hint escalation."""

from fractions import Fraction

import pytest

from geotutor.engine import DerivationRecord, Justification
from geotutor.errors import GeotutorError, MalformedStatement, NothingMissing
from geotutor.graph import build_graph
from geotutor.model import ObjectId, PredicateDecl, canonicalize
from geotutor.proofs import to_forest
from geotutor.rules import IsleConfig
from geotutor.tutor import (NUDGE, REDIRECT, REFERRAL, REFERRAL_MESSAGE,
                            Session, TutorPolicy, open_session)

FINE = IsleConfig(enabled_tiers=frozenset({"fine"}))


@pytest.fixture()
def fine_session(corpus, bisector_base):
    """Bisector problem restricted to the four-step fine-grained proof."""
    return open_session(corpus.problem("perp_bisector"), bisector_base,
                        isle_cfg=FINE)


@pytest.fixture()
def merged_session(corpus):
    return open_session(corpus.problem("perp_bisector"), corpus.base)


def test_fresh_session_prechecks_hypotheses(fine_session):
    info = fine_session.best_proof()
    assert info.completion == 0
    assert info.total_in_proof == 4
    assert fine_session.checked == fine_session.graph.given_ids()


def test_completion_gate_sequence(fine_session):
    s = fine_session
    result, node = s.submit_text("onBisector(X, sAB)")
    assert result == "matched" and node is not None
    assert s.best_proof().completion == Fraction(1, 4)
    assert not s.redaction_view().unlocked

    result, node = s.submit_text("distinct(A, B)")
    assert result == "notOnGraph" and node is None
    assert s.best_proof().completion == Fraction(1, 4)
    assert s.rejected == ["distinct(A,B)"]

    s.submit_text("onBisector(Y, sAB)")
    assert s.best_proof().completion == Fraction(1, 2)
    assert s.redaction_view().unlocked

    s.submit_text("uniqueLine(lXY, X, Y)")
    s.submit_text("perpBisector(lXY, sAB)")
    final = s.best_proof()
    assert final.completion == 1
    assert final.checked_in_proof == final.total_in_proof == 4


def test_redaction_lines_track_progress(fine_session):
    s = fine_session
    s.submit_text("onBisector(X, sAB)")
    s.submit_text("onBisector(Y, sAB)")
    view = s.redaction_view()
    assert view.unlocked
    assert len(view.lines) == 4
    blanks = [line for line in view.lines if line.blank]
    shown = [line.text for line in view.lines if not line.blank]
    assert len(blanks) == 2
    assert all(line.text is None for line in blanks)
    assert set(shown) == {"onBisector(X,sAB)", "onBisector(Y,sAB)"}
    # lines follow the proof's dependency order, conclusion last
    assert view.lines[-1].node_id == s.graph.conclusion_id

    s.submit_text("uniqueLine(lXY, X, Y)")
    s.submit_text("perpBisector(lXY, sAB)")
    done = s.redaction_view()
    assert done.unlocked
    assert sum(1 for line in done.lines if line.blank) == 0


def test_unlock_uses_exact_arithmetic(corpus, bisector_base):
    s = open_session(corpus.problem("perp_bisector"), bisector_base,
                     isle_cfg=FINE,
                     policy=TutorPolicy(unlock_threshold=0.75))
    for text in ("onBisector(X, sAB)", "onBisector(Y, sAB)"):
        s.submit_text(text)
    assert not s.redaction_view().unlocked   # 1/2 < 3/4
    s.submit_text("uniqueLine(lXY, X, Y)")
    assert s.redaction_view().unlocked       # 3/4 >= 3/4, exactly


def test_best_proof_prefers_lowest_index_on_ties(merged_session):
    # two proofs, nothing checked: both sit at 0, the first one wins
    assert merged_session.best_proof().index == 0
    assert merged_session.forest.trees[0].size == 1  # the shortcut proof


def test_best_proof_follows_the_learner(merged_session):
    s = merged_session
    s.submit_text("onBisector(X, sAB)")
    info = s.best_proof()
    assert info.total_in_proof == 4     # the fine proof now scores 1/4 > 0/1
    assert info.completion == Fraction(1, 4)
    s.submit_text("perpBisector(lXY, sAB)")
    assert s.best_proof().completion == 1
    assert s.best_proof().total_in_proof == 1  # shortcut proof fully checked


def test_every_tree_can_be_completed(corpus, derived):
    for pid, (_, graph) in derived.items():
        problem = corpus.problem(pid)
        forest = to_forest(graph)
        for tree in forest.trees:
            s = Session(problem, corpus.base, graph, forest)
            for stmt_id in sorted(s.countable(tree)):
                fact = graph.statements[stmt_id].fact
                result, node = s.submit_fact(fact)
                assert result == "matched" and node == stmt_id
            assert s.best_proof().completion == 1
            assert not any(line.blank for line in s.redaction_view().lines)


# --- statement handling -------------------------------------------------------

def test_malformed_statements_are_distinguished(fine_session):
    s = fine_session
    for bad in ("onBisector(X", "onBisector(X, sAB, Y)", "between(X, Y)",
                "onBisector(Q, sAB)", "onBisector(sAB, X)"):
        with pytest.raises(MalformedStatement):
            s.submit_text(bad)
    assert s.rejected == []              # malformed is not notOnGraph
    assert s.best_proof().completion == 0


def test_resubmission_is_idempotent(fine_session):
    s = fine_session
    first = s.submit_text("onBisector(X, sAB)")
    before = (s.best_proof(), set(s.checked))
    assert s.submit_text("onBisector(X, sAB)") == first
    assert (s.best_proof(), set(s.checked)) == before


def test_submission_canonicalizes_argument_order(corpus):
    s = open_session(corpus.problem("rectangle"), corpus.base)
    result, node = s.submit_text("para(lCD, lAB)")
    assert result == "matched"
    assert s.graph.statements[node].key == "para(lAB,lCD)"


# --- hint escalation ----------------------------------------------------------

def test_escalation_walks_targets_then_refers(fine_session):
    s = fine_session
    kinds = [s.next_hint() for _ in range(8)]
    assert [h.kind for h in kinds] == [
        NUDGE, NUDGE, NUDGE, REDIRECT, NUDGE, NUDGE, REFERRAL, REFERRAL]
    first_target = kinds[0].target_node
    assert all(h.target_node == first_target for h in kinds[:3])
    assert kinds[3].target_node != first_target
    assert all(h.target_node == kinds[3].target_node for h in kinds[3:6])
    assert kinds[6].target_node is None
    assert kinds[6].message == REFERRAL_MESSAGE


def test_referral_lands_after_exactly_the_hint_budget(corpus, bisector_base):
    policy = TutorPolicy(hints_per_target=2, max_targets=2)
    s = open_session(corpus.problem("perp_bisector"), bisector_base,
                     isle_cfg=FINE, policy=policy)
    kinds = [s.next_hint().kind for _ in range(5)]
    assert kinds == [NUDGE, NUDGE, REDIRECT, NUDGE, REFERRAL]


def test_referral_is_sticky_until_progress(fine_session):
    s = fine_session
    for _ in range(7):
        s.next_hint()
    assert s.next_hint().kind == REFERRAL
    s.submit_text("onBisector(X, sAB)")          # real progress
    assert s.next_hint().kind == NUDGE


def test_targets_are_establishable_now(fine_session):
    s = fine_session
    hint = s.next_hint()
    tree = s.forest.trees[s.best_proof().index]
    chosen = dict(tree.choice_pairs)
    premises = s.graph.inferences[chosen[hint.target_node]].premise_ids
    assert all(p in s.checked for p in premises)


def test_hint_skips_checked_targets(fine_session):
    s = fine_session
    first = s.next_hint().target_node
    fact = s.graph.statements[first].fact
    s.submit_fact(fact)
    nxt = s.next_hint()
    assert nxt.kind == NUDGE                      # reset by the new match
    assert nxt.target_node != first


def test_redundant_resubmission_does_not_reset(fine_session):
    s = fine_session
    s.submit_text("onBisector(X, sAB)")
    s.next_hint()
    s.next_hint()
    s.submit_text("onBisector(X, sAB)")           # no new information
    assert s.next_hint().kind == NUDGE            # third hint on same target
    assert s.next_hint().kind == REDIRECT


def test_rejection_does_not_reset(fine_session):
    s = fine_session
    s.next_hint(); s.next_hint(); s.next_hint()
    s.submit_text("distinct(A, B)")               # notOnGraph
    assert s.next_hint().kind == REDIRECT


def test_nothing_missing_when_proof_is_complete(fine_session):
    s = fine_session
    for text in ("onBisector(X, sAB)", "onBisector(Y, sAB)",
                 "uniqueLine(lXY, X, Y)", "perpBisector(lXY, sAB)"):
        s.submit_text(text)
    with pytest.raises(NothingMissing):
        s.next_hint()


def test_hints_without_prechecked_hypotheses(corpus):
    policy = TutorPolicy(precheck_hypotheses=False)
    s = open_session(corpus.problem("perp_bisector"), corpus.base, policy=policy)
    assert s.best_proof().total_in_proof == 6     # hypotheses count too
    hint = s.next_hint()
    assert hint.kind == NUDGE
    assert hint.target_node in s.graph.given_ids()
    s.submit_text("equidistant(X, A, B)")
    assert s.best_proof().checked_in_proof == 1


def test_session_requires_a_nonempty_forest():
    pred = PredicateDecl("step", ("scalar",), ())
    g, x, y = (canonicalize(pred, (ObjectId(n, "scalar"),))
               for n in ("g", "x", "y"))
    record = DerivationRecord(
        facts={f.key: f for f in (g, x, y)},
        justifications=[Justification("fwd", (y,), x),
                        Justification("bwd", (x,), y)],
        rounds=1, hypothesis_keys=frozenset({g.key}))
    graph = build_graph(record, x)
    problem = type("P", (), {"objects": ()})()
    with pytest.raises(GeotutorError):
        Session(problem, None, graph, to_forest(graph))


def test_session_log_replays_the_event_stream(fine_session):
    s = fine_session
    s.submit_text("onBisector(X, sAB)")
    s.next_hint()
    s.submit_text("distinct(A, B)")
    script = s.to_script()
    assert script.splitlines() == [
        "SUBMIT onBisector(X,sAB)", "HINT", "SUBMIT distinct(A,B)"]
