"""geotutor: a rule-based deduction engine and tutoring core for plane
geometry problems.

The pipeline runs in four stages, each usable on its own:

1. parse rule packs and problems (``dsl``),
2. saturate the hypotheses under the rules (``engine``),
3. condense the derivation record into a pruned proof-space graph and
   enumerate its proofs (``graph``, ``proofs``),
4. track a learner against that proof space (``tutor``, ``replay``).
"""

from .errors import (
    ArityMismatch,
    CapExceededWarning,
    ConclusionNotDerived,
    DslSyntaxError,
    DuplicateDeclaration,
    DuplicateRuleId,
    EmptyRuleBaseWarning,
    GeotutorError,
    InvalidDeclaration,
    InvalidProblem,
    KindMismatch,
    LimitExceeded,
    MalformedStatement,
    MissingConclusion,
    NothingMissing,
    RangeRestrictionViolation,
    ReplayFormatError,
    UndeclaredObject,
    UndeclaredPredicate,
)
from .model import Fact, ObjectId, PredicateDecl, canonicalize, facts_equal
from .rules import IsleConfig, Problem, Rule, RuleBase, Variable, filter_rules, merge_rulebases
from .dsl import parse_fact_text, parse_problem, parse_rules, serialize_problem, serialize_rules
from .engine import DerivationRecord, Justification, Limits, saturate, saturate_naive
from .graph import HpdicGraph, build_graph, graph_from_json
from .proofs import ProofForest, ProofTree, count_proofs, enumerate_proofs, to_forest
from .corpus import Corpus, load_corpus
from .tutor import BestProof, Hint, RedactionView, Session, TutorPolicy, open_session
from .replay import ReplayResult, parse_script, run_script

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch", "BestProof", "CapExceededWarning", "ConclusionNotDerived",
    "Corpus", "DerivationRecord", "DslSyntaxError", "DuplicateDeclaration",
    "DuplicateRuleId", "EmptyRuleBaseWarning", "Fact", "GeotutorError",
    "Hint", "HpdicGraph", "InvalidDeclaration", "InvalidProblem",
    "IsleConfig", "Justification", "KindMismatch", "LimitExceeded",
    "Limits", "MalformedStatement", "MissingConclusion", "NothingMissing",
    "ObjectId", "PredicateDecl", "Problem", "ProofForest", "ProofTree",
    "RangeRestrictionViolation", "RedactionView", "ReplayFormatError",
    "ReplayResult", "Rule", "RuleBase", "Session", "TutorPolicy",
    "UndeclaredObject", "UndeclaredPredicate", "Variable",
    "build_graph", "canonicalize", "count_proofs", "enumerate_proofs",
    "facts_equal", "filter_rules", "graph_from_json", "load_corpus",
    "merge_rulebases", "open_session", "parse_fact_text", "parse_problem",
    "parse_rules", "parse_script", "run_script", "saturate",
    "saturate_naive", "serialize_problem", "serialize_rules", "to_forest",
    "__version__",
]
