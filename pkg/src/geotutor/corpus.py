"""Loading a directory of rule packs (.qr) and problems (.qp)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .dsl import parse_problem, parse_rules
from .errors import GeotutorError
from .rules import Problem, RuleBase, merge_rulebases


@dataclass(frozen=True)
class Corpus:
    base: RuleBase
    problems: dict[str, Problem]

    def problem(self, problem_id: str) -> Problem:
        try:
            return self.problems[problem_id]
        except KeyError:
            raise GeotutorError(f"unknown problem {problem_id!r}") from None


def load_corpus(directory: str | Path) -> Corpus:
    """Parse every .qr pack and .qp problem under ``directory``.

    Packs are merged in filename order into one rule base; problems are
    parsed against the merged base. Any parse or merge error propagates,
    so a corpus either loads completely or not at all.
    """
    root = Path(directory)
    if not root.is_dir():
        raise GeotutorError(f"corpus directory {root} does not exist")
    packs = sorted(root.glob("*.qr"))
    if not packs:
        raise GeotutorError(f"no .qr rule packs in {root}")
    base = merge_rulebases(
        [parse_rules(p.read_text(encoding="utf-8")) for p in packs])
    problems: dict[str, Problem] = {}
    for path in sorted(root.glob("*.qp")):
        problem = parse_problem(path.read_text(encoding="utf-8"), base)
        if problem.id in problems:
            raise GeotutorError(f"duplicate problem id {problem.id!r} in {path}")
        problems[problem.id] = problem
    return Corpus(base=base, problems=problems)
