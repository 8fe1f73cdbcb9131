"""Command line front end.

    geotutor saturate <problem.qp> <pack.qr>... [--out dump.json]
    geotutor graph    <problem.qp> <pack.qr>... [--dot FILE] [--json FILE]
    geotutor proofs   <problem.qp> <pack.qr>... [--count] [--list N]
    geotutor replay   <problem.qp> <pack.qr>... <session.qs>
    geotutor serve    --config FILE

All subcommands that read packs accept --isles, --tiers and --max-level to
restrict the rule base. Exit codes: 0 success, 1 domain error (for example
an underivable conclusion or a failed replay assertion), 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dsl import parse_problem, parse_rules
from .engine import saturate
from .errors import ConclusionNotDerived, GeotutorError
from .graph import build_graph
from .proofs import count_proofs, enumerate_proofs, to_forest
from .replay import run_script
from .rules import TIERS, IsleConfig, Problem, RuleBase, filter_rules, merge_rulebases
from .tutor import Session, TutorPolicy


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("problem", help="problem file (.qp)")
    sub.add_argument("packs", nargs="+", help="rule packs (.qr)")
    sub.add_argument("--isles", nargs="+", metavar="TAG",
                     help="keep only rules from these isles")
    sub.add_argument("--tiers", nargs="+", metavar="TIER", choices=TIERS,
                     help="keep only rules of these tiers")
    sub.add_argument("--max-level", type=int, metavar="N",
                     help="keep only rules of level <= N")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geotutor",
        description="Geometry deduction engine and tutoring core.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("saturate", help="run the engine to fixpoint")
    _add_common(p)
    p.add_argument("--out", metavar="FILE", help="write the derivation dump (JSON)")

    p = subs.add_parser("graph", help="build and export the proof-space graph")
    _add_common(p)
    p.add_argument("--dot", metavar="FILE", help="write a Graphviz export")
    p.add_argument("--json", metavar="FILE", help="write a JSON export")

    p = subs.add_parser("proofs", help="enumerate or count proofs")
    _add_common(p)
    p.add_argument("--count", action="store_true", help="print the exact count only")
    p.add_argument("--list", type=int, metavar="N", dest="list_n",
                   help="print the first N proofs")

    p = subs.add_parser("replay", help="replay a session script")
    _add_common(p)
    p.add_argument("script", help="session script (.qs)")

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True, metavar="FILE",
                   help="service configuration (JSON)")
    return parser


def _load(args: argparse.Namespace) -> tuple[Problem, RuleBase]:
    base = merge_rulebases(
        [parse_rules(Path(p).read_text(encoding="utf-8")) for p in args.packs])
    if args.isles or args.tiers or args.max_level is not None:
        cfg = IsleConfig(
            max_level=args.max_level if args.max_level is not None else 1_000_000,
            enabled_isles=frozenset(args.isles) if args.isles else None,
            enabled_tiers=frozenset(args.tiers) if args.tiers else frozenset(TIERS),
        )
        base = filter_rules(base, cfg)
    problem = parse_problem(Path(args.problem).read_text(encoding="utf-8"), base)
    return problem, base


def _cmd_saturate(args: argparse.Namespace) -> int:
    problem, base = _load(args)
    record = saturate(problem, base)
    if args.out:
        Path(args.out).write_text(record.to_json(), encoding="utf-8")
    derived = len(record.facts) - len(record.hypothesis_keys)
    print(f"facts: {len(record.facts)} ({derived} derived), "
          f"justifications: {len(record.justifications)}, rounds: {record.rounds}")
    if not record.contains(problem.conclusion):
        print(f"error: conclusion {problem.conclusion.key} was not derived",
              file=sys.stderr)
        return 1
    print(f"conclusion {problem.conclusion.key} derived")
    return 0


def _cmd_graph(args: argparse.Namespace) -> int:
    problem, base = _load(args)
    record = saturate(problem, base)
    graph = build_graph(record, problem.conclusion, base=base)
    if args.dot:
        Path(args.dot).write_text(graph.to_dot(), encoding="utf-8")
    if args.json:
        Path(args.json).write_text(graph.to_json(), encoding="utf-8")
    hyps = len(graph.given_ids())
    print(f"statements: {len(graph.statements)} ({hyps} hypotheses), "
          f"inferences: {len(graph.inferences)}")
    return 0


def _cmd_proofs(args: argparse.Namespace) -> int:
    problem, base = _load(args)
    record = saturate(problem, base)
    graph = build_graph(record, problem.conclusion, base=base)
    total = count_proofs(graph)
    if args.count:
        print(total)
        return 0
    print(f"proofs: {total}")
    if args.list_n:
        for i, tree in enumerate(enumerate_proofs(graph, cap=args.list_n)):
            rules = ", ".join(graph.inferences[j].rule_id for _, j in tree.choice_pairs)
            print(f"  {i}: size {tree.size}: {rules}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    problem, base = _load(args)
    record = saturate(problem, base)
    graph = build_graph(record, problem.conclusion, base=base)
    forest = to_forest(graph)
    session = Session(problem, base, graph, forest, TutorPolicy())
    result = run_script(session, Path(args.script).read_text(encoding="utf-8"))
    sys.stdout.write(result.render())
    return 0 if result.ok else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    # Imported here so the core CLI works without the service dependencies.
    from .service import load_config, run_service
    run_service(load_config(Path(args.config)))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "saturate": _cmd_saturate,
        "graph": _cmd_graph,
        "proofs": _cmd_proofs,
        "replay": _cmd_replay,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except GeotutorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
