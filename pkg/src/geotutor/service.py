"""HTTP service exposing the corpus, proof-space graphs, and live tutoring
sessions. Sessions are held in memory and keyed by opaque ids; per-session
mutations are serialized with a lock, the corpus and graphs are immutable
and shared.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .corpus import load_corpus
from .engine import saturate
from .errors import GeotutorError, MalformedStatement, NothingMissing
from .graph import HpdicGraph, build_graph
from .proofs import ProofForest, to_forest
from .rules import TIERS, IsleConfig, Problem, RuleBase, filter_rules
from .tutor import Session, TutorPolicy


@dataclass(frozen=True)
class ServiceConfig:
    corpus_dir: Path
    port: int = 8799
    host: str = "127.0.0.1"
    isle: IsleConfig | None = None
    policy: TutorPolicy = TutorPolicy()
    static_dir: Path | None = None

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise GeotutorError(f"port {self.port} out of range")


def load_config(path: Path) -> ServiceConfig:
    """Read a JSON config file. Relative paths are resolved against the
    config file's directory."""
    raw = json.loads(path.read_text(encoding="utf-8"))
    here = path.resolve().parent
    if "corpusDir" not in raw:
        raise GeotutorError("config is missing corpusDir")
    corpus_dir = (here / raw["corpusDir"]).resolve()

    isle = None
    if "isle" in raw:
        i = raw["isle"]
        isle = IsleConfig(
            max_level=i.get("maxLevel", 1_000_000),
            enabled_isles=frozenset(i["enabledIsles"]) if "enabledIsles" in i else None,
            enabled_tiers=frozenset(i.get("enabledTiers", TIERS)),
        )
    policy = TutorPolicy()
    if "policy" in raw:
        p = raw["policy"]
        policy = TutorPolicy(
            unlock_threshold=p.get("unlockThreshold", 0.5),
            hints_per_target=p.get("hintsPerTarget", 3),
            max_targets=p.get("maxTargets", 2),
            forest_cap=p.get("forestCap", 10_000),
            precheck_hypotheses=p.get("precheckHypotheses", True),
        )
    static_dir = (here / raw["staticDir"]).resolve() if "staticDir" in raw else None
    return ServiceConfig(
        corpus_dir=corpus_dir,
        port=raw.get("port", 8799),
        host=raw.get("host", "127.0.0.1"),
        isle=isle,
        policy=policy,
        static_dir=static_dir,
    )


@dataclass(frozen=True)
class _Bundle:
    problem: Problem
    base: RuleBase
    graph: HpdicGraph
    forest: ProofForest


@dataclass
class _Box:
    session: Session
    problem_id: str
    lock: threading.Lock = field(default_factory=threading.Lock)


def _http_error(status: int, code: str, message: str, detail=None) -> HTTPException:
    return HTTPException(status_code=status, detail={
        "code": code, "message": message, "detail": detail})


# Request bodies live at module scope: route annotations are evaluated
# through the module's globals, not create_app's locals.
class CreateSessionBody(BaseModel):
    problemId: str


class SubmitBody(BaseModel):
    text: str


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the application. The whole corpus is parsed and every
    problem's pipeline is run eagerly, so a broken corpus fails here and
    not on the first request."""
    corpus = load_corpus(config.corpus_dir)
    base = filter_rules(corpus.base, config.isle) if config.isle else corpus.base
    bundles: dict[str, _Bundle] = {}
    for pid in sorted(corpus.problems):
        problem = corpus.problems[pid]
        record = saturate(problem, base)
        graph = build_graph(record, problem.conclusion, base=base)
        forest = to_forest(graph, cap=config.policy.forest_cap)
        bundles[pid] = _Bundle(problem, base, graph, forest)

    app = FastAPI(title="geotutor", version="1")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"])

    sessions: dict[str, _Box] = {}
    sessions_lock = threading.Lock()

    @app.exception_handler(StarletteHTTPException)
    async def _on_http_error(request: Request, exc: StarletteHTTPException):
        body = exc.detail if isinstance(exc.detail, dict) else {
            "code": "error", "message": str(exc.detail), "detail": None}
        return JSONResponse(status_code=exc.status_code, content=body)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "code": "validationError", "message": "invalid request body",
            "detail": jsonable_encoder(exc.errors())})

    def _bundle(pid: str) -> _Bundle:
        try:
            return bundles[pid]
        except KeyError:
            raise _http_error(404, "unknownProblem", f"no problem {pid!r}") from None

    def _box(sid: str) -> _Box:
        with sessions_lock:
            try:
                return sessions[sid]
            except KeyError:
                raise _http_error(404, "unknownSession", f"no session {sid!r}") from None

    def _statement_text(problem: Problem) -> str:
        given = "; ".join(f.key for f in problem.given_facts)
        return f"Given {given}, prove {problem.conclusion.key}."

    def _state(sid: str, box: _Box) -> dict:
        s = box.session
        best = s.best_proof()
        return {
            "sessionId": sid,
            "problemId": box.problem_id,
            "checked": sorted(s.checked),
            "rejected": list(s.rejected),
            "bestProof": {
                "proofIndex": best.index,
                "completion": float(best.completion),
                "completionExact": str(best.completion),
                "checkedInProof": best.checked_in_proof,
                "totalInProof": best.total_in_proof,
            },
            "redactionUnlocked": s.redaction_view().unlocked,
            "proofTotal": s.forest.total,
            "referral": s.hint_state.referred,
        }

    @app.get("/problems")
    def list_problems():
        out = []
        for pid in sorted(bundles):
            b = bundles[pid]
            p = b.problem
            out.append({
                "id": pid,
                "statement": _statement_text(p),
                "conclusion": p.conclusion.key,
                "hypotheses": [f.key for f in p.hypotheses],
                "superfigure": [f.key for f in p.super_figure],
                "studentFigure": list(p.student_figure),
                "objects": [{"name": o.name, "kind": o.kind} for o in p.objects],
                "predicates": [
                    {"name": d.name, "argKinds": list(d.arg_kinds)}
                    for d in sorted(b.base.predicates.values(), key=lambda d: d.name)
                ],
            })
        return out

    @app.get("/problems/{pid}/graph")
    def get_graph(pid: str, format: str = "json"):
        b = _bundle(pid)
        if format == "json":
            return Response(b.graph.to_json(), media_type="application/json")
        if format == "dot":
            return Response(b.graph.to_dot(), media_type="text/vnd.graphviz")
        raise _http_error(400, "badFormat", f"unknown format {format!r}",
                          detail="use format=json or format=dot")

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        b = _bundle(body.problemId)
        session = Session(b.problem, b.base, b.graph, b.forest, config.policy)
        sid = uuid.uuid4().hex
        box = _Box(session=session, problem_id=body.problemId)
        with sessions_lock:
            sessions[sid] = box
        with box.lock:
            return _state(sid, box)

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        box = _box(sid)
        with box.lock:
            return _state(sid, box)

    @app.post("/sessions/{sid}/statements")
    def submit_statement(sid: str, body: SubmitBody):
        box = _box(sid)
        with box.lock:
            try:
                result, node = box.session.submit_text(body.text)
            except MalformedStatement as exc:
                raise _http_error(400, "malformedStatement", str(exc),
                                  detail=body.text) from None
            return {"result": result, "node": node, "state": _state(sid, box)}

    @app.get("/sessions/{sid}/redaction")
    def get_redaction(sid: str):
        box = _box(sid)
        with box.lock:
            view = box.session.redaction_view()
            lines = [
                {"node": ln.node_id, "text": ln.text, "blank": ln.blank}
                for ln in view.lines
            ] if view.unlocked else []
            return {"unlocked": view.unlocked, "lines": lines}

    @app.get("/sessions/{sid}/hint")
    def get_hint(sid: str):
        box = _box(sid)
        with box.lock:
            try:
                hint = box.session.next_hint()
            except NothingMissing as exc:
                raise _http_error(409, "nothingMissing", str(exc)) from None
            return {"kind": hint.kind, "message": hint.message,
                    "targetNode": hint.target_node}

    @app.get("/sessions/{sid}/log")
    def get_log(sid: str):
        box = _box(sid)
        with box.lock:
            return PlainTextResponse(box.session.to_script())

    if config.static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/app", StaticFiles(directory=config.static_dir, html=True),
                  name="app")

    return app


def run_service(config: ServiceConfig) -> None:
    import uvicorn
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="warning")
