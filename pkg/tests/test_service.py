"""HTTP service: endpoints, error shapes, and configuration loading."""

import json
import warnings

import pytest
from fastapi.testclient import TestClient

from geotutor.errors import GeotutorError
from geotutor.service import ServiceConfig, create_app, load_config
from geotutor.tutor import TutorPolicy


@pytest.fixture(scope="module")
def client(packs_dir):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        app = create_app(ServiceConfig(corpus_dir=packs_dir))
        return TestClient(app)


def new_session(client, pid="perp_bisector"):
    response = client.post("/sessions", json={"problemId": pid})
    assert response.status_code == 201
    return response.json()


def test_problem_listing_is_enriched(client):
    problems = client.get("/problems").json()
    assert [p["id"] for p in problems] == [
        "parallelogram_area", "perp_bisector", "rectangle"]
    bisector = problems[1]
    assert bisector["conclusion"] == "perpBisector(lXY,sAB)"
    assert "prove perpBisector(lXY,sAB)" in bisector["statement"]
    assert "equidistant(X,A,B)" in bisector["hypotheses"]
    assert "lineThrough(lXY,X,Y)" in bisector["superfigure"]
    assert bisector["studentFigure"] == ["X", "Y", "A", "B", "lXY", "sAB"]
    assert {"name": "sAB", "kind": "segment"} in bisector["objects"]
    names = [d["name"] for d in bisector["predicates"]]
    assert names == sorted(names)
    assert "onBisector" in names


def test_graph_formats(client, golden_dir):
    dot = client.get("/problems/rectangle/graph", params={"format": "dot"})
    assert dot.status_code == 200
    assert dot.headers["content-type"].startswith("text/vnd.graphviz")
    assert dot.text == (golden_dir / "rectangle.dot").read_text()

    js = client.get("/problems/rectangle/graph")
    assert js.status_code == 200
    payload = json.loads(js.text)
    assert len(payload["statements"]) == 13

    bad = client.get("/problems/rectangle/graph", params={"format": "pdf"})
    assert bad.status_code == 400
    assert bad.json()["code"] == "badFormat"


def test_unknown_problem_is_404(client):
    for response in (client.get("/problems/zzz/graph"),
                     client.post("/sessions", json={"problemId": "zzz"})):
        assert response.status_code == 404
        assert response.json()["code"] == "unknownProblem"


def test_unknown_session_is_404(client):
    for response in (client.get("/sessions/zzz"),
                     client.post("/sessions/zzz/statements", json={"text": "x(y)"}),
                     client.get("/sessions/zzz/redaction"),
                     client.get("/sessions/zzz/hint"),
                     client.get("/sessions/zzz/log")):
        assert response.status_code == 404
        assert response.json()["code"] == "unknownSession"


def test_session_lifecycle(client):
    state = new_session(client)
    sid = state["sessionId"]
    assert state["problemId"] == "perp_bisector"
    assert state["bestProof"]["completionExact"] == "0"
    assert state["proofTotal"] == 2
    assert not state["redactionUnlocked"]
    assert not state["referral"]

    r = client.post(f"/sessions/{sid}/statements",
                    json={"text": "onBisector(X, sAB)"})
    body = r.json()
    assert r.status_code == 200
    assert body["result"] == "matched"
    assert body["node"] is not None
    assert body["state"]["bestProof"]["completionExact"] == "1/4"
    assert body["state"]["bestProof"]["completion"] == 0.25

    r = client.post(f"/sessions/{sid}/statements", json={"text": "distinct(A, B)"})
    assert r.json()["result"] == "notOnGraph"
    assert r.json()["node"] is None
    assert r.json()["state"]["rejected"] == ["distinct(A,B)"]

    assert client.get(f"/sessions/{sid}").json()["bestProof"]["completionExact"] == "1/4"


def test_malformed_statement_is_400(client):
    sid = new_session(client)["sessionId"]
    r = client.post(f"/sessions/{sid}/statements", json={"text": "onBisector(X"})
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "malformedStatement"
    assert body["detail"] == "onBisector(X"
    assert body["message"]


def test_validation_error_shape(client):
    r = client.post("/sessions", json={"problem": "perp_bisector"})
    assert r.status_code == 422
    body = r.json()
    assert body["code"] == "validationError"
    assert isinstance(body["detail"], list)


def test_redaction_hides_lines_until_unlocked(client):
    sid = new_session(client)["sessionId"]
    client.post(f"/sessions/{sid}/statements", json={"text": "onBisector(X, sAB)"})
    locked = client.get(f"/sessions/{sid}/redaction").json()
    assert locked == {"unlocked": False, "lines": []}

    client.post(f"/sessions/{sid}/statements", json={"text": "onBisector(Y, sAB)"})
    view = client.get(f"/sessions/{sid}/redaction").json()
    assert view["unlocked"]
    assert len(view["lines"]) == 4
    assert sum(1 for line in view["lines"] if line["blank"]) == 2
    for line in view["lines"]:
        assert (line["text"] is None) == line["blank"]


def test_hint_escalation_and_conflict(client):
    # the merged corpus favors the one-step shortcut proof: a single target,
    # so after its nudge budget there is nowhere to redirect
    sid = new_session(client)["sessionId"]
    kinds = [client.get(f"/sessions/{sid}/hint").json()["kind"] for _ in range(5)]
    assert kinds == ["nudge", "nudge", "nudge", "teacherReferral", "teacherReferral"]
    assert client.get(f"/sessions/{sid}").json()["referral"]

    done = new_session(client)["sessionId"]
    for text in ("perpBisector(lXY, sAB)",):   # completes the shortcut proof
        client.post(f"/sessions/{done}/statements", json={"text": text})
    conflict = client.get(f"/sessions/{done}/hint")
    assert conflict.status_code == 409
    assert conflict.json()["code"] == "nothingMissing"


def test_log_is_plain_text(client):
    sid = new_session(client)["sessionId"]
    client.post(f"/sessions/{sid}/statements", json={"text": "onBisector(X, sAB)"})
    client.get(f"/sessions/{sid}/hint")
    log = client.get(f"/sessions/{sid}/log")
    assert log.status_code == 200
    assert log.headers["content-type"].startswith("text/plain")
    assert log.text == "SUBMIT onBisector(X,sAB)\nHINT\n"


def test_sessions_are_independent(client):
    a = new_session(client)["sessionId"]
    b = new_session(client)["sessionId"]
    client.post(f"/sessions/{a}/statements", json={"text": "onBisector(X, sAB)"})
    assert client.get(f"/sessions/{a}").json()["bestProof"]["checkedInProof"] == 1
    assert client.get(f"/sessions/{b}").json()["bestProof"]["checkedInProof"] == 0


def test_cors_allows_browser_clients(client):
    r = client.get("/problems", headers={"Origin": "http://localhost:5173"})
    assert r.headers.get("access-control-allow-origin") == "*"


def test_policy_flows_into_sessions(packs_dir):
    app = create_app(ServiceConfig(
        corpus_dir=packs_dir,
        policy=TutorPolicy(unlock_threshold=0.25, hints_per_target=1, max_targets=1)))
    client = TestClient(app)
    sid = new_session(client)["sessionId"]
    client.post(f"/sessions/{sid}/statements", json={"text": "onBisector(X, sAB)"})
    assert client.get(f"/sessions/{sid}/redaction").json()["unlocked"]
    kinds = [client.get(f"/sessions/{sid}/hint").json()["kind"] for _ in range(2)]
    assert kinds == ["nudge", "teacherReferral"]


def test_static_dir_is_served(packs_dir, tmp_path):
    (tmp_path / "index.html").write_text("<h1>tutor</h1>")
    app = create_app(ServiceConfig(corpus_dir=packs_dir, static_dir=tmp_path))
    client = TestClient(app)
    r = client.get("/app/")
    assert r.status_code == 200
    assert "tutor" in r.text


# --- configuration ------------------------------------------------------------

def test_load_config_resolves_relative_paths(packs_dir, tmp_path):
    cfg_path = tmp_path / "svc.json"
    cfg_path.write_text(json.dumps({
        "corpusDir": str(packs_dir),
        "port": 9001,
        "isle": {"maxLevel": 3, "enabledTiers": ["fine"]},
        "policy": {"unlockThreshold": 0.75, "hintsPerTarget": 2},
    }))
    cfg = load_config(cfg_path)
    assert cfg.corpus_dir == packs_dir.resolve()
    assert cfg.port == 9001
    assert cfg.isle.max_level == 3
    assert cfg.isle.enabled_tiers == frozenset({"fine"})
    assert cfg.isle.enabled_isles is None
    assert cfg.policy.unlock_threshold == 0.75
    assert cfg.policy.hints_per_target == 2
    assert cfg.policy.max_targets == 2          # untouched default


def test_load_config_relative_corpus_dir(packs_dir, tmp_path):
    cfg_path = tmp_path / "svc.json"
    (tmp_path / "corpus").mkdir()
    cfg_path.write_text(json.dumps({"corpusDir": "corpus"}))
    assert load_config(cfg_path).corpus_dir == (tmp_path / "corpus").resolve()


def test_load_config_requires_corpus_dir(tmp_path):
    cfg_path = tmp_path / "svc.json"
    cfg_path.write_text("{}")
    with pytest.raises(GeotutorError):
        load_config(cfg_path)


def test_bad_port_rejected(packs_dir):
    with pytest.raises(GeotutorError):
        ServiceConfig(corpus_dir=packs_dir, port=70000)


def test_broken_corpus_fails_at_startup(tmp_path):
    (tmp_path / "bad.qr").write_text("pred p/1 kinds(point\n")
    with pytest.raises(Exception):
        create_app(ServiceConfig(corpus_dir=tmp_path))
