import json
import threading
import time
import urllib.error
import urllib.request

import pytest

from consortex.consortium import (
    ExampleNamer,
    Mode,
    Verdict,
    consortium_from_domain,
    local_answer,
)
from consortex.errors import (
    CapacityError,
    ConflictingEvidenceError,
    FormatError,
    NotReadyError,
    ProtocolError,
    StaleQueryError,
    UnknownExpertError,
    UnknownSessionError,
)
from consortex.exploration import ExploreOptions, explore
from consortex.implications import Implication
from consortex.oracles import ConsortiumOracle, party_view
from consortex.sets import AttributeSet
from consortex.service import SessionHub, error_payload, run_server
from tests.conftest import fixture_text


def create_body(**options) -> dict:
    return {
        "context": fixture_text("toy.cxt"),
        "domain": fixture_text("toy.dom"),
        "options": options,
    }


def bob_session(hub: SessionHub, **options):
    """Toy session with simulated experts on blocks 0 and 2, Bob on block 1."""
    options.setdefault("sim_experts", [0, 2])
    created = hub.dispatch("create-session", create_body(**options))
    sid = created["session"]
    reg = hub.dispatch(
        "register-expert", {"session": sid, "block": 1, "name": "Bob"}
    )
    return sid, reg["token"], created


def member_of(name: str, namer: ExampleNamer, universe) -> int:
    """Full member set behind an issued example name.

    Synthetic names carry the member's attributes between the brackets, so a
    party that never issued the name can still recognize the object.
    """
    known = namer.resolve(name)
    if known is not None:
        return known
    assert name.startswith("x[") and name.endswith("]")
    inner = name[2:-1]
    return universe.subset([n for n in inner.split(",") if n]).mask


def drive_truthfully(hub, sid, token, spec, target, namer, limit=300):
    """Answer every poll the way a local expert realized on `target` would."""
    u = target.universe
    for _ in range(limit):
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        if msg["kind"] == "none":
            assert msg["phase"] == "done", f"idle but not done: {msg}"
            return
        if msg["kind"] == "combine":
            member = member_of(msg["name"], namer, u)
            view = party_view(msg["name"], member, spec)
            body = {"session": sid, "token": token, "kind": "combine",
                    "query_id": msg["query_id"], "known": view is not None}
            if view is not None:
                body["present"] = list(u.mask_names(view.present.mask))
                body["absent"] = list(u.mask_names(view.absent.mask))
            hub.dispatch("answer", body)
            continue
        premise = u.subset(msg["premise"])
        part = Implication(premise, u.subset(msg["conclusion"]))
        answer = local_answer(spec, target, part)
        assert answer.verdict is not Verdict.NULL
        body = {"session": sid, "token": token, "kind": "query",
                "query_id": msg["query_id"]}
        if answer.verdict is Verdict.ACCEPT:
            body["verdict"] = "accept"
        else:
            ce = answer.counterexample
            body["verdict"] = "refute"
            body["name"] = namer.name_for(ce.mask, spec.block.mask)
            body["present"] = list(u.mask_names(ce.mask))
            body["absent"] = list(u.mask_names(spec.block.mask & ~ce.mask))
        hub.dispatch("answer", body)
    raise AssertionError("session did not finish within the poll budget")


class TestTranscript:
    def test_recorded_session_replays_exchange_for_exchange(self):
        hub = SessionHub()
        for line in fixture_text("toy_session.jsonl").splitlines():
            record = json.loads(line)
            assert hub.dispatch(record["op"], record["body"]) == record["response"]


class TestAllSimParity:
    """A session answered entirely by simulated experts equals a direct run."""

    @pytest.mark.parametrize("mode_name", ["strong", "sampled"])
    @pytest.mark.parametrize("combining", [True, False])
    def test_session_report_matches_in_process_exploration(
        self, mode_name, combining, toy_context, toy_system, toy_universe,
        toy_domain,
    ):
        hub = SessionHub()
        created = hub.dispatch(
            "create-session",
            create_body(mode=mode_name, combining=combining, sim_experts="all"),
        )
        assert created["phase"] == "done"
        result = hub.dispatch("result", {"session": created["session"]})

        consortium = consortium_from_domain(
            toy_domain, None, toy_context, Mode(mode_name)
        )
        oracle = ConsortiumOracle(consortium, toy_system, toy_context)
        report = explore(
            oracle, toy_universe, ExploreOptions(combining=combining)
        )
        assert result["report"] == report.serialize()
        assert result["meta"]["queries"] == report.queries

    def test_strong_combining_session_hits_the_committed_report(self):
        hub = SessionHub()
        created = hub.dispatch("create-session", create_body(sim_experts="all"))
        result = hub.dispatch("result", {"session": created["session"]})
        assert result["report"] == fixture_text("toy_strong_on.report")


class TestHumanDrivenRuns:
    """One registered human answering truthfully reproduces the sim reports."""

    @pytest.mark.parametrize(
        "combining,fixture",
        [(True, "toy_strong_on.report"), (False, "toy_strong_off.report")],
    )
    def test_truthful_human_matches_all_sim_report(
        self, combining, fixture, toy_consortium, toy_system, toy_context
    ):
        hub = SessionHub()
        sid, token, _ = bob_session(hub, combining=combining)
        namer = ExampleNamer(toy_system, toy_context)
        drive_truthfully(
            hub, sid, token, toy_consortium.experts[1], toy_system, namer
        )
        result = hub.dispatch("result", {"session": sid})
        assert result["report"] == fixture_text(fixture)


class TestCreateSession:
    def test_ids_count_up_per_hub(self):
        hub = SessionHub()
        first = hub.dispatch("create-session", create_body(sim_experts="all"))
        second = hub.dispatch("create-session", create_body(sim_experts="all"))
        assert (first["session"], second["session"]) == ("s1", "s2")

    def test_create_from_explicit_target(self):
        hub = SessionHub()
        created = hub.dispatch("create-session", {
            "target": {
                "attributes": ["a", "b"],
                "sets": [[], ["a"], ["a", "b"]],
            },
            "domain": "a\nb\n",
            "options": {"sim_experts": "all"},
        })
        assert created["phase"] == "done"
        assert created["blocks"] == [["a"], ["b"]]

    def test_context_and_target_are_mutually_exclusive(self):
        hub = SessionHub()
        both = create_body()
        both["target"] = {"attributes": ["a"], "sets": [["a"]]}
        with pytest.raises(FormatError):
            hub.dispatch("create-session", both)
        with pytest.raises(FormatError):
            hub.dispatch("create-session", {"domain": "a\n"})

    @pytest.mark.parametrize("options", [
        {"mode": "loud"},
        {"costs": [1, 2]},
        {"sim_experts": [7]},
        {"sim_experts": "some"},
        {"combine_timeout": 0},
        {"combining": "yes"},
        {"policy": "psychic"},
    ])
    def test_bad_options_are_format_errors(self, options):
        hub = SessionHub()
        with pytest.raises(FormatError):
            hub.dispatch("create-session", create_body(**options))

    def test_malformed_context_text_is_a_format_error(self):
        hub = SessionHub()
        body = create_body()
        body["context"] = "B\n\n2\nnot a count\n"
        with pytest.raises(FormatError):
            hub.dispatch("create-session", body)

    def test_body_must_be_an_object(self):
        hub = SessionHub()
        with pytest.raises(FormatError):
            hub.dispatch("create-session", [1, 2])

    def test_unknown_operation(self):
        hub = SessionHub()
        with pytest.raises(ProtocolError):
            hub.dispatch("drop-table", {"session": "s1"})


class TestRegistration:
    def test_register_hands_out_a_deterministic_token(self):
        hub = SessionHub()
        sid, token, _ = bob_session(hub)
        assert token == "s1-e1-ea4cb38773db"
        status = hub.dispatch("session-status", {"session": sid})
        roster = status["roster"]
        assert [p["sim"] for p in roster] == [True, False, True]
        assert roster[1] == {
            "block": ["fl", "ed"], "sim": False, "registered": True,
            "name": "Bob",
        }

    def test_register_validation(self):
        hub = SessionHub()
        sid = hub.dispatch("create-session", create_body(sim_experts=[0, 2]))["session"]
        with pytest.raises(FormatError):
            hub.dispatch("register-expert", {"session": sid, "block": "one"})
        with pytest.raises(ProtocolError):
            hub.dispatch("register-expert", {"session": sid, "block": 5})
        with pytest.raises(ProtocolError):
            hub.dispatch("register-expert", {"session": sid, "block": 0})
        hub.dispatch("register-expert", {"session": sid, "block": 1})
        with pytest.raises(ProtocolError):
            hub.dispatch("register-expert", {"session": sid, "block": 1})

    def test_unknown_session_and_token(self):
        hub = SessionHub()
        sid, token, _ = bob_session(hub)
        with pytest.raises(UnknownSessionError):
            hub.dispatch("poll", {"session": "s9", "token": token})
        with pytest.raises(UnknownExpertError):
            hub.dispatch("poll", {"session": sid, "token": "s1-e1-000000000000"})
        with pytest.raises(UnknownExpertError):
            hub.dispatch("poll", {"session": sid})


class TestAnswerValidation:
    def pending_query(self, hub, sid, token):
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        assert msg["kind"] == "query"
        return msg

    def test_result_before_done_is_not_ready(self):
        hub = SessionHub()
        sid, _, _ = bob_session(hub)
        with pytest.raises(NotReadyError):
            hub.dispatch("result", {"session": sid})

    def test_stale_and_duplicate_answers_conflict(self, toy_universe):
        hub = SessionHub()
        sid = hub.dispatch("create-session", create_body(sim_experts=[0]))["session"]
        t1 = hub.dispatch("register-expert", {"session": sid, "block": 1})["token"]
        t2 = hub.dispatch("register-expert", {"session": sid, "block": 2})["token"]
        msg = self.pending_query(hub, sid, t1)
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": t1, "query_id": msg["query_id"] + 7,
                "verdict": "accept",
            })
        hub.dispatch("answer", {
            "session": sid, "token": t1, "query_id": msg["query_id"],
            "verdict": "accept",
        })
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": t1, "query_id": msg["query_id"],
                "verdict": "accept",
            })
        status = hub.dispatch("session-status", {"session": sid})
        assert status["counters"]["audit"] == 2

    def test_expert_outside_the_selection_cannot_answer(self):
        hub = SessionHub()
        sid = hub.dispatch("create-session", create_body(
            mode="sampled", policy="first", sim_experts=[],
        ))["session"]
        t2 = hub.dispatch("register-expert", {"session": sid, "block": 2})["token"]
        status = hub.dispatch("session-status", {"session": sid})
        pending = status["pending"]
        assert 2 not in pending["selected"]
        assert hub.dispatch("poll", {"session": sid, "token": t2})["kind"] == "none"
        with pytest.raises(ProtocolError):
            hub.dispatch("answer", {
                "session": sid, "token": t2, "query_id": pending["query_id"],
                "verdict": "accept",
            })

    @pytest.mark.parametrize("patch", [
        {"verdict": "maybe"},
        {"verdict": "refute"},
        {"verdict": "refute", "name": "", "present": ["ed"], "absent": ["fl"]},
        {"verdict": "refute", "name": "z", "present": "ed", "absent": ["fl"]},
        {"verdict": "refute", "name": "z", "present": ["ro", "ed"], "absent": ["fl"]},
        {"verdict": "refute", "name": "z", "present": ["ed", "fl"], "absent": ["fl"]},
        {"verdict": "refute", "name": "z", "present": ["fl"], "absent": ["ed"]},
        {"verdict": "refute", "name": "z", "present": ["zz"], "absent": ["fl"]},
        {"kind": "guess"},
    ])
    def test_malformed_answers_are_rejected(self, patch):
        # query ed -> fl on block 1: `present` must hold the premise, `absent`
        # must hit the assigned part, both stay within the block, no overlap
        hub = SessionHub()
        sid, token, _ = bob_session(hub, mode="sampled", policy="cost",
                                    costs=[0, 1, 0], combining=False)
        msg = self.pending_query(hub, sid, token)
        assert (msg["premise"], msg["conclusion"]) == (["ed"], ["fl"])
        body = {"session": sid, "token": token, "query_id": msg["query_id"]}
        body.update(patch)
        with pytest.raises(ProtocolError):
            hub.dispatch("answer", body)

    def test_refute_that_misses_its_part_is_rejected(self):
        hub = SessionHub()
        sid, token, _ = bob_session(hub, mode="sampled", policy="cost",
                                    costs=[0, 1, 0], combining=False)
        msg = self.pending_query(hub, sid, token)
        with pytest.raises(ProtocolError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "query_id": msg["query_id"],
                "verdict": "refute", "name": "z",
                "present": ["ed"], "absent": [],
            })


class TestCombineFlow:
    def start_combine(self, hub, **options):
        """Drive Bob's session to the first combine phase.

        The empty-premise query is refuted by simulated expert 0 with the
        synthetic example x[], so once Bob accepts his part the session asks
        every other party for its view of x[].
        """
        sid, token, created = bob_session(hub, **options)
        assert created["phase"] == "awaiting-answers"
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        assert msg == {
            "ok": True, "kind": "query", "query_id": 1, "premise": [],
            "conclusion": ["fl", "ed"], "block": ["fl", "ed"],
        }
        ack = hub.dispatch("answer", {
            "session": sid, "token": token, "query_id": 1, "verdict": "accept",
        })
        assert ack["phase"] == "awaiting-combine"
        return sid, token

    def test_combine_prompt_and_merge(self, toy_universe):
        hub = SessionHub()
        sid, token = self.start_combine(hub)
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        assert msg == {
            "ok": True, "kind": "combine", "query_id": 1, "name": "x[]",
            "block": ["fl", "ed"],
        }
        status = hub.dispatch("session-status", {"session": sid})
        assert status["combine"] == {"query_id": 1, "name": "x[]", "awaiting": [1]}
        ack = hub.dispatch("answer", {
            "session": sid, "token": token, "kind": "combine", "query_id": 1,
            "known": True, "present": [], "absent": ["fl", "ed"],
        })
        assert ack["phase"] == "awaiting-answers"
        status = hub.dispatch("session-status", {"session": sid})
        assert status["counters"]["examples"] == 1
        assert status["counters"]["refutes"] == 1

    def test_conflicting_view_is_rejected_and_retryable(self):
        # the base example already has fl absent; claiming fl present clashes
        hub = SessionHub()
        sid, token = self.start_combine(hub)
        with pytest.raises(ConflictingEvidenceError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 1, "known": True, "present": ["fl"], "absent": [],
            })
        ack = hub.dispatch("answer", {
            "session": sid, "token": token, "kind": "combine", "query_id": 1,
            "known": False,
        })
        assert ack["phase"] == "awaiting-answers"

    def test_combine_validation(self):
        hub = SessionHub()
        sid, token = self.start_combine(hub)
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 99, "known": False,
            })
        with pytest.raises(ProtocolError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 1, "known": "dunno",
            })
        with pytest.raises(ProtocolError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 1, "known": True, "present": ["ro"], "absent": [],
            })
        hub.dispatch("answer", {
            "session": sid, "token": token, "kind": "combine", "query_id": 1,
            "known": True, "present": [], "absent": ["fl", "ed"],
        })
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 1, "known": False,
            })

    def test_unknown_view_contributes_nothing(self):
        hub = SessionHub()
        sid, token = self.start_combine(hub)
        hub.dispatch("answer", {
            "session": sid, "token": token, "kind": "combine", "query_id": 1,
            "known": False,
        })
        status = hub.dispatch("session-status", {"session": sid})
        # base view plus the simulated expert on {ro, ed} still pin all three
        assert status["counters"]["examples"] == 1

    def test_combining_off_never_enters_a_combine_phase(self):
        hub = SessionHub()
        sid, token, _ = bob_session(hub, combining=False)
        ack = hub.dispatch("answer", {
            "session": sid, "token": token, "query_id": 1, "verdict": "accept",
        })
        assert ack["phase"] == "awaiting-answers"
        status = hub.dispatch("session-status", {"session": sid})
        assert status["combine"] is None
        assert status["counters"]["examples"] == 1


class TestCombineTimeout:
    def test_explicit_timeout_op_completes_the_phase(self):
        hub = SessionHub()
        flow = TestCombineFlow()
        sid, token = flow.start_combine(hub)
        out = hub.dispatch("combine-timeout", {"session": sid})
        assert out == {"ok": True, "phase": "awaiting-answers"}
        status = hub.dispatch("session-status", {"session": sid})
        assert status["combine"] is None
        assert status["counters"]["examples"] == 1
        assert status["counters"]["audit"] == 1

    def test_deadline_fires_lazily_on_the_next_event(self):
        hub = SessionHub()
        flow = TestCombineFlow()
        sid, token = flow.start_combine(hub, combine_timeout=0.01)
        time.sleep(0.05)
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        assert msg["kind"] == "query"
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "kind": "combine",
                "query_id": 1, "known": False,
            })

    def test_deadline_does_not_fire_early(self):
        hub = SessionHub()
        flow = TestCombineFlow()
        sid, token = flow.start_combine(hub, combine_timeout=600)
        msg = hub.dispatch("poll", {"session": sid, "token": token})
        assert msg["kind"] == "combine"


class TestEventLog:
    def run_logged_session(self, path):
        hub = SessionHub(log_path=path)
        sid, token, _ = bob_session(hub)
        with pytest.raises(StaleQueryError):
            hub.dispatch("answer", {
                "session": sid, "token": token, "query_id": 99,
                "verdict": "accept",
            })
        hub.dispatch("answer", {
            "session": sid, "token": token, "query_id": 1, "verdict": "accept",
        })
        hub.dispatch("answer", {
            "session": sid, "token": token, "kind": "combine", "query_id": 1,
            "known": True, "present": [], "absent": ["fl", "ed"],
        })
        return hub, sid, token

    def test_replay_reconstructs_the_session(self, tmp_path):
        path = tmp_path / "events.jsonl"
        hub, sid, token = self.run_logged_session(path)
        want = hub.dispatch("session-status", {"session": sid})

        replayed = SessionHub()
        applied = replayed.replay(path)
        assert applied == len(path.read_text().splitlines())
        assert replayed.dispatch("session-status", {"session": sid}) == want
        assert replayed.dispatch("poll", {"session": sid, "token": token}) == \
            hub.dispatch("poll", {"session": sid, "token": token})

    def test_reads_are_not_logged(self, tmp_path):
        path = tmp_path / "events.jsonl"
        hub, sid, token = self.run_logged_session(path)
        hub.dispatch("session-status", {"session": sid})
        hub.dispatch("poll", {"session": sid, "token": token})
        ops = [json.loads(l)["op"] for l in path.read_text().splitlines()]
        assert ops == ["create-session", "register-expert", "answer",
                       "answer", "answer"]

    def test_lazy_timeout_is_logged_and_replayable(self, tmp_path):
        path = tmp_path / "events.jsonl"
        hub = SessionHub(log_path=path)
        flow = TestCombineFlow()
        sid, token = flow.start_combine(hub, combine_timeout=0.01)
        time.sleep(0.05)
        hub.dispatch("poll", {"session": sid, "token": token})
        ops = [json.loads(l)["op"] for l in path.read_text().splitlines()]
        assert ops[-1] == "combine-timeout"

        replayed = SessionHub()
        replayed.replay(path)
        assert replayed.dispatch("session-status", {"session": sid}) == \
            hub.dispatch("session-status", {"session": sid})

    def test_finished_session_replays_to_the_same_report(self, tmp_path):
        path = tmp_path / "events.jsonl"
        hub = SessionHub(log_path=path)
        created = hub.dispatch("create-session", create_body(sim_experts="all"))
        sid = created["session"]
        replayed = SessionHub()
        replayed.replay(path)
        assert replayed.dispatch("result", {"session": sid}) == \
            hub.dispatch("result", {"session": sid})

    def test_run_server_resumes_from_its_log(self, tmp_path):
        path = tmp_path / "events.jsonl"
        hub, sid, token = self.run_logged_session(path)
        server = run_server(port=0, log_path=path)
        try:
            resumed = server.hub.dispatch("session-status", {"session": sid})
            assert resumed == hub.dispatch("session-status", {"session": sid})
        finally:
            server.server_close()


class TestErrorPayload:
    @pytest.mark.parametrize("exc,code,status", [
        (FormatError("x"), "format", 400),
        (ProtocolError("x"), "validation", 400),
        (CapacityError("x"), "capacity", 400),
        (StaleQueryError("x"), "conflict", 409),
        (ConflictingEvidenceError("x"), "conflict", 409),
        (NotReadyError("x"), "not-ready", 409),
        (UnknownExpertError("x"), "unknown-expert", 404),
        (UnknownSessionError("x"), "unknown-session", 404),
        (RuntimeError("boom"), "internal", 500),
    ])
    def test_wire_codes(self, exc, code, status):
        got_status, payload = error_payload(exc)
        assert (got_status, payload["error"]) == (status, code)
        assert payload["ok"] is False


class _Client:
    def __init__(self, port):
        self.root = f"http://127.0.0.1:{port}"

    def request(self, method, path, body=None):
        data = None if body is None else json.dumps(body).encode()
        req = urllib.request.Request(
            self.root + path, data=data, method=method,
            headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(req) as resp:
                return resp.status, dict(resp.headers), resp.read()
        except urllib.error.HTTPError as err:
            return err.code, dict(err.headers), err.read()

    def post(self, op, body):
        status, _, raw = self.request("POST", f"/api/{op}", body)
        return status, json.loads(raw)


@pytest.fixture
def server(tmp_path):
    console = tmp_path / "console"
    console.mkdir()
    (console / "index.html").write_text("<h1>console</h1>")
    (console / "app.js").write_text("export {};")
    srv = run_server(port=0, console_dir=console)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    try:
        yield _Client(srv.server_address[1])
    finally:
        srv.shutdown()
        srv.server_close()


class TestHttpAdapter:
    def test_full_session_over_http(self, server):
        status, created = server.post("create-session", create_body(sim_experts="all"))
        assert status == 200 and created["phase"] == "done"
        status, result = server.post("result", {"session": created["session"]})
        assert status == 200
        assert result["report"] == fixture_text("toy_strong_on.report")

    def test_error_statuses_reach_the_wire(self, server):
        status, payload = server.post("result", {"session": "s404"})
        assert (status, payload["error"]) == (404, "unknown-session")
        status, payload = server.post("create-session", {"domain": "a\n"})
        assert (status, payload["error"]) == (400, "format")
        status, created = server.post("create-session", create_body(sim_experts=[0, 2]))
        assert status == 200
        status, payload = server.post("result", {"session": created["session"]})
        assert (status, payload["error"]) == (409, "not-ready")

    def test_unknown_endpoint_and_bad_json(self, server):
        status, payload = server.post("drop-table", {})
        assert (status, payload["error"]) == (404, "not-found")
        status, _, raw = server.request("POST", "/echo", {})
        assert status == 404
        req = urllib.request.Request(
            server.root + "/api/create-session", data=b"{not json",
            method="POST", headers={"Content-Type": "application/json"},
        )
        try:
            with urllib.request.urlopen(req) as resp:
                status = resp.status
        except urllib.error.HTTPError as err:
            status, payload = err.code, json.loads(err.read())
        assert (status, payload["error"]) == (400, "format")

    def test_healthz_and_cors(self, server):
        status, headers, raw = server.request("GET", "/healthz")
        assert status == 200 and json.loads(raw) == {"ok": True}
        assert headers.get("Access-Control-Allow-Origin") == "*"
        status, headers, _ = server.request("OPTIONS", "/api/poll")
        assert status == 204
        assert "POST" in headers.get("Access-Control-Allow-Methods", "")

    def test_console_static_files(self, server):
        status, headers, raw = server.request("GET", "/console/")
        assert status == 200 and b"console" in raw
        assert headers["Content-Type"].startswith("text/html")
        status, headers, _ = server.request("GET", "/console/app.js")
        assert status == 200
        assert headers["Content-Type"].startswith("text/javascript")
        status, _, _ = server.request("GET", "/console/missing.css")
        assert status == 404
        status, _, _ = server.request("GET", "/console/../events.jsonl")
        assert status == 404
        status, _, _ = server.request("GET", "/elsewhere")
        assert status == 404
