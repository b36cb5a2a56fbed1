"""Collaborative exploration sessions behind a polling wire protocol.

A session runs one exploration whose answering parties are a mix of
registered humans (answering asynchronously via poll/answer) and simulated
experts realized against a known target system (answering synchronously at
assignment). The state machine is transport-free; a thin HTTP adapter with
JSON bodies exposes it. Every mutating message is appended to an event log,
so replaying the log reconstructs the exact session state.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .closure import ClosureSystem
from .consortium import (
    Consortium,
    ExpertAnswer,
    LocalExpertSpec,
    Mode,
    SelectionStrategy,
    Verdict,
    consortium_from_domain,
    local_answer,
    parse_domain,
    plan_consultation,
)
from .context import all_intents, parse_burmeister
from .errors import (
    CapacityError,
    ConflictingEvidenceError,
    ConsortexError,
    FormatError,
    InvalidDomainError,
    MalformedDesignError,
    NotReadyError,
    ProtocolError,
    QualificationError,
    StaleQueryError,
    UniverseMismatchError,
    UnknownExpertError,
    UnknownSessionError,
)
from .exploration import (
    ExampleRegistry,
    ExplorationReport,
    ExplorationState,
    PartialExample,
    build_report,
    next_query,
    submit_answer,
)
from .consortium import ExampleNamer
from .implications import Implication, format_implication
from .oracles import party_view
from .sets import AttributeSet, Universe

_PUBLIC_OPS = (
    "create-session",
    "register-expert",
    "poll",
    "answer",
    "result",
    "session-status",
)


def _expert_token(session_id: str, block_index: int) -> str:
    digest = hashlib.sha256(f"{session_id}:{block_index}".encode()).hexdigest()
    return f"{session_id}-e{block_index}-{digest[:12]}"


@dataclass(frozen=True)
class SessionOptions:
    mode: Mode = Mode.STRONG
    strategy: SelectionStrategy = field(default_factory=SelectionStrategy)
    combining: bool = True
    sim_experts: frozenset[int] = frozenset()
    combine_timeout: float | None = None

    @classmethod
    def from_wire(cls, raw: dict, block_count: int) -> "SessionOptions":
        if not isinstance(raw, dict):
            raise FormatError("options must be an object")
        mode_name = raw.get("mode", "strong")
        if mode_name not in ("strong", "sampled"):
            raise FormatError(f"unknown mode {mode_name!r}")
        policy = raw.get("policy", "all")
        costs = raw.get("costs")
        if costs is not None:
            if not isinstance(costs, list) or len(costs) != block_count:
                raise FormatError("costs must list one number per block")
            costs = tuple(float(c) for c in costs)
        try:
            strategy = SelectionStrategy(
                policy=policy,
                costs=costs,
                sample_size=int(raw.get("sample_size", 1)),
                seed=int(raw.get("seed", 0)),
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc)) from None
        sims_raw = raw.get("sim_experts", [])
        if sims_raw == "all":
            sims = frozenset(range(block_count))
        elif isinstance(sims_raw, list):
            sims = frozenset(int(i) for i in sims_raw)
        else:
            raise FormatError("sim_experts must be 'all' or a list of block indices")
        for i in sims:
            if not 0 <= i < block_count:
                raise FormatError(f"sim expert index {i} out of range")
        timeout = raw.get("combine_timeout")
        if timeout is not None:
            timeout = float(timeout)
            if timeout <= 0:
                raise FormatError("combine_timeout must be positive")
        combining = raw.get("combining", True)
        if not isinstance(combining, bool):
            raise FormatError("combining must be a boolean")
        return cls(
            mode=Mode.STRONG if mode_name == "strong" else Mode.SAMPLED,
            strategy=strategy,
            combining=combining,
            sim_experts=sims,
            combine_timeout=timeout,
        )


@dataclass
class Party:
    index: int
    spec: LocalExpertSpec
    sim: bool
    token: str | None = None
    name: str | None = None

    @property
    def registered(self) -> bool:
        return self.sim or self.token is not None


@dataclass
class _Pending:
    query: Implication
    query_id: int
    bundles: dict[int, int]
    answers: dict[int, ExpertAnswer]
    unanswerable: bool


@dataclass
class _Combine:
    query: Implication
    query_id: int
    aggregate: ExpertAnswer
    name: str
    base_example: PartialExample
    awaiting: set[int]
    contributions: dict[int, PartialExample | None]
    deadline: float | None


def _names(attrs: AttributeSet) -> list[str]:
    return list(attrs.names)


class Session:
    """One collaborative exploration run; all methods assume external locking."""

    def __init__(
        self,
        session_id: str,
        consortium: Consortium,
        options: SessionOptions,
        target: ClosureSystem | None,
        namer: ExampleNamer | None,
    ):
        if options.sim_experts and target is None:
            raise FormatError("simulated experts need a context or target")
        self.id = session_id
        self.universe = consortium.universe
        self.consortium = consortium
        self.options = options
        self.target = target
        self.namer = namer
        self.parties = [
            Party(i, spec, sim=i in options.sim_experts)
            for i, spec in enumerate(consortium.experts)
        ]
        self.state = ExplorationState(self.universe, merge_names=options.combining)
        self.registry = ExampleRegistry()
        self.pending: _Pending | None = None
        self.combine: _Combine | None = None
        self.done = False
        self.report: ExplorationReport | None = None
        self.query_counter = 0
        self.audit: list[dict] = []
        self._token_index: dict[str, int] = {}

    # -- state machine ----------------------------------------------------

    @property
    def phase(self) -> str:
        if self.done:
            return "done"
        if self.combine is not None:
            return "awaiting-combine"
        return "awaiting-answers"

    def pump(self) -> None:
        """Advance until done, a combine phase, or a human answer is needed."""
        while not self.done and self.combine is None:
            if self.pending is None:
                query = next_query(self.state)
                if query is None:
                    self.done = True
                    self.report = build_report(self.state)
                    return
                self.query_counter += 1
                self.state.queries += 1
                bundles, unanswerable = plan_consultation(self.consortium, query)
                self.pending = _Pending(
                    query, self.query_counter, bundles, {}, unanswerable
                )
            self._run_pending_sims()
            aggregate = self._try_aggregate()
            if aggregate is None:
                return
            self._finalize(aggregate)

    def _run_pending_sims(self) -> None:
        p = self.pending
        for j in sorted(p.bundles):
            if j in p.answers or not self.parties[j].sim:
                continue
            answer = self._sim_answer(j)
            p.answers[j] = answer
            if (
                answer.verdict is Verdict.REFUTE
                and self.options.mode is Mode.SAMPLED
            ):
                return

    def _sim_answer(self, j: int) -> ExpertAnswer:
        p = self.pending
        spec = self.parties[j].spec
        view = Implication(
            p.query.premise, AttributeSet(self.universe, p.bundles[j])
        )
        answer = local_answer(spec, self.target, view)
        if answer.verdict is not Verdict.REFUTE:
            return answer
        name = self.namer.name_for(answer.counterexample.mask, spec.block.mask)
        return ExpertAnswer.refute(answer.counterexample, spec.block, name, expert=j)

    def _try_aggregate(self) -> ExpertAnswer | None:
        p = self.pending
        refutes = [
            j for j in sorted(p.answers) if p.answers[j].verdict is Verdict.REFUTE
        ]
        if refutes and self.options.mode is Mode.SAMPLED:
            return p.answers[refutes[0]]
        if len(p.answers) < len(p.bundles):
            return None
        if refutes:
            return p.answers[refutes[0]]
        if p.unanswerable:
            return ExpertAnswer.null()
        return ExpertAnswer.accept()

    def _finalize(self, aggregate: ExpertAnswer) -> None:
        p = self.pending
        self.pending = None
        if (
            aggregate.verdict is Verdict.REFUTE
            and self.options.combining
            and aggregate.name is not None
        ):
            base = PartialExample(
                aggregate.name,
                aggregate.counterexample,
                aggregate.block - aggregate.counterexample,
            )
            prompted = {
                k for k in range(len(self.parties)) if k != aggregate.expert
            }
            deadline = (
                time.monotonic() + self.options.combine_timeout
                if self.options.combine_timeout is not None
                else None
            )
            self.combine = _Combine(
                p.query, p.query_id, aggregate, aggregate.name, base,
                prompted, {}, deadline,
            )
            self._run_combine_sims()
            return
        self._ingest(p.query, aggregate, ())

    def _run_combine_sims(self) -> None:
        c = self.combine
        member = self.namer.resolve(c.name) if self.namer is not None else None
        for j in sorted(c.awaiting):
            if not self.parties[j].sim:
                continue
            contribution = None
            if member is not None:
                contribution = party_view(c.name, member, self.parties[j].spec)
            c.contributions[j] = contribution
            c.awaiting.discard(j)
        if not c.awaiting:
            self._complete_combine()

    def _complete_combine(self) -> None:
        c = self.combine
        self.combine = None
        views = tuple(
            c.contributions[j]
            for j in sorted(c.contributions)
            if c.contributions[j] is not None
        )
        self._ingest(c.query, c.aggregate, views)

    def _ingest(
        self,
        query: Implication,
        aggregate: ExpertAnswer,
        views: tuple[PartialExample, ...],
    ) -> None:
        submit_answer(self.state, query, aggregate, views)
        if self.options.combining:
            self.registry = ExampleRegistry(self.state.examples)

    # -- wire operations ---------------------------------------------------

    def register(self, block_index: int, name: str | None) -> dict:
        if not 0 <= block_index < len(self.parties):
            raise ProtocolError(f"no block with index {block_index}")
        party = self.parties[block_index]
        if party.sim:
            raise ProtocolError(f"block {block_index} is answered by a simulated expert")
        if party.token is not None:
            raise ProtocolError(f"block {block_index} already has a registered expert")
        token = _expert_token(self.id, block_index)
        party.token = token
        party.name = name
        self._token_index[token] = block_index
        return {
            "ok": True,
            "session": self.id,
            "token": token,
            "block": _names(party.spec.block),
            "attributes": list(self.universe.names),
        }

    def _party_for(self, token: str) -> int:
        if token not in self._token_index:
            raise UnknownExpertError("unknown expert token")
        return self._token_index[token]

    def poll(self, token: str) -> dict:
        j = self._party_for(token)
        c = self.combine
        if c is not None and j in c.awaiting:
            return {
                "ok": True,
                "kind": "combine",
                "query_id": c.query_id,
                "name": c.name,
                "block": _names(self.parties[j].spec.block),
            }
        p = self.pending
        if p is not None and j in p.bundles and j not in p.answers:
            return {
                "ok": True,
                "kind": "query",
                "query_id": p.query_id,
                "premise": list(self.universe.mask_names(p.query.premise.mask)),
                "conclusion": list(self.universe.mask_names(p.bundles[j])),
                "block": _names(self.parties[j].spec.block),
            }
        return {
            "ok": True,
            "kind": "none",
            "query_id": self.query_counter,
            "phase": self.phase,
        }

    def answer(self, token: str, body: dict) -> dict:
        j = self._party_for(token)
        kind = body.get("kind", "query")
        if kind == "combine":
            self._record_combine(j, body)
        elif kind == "query":
            self._record_answer(j, body)
        else:
            raise ProtocolError(f"unknown answer kind {kind!r}")
        self.pump()
        return {
            "ok": True,
            "ack": True,
            "phase": self.phase,
            "query_id": self.query_counter,
        }

    def _wire_subset(self, values: object, what: str) -> AttributeSet:
        if not isinstance(values, list) or not all(
            isinstance(v, str) for v in values
        ):
            raise ProtocolError(f"{what} must be a list of attribute names")
        try:
            return self.universe.subset(values)
        except UniverseMismatchError as exc:
            raise ProtocolError(str(exc)) from None

    def _record_answer(self, j: int, body: dict) -> None:
        p = self.pending
        qid = body.get("query_id")
        if p is None or qid != p.query_id:
            self.audit.append(
                {"type": "stale-answer", "expert": j, "query_id": qid}
            )
            raise StaleQueryError(f"query {qid!r} is not pending")
        if j not in p.bundles:
            raise ProtocolError("expert was not selected for this query")
        if j in p.answers:
            self.audit.append(
                {"type": "duplicate-answer", "expert": j, "query_id": qid}
            )
            raise StaleQueryError("expert already answered this query")
        verdict = body.get("verdict")
        if verdict == "accept":
            p.answers[j] = ExpertAnswer.accept()
            return
        if verdict != "refute":
            raise ProtocolError(f"unknown verdict {verdict!r}")
        name = body.get("name")
        if not isinstance(name, str) or not name:
            raise ProtocolError("refute answers must name the counterexample")
        present = self._wire_subset(body.get("present"), "present")
        absent = self._wire_subset(body.get("absent"), "absent")
        block = self.parties[j].spec.block
        if not (present <= block and absent <= block):
            raise ProtocolError("refute sets must stay within the expert's block")
        if present.mask & absent.mask:
            raise ProtocolError("present and absent must be disjoint")
        if not p.query.premise <= present:
            raise ProtocolError("counterexample must contain the premise")
        if not p.bundles[j] & absent.mask:
            raise ProtocolError("counterexample does not refute the assigned part")
        support = present | absent
        p.answers[j] = ExpertAnswer.refute(present, support, name, expert=j)

    def _record_combine(self, j: int, body: dict) -> None:
        c = self.combine
        qid = body.get("query_id")
        if c is None or qid != c.query_id:
            self.audit.append(
                {"type": "stale-combine", "expert": j, "query_id": qid}
            )
            raise StaleQueryError(f"no combine phase for query {qid!r}")
        if j not in c.awaiting:
            raise StaleQueryError("expert was not prompted or already responded")
        if not isinstance(body.get("known"), bool):
            raise ProtocolError("combine responses must carry a boolean 'known'")
        contribution = None
        if body["known"]:
            present = self._wire_subset(body.get("present"), "present")
            absent = self._wire_subset(body.get("absent"), "absent")
            block = self.parties[j].spec.block
            if not (present <= block and absent <= block):
                raise ProtocolError("combine sets must stay within the expert's block")
            contribution = PartialExample(c.name, present, absent)
            self._check_combine_consistency(contribution)
        c.contributions[j] = contribution
        c.awaiting.discard(j)
        if not c.awaiting:
            self._complete_combine()

    def _check_combine_consistency(self, contribution: PartialExample) -> None:
        """Reject a view that contradicts everything merged so far."""
        preview = self.combine.base_example
        existing = self.registry.get(self.combine.name)
        if existing is not None:
            preview = preview.merge(existing)
        for j in sorted(self.combine.contributions):
            view = self.combine.contributions[j]
            if view is not None:
                preview = preview.merge(view)
        preview.merge(contribution)

    def combine_deadline_passed(self) -> bool:
        c = self.combine
        return (
            c is not None
            and c.deadline is not None
            and time.monotonic() > c.deadline
        )

    def apply_combine_timeout(self) -> None:
        """Treat parties that never responded to the combine prompt as unaware."""
        c = self.combine
        if c is None:
            return
        for j in sorted(c.awaiting):
            c.contributions[j] = None
            self.audit.append(
                {"type": "combine-timeout", "expert": j, "query_id": c.query_id}
            )
        c.awaiting.clear()
        self._complete_combine()
        self.pump()

    def status(self) -> dict:
        p = self.pending
        c = self.combine
        return {
            "ok": True,
            "session": self.id,
            "phase": self.phase,
            "query_id": self.query_counter,
            "attributes": list(self.universe.names),
            "blocks": [_names(s.block) for s in self.consortium.experts],
            "pending": None
            if p is None
            else {
                "query_id": p.query_id,
                "premise": list(self.universe.mask_names(p.query.premise.mask)),
                "conclusion": list(
                    self.universe.mask_names(
                        p.query.conclusion.mask & ~p.query.premise.mask
                    )
                ),
                "selected": sorted(p.bundles),
                "answered": sorted(p.answers),
            },
            "combine": None
            if c is None
            else {
                "query_id": c.query_id,
                "name": c.name,
                "awaiting": sorted(c.awaiting),
            },
            "counters": {
                "queries": self.state.queries,
                "accepts": self.state.accepts,
                "refutes": self.state.refutes,
                "nulls": self.state.nulls,
                "repairs": self.state.repairs,
                "deferred": len(self.state.deferred),
                "examples": len(self.state.examples),
                "audit": len(self.audit),
            },
            "roster": [
                {
                    "block": _names(party.spec.block),
                    "sim": party.sim,
                    "registered": party.registered,
                    "name": party.name,
                }
                for party in self.parties
            ],
        }

    def result(self) -> dict:
        if not self.done:
            raise NotReadyError(f"session {self.id} is in phase {self.phase}")
        r = self.report
        return {
            "ok": True,
            "session": self.id,
            "report": r.serialize(),
            "base": [format_implication(i) for i in r.base],
            "deferred": [format_implication(i) for i in r.deferred],
            "examples": [e.serialize() for e in r.examples],
            "meta": {
                "queries": r.queries,
                "accepts": r.accepts,
                "refutes": r.refutes,
                "nulls": r.nulls,
                "repairs": r.repairs,
                "deferred": len(r.deferred),
                "interval": r.interval_note,
            },
        }


def build_session(session_id: str, body: dict) -> Session:
    """Construct a session from a create-session request body."""
    has_context = "context" in body
    has_target = "target" in body
    if has_context == has_target:
        raise FormatError("exactly one of 'context' or 'target' is required")
    ctx = None
    if has_context:
        raw = body["context"]
        if not isinstance(raw, str):
            raise FormatError("context must be the text of a context file")
        ctx = parse_burmeister(raw)
        universe = ctx.universe
        target = all_intents(ctx)
    else:
        spec = body["target"]
        if not isinstance(spec, dict):
            raise FormatError("target must be an object")
        attrs = spec.get("attributes")
        sets = spec.get("sets")
        if not isinstance(attrs, list) or not isinstance(sets, list):
            raise FormatError("target needs 'attributes' and 'sets' lists")
        universe = Universe(attrs)
        try:
            target = ClosureSystem(
                universe, [universe.subset(s) for s in sets]
            )
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    domain_text = body.get("domain")
    if not isinstance(domain_text, str):
        raise FormatError("'domain' must be the text of a domain file")
    domain, pre = parse_domain(domain_text, universe)
    options = SessionOptions.from_wire(body.get("options", {}), len(domain.blocks))
    try:
        consortium = consortium_from_domain(
            domain, pre, ctx, options.mode, options.strategy
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    namer = ExampleNamer(target, ctx) if options.sim_experts else None
    return Session(session_id, consortium, options, target, namer)


class SessionHub:
    """All live sessions plus the append-only event log.

    Lock order: a session's lock is taken before the hub-global lock; the
    global lock guards the id counter, the session table, and log appends.
    """

    def __init__(self, log_path: str | Path | None = None):
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._counter = 0
        self._global = threading.Lock()
        self._log_path = Path(log_path) if log_path is not None else None
        self._replaying = False

    def dispatch(self, op: str, body: dict) -> dict:
        if not isinstance(body, dict):
            raise FormatError("request body must be a JSON object")
        if op == "create-session":
            return self._create(body)
        if op == "combine-timeout":
            session, lock = self._resolve(body)
            with lock:
                self._log(op, body)
                session.apply_combine_timeout()
                return {"ok": True, "phase": session.phase}
        if op not in _PUBLIC_OPS:
            raise ProtocolError(f"unknown operation {op!r}")
        session, lock = self._resolve(body)
        with lock:
            self._fire_timeout(session, body)
            if op == "register-expert":
                self._log(op, body)
                block = body.get("block")
                if not isinstance(block, int):
                    raise FormatError("'block' must be a block index")
                name = body.get("name")
                if name is not None and not isinstance(name, str):
                    raise FormatError("'name' must be a string")
                return session.register(block, name)
            if op == "poll":
                return session.poll(self._token(body))
            if op == "answer":
                self._log(op, body)
                return session.answer(self._token(body), body)
            if op == "result":
                return session.result()
            if op == "session-status":
                return session.status()
        raise ProtocolError(f"unknown operation {op!r}")

    def _fire_timeout(self, session: Session, body: dict) -> None:
        """Lazily expire an overdue combine phase before handling the event."""
        if self._replaying or not session.combine_deadline_passed():
            return
        self._log("combine-timeout", {"session": session.id})
        session.apply_combine_timeout()

    def _token(self, body: dict) -> str:
        token = body.get("token")
        if not isinstance(token, str):
            raise UnknownExpertError("'token' is required")
        return token

    def _resolve(self, body: dict) -> tuple[Session, threading.Lock]:
        sid = body.get("session")
        with self._global:
            if sid not in self._sessions:
                raise UnknownSessionError(f"unknown session {sid!r}")
            return self._sessions[sid], self._locks[sid]

    def _create(self, body: dict) -> dict:
        with self._global:
            self._counter += 1
            session_id = f"s{self._counter}"
            self._append_log("create-session", body)
        session = build_session(session_id, body)
        session.pump()
        with self._global:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
        return {
            "ok": True,
            "session": session_id,
            "attributes": list(session.universe.names),
            "blocks": [_names(s.block) for s in session.consortium.experts],
            "phase": session.phase,
            "query_id": session.query_counter,
        }

    def _log(self, op: str, body: dict) -> None:
        with self._global:
            self._append_log(op, body)

    def _append_log(self, op: str, body: dict) -> None:
        if self._replaying or self._log_path is None:
            return
        line = json.dumps({"op": op, "body": body}, sort_keys=True)
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    def replay(self, path: str | Path | None = None) -> int:
        """Re-apply a JSONL event log; returns the number of events applied.

        Events that failed originally fail again identically and are skipped.
        """
        source = Path(path) if path is not None else self._log_path
        if source is None or not source.exists():
            return 0
        applied = 0
        self._replaying = True
        try:
            for line in source.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                event = json.loads(line)
                try:
                    self.dispatch(event["op"], event["body"])
                except ConsortexError:
                    pass
                applied += 1
        finally:
            self._replaying = False
        return applied


_ERROR_MAP: list[tuple[type, str, int]] = [
    (FormatError, "format", 400),
    (InvalidDomainError, "invalid-domain", 400),
    (MalformedDesignError, "invalid-domain", 400),
    (CapacityError, "capacity", 400),
    (QualificationError, "validation", 400),
    (ProtocolError, "validation", 400),
    (UniverseMismatchError, "format", 400),
    (ConflictingEvidenceError, "conflict", 409),
    (StaleQueryError, "conflict", 409),
    (NotReadyError, "not-ready", 409),
    (UnknownExpertError, "unknown-expert", 404),
    (UnknownSessionError, "unknown-session", 404),
]


def error_payload(exc: Exception) -> tuple[int, dict]:
    for kind, code, status in _ERROR_MAP:
        if isinstance(exc, kind):
            return status, {"ok": False, "error": code, "detail": str(exc)}
    return 500, {"ok": False, "error": "internal", "detail": str(exc)}


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def hub(self) -> SessionHub:
        return self.server.hub

    def log_message(self, *args) -> None:
        pass

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode()
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_POST(self) -> None:
        if not self.path.startswith("/api/"):
            self._send_json(404, {"ok": False, "error": "not-found", "detail": self.path})
            return
        op = self.path[len("/api/"):]
        if op not in _PUBLIC_OPS:
            self._send_json(
                404, {"ok": False, "error": "not-found", "detail": f"no endpoint {op!r}"}
            )
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length) if length else b"{}"
            body = json.loads(raw.decode("utf-8")) if raw.strip() else {}
        except (ValueError, UnicodeDecodeError) as exc:
            self._send_json(
                400, {"ok": False, "error": "format", "detail": f"bad JSON body: {exc}"}
            )
            return
        try:
            payload = self.hub.dispatch(op, body)
        except Exception as exc:
            status, payload = error_payload(exc)
            self._send_json(status, payload)
            return
        self._send_json(200, payload)

    def do_GET(self) -> None:
        if self.path in ("/healthz", "/api/healthz"):
            self._send_json(200, {"ok": True})
            return
        if self.path == "/console" or self.path.startswith("/console/"):
            self._serve_console()
            return
        self._send_json(404, {"ok": False, "error": "not-found", "detail": self.path})

    def _serve_console(self) -> None:
        root = self.server.console_dir
        if root is None:
            self._send_json(
                404, {"ok": False, "error": "not-found", "detail": "no console deployed"}
            )
            return
        rel = self.path[len("/console"):].lstrip("/") or "index.html"
        rel = rel.split("?", 1)[0]
        target = (root / rel).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._send_json(404, {"ok": False, "error": "not-found", "detail": self.path})
            return
        data = target.read_bytes()
        self.send_response(200)
        self._cors()
        self.send_header(
            "Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        )
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


class ServiceServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, hub: SessionHub, console_dir: Path | None):
        super().__init__(address, _Handler)
        self.hub = hub
        self.console_dir = console_dir


def run_server(
    host: str = "127.0.0.1",
    port: int = 8765,
    log_path: str | Path | None = None,
    console_dir: str | Path | None = None,
) -> ServiceServer:
    """Bind the service; resumes from the event log when one is given."""
    hub = SessionHub(log_path)
    hub.replay()
    directory = Path(console_dir) if console_dir is not None else None
    return ServiceServer((host, port), hub, directory)
