"""HTTP service exposing table computation and audit sessions.

JSON over HTTP/1.1, versioned under /v1.  Sessions persist to an
append-only JSON-lines log; a restart replays the log, so audit trails
survive crashes without an external database.  Mutations use optimistic
concurrency: every round post must carry the session's current revision.
"""

from __future__ import annotations

import argparse
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from pollaudit import __version__
from pollaudit.rules import rule_from_descriptor
from pollaudit.session import (
    SessionState,
    export_trail,
    new_session,
    record_round,
    session_to_json,
)
from pollaudit.tables import Schedule, build_table, emit_table


class TableRequest(BaseModel):
    rule: dict
    schedule: list[int]
    hand_count: bool = True


class SessionRequest(BaseModel):
    N: int
    rule: dict
    schedule: list[int]
    winner_name: str = "announced winner"
    loser_name: str = "announced loser"
    hand_count: bool = True


class RoundRequest(BaseModel):
    n: int
    k: int
    revision: int


@dataclass
class ApiSession:
    state: SessionState
    revision: int = 0
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    """In-memory index over an append-only JSONL event log."""

    def __init__(self, data_dir: Optional[Path]):
        self._sessions: dict[str, ApiSession] = {}
        self._log_path = data_dir / "sessions.jsonl" if data_dir else None
        self._log_lock = threading.Lock()
        if self._log_path and self._log_path.exists():
            self._replay()

    def _replay(self) -> None:
        for line in self._log_path.read_text().splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            if event["event"] == "created":
                body = event["body"]
                state = new_session(
                    N=body["N"],
                    rule=rule_from_descriptor(body["rule"]),
                    schedule=Schedule(tuple(body["schedule"])),
                    winner_name=body["winner_name"],
                    loser_name=body["loser_name"],
                    session_id=body["session_id"],
                    hand_count=body["hand_count"],
                )
                self._sessions[body["session_id"]] = ApiSession(
                    state=state, created_at=body["created_at"])
            elif event["event"] == "round":
                api = self._sessions[event["session_id"]]
                api.state, _ = record_round(api.state, event["n"], event["k"],
                                            timestamp=event["timestamp"])
                api.revision += 1

    def _append(self, event: dict) -> None:
        if self._log_path is None:
            return
        with self._log_lock:
            with self._log_path.open("a") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def create(self, req: SessionRequest) -> ApiSession:
        state = new_session(
            N=req.N,
            rule=rule_from_descriptor(req.rule),
            schedule=Schedule(tuple(req.schedule)),
            winner_name=req.winner_name,
            loser_name=req.loser_name,
            hand_count=req.hand_count,
        )
        api = ApiSession(state=state)
        self._sessions[state.session_id] = api
        self._append({"event": "created", "body": {
            "session_id": state.session_id, "N": req.N, "rule": req.rule,
            "schedule": req.schedule, "winner_name": req.winner_name,
            "loser_name": req.loser_name, "hand_count": req.hand_count,
            "created_at": api.created_at,
        }})
        return api

    def get(self, session_id: str) -> Optional[ApiSession]:
        return self._sessions.get(session_id)

    def record(self, api: ApiSession, req: RoundRequest):
        with api.lock:
            if req.revision != api.revision:
                raise RevisionConflict(api.revision)
            new_state, verdict = record_round(api.state, req.n, req.k)
            api.state = new_state
            api.revision += 1
            self._append({"event": "round", "session_id": new_state.session_id,
                          "n": req.n, "k": req.k,
                          "timestamp": new_state.rounds[-1].timestamp})
            return verdict


class RevisionConflict(Exception):
    def __init__(self, current: int):
        self.current = current


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _session_view(api: ApiSession) -> dict:
    view = session_to_json(api.state)
    view["revision"] = api.revision
    view["created_at"] = api.created_at
    view["version"] = __version__
    return view


def create_app(data_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="pollaudit", version=__version__)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    store = SessionStore(Path(data_dir) if data_dir else None)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return _error(400, "validation_error", str(exc.errors()))

    @app.get("/v1/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/v1/tables")
    def make_table(req: TableRequest):
        try:
            rule = rule_from_descriptor(req.rule)
            table = build_table(rule, Schedule(tuple(req.schedule)), hand_count=req.hand_count)
        except (ValueError, KeyError, TypeError) as exc:
            return _error(400, "bad_rule", str(exc))
        return json.loads(emit_table(table, "json").decode())

    @app.post("/v1/sessions", status_code=201)
    def create_session(req: SessionRequest):
        try:
            api = store.create(req)
        except (ValueError, KeyError, TypeError) as exc:
            return _error(400, "bad_session", str(exc))
        return _session_view(api)

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        api = store.get(session_id)
        if api is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        return _session_view(api)

    @app.post("/v1/sessions/{session_id}/rounds")
    def post_round(session_id: str, req: RoundRequest):
        api = store.get(session_id)
        if api is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        try:
            verdict = store.record(api, req)
        except RevisionConflict as exc:
            return _error(409, "revision_conflict",
                          f"stale revision; current is {exc.current}")
        except ValueError as exc:
            return _error(422, "invariant_violation", str(exc))
        view = _session_view(api)
        return {"verdict": verdict.value, "session": view}

    @app.get("/v1/sessions/{session_id}/trail")
    def get_trail(session_id: str):
        api = store.get(session_id)
        if api is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        return Response(content=export_trail(api.state), media_type="application/json")

    return app


def main(argv=None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(description="pollaudit HTTP service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8400)
    parser.add_argument("--data-dir", help="directory for the append-only session log")
    parser.add_argument("--static-dir", help="serve a built web UI from this directory at /")
    args = parser.parse_args(argv)
    if args.data_dir:
        Path(args.data_dir).mkdir(parents=True, exist_ok=True)
    app = create_app(args.data_dir)
    if args.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=args.static_dir, html=True), name="ui")
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
