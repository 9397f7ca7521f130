"""Live audit sessions: round-by-round verdicts with a tamper-evident trail.

A session freezes its lookup table at creation, so configuration changes can
never silently alter a running audit.  Auditors report cumulative counts
after each scheduled round; the verdict is the table comparison (confirm at
k >= k+, hand count at k <= k-).  Exhausting the schedule without a verdict
is recorded as its own terminal state; operationally it means hand count.
"""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from pollaudit.rules import Decision
from pollaudit.tables import LookupTable, Schedule, build_table

TRAIL_SCHEMA_VERSION = 1


class SessionStatus(enum.Enum):
    ACTIVE = "active"
    CONFIRMED_WINNER = "confirmed_winner"
    HAND_COUNT = "hand_count"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class RoundRecord:
    n: int
    k: int
    timestamp: str
    verdict: Decision


@dataclass(frozen=True)
class SessionState:
    session_id: str
    N: int
    winner_name: str
    loser_name: str
    table: LookupTable
    rounds: tuple[RoundRecord, ...] = ()
    status: SessionStatus = SessionStatus.ACTIVE


def new_session(N: int, rule, schedule: Schedule, winner_name: str = "announced winner",
                loser_name: str = "announced loser", session_id: Optional[str] = None,
                hand_count: bool = True) -> SessionState:
    """Create an active session with its table built and frozen."""
    table = build_table(rule, schedule, hand_count=hand_count)
    if table.N is not None and table.N != N:
        raise ValueError(f"rule is defined for N={table.N}, session says N={N}")
    if schedule.round_sizes[-1] > N:
        raise ValueError("schedule exceeds ballot count")
    return SessionState(
        session_id=session_id or str(uuid.uuid4()),
        N=N,
        winner_name=winner_name,
        loser_name=loser_name,
        table=table,
    )


def _verdict(table: LookupTable, n: int, k: int) -> Decision:
    kp = table.k_plus(n)
    km = table.k_minus(n)
    if kp is not None and k >= kp:
        return Decision.WINNER_CONFIRMED
    if km is not None and k <= km:
        return Decision.HAND_COUNT
    return Decision.CONTINUE


def record_round(session: SessionState, cumulative_n: int, cumulative_k: int,
                 timestamp: Optional[str] = None) -> tuple[SessionState, Decision]:
    """Append one round's cumulative counts and return the verdict."""
    if session.status is not SessionStatus.ACTIVE:
        raise ValueError(f"session is terminal ({session.status.value})")
    schedule = session.table.schedule.round_sizes
    idx = len(session.rounds)
    if cumulative_n != schedule[idx]:
        raise ValueError(f"expected round size {schedule[idx]}, got {cumulative_n}")
    prev_n = session.rounds[-1].n if session.rounds else 0
    prev_k = session.rounds[-1].k if session.rounds else 0
    if not (0 <= cumulative_k <= cumulative_n):
        raise ValueError(f"require 0 <= k <= n, got k={cumulative_k}, n={cumulative_n}")
    if cumulative_k < prev_k:
        raise ValueError(f"count regression: k fell from {prev_k} to {cumulative_k}")
    if cumulative_k - prev_k > cumulative_n - prev_n:
        raise ValueError("winner count increment exceeds ballots drawn this round")

    verdict = _verdict(session.table, cumulative_n, cumulative_k)
    record = RoundRecord(
        n=cumulative_n,
        k=cumulative_k,
        timestamp=timestamp or datetime.now(timezone.utc).isoformat(),
        verdict=verdict,
    )
    if verdict is Decision.WINNER_CONFIRMED:
        status = SessionStatus.CONFIRMED_WINNER
    elif verdict is Decision.HAND_COUNT:
        status = SessionStatus.HAND_COUNT
    elif idx == len(schedule) - 1:
        status = SessionStatus.EXHAUSTED
    else:
        status = SessionStatus.ACTIVE
    updated = dataclasses.replace(session, rounds=session.rounds + (record,), status=status)
    return updated, verdict


def session_to_json(session: SessionState) -> dict:
    from pollaudit.tables import emit_table

    return {
        "schema_version": TRAIL_SCHEMA_VERSION,
        "session_id": session.session_id,
        "N": session.N,
        "winner_name": session.winner_name,
        "loser_name": session.loser_name,
        "table": json.loads(emit_table(session.table, "json").decode()),
        "rounds": [
            {"n": r.n, "k": r.k, "timestamp": r.timestamp, "verdict": r.verdict.value}
            for r in session.rounds
        ],
        "status": session.status.value,
    }


def _content_hash(body: dict) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def export_trail(session: SessionState) -> bytes:
    """Canonical JSON audit trail with a sha256 content hash for tamper evidence."""
    body = session_to_json(session)
    return (json.dumps({"trail": body, "content_hash": _content_hash(body)},
                       sort_keys=True, separators=(",", ":")) + "\n").encode()


def import_trail(data: bytes) -> SessionState:
    """Re-import a trail, verifying the hash and replaying every verdict."""
    from pollaudit.tables import parse_table

    obj = json.loads(data.decode())
    body = obj["trail"]
    if _content_hash(body) != obj["content_hash"]:
        raise ValueError("content hash mismatch: trail was modified")
    table = parse_table(json.dumps(body["table"]).encode(), "json")
    session = SessionState(
        session_id=body["session_id"],
        N=body["N"],
        winner_name=body["winner_name"],
        loser_name=body["loser_name"],
        table=table,
    )
    for r in body["rounds"]:
        session, verdict = record_round(session, r["n"], r["k"], timestamp=r["timestamp"])
        if verdict.value != r["verdict"]:
            raise ValueError(f"replay mismatch at n={r['n']}: {verdict.value} != {r['verdict']}")
    if session.status.value != body["status"]:
        raise ValueError("replayed status does not match recorded status")
    return session
