"""Session lifecycle, verdicts, and the tamper-evident audit trail."""

import json

import pytest

from pollaudit.priors import beta_shape, uniform_all
from pollaudit.rules import Bayesian, Decision
from pollaudit.session import (
    SessionStatus,
    export_trail,
    import_trail,
    new_session,
    record_round,
    session_to_json,
)
from pollaudit.tables import Schedule


@pytest.fixture(scope="module")
def reference_session():
    # gamma = 0.1 at N = 100,000: the first-round confirm threshold is 110
    rule = Bayesian(0.1, beta_shape(100_000, 0.5, 0.5))
    return new_session(100_000, rule, Schedule((200, 400)), "Alice", "Bob")


def _small_session(**kwargs):
    return new_session(101, Bayesian(0.1, uniform_all(101)),
                       Schedule((10, 25, 60)), "A", "B", **kwargs)


class TestLifecycle:
    def test_fresh_session_is_active(self):
        s = _small_session()
        assert s.status is SessionStatus.ACTIVE
        assert s.rounds == ()

    def test_confirm_at_threshold(self, reference_session):
        s, verdict = record_round(reference_session, 200, 110)
        assert verdict is Decision.WINNER_CONFIRMED
        assert s.status is SessionStatus.CONFIRMED_WINNER

    def test_continue_below_threshold(self, reference_session):
        s, verdict = record_round(reference_session, 200, 109)
        assert verdict is Decision.CONTINUE
        assert s.status is SessionStatus.ACTIVE

    def test_hand_count(self):
        s = _small_session()
        kp = s.table.k_plus(10)
        km = s.table.k_minus(10)
        assert km is not None and km < kp
        s, verdict = record_round(s, 10, km)
        assert verdict is Decision.HAND_COUNT
        assert s.status is SessionStatus.HAND_COUNT

    def test_exhaustion(self):
        s = _small_session()
        for n in (10, 25, 60):
            k = (s.table.k_plus(n) + s.table.k_minus(n)) // 2
            s, verdict = record_round(s, n, k)
        assert verdict is Decision.CONTINUE
        assert s.status is SessionStatus.EXHAUSTED

    def test_terminal_sessions_reject_rounds(self, reference_session):
        s, _ = record_round(reference_session, 200, 110)
        with pytest.raises(ValueError):
            record_round(s, 400, 220)

    def test_original_state_is_untouched(self, reference_session):
        record_round(reference_session, 200, 110)
        assert reference_session.status is SessionStatus.ACTIVE
        assert reference_session.rounds == ()


class TestRoundValidation:
    def test_wrong_round_size(self):
        with pytest.raises(ValueError):
            record_round(_small_session(), 11, 5)

    def test_k_above_n(self):
        with pytest.raises(ValueError):
            record_round(_small_session(), 10, 11)

    def test_count_regression(self):
        s = _small_session()
        s, _ = record_round(s, 10, 6)
        with pytest.raises(ValueError):
            record_round(s, 25, 5)

    def test_increment_exceeds_draw(self):
        s = _small_session()
        s, _ = record_round(s, 10, 5)
        with pytest.raises(ValueError):
            record_round(s, 25, 21)  # only 15 new ballots drawn

    def test_population_mismatch(self):
        with pytest.raises(ValueError):
            new_session(99, Bayesian(0.1, uniform_all(101)), Schedule((10,)), "A", "B")

    def test_schedule_beyond_ballots(self):
        with pytest.raises(ValueError):
            new_session(101, Bayesian(0.1, uniform_all(101)), Schedule((10, 150)), "A", "B")


class TestTrail:
    def _finished(self):
        s = _small_session(session_id="trail-test")
        s, _ = record_round(s, 10, 6, timestamp="2026-08-25T00:00:00+00:00")
        s, _ = record_round(s, 25, s.table.k_plus(25), timestamp="2026-08-25T00:05:00+00:00")
        return s

    def test_round_trip(self):
        s = self._finished()
        replayed = import_trail(export_trail(s))
        assert session_to_json(replayed) == session_to_json(s)
        assert replayed.status is SessionStatus.CONFIRMED_WINNER

    def test_hash_detects_tampering(self):
        blob = json.loads(export_trail(self._finished()).decode())
        blob["trail"]["rounds"][1]["k"] -= 1
        with pytest.raises(ValueError, match="hash"):
            import_trail(json.dumps(blob).encode())

    def test_forged_hash_fails_replay(self):
        from pollaudit.session import _content_hash

        blob = json.loads(export_trail(self._finished()).decode())
        blob["trail"]["rounds"][1]["verdict"] = "continue"
        blob["trail"]["status"] = "active"
        blob["content_hash"] = _content_hash(blob["trail"])
        with pytest.raises(ValueError, match="replay"):
            import_trail(json.dumps(blob).encode())

    def test_export_is_deterministic(self):
        s = self._finished()
        assert export_trail(s) == export_trail(s)

    def test_schema_version_recorded(self):
        blob = json.loads(export_trail(self._finished()).decode())
        assert blob["trail"]["schema_version"] == 1
