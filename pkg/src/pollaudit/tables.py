"""Escalation schedules and precomputed k+/k- lookup tables.

The lookup table is the audit's defining object: one ThresholdPair per
scheduled cumulative sample size.  Running the audit then reduces to
comparing the observed winner count against the precomputed thresholds.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from pollaudit.rules import (
    AuditRule,
    ThresholdPair,
    is_without_replacement,
    population_size,
    rule_from_descriptor,
    rule_to_descriptor,
    thresholds,
)

DEFAULT_SCHEDULE = tuple(200 * 2 ** i for i in range(9))  # 200, 400, ..., 51200


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing cumulative sample sizes at which verdicts are rendered."""

    round_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.round_sizes)
        if not sizes:
            raise ValueError("schedule must be non-empty")
        if any(n <= 0 for n in sizes):
            raise ValueError("round sizes must be positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("round sizes must be strictly increasing")
        object.__setattr__(self, "round_sizes", sizes)

    def __iter__(self):
        return iter(self.round_sizes)

    def __len__(self):
        return len(self.round_sizes)

    @staticmethod
    def default() -> "Schedule":
        return Schedule(DEFAULT_SCHEDULE)

    @staticmethod
    def parse(text: str) -> "Schedule":
        """Parse 'a,b,c' or the geometric form 'START x FACTOR .. END'."""
        text = text.strip()
        if "x" in text and ".." in text:
            start_s, rest = text.split("x", 1)
            factor_s, end_s = rest.split("..", 1)
            start, factor, end = int(start_s), int(factor_s), int(end_s)
            if start <= 0 or factor < 2 or end < start:
                raise ValueError(f"bad geometric schedule: {text!r}")
            sizes = []
            n = start
            while n <= end:
                sizes.append(n)
                n *= factor
            return Schedule(tuple(sizes))
        return Schedule(tuple(int(tok) for tok in text.split(",")))


@dataclass(frozen=True)
class LookupTable:
    """Per-round thresholds for one audit rule over one schedule."""

    rule: dict  # descriptor from rule_to_descriptor
    N: Optional[int]
    schedule: Schedule
    rows: tuple[ThresholdPair, ...] = field(default=())

    def __post_init__(self):
        if len(self.rows) != len(self.schedule):
            raise ValueError("rows must align 1:1 with the schedule")
        for n, row in zip(self.schedule, self.rows):
            if row.n != n:
                raise ValueError(f"row n={row.n} misaligned with schedule entry {n}")

    @property
    def without_replacement(self) -> bool:
        return self.rule["kind"] not in ("wald", "rla")

    def k_plus(self, n: int) -> Optional[int]:
        for row in self.rows:
            if row.n == n:
                return row.k_plus
        raise KeyError(f"sample size {n} not in schedule")

    def k_minus(self, n: int) -> Optional[int]:
        for row in self.rows:
            if row.n == n:
                return row.k_minus
        raise KeyError(f"sample size {n} not in schedule")


def build_table(rule: AuditRule, schedule: Schedule, hand_count: bool = True) -> LookupTable:
    """Compute thresholds for every scheduled round size.

    With hand_count=False the k- column is dropped: the audit then escalates
    to a hand count only by exhausting the schedule, which is the protocol
    the reference risk figures were measured under.
    """
    N = population_size(rule)
    if N is not None and schedule.round_sizes[-1] > N:
        raise ValueError(f"schedule exceeds population size N={N}")
    rows = tuple(thresholds(rule, n) for n in schedule)
    if not hand_count:
        rows = tuple(ThresholdPair(r.n, r.k_plus, None) for r in rows)
    return LookupTable(rule=rule_to_descriptor(rule), N=N, schedule=schedule, rows=rows)


def table_rule(table: LookupTable) -> AuditRule:
    return rule_from_descriptor(table.rule)


def emit_table(table: LookupTable, fmt: str = "csv") -> bytes:
    """Serialize a table; loss-free round trip through parse_table."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "k_plus", "k_minus"])
        for row in table.rows:
            writer.writerow([row.n,
                             "" if row.k_plus is None else row.k_plus,
                             "" if row.k_minus is None else row.k_minus])
        return buf.getvalue().encode()
    if fmt == "json":
        obj = {
            "rule": table.rule,
            "N": table.N,
            "schedule": list(table.schedule),
            "rows": [{"n": r.n, "k_plus": r.k_plus, "k_minus": r.k_minus} for r in table.rows],
        }
        return (json.dumps(obj, indent=2) + "\n").encode()
    raise ValueError(f"unknown format: {fmt}")


def parse_table(data: bytes, fmt: str = "json", rule: Optional[dict] = None,
                N: Optional[int] = None) -> LookupTable:
    """Inverse of emit_table.

    CSV carries thresholds only, so the rule descriptor (and N) must be
    supplied alongside; JSON is self-contained.
    """
    if fmt == "json":
        obj = json.loads(data.decode())
        rows = tuple(ThresholdPair(r["n"], r["k_plus"], r["k_minus"]) for r in obj["rows"])
        return LookupTable(rule=obj["rule"], N=obj["N"], schedule=Schedule(tuple(obj["schedule"])), rows=rows)
    if fmt == "csv":
        if rule is None:
            raise ValueError("CSV tables need the rule descriptor to reconstruct")
        reader = csv.DictReader(io.StringIO(data.decode()))
        rows = tuple(
            ThresholdPair(int(r["n"]),
                          int(r["k_plus"]) if r["k_plus"] else None,
                          int(r["k_minus"]) if r["k_minus"] else None)
            for r in reader
        )
        return LookupTable(rule=rule, N=N, schedule=Schedule(tuple(r.n for r in rows)), rows=rows)
    raise ValueError(f"unknown format: {fmt}")


@dataclass(frozen=True)
class TableComparison:
    """Per-round k+ values and pairwise differences across tables sharing a schedule."""

    schedule: Schedule
    labels: tuple[str, ...]
    k_plus: tuple[tuple[Optional[int], ...], ...]  # one series per table
    deltas: tuple[tuple[Optional[int], ...], ...]  # series i+1 minus series i
    ordered_non_increasing: bool  # each series pointwise <= the previous one

    def to_csv(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", *self.labels])
        for i, n in enumerate(self.schedule):
            writer.writerow([n, *("" if s[i] is None else s[i] for s in self.k_plus)])
        return buf.getvalue().encode()

    def deltas_csv(self) -> bytes:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        names = [f"{b}-{a}" for a, b in zip(self.labels, self.labels[1:])]
        writer.writerow(["n", *names])
        for i, n in enumerate(self.schedule):
            writer.writerow([n, *("" if d[i] is None else d[i] for d in self.deltas)])
        return buf.getvalue().encode()


def compare_tables(tables: Sequence[LookupTable],
                   labels: Optional[Sequence[str]] = None) -> TableComparison:
    """Compare k+ across tables round by round.

    The ordering verdict reports whether each successive table is pointwise
    at least as lenient (k+ no larger) than the one before it.
    """
    if not tables:
        raise ValueError("need at least one table")
    schedule = tables[0].schedule
    for t in tables[1:]:
        if t.schedule != schedule:
            raise ValueError("tables must share an identical schedule")
    if labels is None:
        labels = tuple(t.rule["kind"] for t in tables)
    series = tuple(tuple(row.k_plus for row in t.rows) for t in tables)
    deltas = tuple(
        tuple(None if (b[i] is None or a[i] is None) else b[i] - a[i] for i in range(len(schedule)))
        for a, b in zip(series, series[1:])
    )
    ordered = all(
        d is None or d <= 0
        for delta_row in deltas for d in delta_row
    )
    return TableComparison(schedule=schedule, labels=tuple(labels), k_plus=series,
                           deltas=deltas, ordered_non_increasing=ordered)
