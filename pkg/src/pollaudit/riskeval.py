"""True-risk evaluation for lookup-table audits.

The true risk of a table at tally x is the probability that the multi-round
audit stops confirming the winner when the winner's actual tally is x.  For
losing tallies this is the quantity a risk limit bounds.  Three routes:

* exact dynamic programming over round boundaries (the workhorse),
* exhaustive rational-arithmetic enumeration at tiny N (the oracle),
* seeded Monte Carlo at scale.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from pollaudit.hypergeom import log_hg_over_k
from pollaudit.priors import Prior
from pollaudit.tables import LookupTable

EXACT_N_LIMIT = 2000  # O(rounds * n_max^2) DP states; raise explicitly if you mean it
ENUM_N_LIMIT = 15


@dataclass(frozen=True)
class RiskReport:
    """Stop-confirm probabilities per tally, with the losing-side maximum."""

    per_x: dict[int, float]
    max_risk: float
    argmax_x: Optional[int]
    method: str
    stderr: dict[int, float] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "max_risk": self.max_risk,
            "argmax_x": self.argmax_x,
            "per_x": {str(x): v for x, v in sorted(self.per_x.items())},
            "stderr": {str(x): v for x, v in sorted(self.stderr.items())},
            "params": self.params,
        }

    def to_csv(self) -> bytes:
        lines = ["x,risk,stderr"]
        for x in sorted(self.per_x):
            se = self.stderr.get(x)
            lines.append(f"{x},{self.per_x[x]:.12g},{'' if se is None else f'{se:.6g}'}")
        return ("\n".join(lines) + "\n").encode()


def _check_table(table: LookupTable, N: int, x: int) -> None:
    if not table.without_replacement:
        raise ValueError("risk evaluation applies to without-replacement tables")
    if table.N is not None and table.N != N:
        raise ValueError(f"table was built for N={table.N}, not {N}")
    if not (0 <= x <= N):
        raise ValueError(f"x must lie in [0, N], got {x}")
    if table.schedule.round_sizes[-1] > N:
        raise ValueError("schedule exceeds population size")


def exact_risk_dp(table: LookupTable, N: int, x: int) -> float:
    """Exact stop-confirm probability at tally x by DP over round boundaries.

    State: the distribution of the cumulative winner count among paths still
    active; each round draws a hypergeometric increment from the ballots not
    yet sampled, then absorbs paths at or past either threshold.  Paths
    still unresolved after the last scheduled round proceed to a hand count
    and contribute nothing.
    """
    _check_table(table, N, x)
    active = np.array([1.0])
    prev_n = 0
    confirmed = 0.0
    for row in table.rows:
        dn = row.n - prev_n
        rem = N - prev_n
        new = np.zeros(row.n + 1)
        for k_prev, p in enumerate(active):
            if p == 0.0:
                continue
            good = x - k_prev
            pmf = np.exp(log_hg_over_k(rem, good, dn))
            new[k_prev:k_prev + dn + 1] += p * pmf
        if row.k_plus is not None:
            confirmed += new[row.k_plus:].sum()
            new[row.k_plus:] = 0.0
        if row.k_minus is not None:
            new[:row.k_minus + 1] = 0.0
        active = new
        prev_n = row.n
    return float(confirmed)


def exact_risk_enum(table: LookupTable, N: int, x: int) -> float:
    """Oracle: the same probability by exhaustive enumeration of draw sequences.

    Walks every ballot-by-ballot sequence with exact rational probabilities;
    independent of the DP and restricted to N <= 15.
    """
    _check_table(table, N, x)
    if N > ENUM_N_LIMIT:
        raise ValueError(f"enumeration oracle is capped at N <= {ENUM_N_LIMIT}")
    boundaries = {row.n: row for row in table.rows}
    last_n = table.rows[-1].n
    confirmed = Fraction(0)

    def walk(drawn: int, k: int, prob: Fraction) -> None:
        nonlocal confirmed
        row = boundaries.get(drawn)
        if row is not None:
            if row.k_plus is not None and k >= row.k_plus:
                confirmed += prob
                return
            if row.k_minus is not None and k <= row.k_minus:
                return
            if drawn == last_n:
                return
        winners_left = x - k
        losers_left = (N - x) - (drawn - k)
        total = winners_left + losers_left
        if winners_left > 0:
            walk(drawn + 1, k + 1, prob * Fraction(winners_left, total))
        if losers_left > 0:
            walk(drawn + 1, k, prob * Fraction(losers_left, total))

    walk(0, 0, Fraction(1))
    return float(confirmed)


def _simulate_one(table: LookupTable, N: int, x: int, master_seed: int, trial: int) -> bool:
    rng = np.random.default_rng([master_seed, trial])
    k = 0
    prev_n = 0
    for row in table.rows:
        dn = row.n - prev_n
        good = x - k
        bad = (N - prev_n) - good
        k += int(rng.hypergeometric(good, bad, dn)) if good > 0 else 0
        prev_n = row.n
        if row.k_plus is not None and k >= row.k_plus:
            return True
        if row.k_minus is not None and k <= row.k_minus:
            return False
    return False


@dataclass(frozen=True)
class RiskEstimate:
    estimate: float
    stderr: float
    trials: int
    stops: int
    master_seed: int


def simulate_risk(table: LookupTable, N: int, x: int, trials: int, master_seed: int,
                  jobs: int = 1) -> RiskEstimate:
    """Monte Carlo stop-confirm probability with a binomial standard error.

    Each trial's randomness derives from (master_seed, trial index) alone,
    and trial outcomes are reduced in index order, so the result is
    bit-identical for any worker count.  Round increments are sampled from
    the hypergeometric law directly rather than ballot by ballot.
    """
    _check_table(table, N, x)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(
                lambda t: _simulate_one(table, N, x, master_seed, t), range(trials)))
    else:
        outcomes = [_simulate_one(table, N, x, master_seed, t) for t in range(trials)]
    stops = sum(outcomes)
    p = stops / trials
    se = math.sqrt(p * (1 - p) / trials)
    return RiskEstimate(estimate=p, stderr=se, trials=trials, stops=stops, master_seed=master_seed)


def prior_weighted_errors(table: LookupTable, prior: Prior,
                          exact_limit: int = EXACT_N_LIMIT) -> tuple[float, float]:
    """(P_M, P_U): miss and unnecessary-hand-count rates under the balanced prior.

    P_M averages the exact stop-confirm probability over losing tallies;
    P_U averages the probability of not confirming (hand count, including
    exhaustion) over winning tallies.  Both are conditional on the
    respective half of the prior, which carries mass 1/2 after balancing.
    """
    N = prior.N
    if table.N is not None and table.N != N:
        raise ValueError(f"table was built for N={table.N}, not {N}")
    if N > exact_limit:
        raise ValueError(f"exact prior-weighted errors capped at N <= {exact_limit}")
    g = prior.balanced()
    tie = N // 2
    p_m = 0.0
    p_u = 0.0
    for x in np.nonzero(g.mass)[0]:
        stop = exact_risk_dp(table, N, int(x))
        if x <= tie:
            p_m += g.mass[x] * stop
        else:
            p_u += g.mass[x] * (1.0 - stop)
    return p_m / 0.5, p_u / 0.5


def max_risk(table: LookupTable, N: int, method: str = "exact_dp",
             trials: int = 10_000, master_seed: int = 0,
             extra_tallies: Sequence[int] = (),
             exact_limit: int = EXACT_N_LIMIT) -> RiskReport:
    """Maximum stop-confirm probability over losing tallies.

    Exact methods scan every losing x; Monte Carlo evaluates the hardest
    losing tally (tie or margin one) plus any extra_tallies supplied.
    """
    tie = N // 2
    if method in ("exact_dp", "enumeration"):
        if method == "exact_dp" and N > exact_limit:
            raise ValueError(f"exact scan capped at N <= {exact_limit}")
        evaluate = exact_risk_dp if method == "exact_dp" else exact_risk_enum
        per_x = {x: evaluate(table, N, x) for x in range(tie + 1)}
        argmax = max(per_x, key=per_x.get)
        return RiskReport(per_x=per_x, max_risk=per_x[argmax], argmax_x=argmax, method=method)
    if method == "monte_carlo":
        tallies = sorted({tie, *extra_tallies})
        if any(x > tie or x < 0 for x in tallies):
            raise ValueError("monte_carlo tallies must be losing tallies")
        per_x: dict[int, float] = {}
        stderr: dict[int, float] = {}
        for x in tallies:
            est = simulate_risk(table, N, x, trials, master_seed)
            per_x[x] = est.estimate
            stderr[x] = est.stderr
        argmax = max(per_x, key=per_x.get)
        return RiskReport(per_x=per_x, max_risk=per_x[argmax], argmax_x=argmax,
                          method="monte_carlo", stderr=stderr,
                          params={"trials": trials, "master_seed": master_seed})
    raise ValueError(f"unknown method: {method}")
