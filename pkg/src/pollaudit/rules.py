"""Decision statistics, stopping decisions and k+/k- threshold solvers.

Six audit families share one interface: a log-domain decision statistic that
is monotone increasing in k (winner ballots in the sample), compared against
an upper bound U = (1-beta)/alpha (or (1-gamma)/gamma) to confirm the winner
and a lower bound L = beta/(1-alpha) (or gamma/(1-gamma)) to escalate to a
hand count.  Strict inequalities; exact equality continues sampling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from pollaudit.hypergeom import NEG_INF, POS_INF, log_hg, log_hg_over_x, log_sum_array
from pollaudit.priors import Prior, hardest_losing_tally, rla_transform


class ImpossibleSample(ValueError):
    """The sample (n, k) is inconsistent with every tally in the rule's support."""


class Decision(enum.Enum):
    WINNER_CONFIRMED = "confirmed_winner"
    HAND_COUNT = "hand_count"
    CONTINUE = "continue"


def _check_rate(name: str, v: float) -> None:
    if not (0 < v < 0.5):
        raise ValueError(f"{name} must lie in (0, 1/2), got {v}")


def round_losing_tally(v: float, N: int) -> int:
    """Round a losing tally p0*N to the nearest integer, ties toward the tie."""
    x = math.floor(v + 0.5)
    return min(x, N // 2)


def round_winning_tally(v: float, N: int) -> int:
    """Round a winning tally p1*N to the nearest integer, ties toward the tie."""
    x = math.ceil(v - 0.5)
    return max(x, N // 2 + 1)


@dataclass(frozen=True)
class WaldWithReplacement:
    """Wald sequential likelihood-ratio test, independent draws."""

    p0: float
    p1: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0 <= self.p0 <= 0.5):
            raise ValueError(f"p0 must lie in [0, 1/2], got {self.p0}")
        if not (0.5 < self.p1 <= 1):
            raise ValueError(f"p1 must lie in (1/2, 1], got {self.p1}")
        _check_rate("alpha", self.alpha)
        if not (0 <= self.beta < 0.5):
            raise ValueError(f"beta must lie in [0, 1/2), got {self.beta}")


@dataclass(frozen=True)
class WaldWithoutReplacement:
    """Wald test on hypergeometric likelihoods for a finite ballot population."""

    p0: float
    p1: float
    alpha: float
    beta: float
    N: int

    def __post_init__(self):
        if not (0 <= self.p0 <= 0.5):
            raise ValueError(f"p0 must lie in [0, 1/2], got {self.p0}")
        if not (0.5 < self.p1 <= 1):
            raise ValueError(f"p1 must lie in (1/2, 1], got {self.p1}")
        _check_rate("alpha", self.alpha)
        if not (0 <= self.beta < 0.5):
            raise ValueError(f"beta must lie in [0, 1/2), got {self.beta}")
        if self.N < 1:
            raise ValueError("N must be positive")


@dataclass(frozen=True)
class TraditionalRlaWithReplacement:
    """Traditional RLA: Wald test against a tie, independent draws.

    beta = 0 gives the BRAVO audit (no hand-count threshold).
    """

    p: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.5 < self.p <= 1):
            raise ValueError(f"p must lie in (1/2, 1], got {self.p}")
        _check_rate("alpha", self.alpha)
        if not (0 <= self.beta < 0.5):
            raise ValueError(f"beta must lie in [0, 1/2), got {self.beta}")


@dataclass(frozen=True)
class TraditionalRlaWithoutReplacement:
    """Traditional RLA on hypergeometric likelihoods (denominator at the tie)."""

    p: float
    alpha: float
    beta: float
    N: int

    def __post_init__(self):
        if not (0.5 < self.p <= 1):
            raise ValueError(f"p must lie in (1/2, 1], got {self.p}")
        _check_rate("alpha", self.alpha)
        if not (0 <= self.beta < 0.5):
            raise ValueError(f"beta must lie in [0, 1/2), got {self.beta}")
        if self.N < 1:
            raise ValueError("N must be positive")


@dataclass(frozen=True)
class Bayesian:
    """General Bayesian audit: posterior-odds ratio against bound (1-gamma)/gamma.

    The prior is balanced (winning and losing halves renormalized to 1/2
    each) before use, per the equal-prior-winning-probability assumption.
    """

    gamma: float
    prior: Prior

    def __post_init__(self):
        _check_rate("gamma", self.gamma)


@dataclass(frozen=True)
class BayesianRla:
    """Risk-limiting Bayesian audit: Bayesian audit under the risk-maximizing prior.

    Behaves identically to Bayesian(alpha, rla_transform(prior)).
    """

    alpha: float
    prior: Prior

    def __post_init__(self):
        _check_rate("alpha", self.alpha)


AuditRule = Union[
    WaldWithReplacement,
    WaldWithoutReplacement,
    TraditionalRlaWithReplacement,
    TraditionalRlaWithoutReplacement,
    Bayesian,
    BayesianRla,
]

_WITHOUT_REPLACEMENT = (WaldWithoutReplacement, TraditionalRlaWithoutReplacement, Bayesian, BayesianRla)


@dataclass(frozen=True)
class ThresholdPair:
    """Stopping thresholds at one sample size: confirm at k >= k_plus, escalate at k <= k_minus."""

    n: int
    k_plus: Optional[int]
    k_minus: Optional[int]

    def __post_init__(self):
        if self.k_plus is not None and self.k_minus is not None and self.k_minus >= self.k_plus:
            raise ValueError("k_minus must be strictly below k_plus")


def log_bounds(rule: AuditRule) -> tuple[float, float]:
    """(ln L, ln U) for the rule's stopping bounds."""
    if isinstance(rule, Bayesian):
        g = rule.gamma
        return math.log(g) - math.log(1 - g), math.log(1 - g) - math.log(g)
    if isinstance(rule, BayesianRla):
        a = rule.alpha
        return math.log(a) - math.log(1 - a), math.log(1 - a) - math.log(a)
    a, b = rule.alpha, rule.beta
    upper = math.log(1 - b) - math.log(a)
    lower = math.log(b) - math.log(1 - a) if b > 0 else NEG_INF
    return lower, upper


def _log_pow(p: float, k: int) -> float:
    if k == 0:
        return 0.0
    if p == 0.0:
        return NEG_INF
    return k * math.log(p)


def _with_replacement_log_ratio(p0: float, p1: float, n: int, k: int) -> float:
    num = _log_pow(p1, k) + _log_pow(1 - p1, n - k)
    den = _log_pow(p0, k) + _log_pow(1 - p0, n - k)
    return _log_ratio(num, den)


def _log_ratio(num: float, den: float) -> float:
    if num == NEG_INF and den == NEG_INF:
        raise ImpossibleSample("sample is inconsistent with every tally in the rule's support")
    if den == NEG_INF:
        return POS_INF
    if num == NEG_INF:
        return NEG_INF
    return num - den


def effective_prior(rule: AuditRule) -> Prior:
    """The balanced prior a Bayesian-family rule actually decides with."""
    if isinstance(rule, Bayesian):
        return rule.prior.balanced()
    if isinstance(rule, BayesianRla):
        return rla_transform(rule.prior)
    raise TypeError("effective_prior applies to Bayesian rule kinds only")


def population_size(rule: AuditRule) -> Optional[int]:
    if isinstance(rule, (WaldWithoutReplacement, TraditionalRlaWithoutReplacement)):
        return rule.N
    if isinstance(rule, (Bayesian, BayesianRla)):
        return rule.prior.N
    return None


def is_without_replacement(rule: AuditRule) -> bool:
    return isinstance(rule, _WITHOUT_REPLACEMENT)


def _wald_tallies(rule: AuditRule) -> tuple[int, int]:
    """(x0, x1) point tallies for the without-replacement likelihood-ratio kinds."""
    if isinstance(rule, WaldWithoutReplacement):
        return round_losing_tally(rule.p0 * rule.N, rule.N), round_winning_tally(rule.p1 * rule.N, rule.N)
    if isinstance(rule, TraditionalRlaWithoutReplacement):
        return hardest_losing_tally(rule.N), round_winning_tally(rule.p * rule.N, rule.N)
    raise TypeError(f"not a two-point without-replacement rule: {rule}")


def log_statistic(rule: AuditRule, n: int, k: int) -> float:
    """ln of the rule's decision statistic at sample size n with k winner ballots.

    Raises ImpossibleSample when both the winning-side and losing-side
    likelihoods vanish; a vanishing denominator alone yields +inf, a
    vanishing numerator alone -inf (an exact-zero statistic).
    """
    if not (0 <= k <= n):
        raise ValueError(f"require 0 <= k <= n, got k={k}, n={n}")
    N = population_size(rule)
    if N is not None and n > N:
        raise ValueError(f"sample size n={n} exceeds N={N}")

    if isinstance(rule, WaldWithReplacement):
        return _with_replacement_log_ratio(rule.p0, rule.p1, n, k)
    if isinstance(rule, TraditionalRlaWithReplacement):
        return _with_replacement_log_ratio(0.5, rule.p, n, k)
    if isinstance(rule, (WaldWithoutReplacement, TraditionalRlaWithoutReplacement)):
        x0, x1 = _wald_tallies(rule)
        return _log_ratio(log_hg(k, rule.N, x1, n), log_hg(k, rule.N, x0, n))

    g = effective_prior(rule)
    return _bayes_log_statistic(g, n, k)


def _bayes_log_statistic(g: Prior, n: int, k: int) -> float:
    N = g.N
    win = g.mass[g.winning_slice]
    lose = g.mass[g.losing_slice]
    xs_win = np.nonzero(win)[0] + (N // 2 + 1)
    xs_lose = np.nonzero(lose)[0]
    num = log_sum_array(log_hg_over_x(k, N, xs_win, n) + np.log(g.mass[xs_win]))
    den = log_sum_array(log_hg_over_x(k, N, xs_lose, n) + np.log(g.mass[xs_lose]))
    return _log_ratio(num, den)


def decide(rule: AuditRule, n: int, k: int) -> Decision:
    """Confirm above U, escalate below L, otherwise continue (equality continues)."""
    stat = log_statistic(rule, n, k)
    lower, upper = log_bounds(rule)
    if stat > upper:
        return Decision.WINNER_CONFIRMED
    if stat < lower:
        return Decision.HAND_COUNT
    return Decision.CONTINUE


def _reachable_k_range(rule: AuditRule, n: int) -> tuple[int, int]:
    """[k_lo, k_hi] for which the statistic is defined; outside, the one-sided limit applies."""
    if isinstance(rule, (WaldWithReplacement, TraditionalRlaWithReplacement)):
        return 0, n
    if isinstance(rule, (WaldWithoutReplacement, TraditionalRlaWithoutReplacement)):
        x0, x1 = _wald_tallies(rule)
        x_min, x_max = x0, x1
        N = rule.N
    else:
        g = effective_prior(rule)
        support = np.nonzero(g.mass)[0]
        x_min, x_max = int(support[0]), int(support[-1])
        N = g.N
    return max(0, n - (N - x_min)), min(n, x_max)


def _decide_ext(rule: AuditRule, n: int, k: int, k_lo: int, k_hi: int) -> Decision:
    """decide(), with impossible samples resolved by their one-sided limits."""
    try:
        return decide(rule, n, k)
    except ImpossibleSample:
        if k > k_hi:
            return Decision.WINNER_CONFIRMED
        if k < k_lo:
            return Decision.HAND_COUNT
        # unreachable for supported rule kinds; fall back on the sample majority
        return Decision.WINNER_CONFIRMED if 2 * k > n else Decision.HAND_COUNT


def thresholds(rule: AuditRule, n: int) -> ThresholdPair:
    """Smallest confirming k and largest escalating k at sample size n.

    Binary search, justified by monotonicity of the decision statistic in k;
    None marks "no k in [0, n] qualifies".
    """
    N = population_size(rule)
    if n < 0 or (N is not None and n > N):
        raise ValueError(f"invalid sample size n={n} for rule {rule}")
    k_lo, k_hi = _reachable_k_range(rule, n)

    def verdict(k: int) -> Decision:
        return _decide_ext(rule, n, k, k_lo, k_hi)

    k_plus: Optional[int] = None
    if verdict(n) is Decision.WINNER_CONFIRMED:
        lo, hi = 0, n  # hi always confirms
        if verdict(0) is Decision.WINNER_CONFIRMED:
            k_plus = 0
        else:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if verdict(mid) is Decision.WINNER_CONFIRMED:
                    hi = mid
                else:
                    lo = mid
            k_plus = hi

    k_minus: Optional[int] = None
    if verdict(0) is Decision.HAND_COUNT:
        lo, hi = 0, n  # lo always escalates
        if verdict(n) is Decision.HAND_COUNT:
            k_minus = n
        else:
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if verdict(mid) is Decision.HAND_COUNT:
                    lo = mid
                else:
                    hi = mid
            k_minus = lo

    return ThresholdPair(n=n, k_plus=k_plus, k_minus=k_minus)


def thresholds_closed_form(p: float, alpha: float, beta: float, n: int) -> ThresholdPair:
    """Closed-form thresholds for the with-replacement traditional RLA.

    Evaluates the ceiling/floor expressions literally, then nudges by one if
    the landed integer fails the strict inequality (the boundary case where
    the expression is exactly attained).
    """
    if not (0.5 < p < 1):
        raise ValueError(f"p must lie in (1/2, 1), got {p}")
    _check_rate("alpha", alpha)
    if not (0 <= beta < 0.5):
        raise ValueError(f"beta must lie in [0, 1/2), got {beta}")
    slope = math.log(p / (1 - p))
    drift = math.log(0.5 / (1 - p))  # per-draw shift of the log statistic

    def stat(k: int) -> float:
        return k * slope - n * drift

    lower, upper = (math.log(beta) - math.log(1 - alpha) if beta > 0 else NEG_INF,
                    math.log(1 - beta) - math.log(alpha))

    k = math.ceil((upper + n * drift) / slope)
    if not stat(k) > upper:
        k += 1
    elif k - 1 >= 0 and stat(k - 1) > upper:
        k -= 1
    k_plus: Optional[int] = max(k, 0) if k <= n else None

    k_minus: Optional[int] = None
    if beta > 0:
        k = math.floor((lower + n * drift) / slope)
        if not stat(k) < lower:
            k -= 1
        elif k + 1 <= n and stat(k + 1) < lower:
            k += 1
        if k >= 0:
            k_minus = min(k, n)

    return ThresholdPair(n=n, k_plus=k_plus, k_minus=k_minus)


def rule_to_descriptor(rule: AuditRule) -> dict:
    """JSON-serializable descriptor, inverse of rule_from_descriptor."""
    if isinstance(rule, WaldWithReplacement):
        return {"kind": "wald", "p0": rule.p0, "p1": rule.p1, "alpha": rule.alpha, "beta": rule.beta}
    if isinstance(rule, WaldWithoutReplacement):
        return {"kind": "wald_wor", "p0": rule.p0, "p1": rule.p1,
                "alpha": rule.alpha, "beta": rule.beta, "N": rule.N}
    if isinstance(rule, TraditionalRlaWithReplacement):
        return {"kind": "rla", "p": rule.p, "alpha": rule.alpha, "beta": rule.beta}
    if isinstance(rule, TraditionalRlaWithoutReplacement):
        return {"kind": "rla_wor", "p": rule.p, "alpha": rule.alpha, "beta": rule.beta, "N": rule.N}
    if isinstance(rule, Bayesian):
        return {"kind": "bayes", "gamma": rule.gamma, "prior": rule.prior.to_json()}
    if isinstance(rule, BayesianRla):
        return {"kind": "bayes_rla", "alpha": rule.alpha, "prior": rule.prior.to_json()}
    raise TypeError(f"unknown rule: {rule!r}")


def rule_from_descriptor(d: dict) -> AuditRule:
    kind = d["kind"]
    if kind == "wald":
        return WaldWithReplacement(d["p0"], d["p1"], d["alpha"], d["beta"])
    if kind == "wald_wor":
        return WaldWithoutReplacement(d["p0"], d["p1"], d["alpha"], d["beta"], d["N"])
    if kind == "rla":
        return TraditionalRlaWithReplacement(d["p"], d["alpha"], d["beta"])
    if kind == "rla_wor":
        return TraditionalRlaWithoutReplacement(d["p"], d["alpha"], d["beta"], d["N"])
    if kind == "bayes":
        return Bayesian(d["gamma"], Prior.from_json(d["prior"]))
    if kind == "bayes_rla":
        return BayesianRla(d["alpha"], Prior.from_json(d["prior"]))
    raise ValueError(f"unknown rule kind: {kind}")
