"""Decision engine for two-candidate ballot-polling election audits.

Implements Wald sequential tests (with and without replacement), traditional
risk-limiting audits (including BRAVO), general Bayesian audits computed
directly in the log domain, and the Bayesian risk-limiting audit obtained by
concentrating the losing-side prior mass on the hardest losing tally.  Audits
are precomputed into per-round (k+, k-) lookup tables; true risk can be
evaluated exactly by dynamic programming or estimated by seeded Monte Carlo.
"""

from pollaudit.priors import Prior, beta_shape, rla_transform, two_point, uniform_winning
from pollaudit.rules import (
    Bayesian,
    BayesianRla,
    Decision,
    ImpossibleSample,
    ThresholdPair,
    TraditionalRlaWithReplacement,
    TraditionalRlaWithoutReplacement,
    WaldWithReplacement,
    WaldWithoutReplacement,
    decide,
    log_statistic,
    thresholds,
    thresholds_closed_form,
)
from pollaudit.tables import LookupTable, Schedule, build_table, compare_tables
from pollaudit.riskeval import (
    RiskReport,
    exact_risk_dp,
    exact_risk_enum,
    max_risk,
    prior_weighted_errors,
    simulate_risk,
)
from pollaudit.session import SessionState, export_trail, import_trail, new_session, record_round

__all__ = [
    "Prior",
    "two_point",
    "beta_shape",
    "uniform_winning",
    "rla_transform",
    "Decision",
    "ImpossibleSample",
    "ThresholdPair",
    "WaldWithReplacement",
    "WaldWithoutReplacement",
    "TraditionalRlaWithReplacement",
    "TraditionalRlaWithoutReplacement",
    "Bayesian",
    "BayesianRla",
    "log_statistic",
    "decide",
    "thresholds",
    "thresholds_closed_form",
    "Schedule",
    "LookupTable",
    "build_table",
    "compare_tables",
    "RiskReport",
    "exact_risk_dp",
    "exact_risk_enum",
    "simulate_risk",
    "prior_weighted_errors",
    "max_risk",
    "SessionState",
    "new_session",
    "record_round",
    "export_trail",
    "import_trail",
]

__version__ = "0.1.0"
