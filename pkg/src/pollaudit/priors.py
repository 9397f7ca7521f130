"""Discrete priors on the true winner tally.

A prior assigns probability mass to each possible tally x in {0..N} for the
announced winner.  The winner actually won iff x > N/2 (strictly); for even
N the tie x = N/2 counts as a losing tally.  Bayesian decision rules consume
priors after balancing them so the winning and losing halves carry mass 1/2
each, matching the equal-prior-winning-probability assumption under which
the theory holds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class Prior:
    """Distribution f over tallies x in {0..N} for the announced winner.

    Attributes:
        N: number of ballots cast.
        mass: array of N+1 non-negative reals summing to 1.
        family: optional compact descriptor recording how the prior was
            built ({"family": ..., "params": {...}}); None for raw arrays.
    """

    N: int
    mass: np.ndarray
    family: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        m = np.asarray(self.mass, dtype=np.float64)
        if m.shape != (self.N + 1,):
            raise ValueError(f"mass must have length N+1={self.N + 1}, got {m.shape}")
        if np.any(m < 0):
            raise ValueError("mass must be non-negative")
        total = m.sum()
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mass must sum to 1, got {total}")
        if abs(total - 1.0) > _MASS_TOL:
            m = m / total
        m.flags.writeable = False
        object.__setattr__(self, "mass", m)

    @property
    def winning_slice(self) -> slice:
        """Indices of tallies where the announced winner truly won."""
        return slice(self.N // 2 + 1, self.N + 1)

    @property
    def losing_slice(self) -> slice:
        return slice(0, self.N // 2 + 1)

    def balanced(self) -> "Prior":
        """Renormalize so winning and losing halves each carry mass 1/2."""
        win = self.mass[self.winning_slice].sum()
        lose = self.mass[self.losing_slice].sum()
        if win <= 0 or lose <= 0:
            raise ValueError("cannot balance a prior with an empty winning or losing side")
        if abs(win - 0.5) <= _MASS_TOL and abs(lose - 0.5) <= _MASS_TOL:
            return self
        m = self.mass.copy()
        m[self.winning_slice] *= 0.5 / win
        m[self.losing_slice] *= 0.5 / lose
        return Prior(self.N, m)

    def to_json(self, compact: bool = True) -> dict[str, Any]:
        if compact and self.family is not None:
            return {"N": self.N, "family": self.family["family"], "params": self.family["params"]}
        return {"N": self.N, "mass": self.mass.tolist()}

    @staticmethod
    def from_json(obj: dict[str, Any]) -> "Prior":
        N = int(obj["N"])
        if "mass" in obj:
            return Prior(N, np.asarray(obj["mass"], dtype=np.float64))
        family = obj["family"]
        params = obj.get("params", {})
        if family == "two_point":
            return two_point(N, int(params["x0"]), int(params["x1"]))
        if family == "beta":
            return beta_shape(N, float(params["a"]), float(params["b"]),
                              beta_binomial=bool(params.get("beta_binomial", False)))
        if family == "uniform_winning":
            return uniform_winning(N)
        if family == "uniform":
            return uniform_all(N)
        if family == "rla_transform":
            return rla_transform(Prior.from_json(params["base"]))
        raise ValueError(f"unknown prior family: {family}")

    def dumps(self, compact: bool = True) -> str:
        return json.dumps(self.to_json(compact=compact))

    @staticmethod
    def loads(text: str) -> "Prior":
        return Prior.from_json(json.loads(text))


def winner_mass(f: Prior) -> float:
    """Prior probability that the announced winner truly won."""
    return float(f.mass[f.winning_slice].sum())


def hardest_losing_tally(N: int) -> int:
    """The losing tally closest to a win: margin one for odd N, the tie for even N."""
    return N // 2


def two_point(N: int, x0: int, x1: int) -> Prior:
    """Prior with mass 1/2 at a losing tally x0 and 1/2 at a winning tally x1."""
    if not (0 <= x0 <= N // 2):
        raise ValueError(f"x0={x0} is not a losing tally for N={N}")
    if not (N // 2 < x1 <= N):
        raise ValueError(f"x1={x1} is not a winning tally for N={N}")
    m = np.zeros(N + 1)
    m[x0] = 0.5
    m[x1] = 0.5
    return Prior(N, m, family={"family": "two_point", "params": {"x0": x0, "x1": x1}})


def beta_shape(N: int, a: float, b: float, beta_binomial: bool = False) -> Prior:
    """Beta-density-shaped prior on {1..N-1}.

    mass[x] is proportional to (x/N)^(a-1) * (1 - x/N)^(b-1); the endpoints
    are excluded since the density diverges there for a, b < 1.  With
    beta_binomial=True the mass is instead the beta-binomial pmf with
    pseudo-counts (a, b), the urn-matching reading of the same prior.
    """
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if beta_binomial:
        from scipy.stats import betabinom

        m = betabinom.pmf(np.arange(N + 1), N, a, b)
    else:
        if N < 2:
            raise ValueError("pointwise beta prior needs N >= 2")
        p = np.arange(1, N) / N
        m = np.zeros(N + 1)
        # evaluate in logs: the density is huge near the endpoints for a,b < 1
        logm = (a - 1) * np.log(p) + (b - 1) * np.log1p(-p)
        m[1:N] = np.exp(logm - logm.max())
    m = m / m.sum()
    return Prior(N, m, family={"family": "beta",
                               "params": {"a": a, "b": b, "beta_binomial": beta_binomial}})


def uniform_all(N: int) -> Prior:
    """Equal mass on every tally x in {0..N}."""
    m = np.full(N + 1, 1.0 / (N + 1))
    return Prior(N, m, family={"family": "uniform", "params": {}})


def uniform_winning(N: int) -> Prior:
    """Equal mass on every winning tally x in {floor(N/2)+1 .. N}."""
    m = np.zeros(N + 1)
    lo = N // 2 + 1
    m[lo:] = 1.0 / (N - lo + 1)
    return Prior(N, m, family={"family": "uniform_winning", "params": {}})


def rla_transform(f: Prior) -> Prior:
    """Risk-maximizing transform: keep the winning shape, concentrate losing mass.

    The output keeps f's winning-side shape renormalized to total 1/2 and
    places the remaining 1/2 at the hardest losing tally (margin one for odd
    N, the tie for even N).  A Bayesian audit run with the transformed prior
    is risk-limiting at its upset-probability bound.
    """
    win = f.mass[f.winning_slice].sum()
    if win <= 0:
        raise ValueError("prior has no mass on winning tallies")
    m = np.zeros(f.N + 1)
    m[f.winning_slice] = f.mass[f.winning_slice] * (0.5 / win)
    m[hardest_losing_tally(f.N)] = 0.5
    family = None
    if f.family is not None:
        family = {"family": "rla_transform", "params": {"base": f.to_json(compact=True)}}
    return Prior(f.N, m, family=family)
