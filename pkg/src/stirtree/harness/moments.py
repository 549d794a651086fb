"""Empirical moments with delta-method standard errors.

Sums go through :func:`math.fsum` so results do not depend on summation order
or block layout.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


def _fmean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values)


def _central(x: np.ndarray) -> list[float]:
    xs = x.astype(float).tolist()
    m = _fmean(xs)
    return [v - m for v in xs]


def mean_with_se(x: np.ndarray) -> tuple[float, float]:
    xs = x.astype(float).tolist()
    m = _fmean(xs)
    r = len(xs)
    if r < 2:
        return m, math.nan
    var = math.fsum((v - m) ** 2 for v in xs) / (r - 1)
    return m, math.sqrt(var / r)


def cov_with_se(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Unbiased sample covariance and its large-sample standard error
    ``sqrt((E[dx^2 dy^2] - cov^2) / R)``."""
    dx, dy = _central(x), _central(y)
    r = len(dx)
    if r < 2:
        return math.nan, math.nan
    prods = [a * b for a, b in zip(dx, dy)]
    cov = math.fsum(prods) / (r - 1)
    m22 = _fmean([p * p for p in prods])
    pop = math.fsum(prods) / r
    return cov, math.sqrt(max(m22 - pop * pop, 0.0) / r)


def var_with_se(x: np.ndarray) -> tuple[float, float]:
    return cov_with_se(x, x)


def skew_kurt(x: np.ndarray) -> tuple[float, float]:
    """Standardized skewness and excess kurtosis (population moments)."""
    d = _central(x)
    m2 = _fmean([v * v for v in d])
    if m2 == 0:
        return math.nan, math.nan
    m3 = _fmean([v ** 3 for v in d])
    m4 = _fmean([v ** 4 for v in d])
    return m3 / m2 ** 1.5, m4 / m2 ** 2 - 3.0


def corr_with_se(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    cxy, _ = cov_with_se(x, y)
    vx, _ = var_with_se(x)
    vy, _ = var_with_se(y)
    if vx == 0 or vy == 0:
        return math.nan, math.nan
    rho = cxy / math.sqrt(vx * vy)
    return rho, (1 - rho * rho) / math.sqrt(len(x))


def covariance_matrix(samples: np.ndarray) -> np.ndarray:
    d = samples.shape[1]
    out = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            out[i, j] = out[j, i] = cov_with_se(samples[:, i], samples[:, j])[0]
    return out


def is_psd(matrix: np.ndarray, rtol: float = 1e-9) -> bool:
    eig = np.linalg.eigvalsh(matrix)
    scale = max(float(np.abs(eig).max()), 1.0)
    return bool(eig.min() >= -rtol * scale)


@dataclass
class Check:
    """One estimator-versus-oracle comparison.

    Passes when ``|empirical - oracle| <= bound * stderr``.  Non-gating
    checks are reported but do not affect the overall verdict.
    """

    statistic: str
    empirical: float
    oracle: float
    stderr: float
    bound: float
    oracle_exact: str | None = None
    limit: float | None = None
    gating: bool = True
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        if math.isnan(self.empirical) or math.isnan(self.stderr):
            self.passed = False
        else:
            self.passed = abs(self.empirical - self.oracle) <= self.bound * self.stderr

    @property
    def z(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.empirical == self.oracle else math.inf
        return (self.empirical - self.oracle) / self.stderr


def exact_str(value: Fraction | int | None) -> str | None:
    return None if value is None else str(value)


@dataclass
class MomentReport:
    experiment: str
    n: int
    replicates: int
    seed: int
    mode: str
    checks: list[Check] = field(default_factory=list)
    covariance: list[list[float]] | None = None
    covariance_psd: bool | None = None
    histogram: list[dict] = field(default_factory=list)
    notices: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        ok = all(c.passed for c in self.checks if c.gating)
        return ok and self.covariance_psd is not False

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.statistic == name:
                return c
        raise KeyError(name)

    def records(self) -> list[dict]:
        base = {"experiment": self.experiment, "n": self.n, "R": self.replicates, "seed": self.seed}
        out = []
        for c in self.checks:
            out.append({
                **base,
                "statistic": c.statistic,
                "empirical": c.empirical,
                "oracle": c.oracle,
                "stderr": c.stderr,
                "oracle_exact": c.oracle_exact,
                "limit": c.limit,
                "bound_se": c.bound,
                "gating": c.gating,
                "passed": c.passed,
            })
        for h in self.histogram:
            out.append({**base, **h})
        return out
