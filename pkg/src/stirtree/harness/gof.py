"""Pearson chi-square goodness of fit against an exact pmf."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.stats import chi2

CHI2_QUANTILE = 0.999
MIN_EXPECTED = 5.0


def pool_bins(observed: Mapping[int, int], pmf: Mapping[int, Fraction], total: int) -> list[tuple[int, int, int, float]]:
    """Merge adjacent support points until each bin expects >= MIN_EXPECTED.

    Returns ``(lo, hi, observed, expected)`` per bin.  Observations outside
    the support of *pmf* are kept in their own zero-expectation bin so they
    blow up the statistic instead of vanishing.
    """
    bins: list[list] = []
    cur = None
    for k in sorted(pmf):
        if cur is None:
            cur = [k, k, 0, 0.0]
        cur[1] = k
        cur[2] += observed.get(k, 0)
        cur[3] += float(pmf[k]) * total
        if cur[3] >= MIN_EXPECTED:
            bins.append(cur)
            cur = None
    if cur is not None:
        if bins:
            last = bins[-1]
            last[1], last[2], last[3] = cur[1], last[2] + cur[2], last[3] + cur[3]
        else:
            bins.append(cur)
    stray = sum(c for k, c in observed.items() if k not in pmf)
    if stray:
        bins.append([min(k for k in observed if k not in pmf), max(k for k in observed if k not in pmf), stray, 0.0])
    return [tuple(b) for b in bins]


@dataclass
class GofReport:
    experiment: str
    n: int
    replicates: int
    seed: int | None
    statistic: float
    df: int
    threshold: float
    skipped: bool = False
    notice: str | None = None
    exact_match: bool | None = None
    bins: list[tuple[int, int, int, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.exact_match is not None:
            return self.exact_match
        return self.skipped or self.statistic <= self.threshold

    def records(self) -> list[dict]:
        base = {"experiment": self.experiment, "n": self.n, "R": self.replicates, "seed": self.seed}
        out = [{
            **base,
            "statistic": "chi2",
            "empirical": self.statistic,
            "oracle": self.threshold,
            "stderr": None,
            "df": self.df,
            "quantile": CHI2_QUANTILE,
            "skipped": self.skipped,
            "notice": self.notice,
            "passed": self.passed,
        }]
        for lo, hi, obs, exp in self.bins:
            out.append({**base, "statistic": "bin", "bin_lo": lo, "bin_hi": hi, "observed": obs, "expected": exp})
        return out


def chi_square_report(
    experiment: str,
    n: int,
    seed: int | None,
    observed: Mapping[int, int],
    pmf: Mapping[int, Fraction],
) -> GofReport:
    total = sum(observed.values())
    bins = pool_bins(observed, pmf, total)
    df = len(bins) - 1
    if df < 1:
        return GofReport(experiment, n, total, seed, 0.0, 0, float("nan"), skipped=True,
                         notice="degenerate distribution, chi-square test skipped", bins=bins)
    stat = 0.0
    for _, _, obs, exp in bins:
        stat += float("inf") if exp == 0 else (obs - exp) ** 2 / exp
    return GofReport(experiment, n, total, seed, stat, df, float(chi2.ppf(CHI2_QUANTILE, df)), bins=bins)
