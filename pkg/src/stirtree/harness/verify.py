"""Deterministic invariant suites behind the ``verify`` subcommand."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterator
from dataclasses import dataclass

from .. import oracles, urnsim
from ..generators import enumerate_stirling, enumerate_trapezoidal, enumerate_trees, make_rng, random_stirling
from ..statistics import adp_counts, distinct_count, leaves
from ..structures import code_to_tree, tree_to_code, validate_stirling

SUITES = ("bijection", "enumeration", "oracles", "coupling")

VERIFY_SEED = 20080307


@dataclass
class VerifyResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def record(self) -> dict:
        return {"suite": self.suite, "check": self.name, "passed": self.passed, "detail": self.detail}


def _bijection() -> Iterator[VerifyResult]:
    for n in range(0, 7):
        bad = 0
        total = 0
        for q, t in zip(enumerate_stirling(n), enumerate_trees(n)):
            total += 1
            if tree_to_code(code_to_tree(q)) != q or code_to_tree(tree_to_code(t)) != t or tree_to_code(t) != q:
                bad += 1
        yield VerifyResult("bijection", f"round_trip_exhaustive_n{n}", bad == 0, f"{bad} of {total} failed")
    rng = make_rng(VERIFY_SEED)
    bad = 0
    for _ in range(200):
        q, _ = random_stirling(100, rng)
        t = code_to_tree(q)
        if tree_to_code(t) != q or code_to_tree(tree_to_code(t)) != t:
            bad += 1
    yield VerifyResult("bijection", "round_trip_random_n100", bad == 0, f"{bad} of 200 failed")


def _enumeration() -> Iterator[VerifyResult]:
    for n in range(1, 7):
        items = list(enumerate_stirling(n))
        expected = oracles.double_factorial(n)
        distinct = len(set(items))
        valid = all(validate_stirling(q.seq) for q in items)
        ok = len(items) == expected == distinct and valid
        yield VerifyResult("enumeration", f"count_n{n}", ok, f"{len(items)} items, expected {expected}")
        row = oracles.eulerian_row(n)
        hists = {
            "plateaux": Counter(adp_counts(q).plateaux for q in items),
            "ascents": Counter(adp_counts(q).ascents for q in items),
            "descents": Counter(adp_counts(q).descents for q in items),
            "leaves": Counter(leaves(t) for t in enumerate_trees(n)),
            "distinct": Counter(distinct_count(w) for w in enumerate_trapezoidal(n)),
        }
        for name, h in hists.items():
            yield VerifyResult("enumeration", f"{name}_histogram_n{n}", dict(h) == row, f"{dict(sorted(h.items()))}")


def _oracles(n_max: int = 30) -> Iterator[VerifyResult]:
    for n, dist in oracles.joint_pmfs(n_max):
        pmf = oracles.pmf_L(n)
        marg = all(dist.marginal(i) == pmf for i in range(3))
        exch = oracles.is_exchangeable(dist)
        means = all(dist.mean(i) == oracles.mean_L(n) for i in range(3))
        var = all(dist.variance(i) == oracles.var_L(n) for i in range(3))
        cov = all(dist.covariance(i, j) == oracles.cov_pair(n) for i, j in ((0, 1), (0, 2), (1, 2)))
        ok = marg and exch and means and var and cov
        yield VerifyResult("oracles", f"joint_pmf_n{n}", ok,
                           f"marginals={marg} exchangeable={exch} mean={means} var={var} cov={cov}")
    rows = oracles.eulerian_rows()
    bad = [n for n in range(1, 201) if sum(next(rows).values()) != oracles.double_factorial(n)]
    yield VerifyResult("oracles", "eulerian_row_sums_n1_200", not bad, f"failures at {bad}")
    poly = urnsim.characteristic_polynomial(urnsim.urn_a().replacement)
    expected = urnsim.poly_mul(urnsim.poly_mul([1, -2], [1, 1]), [1, 1])
    yield VerifyResult("oracles", "urn_a_characteristic_polynomial", poly == expected, f"{poly}")


def _coupling(runs: int = 1000, n: int = 100) -> Iterator[VerifyResult]:
    failures = [r for r in range(runs) if not urnsim.coupled_growth_check(n, make_rng(VERIFY_SEED, r))]
    yield VerifyResult("coupling", f"coupled_growth_n{n}_runs{runs}", not failures, f"failing runs {failures[:10]}")


_SUITES: dict[str, Callable[[], Iterator[VerifyResult]]] = {
    "bijection": _bijection,
    "enumeration": _enumeration,
    "oracles": _oracles,
    "coupling": _coupling,
}


def verify(suite: str) -> list[VerifyResult]:
    if suite == "all":
        return [res for name in SUITES for res in _SUITES[name]()]
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return list(_SUITES[suite]())
