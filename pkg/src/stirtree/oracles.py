"""Exact-arithmetic ground truth.

Everything here is integer or :class:`fractions.Fraction` arithmetic; floats
only appear where callers convert results for display.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

DEFAULT_JOINT_CAP = 200


class OracleCapError(ValueError):
    pass


@dataclass(frozen=True)
class ExactDist:
    """Finitely supported distribution with exact rational probabilities.

    Points are ints (univariate) or tuples of ints (multivariate).
    """

    probs: dict

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.probs.values()):
            raise ValueError("negative probability")
        if sum(self.probs.values()) != 1:
            raise ValueError("probabilities do not sum to 1")

    @property
    def support(self) -> list:
        return sorted(self.probs)

    def expect(self, f: Callable) -> Fraction:
        return sum((p * f(x) for x, p in self.probs.items()), Fraction(0))

    def marginal(self, i: int) -> ExactDist:
        out: dict[int, Fraction] = {}
        for x, p in self.probs.items():
            out[x[i]] = out.get(x[i], Fraction(0)) + p
        return ExactDist(dict(sorted(out.items())))

    def mean(self, i: int | None = None) -> Fraction:
        if i is None:
            return self.expect(lambda x: x)
        return self.expect(lambda x: x[i])

    def covariance(self, i: int, j: int) -> Fraction:
        mi, mj = self.mean(i), self.mean(j)
        return self.expect(lambda x: (x[i] - mi) * (x[j] - mj))

    def variance(self, i: int | None = None) -> Fraction:
        if i is None:
            m = self.mean()
            return self.expect(lambda x: (x - m) ** 2)
        return self.covariance(i, i)

    def permuted(self, order: tuple[int, ...]) -> ExactDist:
        """Distribution of the coordinates rearranged as ``x[order[0]], ...``."""
        return ExactDist({tuple(x[k] for k in order): p for x, p in self.probs.items()})


def double_factorial(n: int) -> int:
    """``(2n - 1)!! = 1 * 3 * ... * (2n - 1)``, with value 1 at ``n = 0``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out = 1
    for j in range(1, 2 * n, 2):
        out *= j
    return out


def eulerian_rows() -> Iterator[dict[int, int]]:
    """Rows ``n = 1, 2, ...`` of second-order Eulerian numbers ``{k: C(n, k)}``.

    ``C(n, k) = k C(n-1, k) + (2n - k) C(n-1, k-1)``, ``C(1, k) = [k == 1]``.
    Only the previous row is kept.
    """
    row = [0, 1]  # row[k] = C(n, k), k = 0..n
    n = 1
    while True:
        yield {k: row[k] for k in range(1, n + 1)}
        n += 1
        prev = row + [0]
        row = [0] + [k * prev[k] + (2 * n - k) * prev[k - 1] for k in range(1, n + 1)]


def eulerian_row(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    for m, row in enumerate(eulerian_rows(), start=1):
        if m == n:
            return row
    raise AssertionError("unreachable")


def eulerian_table_lines(n_max: int) -> Iterator[str]:
    """Table export, one ``n, k, C(n,k)`` line per entry."""
    rows = eulerian_rows()
    for n in range(1, n_max + 1):
        for k, c in next(rows).items():
            yield f"{n}, {k}, {c}"


def pmf_L(n: int) -> ExactDist:
    """Exact law of the leaf count (equivalently plateaux, ascents, descents)."""
    total = double_factorial(n)
    return ExactDist({k: Fraction(c, total) for k, c in eulerian_row(n).items()})


def mean_L(n: int) -> Fraction:
    _positive(n)
    return Fraction(2 * n + 1, 3)


def var_L(n: int) -> Fraction:
    _positive(n)
    return Fraction(2 * (n * n - 1), 9 * (2 * n - 1))


def cov_pair(n: int) -> Fraction:
    """Covariance of any two of the ascent, descent and plateau counts."""
    _positive(n)
    return Fraction(-(n * n - 1), 9 * (2 * n - 1))


def exact_cov_matrix(n: int) -> tuple[tuple[Fraction, ...], ...]:
    v, c = var_L(n), cov_pair(n)
    return tuple(tuple(v if i == j else c for j in range(3)) for i in range(3))


def _positive(n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")


def joint_count_rows() -> Iterator[dict[tuple[int, int], int]]:
    """Yield, for ``n = 1, 2, ...``, the number of Stirling permutations with
    ``(ascents, descents) = (x, y)``; plateaux follow as ``2n + 1 - x - y``.

    A gap of a given kind is replaced by ascent, plateau, descent, so the
    kind that was hit keeps its count and the other two gain one.
    """
    counts = {(1, 1): 1}
    m = 1
    while True:
        yield counts
        nxt: dict[tuple[int, int], int] = {}
        for (x, y), c in counts.items():
            z = 2 * m + 1 - x - y
            for key, w in (((x, y + 1), x), ((x + 1, y), y), ((x + 1, y + 1), z)):
                if w:
                    nxt[key] = nxt.get(key, 0) + c * w
        counts = nxt
        m += 1


def _joint_dist(n: int, counts: dict[tuple[int, int], int]) -> ExactDist:
    total = double_factorial(n)
    return ExactDist(
        {(x, y, 2 * n + 1 - x - y): Fraction(c, total) for (x, y), c in sorted(counts.items())}
    )


def joint_pmf(n: int, cap: int = DEFAULT_JOINT_CAP) -> ExactDist:
    """Exact joint law of (ascents, descents, plateaux) for size *n*."""
    _positive(n)
    if n > cap:
        raise OracleCapError(f"joint pmf refused for n={n} (cap {cap})")
    for m, counts in enumerate(joint_count_rows(), start=1):
        if m == n:
            return _joint_dist(n, counts)
    raise AssertionError("unreachable")


def joint_pmfs(n_max: int, cap: int = DEFAULT_JOINT_CAP) -> Iterator[tuple[int, ExactDist]]:
    """``(n, joint_pmf(n))`` for ``n = 1..n_max`` in a single forward pass."""
    if n_max > cap:
        raise OracleCapError(f"joint pmf refused for n={n_max} (cap {cap})")
    rows = joint_count_rows()
    for n in range(1, n_max + 1):
        yield n, _joint_dist(n, next(rows))


def is_exchangeable(dist: ExactDist) -> bool:
    dim = len(next(iter(dist.probs)))
    return all(dist.permuted(order).probs == dist.probs for order in permutations(range(dim)))


def asymptotic_sigma() -> tuple[tuple[Fraction, ...], ...]:
    """Limit covariance of ``n^{-1/2}`` times the centred (X, Y, Z)."""
    base = ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
    return tuple(tuple(Fraction(a, 18) for a in row) for row in base)


def beta_moment(k: int, r: int) -> Fraction:
    """``r``-th raw moment of Beta(1/2, k)."""
    if k < 1 or r < 1:
        raise ValueError("need k >= 1 and r >= 1")
    out = Fraction(1)
    half = Fraction(1, 2)
    for j in range(r):
        out *= (half + j) / (half + k + j)
    return out


def beta_variance(k: int) -> Fraction:
    return beta_moment(k, 2) - beta_moment(k, 1) ** 2


def simplified_model_variance(n: int) -> Fraction:
    """Variance of one colour's survivors when ``n - 1`` of ``3n`` individuals
    (``n`` per colour) are removed uniformly: a hypergeometric variance.
    """
    _positive(n)
    return (n - 1) * Fraction(1, 3) * Fraction(2, 3) * Fraction(2 * n + 1, 3 * n - 1)
