"""Generalized Pólya urns with nonnegative replacement matrices.

Row ``i`` of the replacement matrix lists the balls added, by colour, when
colour ``i`` is drawn; the drawn ball goes back.  Draws use one uniform
integer against the cumulative composition, so there is no floating-point
bias.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .oracles import ExactDist
from .statistics import ASCENT, DESCENT, PLATEAU, adp_counts, classify_gap
from .structures import StirlingPermutation, insert_pair


class EmptyUrnError(ValueError):
    pass


@dataclass(frozen=True)
class UrnSpec:
    replacement: tuple[tuple[int, ...], ...]
    initial: tuple[int, ...]

    def __post_init__(self) -> None:
        rep = tuple(tuple(int(a) for a in row) for row in self.replacement)
        init = tuple(int(a) for a in self.initial)
        object.__setattr__(self, "replacement", rep)
        object.__setattr__(self, "initial", init)
        c = len(init)
        if len(rep) != c or any(len(row) != c for row in rep):
            raise ValueError(f"replacement matrix must be {c}x{c}")
        if any(a < 0 for row in rep for a in row):
            raise ValueError("replacement entries must be nonnegative")
        if any(a < 0 for a in init) or not any(init):
            raise ValueError("initial composition needs nonnegative counts, at least one positive")

    @property
    def colors(self) -> int:
        return len(self.initial)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.replacement)

    def balance(self) -> int | None:
        """Common row sum, or None when rows differ."""
        sums = set(self.row_sums())
        return sums.pop() if len(sums) == 1 else None

    def relabeled(self, order: Sequence[int]) -> UrnSpec:
        """Same urn with colour ``order[i]`` renamed to ``i``."""
        rep = tuple(tuple(self.replacement[a][b] for b in order) for a in order)
        return UrnSpec(rep, tuple(self.initial[a] for a in order))


@dataclass(frozen=True)
class UrnState:
    step: int
    composition: tuple[int, ...]
    drawn: int | None = field(default=None, compare=False)

    @property
    def total(self) -> int:
        return sum(self.composition)


def urn_a() -> UrnSpec:
    """Three colours (ascent, descent, plateau); drawing one adds one of each other."""
    return UrnSpec(((0, 1, 1), (1, 0, 1), (1, 1, 0)), (1, 1, 1))


def two_color_urn() -> UrnSpec:
    """Colours (plateau, non-plateau) with replacement rows (0, 2) and (1, 1)."""
    return UrnSpec(((0, 2), (1, 1)), (1, 2))


def initial_state(spec: UrnSpec) -> UrnState:
    return UrnState(0, spec.initial)


def pick_color(composition: Sequence[int], u: int) -> int:
    """Colour whose cumulative-count interval contains ``0 <= u < total``."""
    acc = 0
    for i, c in enumerate(composition):
        acc += c
        if u < acc:
            return i
    raise ValueError(f"draw {u} outside 0..{acc - 1}")


def apply_draw(spec: UrnSpec, s: UrnState, color: int) -> UrnState:
    row = spec.replacement[color]
    return UrnState(s.step + 1, tuple(a + b for a, b in zip(s.composition, row)), color)


def step(spec: UrnSpec, s: UrnState, rng: np.random.Generator) -> UrnState:
    total = s.total
    if total <= 0:
        raise EmptyUrnError("cannot draw from an empty urn")
    return apply_draw(spec, s, pick_color(s.composition, int(rng.integers(total))))


def run(
    spec: UrnSpec,
    steps: int,
    rng: np.random.Generator,
    checkpoints: Iterable[int] | None = None,
) -> list[UrnState]:
    """Advance *steps* draws.

    With ``checkpoints=None`` the whole trajectory (``steps + 1`` states) is
    returned; otherwise only the initial state and the listed steps are kept.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    keep = None if checkpoints is None else set(checkpoints)
    s = initial_state(spec)
    out = [s]
    for _ in range(steps):
        s = step(spec, s, rng)
        if keep is None or s.step in keep:
            out.append(s)
    return out


def lump(composition: Sequence[int], groups: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Merge colours: entry ``j`` of the result sums ``composition`` over ``groups[j]``."""
    return tuple(sum(composition[i] for i in g) for g in groups)


def exact_distribution(spec: UrnSpec, steps: int) -> ExactDist:
    """Exact law of the composition after *steps* draws (forward recursion)."""
    dist = {spec.initial: Fraction(1)}
    for _ in range(steps):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for comp, p in dist.items():
            total = sum(comp)
            if total <= 0:
                raise EmptyUrnError("cannot draw from an empty urn")
            for i, c in enumerate(comp):
                if c:
                    key = tuple(a + b for a, b in zip(comp, spec.replacement[i]))
                    nxt[key] = nxt.get(key, Fraction(0)) + p * Fraction(c, total)
        dist = nxt
    return ExactDist(dict(sorted(dist.items())))


def characteristic_polynomial(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of ``det(lambda I - M)``, leading first.

    Faddeev-LeVerrier recursion in exact rationals; the result is integral
    for an integer matrix.
    """
    m = [[Fraction(a) for a in row] for row in matrix]
    size = len(m)
    coeffs = [Fraction(1)]
    work = [[Fraction(0)] * size for _ in range(size)]  # M_0 = 0
    for k in range(1, size + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k) / k
        work = [
            [sum(m[i][t] * work[t][j] for t in range(size)) + (coeffs[-1] if i == j else 0)
             for j in range(size)]
            for i in range(size)
        ]
        am = [[sum(m[i][t] * work[t][j] for t in range(size)) for j in range(size)] for i in range(size)]
        coeffs.append(-sum(am[i][i] for i in range(size)) / k)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("non-integral characteristic polynomial")
    return [int(c) for c in coeffs]


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# Gap kinds double as Urn A colour indices.
_KIND_TO_COLOR = {ASCENT: 0, DESCENT: 1, PLATEAU: 2}


def coupled_growth_check(n: int, rng: np.random.Generator | None = None, trace: Sequence[int] | None = None) -> bool:
    """Grow a Stirling permutation and Urn A side by side.

    Each inserted gap is classified in the current permutation and the
    matching colour is drawn from Urn A.  Returns True iff after every step
    the urn composition equals the permutation's (ascents, descents, plateaux).
    Gaps come from *trace* if given, else uniformly from *rng*.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    spec = urn_a()
    q = StirlingPermutation((1, 1))
    s = initial_state(spec)
    if tuple(adp_counts(q)) != s.composition:
        return False
    for k in range(1, n):
        g = int(trace[k - 1]) if trace is not None else int(rng.integers(2 * k + 1))
        s = apply_draw(spec, s, _KIND_TO_COLOR[classify_gap(q.seq, g)])
        q = insert_pair(q, g)
        if tuple(adp_counts(q)) != s.composition:
            return False
    return True


def trajectory_csv(states: Sequence[UrnState]) -> str:
    """CSV with columns ``step, count_1..count_c``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    c = len(states[0].composition) if states else 0
    writer.writerow(["step", *(f"count_{i}" for i in range(1, c + 1))])
    for s in states:
        writer.writerow([s.step, *s.composition])
    return buf.getvalue()
