"""Statistics on Stirling permutations, trees and trapezoidal words."""

from __future__ import annotations

from collections import Counter
from typing import NamedTuple

from .structures import PlaneRecursiveTree, StirlingPermutation, TrapezoidalWord

ASCENT, DESCENT, PLATEAU = 0, 1, 2


class AdpCounts(NamedTuple):
    """Ascent, descent and plateau counts; they sum to ``2n + 1``."""

    ascents: int
    descents: int
    plateaux: int


def classify_gap(seq, g: int) -> int:
    """Classify gap *g* of *seq* as ASCENT, DESCENT or PLATEAU.

    Sentinel zeros are assumed before the first and after the last letter.
    """
    left = seq[g - 1] if g > 0 else 0
    right = seq[g] if g < len(seq) else 0
    if left < right:
        return ASCENT
    if left > right:
        return DESCENT
    return PLATEAU


def adp_counts(q: StirlingPermutation) -> AdpCounts:
    padded = (0, *q.seq, 0)
    asc = des = pla = 0
    for a, b in zip(padded, padded[1:]):
        if a < b:
            asc += 1
        elif a > b:
            des += 1
        else:
            pla += 1
    return AdpCounts(asc, des, pla)


def leaves(t: PlaneRecursiveTree) -> int:
    return sum(1 for cs in t.children if not cs)


def outdegree_profile(t: PlaneRecursiveTree) -> dict[int, int]:
    """Map outdegree ``d`` to the number of vertices with that outdegree."""
    return dict(sorted(Counter(len(cs) for cs in t.children).items()))


def subtree_size(t: PlaneRecursiveTree, k: int) -> int:
    if not 1 <= k <= t.n:
        raise IndexError(f"vertex {k} outside 1..{t.n}")
    size = 0
    stack = [k]
    while stack:
        v = stack.pop()
        size += 1
        stack.extend(t.children[v])
    return size


def occurrence_distance(q: StirlingPermutation, k: int) -> int:
    """Position difference between the two copies of *k* in *q*."""
    if not 1 <= k <= q.n:
        raise IndexError(f"value {k} outside 1..{q.n}")
    first = q.seq.index(k)
    return q.seq.index(k, first + 1) - first


def root_degree(t: PlaneRecursiveTree) -> int:
    return len(t.children[0])


def top_block_count(q: StirlingPermutation) -> int:
    """Number of times a stack parse of *q* returns to depth zero."""
    depth = 0
    blocks = 0
    seen = set()
    for v in q.seq:
        if v in seen:
            depth -= 1
            if depth == 0:
                blocks += 1
        else:
            seen.add(v)
            depth += 1
    return blocks


def ascent_vertex_count(t: PlaneRecursiveTree) -> int:
    """Non-root vertices with no left sister or a label above the nearest one."""
    count = 0
    for cs in t.children:
        for i, c in enumerate(cs):
            if i == 0 or c > cs[i - 1]:
                count += 1
    return count


def descent_vertex_count(t: PlaneRecursiveTree) -> int:
    """Mirror image of :func:`ascent_vertex_count` (nearest right sister)."""
    count = 0
    for cs in t.children:
        last = len(cs) - 1
        for i, c in enumerate(cs):
            if i == last or c > cs[i + 1]:
                count += 1
    return count


def distinct_count(w: TrapezoidalWord) -> int:
    return len(set(w.word))
