"""Plane recursive trees, Stirling permutations, trapezoidal words.

A plane recursive tree with ``n + 1`` vertices is coded by the edge labels
met along its depth-first walk.  The code is a Stirling permutation of
``1 1 2 2 ... n n`` and the coding is a bijection.  Gaps of a permutation
of length ``2n`` are numbered ``0..2n``; gap ``g`` sits just before
position ``g`` (0-based), so gap 0 is the front and gap ``2n`` the end.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass


class InvalidStructureError(ValueError):
    """Raised when a tree, permutation or word violates its invariants."""


class InvalidStirlingError(InvalidStructureError):
    pass


class GapOutOfRangeError(IndexError):
    pass


def validate_stirling(seq: Iterable[int]) -> bool:
    """Return True iff *seq* is a Stirling permutation of ``1 1 ... n n``.

    The betweenness condition is equivalent to the pairs being properly
    nested with labels increasing inwards, which a single stack pass checks.
    """
    try:
        seq = [operator.index(v) for v in seq]
    except TypeError:
        return False
    if len(seq) % 2:
        return False
    n = len(seq) // 2
    seen = [0] * (n + 1)
    stack: list[int] = []
    for v in seq:
        if not 1 <= v <= n:
            return False
        seen[v] += 1
        if seen[v] == 1:
            if stack and v < stack[-1]:
                return False
            stack.append(v)
        elif seen[v] == 2:
            if stack[-1] != v:
                return False
            stack.pop()
        else:
            return False
    return not stack


@dataclass(frozen=True)
class StirlingPermutation:
    """A validated Stirling permutation; ``seq`` has length ``2n``."""

    seq: tuple[int, ...]

    def __post_init__(self) -> None:
        if not validate_stirling(self.seq):
            raise InvalidStirlingError(f"not a Stirling permutation: {format_sequence(self.seq)}")
        object.__setattr__(self, "seq", tuple(operator.index(v) for v in self.seq))

    @property
    def n(self) -> int:
        return len(self.seq) // 2

    @property
    def gap_count(self) -> int:
        return len(self.seq) + 1

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)

    def __str__(self) -> str:
        return format_sequence(self.seq)

    @classmethod
    def parse(cls, text: str) -> StirlingPermutation:
        return cls(tuple(int(tok) for tok in text.split()))


@dataclass(frozen=True)
class TrapezoidalWord:
    """Word ``a_1 ... a_n`` with ``1 <= a_i <= 2i - 1``."""

    word: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "word", tuple(operator.index(a) for a in self.word))
        for i, a in enumerate(self.word, start=1):
            if not 1 <= a <= 2 * i - 1:
                raise InvalidStructureError(f"letter {i} is {a}, must lie in 1..{2 * i - 1}")

    @property
    def n(self) -> int:
        return len(self.word)

    def __str__(self) -> str:
        return format_sequence(self.word)


@dataclass(frozen=True)
class PlaneRecursiveTree:
    """Rooted ordered tree on vertices ``0..n`` with increasing labels.

    ``children[v]`` lists the children of ``v`` left to right.
    """

    children: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        kids = tuple(tuple(c) for c in self.children)
        object.__setattr__(self, "children", kids)
        if not kids:
            raise InvalidStructureError("a tree has at least the root")
        n = len(kids) - 1
        parent = [-1] * (n + 1)
        for v, cs in enumerate(kids):
            for c in cs:
                if not 1 <= c <= n:
                    raise InvalidStructureError(f"child label {c} outside 1..{n}")
                if parent[c] != -1:
                    raise InvalidStructureError(f"vertex {c} has two parents")
                if c <= v:
                    raise InvalidStructureError(f"label {c} does not exceed its parent {v}")
                parent[c] = v
        if any(p == -1 for p in parent[1:]):
            raise InvalidStructureError("some non-root vertex has no parent")
        object.__setattr__(self, "_parent", tuple(parent))

    @classmethod
    def from_mapping(cls, children: Mapping[int, Sequence[int]]) -> PlaneRecursiveTree:
        """Build from a sparse ``{vertex: [children...]}`` mapping."""
        labels = set(children)
        for cs in children.values():
            labels.update(cs)
        n = max(labels, default=0)
        return cls(tuple(tuple(children.get(v, ())) for v in range(n + 1)))

    @classmethod
    def root_only(cls) -> PlaneRecursiveTree:
        return cls(((),))

    @property
    def n(self) -> int:
        return len(self.children) - 1

    def parent(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise IndexError(f"vertex {v} has no parent in a tree with n={self.n}")
        return self._parent[v]

    def as_mapping(self) -> dict[int, list[int]]:
        return {v: list(cs) for v, cs in enumerate(self.children) if cs}

    def render(self) -> str:
        """Nested-parentheses debug rendering, e.g. ``0(1(2))``."""
        def rec(v: int) -> str:
            cs = self.children[v]
            if not cs:
                return str(v)
            return f"{v}(" + " ".join(rec(c) for c in cs) + ")"

        return rec(0)

    def __str__(self) -> str:
        return str(tree_to_code(self))


def format_sequence(seq: Iterable[int]) -> str:
    return " ".join(str(v) for v in seq)


def tree_to_code(t: PlaneRecursiveTree) -> StirlingPermutation:
    """Edge labels in depth-first-walk order; edge ``j`` lies above vertex ``j``."""
    out: list[int] = []
    # (vertex, index of next child to visit)
    stack = [(0, 0)]
    while stack:
        v, i = stack.pop()
        kids = t.children[v]
        if i < len(kids):
            stack.append((v, i + 1))
            c = kids[i]
            out.append(c)
            stack.append((c, 0))
        elif v != 0:
            out.append(v)
    return StirlingPermutation(tuple(out))


def code_to_tree(q: StirlingPermutation | Sequence[int]) -> PlaneRecursiveTree:
    """Inverse of :func:`tree_to_code` by a stack parse of the code."""
    if not isinstance(q, StirlingPermutation):
        q = StirlingPermutation(tuple(q))
    children: list[list[int]] = [[] for _ in range(q.n + 1)]
    opened = [False] * (q.n + 1)
    stack = [0]
    for v in q.seq:
        if opened[v]:
            stack.pop()
        else:
            opened[v] = True
            children[stack[-1]].append(v)
            stack.append(v)
    return PlaneRecursiveTree(tuple(tuple(c) for c in children))


def _check_gap(size: int, g: int) -> None:
    if not 0 <= g <= size:
        raise GapOutOfRangeError(f"gap {g} outside 0..{size}")


def insert_pair(q: StirlingPermutation, g: int) -> StirlingPermutation:
    """Insert ``(n+1)(n+1)`` at gap *g* of *q*."""
    _check_gap(len(q.seq), g)
    m = q.n + 1
    return StirlingPermutation(q.seq[:g] + (m, m) + q.seq[g:])


def attach_leaf(t: PlaneRecursiveTree, g: int) -> PlaneRecursiveTree:
    """Attach vertex ``n+1`` at the tree position matching code gap *g*.

    Walks the depth-first tour until ``g`` edge crossings have been made;
    the vertex reached there gets the new leaf, placed after every child
    already visited.
    """
    _check_gap(2 * t.n, g)
    steps = 0
    # (vertex, next child index); stack top is the current vertex
    stack = [[0, 0]]
    while steps < g:
        top = stack[-1]
        kids = t.children[top[0]]
        if top[1] < len(kids):
            c = kids[top[1]]
            top[1] += 1
            stack.append([c, 0])
        else:
            stack.pop()
        steps += 1
    v, slot = stack[-1]
    children = [list(cs) for cs in t.children]
    children[v].insert(slot, t.n + 1)
    children.append([])
    return PlaneRecursiveTree(tuple(tuple(c) for c in children))
