"""Seeded uniform sampling and exhaustive enumeration.

All randomness comes from numpy's PCG64 bit generator.  A stream is fully
determined by a 64-bit seed and an optional stream index; the index is
mixed in through :class:`numpy.random.SeedSequence` spawn keys, so replicate
``r`` of a run seeded with ``s`` always sees the same numbers no matter
how replicates are distributed over workers.
"""

from __future__ import annotations

import itertools
import secrets
from collections.abc import Iterator

import numpy as np

from .structures import (
    PlaneRecursiveTree,
    StirlingPermutation,
    TrapezoidalWord,
    attach_leaf,
    code_to_tree,
)

DEFAULT_ENUMERATION_CAP = 8

SEED_BITS = 64


class EnumerationCapError(ValueError):
    pass


def fresh_seed() -> int:
    """Draw a seed from system entropy (used only when the user gives none)."""
    return secrets.randbits(SEED_BITS)


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """PCG64 generator for *seed*, optionally on independent sub-stream *stream*."""
    if not 0 <= seed < 2**SEED_BITS:
        raise ValueError(f"seed must be a {SEED_BITS}-bit unsigned integer, got {seed}")
    spawn_key = () if stream is None else (stream,)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=spawn_key)))


def growth_trace(n: int, rng: np.random.Generator) -> np.ndarray:
    """Gap choices for growing a size-``n`` object from size 1.

    Entry ``k - 1`` is uniform on ``0..2k`` and is the gap used to go from
    size ``k`` to ``k + 1``.  Every sampler in the package draws its trace
    through this function so that the same stream always yields the same
    object, whichever route builds it.
    """
    if n <= 1:
        return np.zeros(0, dtype=np.int64)
    return rng.integers(0, 2 * np.arange(1, n, dtype=np.int64) + 1)


def stirling_from_trace(trace) -> StirlingPermutation:
    """Replay a growth trace starting from ``1 1``."""
    seq = [1, 1]
    for k, g in enumerate(trace, start=1):
        g = int(g)
        if not 0 <= g <= 2 * k:
            raise ValueError(f"trace entry {k} is {g}, must lie in 0..{2 * k}")
        seq[g:g] = (k + 1, k + 1)
    return StirlingPermutation(tuple(seq))


def random_stirling(n: int, rng: np.random.Generator) -> tuple[StirlingPermutation, tuple[int, ...]]:
    """Uniform Stirling permutation of length ``2n`` plus its growth trace."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return StirlingPermutation(()), ()
    trace = growth_trace(n, rng)
    return stirling_from_trace(trace), tuple(int(g) for g in trace)


def random_tree(n: int, rng: np.random.Generator) -> PlaneRecursiveTree:
    """Uniform plane recursive tree with ``n + 1`` vertices."""
    if n == 0:
        return PlaneRecursiveTree.root_only()
    return code_to_tree(random_stirling(n, rng)[0])


def random_trapezoidal(n: int, rng: np.random.Generator) -> TrapezoidalWord:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return TrapezoidalWord(())
    word = rng.integers(1, 2 * np.arange(1, n + 1, dtype=np.int64))
    return TrapezoidalWord(tuple(int(a) for a in word))


def _check_cap(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > cap:
        raise EnumerationCapError(
            f"refusing to enumerate size {n} (cap {cap}); raise the cap explicitly if intended"
        )


def _stirling_sequences(n: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for prev in _stirling_sequences(n - 1):
        for g in range(len(prev) + 1):
            yield prev[:g] + (n, n) + prev[g:]


def enumerate_stirling(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[StirlingPermutation]:
    """Every Stirling permutation of length ``2n``, each exactly once.

    Order: recurse on ``n - 1``, then insert at gaps ``0, 1, ..., 2(n-1)``.
    """
    _check_cap(n, cap)
    for seq in _stirling_sequences(n):
        yield StirlingPermutation(seq)


def _trees(n: int) -> Iterator[PlaneRecursiveTree]:
    if n == 0:
        yield PlaneRecursiveTree.root_only()
        return
    for prev in _trees(n - 1):
        for g in range(2 * (n - 1) + 1):
            yield attach_leaf(prev, g)


def enumerate_trees(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[PlaneRecursiveTree]:
    """Every plane recursive tree with ``n + 1`` vertices, grown leaf by leaf.

    Uses the same order as :func:`enumerate_stirling`, so the two streams
    correspond item by item under the coding bijection.
    """
    _check_cap(n, cap)
    yield from _trees(n)


def enumerate_trapezoidal(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[TrapezoidalWord]:
    _check_cap(n, cap)
    for word in itertools.product(*(range(1, 2 * i) for i in range(1, n + 1))):
        yield TrapezoidalWord(word)
