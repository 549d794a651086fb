"""Replicate engine for Monte Carlo experiments.

Replicate ``r`` always draws from ``make_rng(seed, r)``.  Replicates are cut
into fixed-size blocks; blocks may run in worker processes but results are
reassembled by replicate index, so output never depends on the worker count.

The vectorized kernels advance a whole block one growth step at a time.
They read the same per-replicate growth traces as the object-level
samplers, so both routes can be compared replicate by replicate.
"""

from __future__ import annotations

from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np

from ..generators import growth_trace, make_rng, random_stirling, random_trapezoidal
from ..statistics import adp_counts, distinct_count, occurrence_distance, subtree_size
from ..structures import code_to_tree

BLOCK_SIZE = 512


def trace_block(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """Growth traces of replicates ``start..stop-1`` as an ``(n-1, B)`` array."""
    width = stop - start
    out = np.empty((max(n - 1, 0), width), dtype=np.int64)
    for j, r in enumerate(range(start, stop)):
        out[:, j] = growth_trace(n, make_rng(seed, r))
    return out


def adp_urn_block(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    """(ascents, descents, plateaux) per replicate by running Urn A.

    At step ``k`` the urn holds ``2k + 1`` balls and the trace entry is a
    uniform integer below that, compared against cumulative counts.
    """
    traces = trace_block(seed, start, stop, n)
    width = stop - start
    x = np.ones(width, dtype=np.int64)
    y = np.ones(width, dtype=np.int64)
    z = np.ones(width, dtype=np.int64)
    for u in traces:
        hit_x = u < x
        hit_z = u >= x + y
        hit_y = ~(hit_x | hit_z)
        x += ~hit_x
        y += ~hit_y
        z += ~hit_z
    return np.stack([x, y, z], axis=1)


def adp_perm_block(seed: int, start: int, stop: int, n: int, sampler: Callable | None = None) -> np.ndarray:
    """(ascents, descents, plateaux) per replicate from explicit permutations."""
    sample = sampler or (lambda n, rng: random_stirling(n, rng)[0])
    out = np.empty((stop - start, 3), dtype=np.int64)
    for j, r in enumerate(range(start, stop)):
        out[j] = adp_counts(sample(n, make_rng(seed, r)))
    return out


def subtree_block(seed: int, start: int, stop: int, n: int, k: int) -> np.ndarray:
    """(subtree size of vertex k, distance between the two k's) per replicate.

    Tracks the 0-based positions ``p1 < p2`` of the two copies of ``k``.
    A pair inserted at gap ``g`` shifts every position ``>= g`` by two and
    lands inside ``k``'s subtree exactly when ``p1 < g <= p2``.
    """
    traces = trace_block(seed, start, stop, n)
    width = stop - start
    if k == 1:
        p1 = np.zeros(width, dtype=np.int64)
    else:
        p1 = traces[k - 2].copy()
    p2 = p1 + 1
    size = np.ones(width, dtype=np.int64)
    for g in traces[k - 1:]:
        before = g <= p1
        inside = ~before & (g <= p2)
        size += inside
        p2 += 2 * (before | inside)
        p1 += 2 * before
    return np.stack([size, p2 - p1], axis=1)


def subtree_objects_block(seed: int, start: int, stop: int, n: int, k: int) -> np.ndarray:
    """Object-level counterpart of :func:`subtree_block` (slow, for checking)."""
    out = np.empty((stop - start, 2), dtype=np.int64)
    for j, r in enumerate(range(start, stop)):
        q, _ = random_stirling(n, make_rng(seed, r))
        out[j] = subtree_size(code_to_tree(q), k), occurrence_distance(q, k)
    return out


def trapezoidal_block(seed: int, start: int, stop: int, n: int) -> np.ndarray:
    out = np.empty(stop - start, dtype=np.int64)
    for j, r in enumerate(range(start, stop)):
        out[j] = distinct_count(random_trapezoidal(n, make_rng(seed, r)))
    return out


def _call(kernel: Callable, kwargs: dict, span: tuple[int, int]) -> np.ndarray:
    return kernel(start=span[0], stop=span[1], **kwargs)


def run_replicates(kernel: Callable, replicates: int, workers: int = 1, **kwargs) -> np.ndarray:
    """Run *kernel* over replicates ``0..replicates-1`` and concatenate in order."""
    spans = [(s, min(s + BLOCK_SIZE, replicates)) for s in range(0, replicates, BLOCK_SIZE)]
    job = partial(_call, kernel, kwargs)
    if workers > 1 and len(spans) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, spans))
    else:
        parts = [job(span) for span in spans]
    return np.concatenate(parts, axis=0)
