"""Seeded random streams.

Every random draw in the package comes from a stream derived from one master
seed and a (purpose, index) key. Two streams with different keys are
statistically independent, and a stream's output depends only on its key, so
work can be split across threads in any order without changing results.
"""

from __future__ import annotations

import os

import numpy as np

# stream purposes; part of the reproducibility contract, do not renumber
RESAMPLE = 0
ROW = 1
GENERATE = 2

_MAX_SEED = 2**64


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, purpose, index)``."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(purpose, index))
    return np.random.Generator(np.random.PCG64(ss))


def thread_count() -> int:
    """Worker threads from ``LOCALRESAMPLER_THREADS``, else the CPU count."""
    raw = os.environ.get("LOCALRESAMPLER_THREADS", "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"LOCALRESAMPLER_THREADS must be an integer, got {raw!r}") from None
        return max(1, value)
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return max(1, os.cpu_count() or 1)


def chunk_bounds(n: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, n))
    edges = np.linspace(0, n, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
