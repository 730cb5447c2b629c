"""Exact k-nearest-neighbour subsamples.

Each observation's subsample is itself followed by its ``k - 1`` closest
other observations under Euclidean distance. Equal distances are ordered by
ascending observation index.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data_core import DataMatrix, standardize
from .rng import thread_count

# query rows per distance block; bounds peak memory at _BLOCK * n doubles
_BLOCK = 256
# relative screening slack, far above the Gram form's rounding error
_SLACK = 1e-9


@dataclass(frozen=True)
class NeighborIndex:
    k: int
    neighbor_ids: np.ndarray  # (n, k) int64, self in column 0

    @property
    def n(self) -> int:
        return self.neighbor_ids.shape[0]

    def __getitem__(self, i: int) -> np.ndarray:
        return self.neighbor_ids[i]


def squared_distances(point: np.ndarray, others: np.ndarray) -> np.ndarray:
    """Exact squared distances, accumulated column by column in a fixed order."""
    out = np.zeros(others.shape[0])
    for j in range(others.shape[1]):
        diff = others[:, j] - point[j]
        out += diff * diff
    return out


def _fill_block(points, centered, sqnorm, k, lo, hi, out):
    # screen with the fast Gram-matrix form (|b|^2 - 2 a.b ranks like the full
    # squared distance), then order the survivors by exact distances; the
    # slack covers the Gram form's rounding error
    score = centered[lo:hi] @ centered.T
    score *= -2.0
    score += sqnorm
    rows = np.arange(lo, hi)
    score[rows - lo, rows] = -np.inf
    kth = np.partition(score, k - 1, axis=1)[:, k - 1]
    slack = _SLACK * (sqnorm[lo:hi] + sqnorm.max()) + np.finfo(float).tiny
    keep = score <= (kth + slack)[:, None]
    for r in range(hi - lo):
        i = lo + r
        cand = np.flatnonzero(keep[r])
        d = squared_distances(points[i], points[cand])
        d[cand == i] = -1.0  # self always sorts first
        out[i] = cand[np.argsort(d, kind="stable")[:k]]


def compute_neighbors(data: DataMatrix | np.ndarray, k: int, *,
                      standardize_first: bool = False,
                      threads: int | None = None) -> NeighborIndex:
    """Find the ``k`` nearest neighbours of every observation, self first.

    Parameters
    ----------
    data : DataMatrix or ndarray, shape (n, p)
    k : int
        Subsample size, ``1 <= k <= n``.
    standardize_first : bool
        Measure distance on z-scored columns instead of raw values.
    threads : int, optional
        Worker threads; defaults to :func:`localresampler.rng.thread_count`.
        The result does not depend on this value.
    """
    if isinstance(data, DataMatrix):
        if standardize_first:
            data = standardize(data)[0]
        points = np.asarray(data.values, dtype=float)
    else:
        points = np.asarray(data, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if standardize_first:
            raise TypeError("standardize_first requires a DataMatrix")
    n = points.shape[0]
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of observations n={n}")
    if not np.all(np.isfinite(points)):
        raise ValueError("data contain non-finite values")

    out = np.empty((n, k), dtype=np.int64)
    if k == 1:
        out[:, 0] = np.arange(n)
        return NeighborIndex(1, out)

    centered = points - points.mean(axis=0)
    sqnorm = np.einsum("ij,ij->i", centered, centered)
    blocks = [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]
    workers = threads if threads is not None else thread_count()

    def fill(block):
        _fill_block(points, centered, sqnorm, k, *block, out)

    if workers <= 1 or len(blocks) == 1:
        for block in blocks:
            fill(block)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, blocks))
    out.setflags(write=False)
    return NeighborIndex(int(k), out)


def subsample(index: NeighborIndex, data: DataMatrix, i: int) -> np.ndarray:
    """The k x p block of original-unit rows for observation ``i``'s neighbours."""
    if not 0 <= i < index.n:
        raise IndexError(f"observation index {i} out of range for n={index.n}")
    return data.values[index.neighbor_ids[i]]


def neighbor_use_counts(index: NeighborIndex, ids: np.ndarray) -> np.ndarray:
    """How often each observation appears in the subsamples selected by ``ids``."""
    return np.bincount(index.neighbor_ids[ids].ravel(), minlength=index.n)
