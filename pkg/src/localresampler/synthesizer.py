"""The local resampling pipeline.

``synthesize`` builds neighbour subsamples, picks which subsamples to use,
fits a local distribution to each and draws one synthetic row from it, then
rounds discrete columns and clips to bounds.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import rng as rngmod
from .data_core import DataMatrix
from .local_models import FAMILIES, MVN, fit_mvn, fit_uniform, uniform_from_unit
from .neighbors import NeighborIndex, compute_neighbors, neighbor_use_counts

ROUNDING_MODES = ("unbiased", "paper_literal", "none")
CLIPPING_POLICIES = ("observed_range", "schema_bounds", "none")


@dataclass(frozen=True)
class SynthConfig:
    """Settings for one synthesis run.

    ``n_prime=None`` means "same size as the input". With
    ``resample_subsamples=False`` every subsample is used exactly once, so the
    output has exactly n rows.
    """

    k: int = 15
    n_prime: int | None = None
    family: str = MVN
    resample_subsamples: bool = True
    standardize_distances: bool = True
    rounding: str = "unbiased"
    clipping: str = "observed_range"
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if self.n_prime is not None and (
            not isinstance(self.n_prime, (int, np.integer)) or self.n_prime < 1
        ):
            raise ValueError(f"n_prime must be an integer >= 1, got {self.n_prime!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.rounding not in ROUNDING_MODES:
            raise ValueError(f"rounding must be one of {ROUNDING_MODES}, got {self.rounding!r}")
        if self.clipping not in CLIPPING_POLICIES:
            raise ValueError(
                f"clipping must be one of {CLIPPING_POLICIES}, got {self.clipping!r}"
            )
        rngmod.check_seed(self.seed)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SynthResult:
    synthetic: DataMatrix
    subsample_ids: np.ndarray
    config: SynthConfig
    neighbor_use_counts: np.ndarray
    neighbors: NeighborIndex


def resample_subsample_ids(n: int, n_prime: int, rng: np.random.Generator | None,
                           resample: bool = True) -> np.ndarray:
    """Draw ``n_prime`` subsample ids uniformly with replacement from ``range(n)``.

    With ``resample=False`` the identity sequence ``0..n-1`` is returned.
    """
    if n < 1 or n_prime < 1:
        raise ValueError(f"need n >= 1 and n_prime >= 1, got n={n}, n_prime={n_prime}")
    if not resample:
        return np.arange(n, dtype=np.int64)
    return rng.integers(0, n, size=n_prime, dtype=np.int64)


def round_with_uniforms(values, u, mode: str):
    """Stochastic rounding driven by given uniforms on [0, 1).

    ``unbiased`` goes up with probability equal to the fractional part, so the
    expectation is preserved. ``paper_literal`` goes *down* with that
    probability.
    """
    values = np.asarray(values, dtype=float)
    lo = np.floor(values)
    hi = np.ceil(values)
    frac = values - lo
    if mode == "unbiased":
        return np.where(u < frac, hi, lo)
    if mode == "paper_literal":
        return np.where(u < frac, lo, hi)
    raise ValueError(f"unknown rounding mode {mode!r}")


def stochastic_round(value: float, rng: np.random.Generator, mode: str = "unbiased") -> int:
    if not math.isfinite(value):
        raise ValueError(f"cannot round non-finite value {value!r}")
    return int(round_with_uniforms(value, rng.random(), mode))


def clip(row, policy: str, bounds) -> np.ndarray:
    """Clamp coordinates into ``bounds = (lower, upper)``.

    ``lower``/``upper`` are per-column arrays; ``None`` entries (or +/-inf)
    leave that side open. The ``none`` policy returns the input unchanged.
    """
    row = np.asarray(row, dtype=float)
    if policy == "none":
        return row
    if policy not in CLIPPING_POLICIES:
        raise ValueError(f"unknown clipping policy {policy!r}")
    if bounds is None:
        raise ValueError(f"clipping policy {policy!r} requires bounds")
    lower, upper = _bound_arrays(bounds, row.shape[-1])
    return np.minimum(np.maximum(row, lower), upper)


def _bound_arrays(bounds, p):
    lower, upper = bounds
    lower = np.array([-np.inf if v is None else v for v in np.broadcast_to(
        np.asarray(lower, dtype=object), (p,))], dtype=float)
    upper = np.array([np.inf if v is None else v for v in np.broadcast_to(
        np.asarray(upper, dtype=object), (p,))], dtype=float)
    return lower, upper


def clipping_bounds(data: DataMatrix, policy: str):
    if policy == "none":
        return None
    if policy == "observed_range":
        return data.values.min(axis=0), data.values.max(axis=0)
    lower = [c.lower_bound for c in data.schema]
    upper = [c.upper_bound for c in data.schema]
    if all(v is None for v in lower + upper):
        raise ValueError("clipping policy 'schema_bounds' needs at least one column bound "
                         "in the schema")
    return lower, upper


def _draw_noise(seed, n_rows, p, gaussian, n_round, threads):
    noise = np.empty((n_rows, p))
    unif = np.empty((n_rows, n_round))

    def work(lo, hi):
        for r in range(lo, hi):
            g = rngmod.stream(seed, rngmod.ROW, r)
            noise[r] = g.standard_normal(p) if gaussian else g.random(p)
            if n_round:
                unif[r] = g.random(n_round)

    chunks = rngmod.chunk_bounds(n_rows, threads)
    if len(chunks) <= 1:
        work(0, n_rows)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda c: work(*c), chunks))
    return noise, unif


def synthesize(data: DataMatrix, config: SynthConfig | None = None, *,
               threads: int | None = None) -> SynthResult:
    """Generate a synthetic sample from ``data``.

    Row ``r`` of the output only depends on ``config.seed``, ``r`` and the
    subsample chosen for it, so results are identical for any thread count.
    """
    config = config or SynthConfig()
    n, p = data.shape
    if n < 1:
        raise ValueError("cannot synthesize from an empty sample")
    if config.k > n:
        raise ValueError(f"k={config.k} exceeds the number of observations n={n}")
    if config.k == 1:
        warnings.warn("k=1 gives zero-variance local models; output is a bootstrap "
                      "resample of the input rows", UserWarning, stacklevel=2)
    if not config.resample_subsamples and config.n_prime not in (None, n):
        raise ValueError(f"n_prime={config.n_prime} requires resampling; without it the "
                         f"output size is n={n}")
    threads = threads if threads is not None else rngmod.thread_count()
    n_prime = n if config.n_prime is None else config.n_prime
    bounds = clipping_bounds(data, config.clipping)

    index = compute_neighbors(data, config.k, standardize_first=config.standardize_distances,
                              threads=threads)
    ids = resample_subsample_ids(n, n_prime, rngmod.stream(config.seed, rngmod.RESAMPLE),
                                 config.resample_subsamples)
    n_prime = ids.size

    # one fit per distinct subsample; repeats share it
    uniq, inverse = np.unique(ids, return_inverse=True)
    gaussian = config.family == MVN
    if gaussian:
        loc = np.empty((uniq.size, p))
        spread = np.empty((uniq.size, p, p))
        for m, i in enumerate(uniq):
            fit = fit_mvn(data.values[index.neighbor_ids[i]])
            loc[m], spread[m] = fit.mean, fit.factor
    else:
        loc = np.empty((uniq.size, p))
        spread = np.empty((uniq.size, p))
        for m, i in enumerate(uniq):
            box = fit_uniform(data.values[index.neighbor_ids[i]])
            loc[m], spread[m] = box.lo, box.hi

    discrete = np.array([c.is_discrete for c in data.schema])
    n_round = int(discrete.sum()) if config.rounding != "none" else 0
    noise, unif = _draw_noise(config.seed, n_prime, p, gaussian, n_round, threads)

    if gaussian:
        out = loc[inverse] + np.einsum("rij,rj->ri", spread[inverse], noise)
    else:
        out = uniform_from_unit(loc[inverse], spread[inverse], noise)
    if n_round:
        out[:, discrete] = round_with_uniforms(out[:, discrete], unif, config.rounding)
    if bounds is not None:
        out = clip(out, config.clipping, bounds)

    counts = neighbor_use_counts(index, ids)
    return SynthResult(data.with_values(out), ids, config, counts, index)
