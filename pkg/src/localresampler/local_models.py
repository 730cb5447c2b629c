"""Distributions fitted to one neighbour subsample.

Two families are available: a multivariate normal with the subsample mean and
covariance, and an axis-aligned uniform box spanning the subsample's range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MVN = "mvn"
UNIFORM = "uniform"
FAMILIES = (MVN, UNIFORM)

# ridge multipliers (times the mean nonzero variance) tried after a plain Cholesky fails
_RIDGE_LADDER = (0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2)


@dataclass(frozen=True)
class MvnParams:
    """Mean, covariance and lower-triangular factor of a local normal.

    ``factor @ factor.T`` equals ``covariance + ridge * I`` restricted to the
    non-constant coordinates; rows and columns of constant coordinates are zero
    in both, so draws reproduce those constants exactly.
    """

    mean: np.ndarray
    covariance: np.ndarray
    factor: np.ndarray
    ridge: float = 0.0

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    def regularized_covariance(self) -> np.ndarray:
        active = np.diag(self.covariance) > 0
        return self.covariance + self.ridge * np.diag(active.astype(float))


@dataclass(frozen=True)
class UniformBoxParams:
    lo: np.ndarray
    hi: np.ndarray

    @property
    def dim(self) -> int:
        return self.lo.shape[0]


LocalModel = MvnParams | UniformBoxParams


def _as_block(subsample) -> np.ndarray:
    block = np.asarray(subsample, dtype=float)
    if block.ndim == 1:
        block = block[None, :]
    if block.ndim != 2 or block.shape[0] < 1:
        raise ValueError(f"subsample must be a non-empty k x p matrix, got shape {block.shape}")
    return block


def lower_factor(cov: np.ndarray) -> tuple[np.ndarray, float]:
    """Cholesky factor of ``cov`` with escalating ridge on nonzero-variance axes.

    Returns the factor and the absolute ridge that was added.
    """
    p = cov.shape[0]
    diag = np.diag(cov)
    active = np.flatnonzero(diag > 0)
    factor = np.zeros((p, p))
    if active.size == 0:
        return factor, 0.0
    sub = cov[np.ix_(active, active)]
    scale = float(diag[active].mean())
    eye = np.eye(active.size)
    for mult in _RIDGE_LADDER:
        ridge = mult * scale
        try:
            chol = np.linalg.cholesky(sub + ridge * eye)
        except np.linalg.LinAlgError:
            continue
        factor[np.ix_(active, active)] = chol
        return factor, ridge
    raise np.linalg.LinAlgError("covariance could not be factorized even with ridge")


def fit_mvn(subsample) -> MvnParams:
    """Fit a multivariate normal to a ``k x p`` subsample.

    The covariance uses the ``k - 1`` denominator; a single-row subsample has
    zero covariance. Columns that are constant within the subsample get zero
    variance and an exact mean, so they are never perturbed.
    """
    block = _as_block(subsample)
    k, p = block.shape
    mean = block.mean(axis=0)
    constant = np.ptp(block, axis=0) == 0
    mean[constant] = block[0, constant]
    if k == 1:
        cov = np.zeros((p, p))
    else:
        centered = block - mean
        cov = centered.T @ centered / (k - 1)
        cov = 0.5 * (cov + cov.T)
        cov[constant, :] = 0.0
        cov[:, constant] = 0.0
    factor, ridge = lower_factor(cov)
    return MvnParams(mean, cov, factor, ridge)


def sample_mvn(params: MvnParams, rng: np.random.Generator) -> np.ndarray:
    """One draw ``mean + factor @ z`` with ``z`` standard normal."""
    z = rng.standard_normal(params.dim)
    return params.mean + params.factor @ z


def fit_uniform(subsample) -> UniformBoxParams:
    block = _as_block(subsample)
    return UniformBoxParams(block.min(axis=0), block.max(axis=0))


def sample_uniform(params: UniformBoxParams, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(params.dim)
    return uniform_from_unit(params.lo, params.hi, u)


def uniform_from_unit(lo, hi, u):
    # the clamp guards against lo + (hi - lo) * u rounding past hi
    return np.minimum(lo + (hi - lo) * u, hi)


def fit_model(subsample, family: str) -> LocalModel:
    if family == MVN:
        return fit_mvn(subsample)
    if family == UNIFORM:
        return fit_uniform(subsample)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def sample_model(model: LocalModel, rng: np.random.Generator) -> np.ndarray:
    if isinstance(model, MvnParams):
        return sample_mvn(model, rng)
    return sample_uniform(model, rng)
