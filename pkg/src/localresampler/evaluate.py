"""Fidelity metrics for comparing an original sample with a synthetic one."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .data_core import DataMatrix, DescriptiveStats, describe


@dataclass(frozen=True)
class OlsFit:
    names: tuple[str, ...]
    coefficients: np.ndarray
    std_errors: np.ndarray
    r_squared: float
    adj_r_squared: float
    n_obs: int

    def coef(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def as_dict(self) -> dict:
        return {
            "terms": {n: {"coef": float(b), "se": float(s)}
                      for n, b, s in zip(self.names, self.coefficients, self.std_errors)},
            "r_squared": self.r_squared,
            "adj_r_squared": self.adj_r_squared,
            "n_obs": self.n_obs,
        }


@dataclass(frozen=True)
class RegressionSpec:
    response: str
    terms: tuple[str, ...]

    def __str__(self):
        return f"{self.response} ~ {' + '.join(self.terms)}"


@dataclass(frozen=True)
class EvalReport:
    names: tuple[str, ...]
    ks: np.ndarray
    original_stats: DescriptiveStats
    synthetic_stats: DescriptiveStats
    regression: RegressionSpec | None = None
    original_ols: OlsFit | None = None
    synthetic_ols: OlsFit | None = None
    extra: dict = field(default_factory=dict)

    @property
    def average_ks(self) -> float:
        return float(np.mean(self.ks))

    def ks_by_column(self) -> dict[str, float]:
        return {n: float(v) for n, v in zip(self.names, self.ks)}


def ks_distance(a, b) -> float:
    """Largest vertical gap between the empirical CDFs of ``a`` and ``b``.

    Both ECDFs are evaluated at every point of the pooled sample, which is
    where the supremum is attained.
    """
    a = np.sort(np.asarray(a, dtype=float).ravel())
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_distance needs two non-empty samples")
    pooled = np.concatenate([a, b])
    fa = np.searchsorted(a, pooled, side="right") / a.size
    fb = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ols_fit(y, X, names=None, rank_tol: float = 1e-10) -> OlsFit:
    """Least squares with classical standard errors via a QR decomposition.

    ``X`` must already contain the intercept column.
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, q = X.shape
    if y.size != n:
        raise ValueError(f"y has {y.size} rows but X has {n}")
    if n <= q:
        raise ValueError(f"need more observations than regressors (n={n}, q={q})")
    Q, R = np.linalg.qr(X, mode="reduced")
    rdiag = np.abs(np.diag(R))
    if rdiag.min() <= rank_tol * max(rdiag.max(), np.finfo(float).tiny):
        raise np.linalg.LinAlgError("design matrix is rank deficient")
    beta = np.linalg.solve(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    sigma2 = rss / (n - q)
    r_inv = np.linalg.solve(R, np.eye(q))
    se = np.sqrt(sigma2 * np.sum(r_inv**2, axis=1))
    centered = y - y.mean()
    tss = float(centered @ centered)
    r2 = 0.0 if tss == 0 else max(0.0, 1.0 - rss / tss)
    adj = 1.0 - (1.0 - r2) * (n - 1) / (n - q)
    if names is None:
        names = ["const"] + [f"x{j}" for j in range(1, q)]
    return OlsFit(tuple(names), beta, se, r2, adj, n)


_SPEC = re.compile(r"^\s*([^~+]+?)\s*~\s*(.+?)\s*$")


def parse_regression(text: str) -> RegressionSpec:
    """Parse ``response ~ a + b + ...``; the intercept is implicit."""
    m = _SPEC.match(text)
    if not m:
        raise ValueError(f"regression spec must look like 'y ~ a + b', got {text!r}")
    terms = tuple(t.strip() for t in m.group(2).split("+"))
    if any(not t for t in terms):
        raise ValueError(f"empty term in regression spec {text!r}")
    return RegressionSpec(m.group(1).strip(), terms)


def fit_regression(data: DataMatrix, spec: RegressionSpec) -> OlsFit:
    missing = [c for c in (spec.response, *spec.terms) if c not in data.names]
    if missing:
        raise KeyError(f"regression spec names unknown column(s): {', '.join(missing)}")
    X = np.column_stack([np.ones(data.n)] + [data.column(t) for t in spec.terms])
    return ols_fit(data.column(spec.response), X, names=("const",) + spec.terms)


def build_report(original: DataMatrix, synthetic: DataMatrix,
                 regression: RegressionSpec | str | None = None) -> EvalReport:
    if original.names != synthetic.names:
        raise ValueError(
            f"schema mismatch: {original.names} vs {synthetic.names}"
        )
    if original.n == 0 or synthetic.n == 0:
        raise ValueError("both samples must be non-empty")
    ks = np.array([ks_distance(original.values[:, j], synthetic.values[:, j])
                   for j in range(original.p)])
    if isinstance(regression, str):
        regression = parse_regression(regression)
    orig_fit = synth_fit = None
    if regression is not None:
        orig_fit = fit_regression(original, regression)
        synth_fit = fit_regression(synthetic, regression)
    return EvalReport(tuple(original.names), ks, describe(original), describe(synthetic),
                      regression, orig_fit, synth_fit)
