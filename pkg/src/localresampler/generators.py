"""Simulated non-convex samples: two noisy rings and clustered beta variables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .data_core import ColumnSpec, DataMatrix

DESIGNS = ("two_rings", "beta_cluster")
RING_RADII = (8.0, 20.0)


@dataclass(frozen=True)
class SimSpec:
    design: str
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.design not in DESIGNS:
            raise ValueError(f"unknown design {self.design!r}; valid designs: {', '.join(DESIGNS)}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        rngmod.check_seed(self.seed)


def ring_point(r, a, u1, u2):
    """Map radius, angle and noise to the tilted, bent ring coordinates."""
    x = r * np.cos(a) + u1
    y = 0.5 * x - 0.05 * x**2 + r * np.sin(a) + u2
    return x, y


def detrended_radius(x, y):
    """Distance from the origin after undoing the ring's parabolic tilt."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.hypot(x, y - 0.5 * x + 0.05 * x**2)


def gen_two_rings(n: int, rng: np.random.Generator) -> DataMatrix:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    u = rng.standard_normal((n, 2))
    r = rng.choice(np.array(RING_RADII), size=n)
    a = rng.uniform(0.0, 2.0 * np.pi, size=n)
    x, y = ring_point(r, a, u[:, 0], u[:, 1])
    return DataMatrix(np.column_stack([x, y]), [ColumnSpec("x"), ColumnSpec("y")])


def gen_beta_cluster(n: int, rng: np.random.Generator) -> DataMatrix:
    """x ~ Beta(0.1, 0.1), y ~ Beta(0.1, 0.5), z = 10 y + N(0, 1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = rng.beta(0.1, 0.1, size=n)
    y = rng.beta(0.1, 0.5, size=n)
    z = 10.0 * y + rng.standard_normal(n)
    schema = [ColumnSpec("x", lower_bound=0.0, upper_bound=1.0),
              ColumnSpec("y", lower_bound=0.0, upper_bound=1.0),
              ColumnSpec("z")]
    return DataMatrix(np.column_stack([x, y, z]), schema)


def generate(spec: SimSpec) -> DataMatrix:
    g = rngmod.stream(spec.seed, rngmod.GENERATE)
    if spec.design == "two_rings":
        return gen_two_rings(spec.n, g)
    return gen_beta_cluster(spec.n, g)
