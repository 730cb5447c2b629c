"""Local resampling of tabular data.

Each synthetic row is drawn from a distribution fitted to the k nearest
neighbours of a randomly chosen original observation.
"""

__version__ = "0.1.0"

from .data_core import (
    ColumnSpec,
    DataError,
    DataMatrix,
    DescriptiveStats,
    ScalingParams,
    describe,
    load_csv,
    load_schema,
    standardize,
    unstandardize,
    write_csv,
    write_schema,
)
from .evaluate import (
    EvalReport,
    OlsFit,
    build_report,
    ks_distance,
    ols_fit,
    parse_regression,
)
from .generators import SimSpec, gen_beta_cluster, gen_two_rings, generate
from .local_models import (
    MvnParams,
    UniformBoxParams,
    fit_mvn,
    fit_uniform,
    sample_mvn,
    sample_uniform,
)
from .neighbors import NeighborIndex, compute_neighbors, subsample
from .synthesizer import (
    SynthConfig,
    SynthResult,
    clip,
    resample_subsample_ids,
    stochastic_round,
    synthesize,
)

__all__ = [
    "SimSpec",
    "gen_beta_cluster",
    "gen_two_rings",
    "generate",
    "NeighborIndex",
    "compute_neighbors",
    "subsample",
    "ColumnSpec",
    "DataError",
    "DataMatrix",
    "DescriptiveStats",
    "ScalingParams",
    "describe",
    "load_csv",
    "load_schema",
    "standardize",
    "unstandardize",
    "write_csv",
    "write_schema",
    "EvalReport",
    "OlsFit",
    "build_report",
    "ks_distance",
    "ols_fit",
    "parse_regression",
    "MvnParams",
    "UniformBoxParams",
    "fit_mvn",
    "fit_uniform",
    "sample_mvn",
    "sample_uniform",
    "SynthConfig",
    "SynthResult",
    "clip",
    "resample_subsample_ids",
    "stochastic_round",
    "synthesize",
]
