"""Tabular data container, CSV input/output, scaling and summary statistics."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

CONTINUOUS = "continuous"
DISCRETE = "discrete"
_SCHEMA_HEADER = ["name", "kind", "lower", "upper"]


class DataError(ValueError):
    """Raised for malformed or unsupported input data."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    kind: str = CONTINUOUS
    lower_bound: float | None = None
    upper_bound: float | None = None

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, DISCRETE):
            raise DataError(f"column {self.name!r}: unknown kind {self.kind!r}")
        lo, hi = self.lower_bound, self.upper_bound
        if lo is not None and hi is not None and not lo < hi:
            raise DataError(
                f"column {self.name!r}: lower bound {lo} must be below upper bound {hi}"
            )

    @property
    def is_discrete(self) -> bool:
        return self.kind == DISCRETE


class DataMatrix:
    """An immutable n x p table of finite floats with a column schema.

    The value array is copied on construction and flagged read-only, so a
    ``DataMatrix`` can be shared freely between threads.
    """

    __slots__ = ("_values", "_schema")

    def __init__(self, values, schema: Sequence[ColumnSpec]):
        arr = np.array(values, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if len(schema) == 1 else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise DataError(f"values must be two-dimensional, got shape {arr.shape}")
        schema = tuple(schema)
        if arr.shape[1] != len(schema) or len(schema) < 1:
            raise DataError(
                f"schema has {len(schema)} columns but values have {arr.shape[1]}"
            )
        if not np.all(np.isfinite(arr)):
            raise DataError("values contain missing or non-finite entries")
        names = [c.name for c in schema]
        if len(set(names)) != len(names):
            raise DataError(f"duplicate column names in {names}")
        arr.setflags(write=False)
        self._values = arr
        self._schema = schema

    @classmethod
    def from_columns(cls, columns: dict[str, Iterable[float]], kinds=None) -> "DataMatrix":
        """Build a matrix from a name -> values mapping, inferring kinds by default."""
        names = list(columns)
        arr = np.column_stack([np.asarray(list(columns[n]), dtype=float) for n in names])
        if kinds is None:
            schema = infer_schema(names, arr)
        else:
            schema = [ColumnSpec(n, k) for n, k in zip(names, kinds)]
        return cls(arr, schema)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def schema(self) -> tuple[ColumnSpec, ...]:
        return self._schema

    @property
    def names(self) -> list[str]:
        return [c.name for c in self._schema]

    @property
    def n(self) -> int:
        return self._values.shape[0]

    @property
    def p(self) -> int:
        return self._values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    def column(self, name: str) -> np.ndarray:
        return self._values[:, self.index_of(name)]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no column named {name!r}; columns are {self.names}") from None

    def select(self, names: Sequence[str]) -> "DataMatrix":
        idx = [self.index_of(n) for n in names]
        return DataMatrix(self._values[:, idx], [self._schema[i] for i in idx])

    def with_values(self, values) -> "DataMatrix":
        """Same schema, new values (validated again)."""
        return DataMatrix(values, self._schema)

    def __eq__(self, other):
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return self._schema == other._schema and np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash((self._schema, self._values.tobytes()))

    def __repr__(self):
        return f"DataMatrix(n={self.n}, p={self.p}, columns={self.names})"


@dataclass(frozen=True)
class ScalingParams:
    means: np.ndarray
    scales: np.ndarray


@dataclass(frozen=True)
class ColumnStats:
    mean: float
    std_dev: float
    median: float
    min: float
    max: float


@dataclass(frozen=True)
class DescriptiveStats:
    names: tuple[str, ...]
    columns: tuple[ColumnStats, ...]

    def __getitem__(self, name: str) -> ColumnStats:
        return self.columns[self.names.index(name)]

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {
            n: {"mean": c.mean, "std_dev": c.std_dev, "median": c.median,
                "min": c.min, "max": c.max}
            for n, c in zip(self.names, self.columns)
        }


def _is_integral(col: np.ndarray) -> bool:
    return bool(np.all(np.floor(col) == col))


def infer_schema(names: Sequence[str], values: np.ndarray) -> list[ColumnSpec]:
    """A column is discrete iff it is non-empty and every value is integral."""
    values = np.asarray(values, dtype=float)
    out = []
    for j, name in enumerate(names):
        col = values[:, j]
        kind = DISCRETE if col.size and _is_integral(col) else CONTINUOUS
        out.append(ColumnSpec(name, kind))
    return out


def _parse_cell(text: str, row: int, col: str) -> float:
    s = text.strip()
    if s == "" or s.lower() in ("na", "nan", "null", "none"):
        raise DataError(
            f"missing value at row {row}, column {col!r}; missing values are not "
            "supported, impute them before synthesis"
        )
    try:
        v = float(s)
    except ValueError:
        raise DataError(f"cannot parse {text!r} as a number at row {row}, column {col!r}") from None
    if not math.isfinite(v):
        raise DataError(f"non-finite value {text!r} at row {row}, column {col!r}")
    return v


def load_csv(path, schema: Sequence[ColumnSpec] | None = None) -> DataMatrix:
    """Read a numeric CSV file with a mandatory header row.

    Row numbers in error messages are 1-based file lines (the header is line 1).
    When ``schema`` is given its column names must match the header.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file, a header row is required") from None
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw or (len(raw) == 1 and raw[0].strip() == ""):
                continue
            if len(raw) != len(header):
                raise DataError(
                    f"{path}: line {lineno} has {len(raw)} fields, expected {len(header)}"
                )
            rows.append([_parse_cell(c, lineno, h) for c, h in zip(raw, header)])
    values = np.array(rows, dtype=float).reshape(len(rows), len(header))
    if schema is None:
        schema = infer_schema(header, values)
    else:
        schema = list(schema)
        if [c.name for c in schema] != header:
            raise DataError(
                f"schema columns {[c.name for c in schema]} do not match header {header}"
            )
        for j, col in enumerate(schema):
            if col.is_discrete and not _is_integral(values[:, j]):
                raise DataError(f"{path}: discrete column {col.name!r} has non-integral values")
    return DataMatrix(values, schema)


def format_value(v: float, discrete: bool = False) -> str:
    # repr() is the shortest string that parses back to the same double
    if discrete and float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def write_csv(data: DataMatrix, path) -> None:
    """Write ``data`` with a header row; values are written losslessly."""
    path = Path(path)
    flags = [c.is_discrete for c in data.schema]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(data.names)
        for row in data.values:
            writer.writerow([format_value(v, d) for v, d in zip(row, flags)])


def load_schema(path) -> list[ColumnSpec]:
    """Read a schema sidecar: one ``name,kind,lower,upper`` line per column."""
    specs = []
    with Path(path).open(newline="") as fh:
        for lineno, raw in enumerate(csv.reader(fh), start=1):
            if not raw or all(not f.strip() for f in raw):
                continue
            fields = [f.strip() for f in raw] + [""] * (4 - len(raw))
            if lineno == 1 and fields[:4] == _SCHEMA_HEADER:
                continue
            name, kind, lo, hi = fields[:4]
            try:
                specs.append(ColumnSpec(
                    name, kind or CONTINUOUS,
                    float(lo) if lo else None,
                    float(hi) if hi else None,
                ))
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
    return specs


def write_schema(schema: Sequence[ColumnSpec], path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_SCHEMA_HEADER)
        for c in schema:
            writer.writerow([
                c.name, c.kind,
                "" if c.lower_bound is None else repr(c.lower_bound),
                "" if c.upper_bound is None else repr(c.upper_bound),
            ])


def _column_std(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    if n < 2:
        return np.zeros(values.shape[1])
    std = values.std(axis=0, ddof=1)
    return np.where(np.ptp(values, axis=0) == 0, 0.0, std)


def standardize(data: DataMatrix) -> tuple[DataMatrix, ScalingParams]:
    """Centre each column and divide by its sample standard deviation.

    Constant columns keep scale 1, so they map to zeros.
    """
    vals = data.values
    means = vals.mean(axis=0)
    scales = _column_std(vals)
    constant = np.ptp(vals, axis=0) == 0
    scales = np.where(constant | ~(scales > 0), 1.0, scales)
    # a constant column must centre to exact zeros
    means = np.where(constant, vals[0] if data.n else 0.0, means)
    out = (vals - means) / scales
    return DataMatrix(out, data.schema), ScalingParams(means, scales)


def unstandardize(data: DataMatrix, params: ScalingParams, schema=None) -> DataMatrix:
    values = data.values * params.scales + params.means
    return DataMatrix(values, schema if schema is not None else data.schema)


def describe(data: DataMatrix) -> DescriptiveStats:
    """Mean, sample std (n-1), median, min and max per column."""
    if data.n < 1:
        raise DataError("cannot describe an empty matrix")
    vals = data.values
    means = vals.mean(axis=0)
    stds = _column_std(vals)
    medians = np.median(vals, axis=0)
    mins = vals.min(axis=0)
    maxs = vals.max(axis=0)
    cols = tuple(
        ColumnStats(float(means[j]), float(stds[j]), float(medians[j]),
                    float(mins[j]), float(maxs[j]))
        for j in range(data.p)
    )
    return DescriptiveStats(tuple(data.names), cols)
