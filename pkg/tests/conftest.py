import os
from pathlib import Path

import numpy as np
import pytest

import helpers
from localresampler import DataMatrix, load_csv

CALIFORNIA_COLUMNS = ["MedInc", "HouseAge", "AveRooms", "AveBedrms",
                      "Population", "AveOccup", "MedHouseVal"]



def pytest_terminal_summary(terminalreporter):
    if helpers.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in helpers.acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def _california_from_sklearn():
    try:
        from sklearn.datasets import fetch_california_housing
        bunch = fetch_california_housing(download_if_missing=False, as_frame=True)
    except Exception:
        return None
    frame = bunch.frame
    cols = {c: frame[c].to_numpy() for c in CALIFORNIA_COLUMNS}
    return DataMatrix.from_columns(cols)


@pytest.fixture(scope="session")
def california():
    """The California housing table, if the user has provided it.

    Looked up in ``$LOCALRESAMPLER_CALIFORNIA_CSV``, then
    ``tests/data/california_housing.csv``, then the scikit-learn cache.
    """
    candidates = [os.environ.get("LOCALRESAMPLER_CALIFORNIA_CSV"),
                  Path(__file__).parent / "data" / "california_housing.csv"]
    for path in candidates:
        if path and Path(path).is_file():
            return load_csv(path).select(CALIFORNIA_COLUMNS)
    data = _california_from_sklearn()
    if data is None:
        pytest.skip("California housing CSV not supplied (set LOCALRESAMPLER_CALIFORNIA_CSV)")
    return data
