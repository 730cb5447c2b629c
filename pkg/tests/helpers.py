import numpy as np

from localresampler import ColumnSpec, DataMatrix

acceptance_lines = []


def record_criterion(name, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    acceptance_lines.append(line)
    print(line)
    return passed


def matrix(values, names=None, kinds=None):
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    names = names or [f"c{j}" for j in range(values.shape[1])]
    kinds = kinds or ["continuous"] * len(names)
    return DataMatrix(values, [ColumnSpec(n, k) for n, k in zip(names, kinds)])
