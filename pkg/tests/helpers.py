import numpy as np
import pandas as pd

from src.data import MtsDataset, MtsItem


def make_dataset(arrays, labels=None, names=None):
    """Dataset from a list of m x n arrays, ids item0, item1, ..."""
    labels = labels or [None] * len(arrays)
    items = tuple(
        MtsItem(id=f"item{i}", values=np.asarray(a, dtype=float), label=label)
        for i, (a, label) in enumerate(zip(arrays, labels))
    )
    n = items[0].n
    return MtsDataset(items=items, variable_names=names or tuple(f"v{j}" for j in range(n)))


def write_long_csv(dataset, path, id_column="id", label_column="label", time_column="t"):
    frames = []
    for item in dataset.items:
        frame = pd.DataFrame(item.values, columns=list(dataset.variable_names))
        frame.insert(0, time_column, np.arange(item.m))
        frame.insert(0, label_column, item.label or "")
        frame.insert(0, id_column, item.id)
        frames.append(frame)
    pd.concat(frames).to_csv(path, index=False, float_format="%.17g")
    return path
