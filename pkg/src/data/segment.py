import numpy as np
from loguru import logger

from src.data.dataset import MtsDataset, MtsItem
from src.errors import EmptyInputError, SchemaError, ValidationError

AGGREGATORS = {
    "sum": np.sum,
    "mean": np.mean,
    "max": np.max,
    "min": np.min,
}


def dropped_rows(dataset, window):
    return sum(item.m % window for item in dataset.items)


def segment(dataset, window):
    """
    Cut every item into floor(m / window) consecutive, non-overlapping
    window x n items named '<parent>_<index>'. The trailing remainder is
    dropped.
    """
    if int(window) != window or window < 1:
        raise ValidationError(f"Segmentation window must be a positive integer, got {window}")
    window = int(window)

    items = []
    for item in dataset.items:
        for index in range(item.m // window):
            block = item.values[index * window:(index + 1) * window]
            items.append(MtsItem(id=f"{item.id}_{index}", values=block, label=item.label))

    if not items:
        raise EmptyInputError(
            f"empty input: window {window} is longer than every item (max m = {max(item.m for item in dataset.items)})"
        )
    remainder = dropped_rows(dataset, window)
    logger.info(
        f"Segmented {dataset.k} item(s) into {len(items)} items of {window} rows ({remainder} trailing rows dropped)"
    )
    return MtsDataset(items=tuple(items), variable_names=dataset.variable_names)


def parse_aggregate_spec(spec, n):
    if isinstance(spec, str):
        spec = [part.strip() for part in spec.split(",") if part.strip()]
    spec = list(spec)
    if len(spec) == 1 and n > 1:
        spec = spec * n
    for name in spec:
        if name not in AGGREGATORS:
            raise SchemaError(f"Unknown aggregator '{name}', expected one of {sorted(AGGREGATORS)}")
    if len(spec) != n:
        raise SchemaError(f"Aggregator spec has {len(spec)} entries, item has {n} variables")
    return spec


def aggregate_item(item, spec):
    """Collapse an item to one value per variable (sum/mean/max/min over rows)."""
    spec = list(spec)
    if len(spec) != item.n:
        raise SchemaError(f"Aggregator spec has {len(spec)} entries, item has {item.n} variables")
    out = np.empty(item.n)
    for col, name in enumerate(spec):
        if name not in AGGREGATORS:
            raise SchemaError(f"Unknown aggregator '{name}'")
        out[col] = AGGREGATORS[name](item.values[:, col])
    return out


def aggregate_matrix(dataset, spec):
    spec = parse_aggregate_spec(spec, dataset.n)
    return np.vstack([aggregate_item(item, spec) for item in dataset.items])


def flatten_matrix(dataset):
    """Row-major flattened (m*n)-vectors; every item must share its shape."""
    stacked = dataset.stacked()
    if stacked is None:
        raise ValidationError("Flattening needs items of identical shape")
    return stacked.reshape(dataset.k, -1)


def assign_phase_labels(dataset, boundaries, names=None):
    """
    Label items by position: items before boundaries[0] get names[0], items
    from boundaries[0] up to boundaries[1] get names[1], and so on. With the
    default names a single boundary yields 'before' / 'after'.
    """
    boundaries = sorted(int(b) for b in boundaries)
    if names is None:
        names = ["before", "after"] if len(boundaries) == 1 else [
            f"phase{index}" for index in range(len(boundaries) + 1)
        ]
    if len(names) != len(boundaries) + 1:
        raise SchemaError(f"{len(boundaries)} boundaries need {len(boundaries) + 1} names, got {len(names)}")
    positions = np.searchsorted(boundaries, np.arange(dataset.k), side="right")
    items = tuple(
        MtsItem(id=item.id, values=item.values, label=names[pos])
        for item, pos in zip(dataset.items, positions)
    )
    return MtsDataset(items=items, variable_names=dataset.variable_names)
