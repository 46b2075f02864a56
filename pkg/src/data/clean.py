import numpy as np
from loguru import logger

from src.data.dataset import MtsDataset, MtsItem, PreprocessReport
from src.errors import EmptyInputError


def _column_stats(values):
    # Only a column whose values are all equal is constant; it is centered and divided by 1.
    means = values.mean(axis=0)
    stds = values.std(axis=0)
    degenerate = np.ptp(values, axis=0) == 0
    return means, np.where(degenerate, 1.0, stds), degenerate


def mean_center_normalize(dataset, per_item=False):
    """
    Subtract each variable's mean and divide by its population standard
    deviation. Statistics are pooled over every row of every item unless
    `per_item` is set. Constant variables are only centered.
    """
    if dataset.k == 0:
        raise EmptyInputError("empty input: nothing to normalize")

    if not per_item:
        pooled = np.vstack([item.values for item in dataset.items])
        means, stds, degenerate = _column_stats(pooled)
        items = tuple(
            MtsItem(id=item.id, values=(item.values - means) / stds, label=item.label)
            for item in dataset.items
        )
        report = PreprocessReport(
            means=means.tolist(),
            stds=stds.tolist(),
            zero_variance=int(degenerate.sum()),
        )
    else:
        items, item_stats = [], {}
        zero_variance = np.zeros(dataset.n, dtype=bool)
        for item in dataset.items:
            means, stds, degenerate = _column_stats(item.values)
            zero_variance |= degenerate
            item_stats[item.id] = {"means": means.tolist(), "stds": stds.tolist()}
            items.append(MtsItem(id=item.id, values=(item.values - means) / stds, label=item.label))
        stacked_means = np.array([stats["means"] for stats in item_stats.values()])
        stacked_stds = np.array([stats["stds"] for stats in item_stats.values()])
        report = PreprocessReport(
            means=stacked_means.mean(axis=0).tolist(),
            stds=stacked_stds.mean(axis=0).tolist(),
            zero_variance=int(zero_variance.sum()),
            per_item=True,
            item_stats=item_stats,
        )
        items = tuple(items)

    if report.zero_variance:
        logger.warning(
            f"{report.zero_variance} zero-variance variable(s): centered only, not scaled"
        )
    logger.info(
        f"Normalized {dataset.k} items ({'per item' if per_item else 'pooled'} statistics)"
    )
    return MtsDataset(items=items, variable_names=dataset.variable_names), report
