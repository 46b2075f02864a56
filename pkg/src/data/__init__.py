from dataclasses import replace

from .clean import mean_center_normalize
from .dataset import MtsDataset, MtsItem, PreprocessReport
from .load import IngestionSchema, load_csv, write_dataset_csv, write_item_files
from .segment import (
    aggregate_item,
    aggregate_matrix,
    assign_phase_labels,
    dropped_rows,
    flatten_matrix,
    parse_aggregate_spec,
    segment,
)


def preprocess(dataset, window=None, per_item=False, normalize=True):
    """
    Mean-center and normalize, then segment when a window is given. Returns
    the dataset and the report of the statistics used.
    """
    if normalize:
        dataset, report = mean_center_normalize(dataset, per_item=per_item)
    else:
        report = PreprocessReport(
            means=[0.0] * dataset.n, stds=[1.0] * dataset.n, zero_variance=0, per_item=per_item
        )
    if window:
        report = replace(report, window=int(window), dropped_rows=dropped_rows(dataset, int(window)))
        dataset = segment(dataset, window)
    return dataset, report
